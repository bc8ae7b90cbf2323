// Copyright (c) 2026 The mrs Authors. All Rights Reserved
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MRS_ENGINE_MERGE_H_
#define MRS_ENGINE_MERGE_H_

#include <cstdio>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "mrs/common/status.h"
#include "mrs/streaming/codec.h"

namespace mrs::engine {

using streaming::Record;

class RecordStream {
 public:
  virtual ~RecordStream() = default;
  // Fills *out and returns true, or returns false at end of stream.
  virtual Result<bool> Next(Record* out) = 0;
};

class VectorRecordStream final : public RecordStream {
 public:
  explicit VectorRecordStream(std::vector<Record> records)
      : records_(std::move(records)) {}
  Result<bool> Next(Record* out) override;

 private:
  std::vector<Record> records_;
  size_t next_ = 0;
};

// Reads a spill file (streaming text codec, one record per line).
class SpillFileReader final : public RecordStream {
 public:
  static Result<std::unique_ptr<SpillFileReader>> Open(const std::filesystem::path& path);
  ~SpillFileReader() override;
  Result<bool> Next(Record* out) override;

 private:
  explicit SpillFileReader(std::FILE* f) : file_(f) {}
  std::FILE* file_;
  char* line_ = nullptr;
  size_t cap_ = 0;
};

// Byte-ascending by key; equal keys keep their input order.
void StableSortByKey(std::vector<Record>& records);

// Pull-based k-way merge of key-sorted streams. Equal keys come out in
// stream order, then in each stream's own order.
class MergingRecordStream final : public RecordStream {
 public:
  explicit MergingRecordStream(std::vector<std::unique_ptr<RecordStream>> streams);
  Result<bool> Next(Record* out) override;

 private:
  struct Head {
    Record record;
    size_t stream;
  };
  struct Later {
    bool operator()(const Head& a, const Head& b) const {
      if (a.record.key != b.record.key) return a.record.key > b.record.key;
      return a.stream > b.stream;
    }
  };

  Status Prime();

  std::vector<std::unique_ptr<RecordStream>> streams_;
  std::vector<Head> heap_;
  bool primed_ = false;
};

// Push-based form of MergingRecordStream. Equal keys come out in stream order,
// then in each stream's own order.
Status MergeSorted(std::vector<std::unique_ptr<RecordStream>> streams,
                   const std::function<Status(Record&&)>& sink);

std::vector<Record> MergeSorted(std::vector<std::vector<Record>> runs);

}  // namespace mrs::engine

#endif  // MRS_ENGINE_MERGE_H_
