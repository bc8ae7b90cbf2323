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

#include "mrs/engine/merge.h"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <cstring>

namespace mrs::engine {

Result<bool> VectorRecordStream::Next(Record* out) {
  if (next_ >= records_.size()) return false;
  *out = std::move(records_[next_++]);
  return true;
}

Result<std::unique_ptr<SpillFileReader>> SpillFileReader::Open(
    const std::filesystem::path& path) {
  std::FILE* f = std::fopen(path.c_str(), "re");
  if (f == nullptr) {
    return Status(ErrorCode::kFetchFailed,
                  "open " + path.string() + ": " + std::strerror(errno));
  }
  return std::unique_ptr<SpillFileReader>(new SpillFileReader(f));
}

SpillFileReader::~SpillFileReader() {
  std::free(line_);
  if (file_ != nullptr) std::fclose(file_);
}

Result<bool> SpillFileReader::Next(Record* out) {
  const ssize_t n = ::getline(&line_, &cap_, file_);
  if (n < 0) {
    if (std::ferror(file_)) return Status(ErrorCode::kFetchFailed, "spill read error");
    return false;
  }
  size_t len = static_cast<size_t>(n);
  if (len > 0 && line_[len - 1] == '\n') --len;
  *out = streaming::DecodeWorkerLine(std::string_view(line_, len));
  return true;
}

void StableSortByKey(std::vector<Record>& records) {
  std::stable_sort(records.begin(), records.end(),
                   [](const Record& a, const Record& b) { return a.key < b.key; });
}

MergingRecordStream::MergingRecordStream(
    std::vector<std::unique_ptr<RecordStream>> streams)
    : streams_(std::move(streams)) {}

Status MergingRecordStream::Prime() {
  primed_ = true;
  for (size_t i = 0; i < streams_.size(); ++i) {
    Head h{{}, i};
    MRS_ASSIGN_OR_RETURN(bool has, streams_[i]->Next(&h.record));
    if (has) {
      heap_.push_back(std::move(h));
      std::push_heap(heap_.begin(), heap_.end(), Later());
    }
  }
  return Status::OK();
}

Result<bool> MergingRecordStream::Next(Record* out) {
  if (!primed_) MRS_RETURN_IF_ERROR(Prime());
  if (heap_.empty()) return false;
  std::pop_heap(heap_.begin(), heap_.end(), Later());
  Head& top = heap_.back();
  *out = std::move(top.record);
  const size_t src = top.stream;
  MRS_ASSIGN_OR_RETURN(bool has, streams_[src]->Next(&top.record));
  if (has) {
    std::push_heap(heap_.begin(), heap_.end(), Later());
  } else {
    heap_.pop_back();
  }
  return true;
}

Status MergeSorted(std::vector<std::unique_ptr<RecordStream>> streams,
                   const std::function<Status(Record&&)>& sink) {
  MergingRecordStream merged(std::move(streams));
  Record r;
  for (;;) {
    MRS_ASSIGN_OR_RETURN(bool has, merged.Next(&r));
    if (!has) return Status::OK();
    MRS_RETURN_IF_ERROR(sink(std::move(r)));
  }
}

std::vector<Record> MergeSorted(std::vector<std::vector<Record>> runs) {
  std::vector<std::unique_ptr<RecordStream>> streams;
  for (auto& run : runs) {
    streams.push_back(std::make_unique<VectorRecordStream>(std::move(run)));
  }
  std::vector<Record> out;
  Status st = MergeSorted(std::move(streams), [&](Record&& r) {
    out.push_back(std::move(r));
    return Status::OK();
  });
  (void)st;  // in-memory streams cannot fail
  return out;
}

}  // namespace mrs::engine
