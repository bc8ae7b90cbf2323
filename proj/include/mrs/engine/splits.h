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

#ifndef MRS_ENGINE_SPLITS_H_
#define MRS_ENGINE_SPLITS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "mrs/common/status.h"
#include "mrs/dfs/dfs.h"

namespace mrs::engine {

struct InputSplit {
  std::string path;
  uint64_t offset = 0;
  uint64_t length = 0;
  int index = 0;

  bool operator==(const InputSplit&) const = default;
};

// ceil(length / split_size) contiguous splits; an empty file has none.
std::vector<InputSplit> PlanSplits(const dfs::FileMeta& file, uint64_t split_size);

// Lines whose first byte lies in [offset, offset + length). A line that
// crosses the end is read to completion; a split at offset > 0 first skips
// through the newline at or after offset - 1. Newlines are stripped.
Result<std::vector<std::string>> ReadSplitLines(const dfs::Dfs& dfs,
                                                const InputSplit& split);

}  // namespace mrs::engine

#endif  // MRS_ENGINE_SPLITS_H_
