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

#include "mrs/engine/splits.h"

#include <algorithm>

namespace mrs::engine {

namespace {
constexpr uint64_t kExtendBytes = 64 * 1024;
}  // namespace

std::vector<InputSplit> PlanSplits(const dfs::FileMeta& file, uint64_t split_size) {
  std::vector<InputSplit> splits;
  if (split_size == 0) return splits;
  for (uint64_t off = 0; off < file.length; off += split_size) {
    InputSplit s;
    s.path = file.path;
    s.offset = off;
    s.length = std::min(split_size, file.length - off);
    s.index = static_cast<int>(splits.size());
    splits.push_back(std::move(s));
  }
  return splits;
}

Result<std::vector<std::string>> ReadSplitLines(const dfs::Dfs& dfs,
                                                const InputSplit& split) {
  MRS_ASSIGN_OR_RETURN(dfs::FileMeta meta, dfs.Stat(split.path));
  const uint64_t file_len = meta.length;
  const uint64_t end = std::min(split.offset + split.length, file_len);
  std::vector<std::string> lines;
  if (split.offset >= end) return lines;

  const uint64_t base = split.offset == 0 ? 0 : split.offset - 1;
  MRS_ASSIGN_OR_RETURN(std::string buf, dfs.ReadRange(split.path, base, end - base));

  auto extend = [&]() -> Status {
    const uint64_t have = base + buf.size();
    if (have >= file_len) return Status(ErrorCode::kNotFound, "eof");
    MRS_ASSIGN_OR_RETURN(std::string more, dfs.ReadRange(split.path, have, kExtendBytes));
    if (more.empty()) return Status(ErrorCode::kNotFound, "eof");
    buf += more;
    return Status::OK();
  };
  // Finds the next newline at or after i, pulling more bytes past the split
  // end if needed. npos means the file ends first.
  auto find_newline = [&](size_t i, size_t* nl) -> Status {
    for (;;) {
      *nl = buf.find('\n', i);
      if (*nl != std::string::npos) return Status::OK();
      Status st = extend();
      if (st.code() == ErrorCode::kNotFound) return Status::OK();
      MRS_RETURN_IF_ERROR(st);
    }
  };

  size_t i = 0;
  if (split.offset > 0) {
    size_t nl;
    MRS_RETURN_IF_ERROR(find_newline(0, &nl));
    if (nl == std::string::npos) return lines;
    i = nl + 1;
  }
  while (base + i < end) {
    size_t nl;
    MRS_RETURN_IF_ERROR(find_newline(i, &nl));
    if (nl == std::string::npos) {
      lines.emplace_back(buf.substr(i));
      break;
    }
    lines.emplace_back(buf.substr(i, nl - i));
    i = nl + 1;
  }
  return lines;
}

}  // namespace mrs::engine
