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

#ifndef MRS_STREAMING_CODEC_H_
#define MRS_STREAMING_CODEC_H_

#include <string>
#include <string_view>

#include "mrs/common/status.h"

namespace mrs::streaming {

inline constexpr char kFieldSeparator = '\t';
inline constexpr char kRecordSeparator = '\n';

struct Record {
  std::string key;
  std::string value;

  bool operator==(const Record&) const = default;
};

// key TAB value NEWLINE. Fails with kIllegalByte if either field holds a
// newline.
Result<std::string> EncodeRecord(const Record& r);

// Appends the encoding of `r` to `out` without validating it. Only for
// records that came out of DecodeWorkerLine, which cannot contain newlines.
void AppendEncoded(const Record& r, std::string* out);

// Splits at the first TAB. A line without a TAB is all key, empty value.
// `line` must not include its trailing newline.
Record DecodeWorkerLine(std::string_view line);

// Incremental splitter for a byte stream of newline-terminated lines.
class LineSplitter {
 public:
  // Calls fn(line) for every complete line in `chunk` (newline stripped).
  template <typename Fn>
  Status Feed(std::string_view chunk, Fn&& fn) {
    while (!chunk.empty()) {
      const size_t nl = chunk.find(kRecordSeparator);
      if (nl == std::string_view::npos) {
        pending_.append(chunk);
        break;
      }
      if (pending_.empty()) {
        MRS_RETURN_IF_ERROR(fn(chunk.substr(0, nl)));
      } else {
        pending_.append(chunk.substr(0, nl));
        MRS_RETURN_IF_ERROR(fn(std::string_view(pending_)));
        pending_.clear();
      }
      chunk.remove_prefix(nl + 1);
    }
    return Status::OK();
  }

  // A final line without a trailing newline still counts as a line.
  template <typename Fn>
  Status Finish(Fn&& fn) {
    if (pending_.empty()) return Status::OK();
    std::string last = std::move(pending_);
    pending_.clear();
    return fn(std::string_view(last));
  }

 private:
  std::string pending_;
};

}  // namespace mrs::streaming

#endif  // MRS_STREAMING_CODEC_H_
