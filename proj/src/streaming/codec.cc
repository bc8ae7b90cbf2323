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

#include "mrs/streaming/codec.h"

namespace mrs::streaming {

Result<std::string> EncodeRecord(const Record& r) {
  if (r.key.find(kRecordSeparator) != std::string::npos) {
    return Status(ErrorCode::kIllegalByte, "newline in record key");
  }
  if (r.value.find(kRecordSeparator) != std::string::npos) {
    return Status(ErrorCode::kIllegalByte, "newline in record value");
  }
  std::string out;
  AppendEncoded(r, &out);
  return out;
}

void AppendEncoded(const Record& r, std::string* out) {
  out->reserve(out->size() + r.key.size() + r.value.size() + 2);
  out->append(r.key);
  out->push_back(kFieldSeparator);
  out->append(r.value);
  out->push_back(kRecordSeparator);
}

Record DecodeWorkerLine(std::string_view line) {
  const size_t tab = line.find(kFieldSeparator);
  if (tab == std::string_view::npos) return Record{std::string(line), {}};
  return Record{std::string(line.substr(0, tab)),
                std::string(line.substr(tab + 1))};
}

}  // namespace mrs::streaming
