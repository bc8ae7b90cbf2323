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

#ifndef MRS_COMMON_FILE_UTIL_H_
#define MRS_COMMON_FILE_UTIL_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "mrs/common/status.h"

namespace mrs {

// Writes through a uniquely named sibling temp file, then renames over
// `path`. Descriptors are opened close-on-exec so that concurrently spawned
// worker processes never inherit a writable handle to the file.
Status WriteFileAtomic(const std::filesystem::path& path, std::string_view data,
                       unsigned mode = 0644);

Result<std::string> ReadFile(const std::filesystem::path& path);

}  // namespace mrs

#endif  // MRS_COMMON_FILE_UTIL_H_
