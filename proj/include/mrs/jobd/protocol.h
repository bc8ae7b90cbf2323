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

#ifndef MRS_JOBD_PROTOCOL_H_
#define MRS_JOBD_PROTOCOL_H_

#include <string>
#include <string_view>

#include "json.hpp"
#include "mrs/common/status.h"
#include "mrs/dfs/dfs.h"
#include "mrs/engine/job.h"

namespace mrs::jobd {

using Json = nlohmann::json;

inline constexpr std::string_view kDefaultListen = "127.0.0.1:7070";
// Upper bound on one request or response line.
inline constexpr size_t kMaxLineBytes = size_t{1} << 30;

std::string Base64Encode(std::string_view bytes);
Result<std::string> Base64Decode(std::string_view text);

Json ToJson(const dfs::FileMeta& meta);
Json ToJson(const engine::JobSpec& spec);
Json ToJson(const engine::JobStatus& status);
Result<engine::JobSpec> JobSpecFromJson(const Json& j);
Result<engine::JobStatus> JobStatusFromJson(const Json& j);

Json OkResponse();
Json ErrorResponse(const Status& status);
// OK for {"ok":true,...}; otherwise the decoded error.
Status ResponseStatus(const Json& response);

}  // namespace mrs::jobd

#endif  // MRS_JOBD_PROTOCOL_H_
