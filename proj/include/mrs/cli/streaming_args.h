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

#ifndef MRS_CLI_STREAMING_ARGS_H_
#define MRS_CLI_STREAMING_ARGS_H_

#include <optional>
#include <string>
#include <vector>

#include "mrs/common/status.h"
#include "mrs/engine/job.h"

namespace mrs::cli {

// Parsed Hadoop-Streaming style flags.
struct StreamingArgs {
  std::string inputformat = std::string(engine::kTextInputFormat);
  std::string input;
  std::string output;
  std::string mapper;
  std::optional<std::string> reducer;
  std::vector<std::string> files;
  int num_reduce_tasks = 1;
  std::optional<std::string> jobname;

  bool operator==(const StreamingArgs&) const = default;
};

// Recognizes exactly -inputformat, -input, -output, -mapper, -reducer,
// -file (repeatable), -numReduceTasks and -jobname, each followed by one
// value, in any order. Errors are kInvalidArgument with a message that
// starts with "MissingRequired", "UnknownFlag" or "BadValue".
Result<StreamingArgs> ParseStreamingArgs(const std::vector<std::string>& argv);

}  // namespace mrs::cli

#endif  // MRS_CLI_STREAMING_ARGS_H_
