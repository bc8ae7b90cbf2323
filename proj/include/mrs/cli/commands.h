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

#ifndef MRS_CLI_COMMANDS_H_
#define MRS_CLI_COMMANDS_H_

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "mrs/cli/streaming_args.h"

namespace mrs::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitJobFailed = 1;     // daemon reported an error or FAILED
inline constexpr int kExitClientError = 2;   // usage, local I/O or transport

// --daemon wins over $MRS_DAEMON, which wins over the built-in default.
std::string ResolveDaemonAddress(const std::optional<std::string>& flag);

// DFS paths are absolute; a relative one is taken from the root.
std::string NormalizeDfsPath(std::string_view path);

// Uploads -file entries to a per-job staging area, submits, waits and
// prints "<PHASE> maps=N reduces=R".
int RunStreaming(const StreamingArgs& args, const std::string& daemon,
                 std::ostream& out, std::ostream& err);

// put <local> <dfs> | get <dfs> <local|-> | ls [prefix] | rm <dfs> |
// mv <src> <dst>. `argv` starts at the subcommand name.
int RunDfsCommand(const std::vector<std::string>& argv, const std::string& daemon,
                  std::ostream& out, std::ostream& err);

}  // namespace mrs::cli

#endif  // MRS_CLI_COMMANDS_H_
