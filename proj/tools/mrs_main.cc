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

// mrs: streaming job launcher and DFS shell.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mrs/cli/commands.h"
#include "mrs/cli/streaming_args.h"

int main(int argc, char** argv) {
  CLI::App app{"mrs - streaming MapReduce client"};
  app.require_subcommand(1);
  std::optional<std::string> daemon;
  app.add_option("--daemon", daemon, "daemon address host:port (overrides $MRS_DAEMON)");

  // Hadoop-style single-dash flags are not CLI11 syntax; pass them through.
  auto* streaming = app.add_subcommand("streaming", "run a streaming job");
  streaming->prefix_command();
  auto* dfs = app.add_subcommand("dfs", "put|get|ls|rm|mv");
  dfs->prefix_command();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : mrs::cli::kExitClientError;
  }

  const std::string address = mrs::cli::ResolveDaemonAddress(daemon);
  if (streaming->parsed()) {
    auto args = mrs::cli::ParseStreamingArgs(streaming->remaining());
    if (!args.ok()) {
      std::cerr << "mrs streaming: " << args.status().message() << "\n";
      return mrs::cli::kExitClientError;
    }
    return mrs::cli::RunStreaming(*args, address, std::cout, std::cerr);
  }
  return mrs::cli::RunDfsCommand(dfs->remaining(), address, std::cout, std::cerr);
}
