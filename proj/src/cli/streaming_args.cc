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

#include "mrs/cli/streaming_args.h"

#include <charconv>
#include <set>

namespace mrs::cli {

namespace {

Status MissingRequired(const std::string& flag) {
  return InvalidArgument("MissingRequired: " + flag + " is required");
}

Status BadValue(const std::string& flag, const std::string& why) {
  return InvalidArgument("BadValue: " + flag + ": " + why);
}

}  // namespace

Result<StreamingArgs> ParseStreamingArgs(const std::vector<std::string>& argv) {
  static const std::set<std::string> kFlags = {
      "-inputformat", "-input", "-output", "-mapper",
      "-reducer", "-file", "-numReduceTasks", "-jobname"};
  StreamingArgs args;
  std::set<std::string> seen;
  for (size_t i = 0; i < argv.size(); ++i) {
    const std::string& flag = argv[i];
    if (kFlags.count(flag) == 0) {
      return InvalidArgument("UnknownFlag: " + flag);
    }
    if (i + 1 >= argv.size()) return BadValue(flag, "missing value");
    const std::string& value = argv[++i];
    if (flag != "-file" && !seen.insert(flag).second) {
      return BadValue(flag, "given more than once");
    }
    if (flag == "-inputformat") {
      if (!engine::IsAcceptedInputFormat(value)) {
        return BadValue(flag, "'" + value + "' (only " +
                                  std::string(engine::kTextInputFormat) + " or '" +
                                  std::string(engine::kTextInputFormatAlias) +
                                  "' are supported)");
      }
      args.inputformat = value;
    } else if (flag == "-input") {
      args.input = value;
    } else if (flag == "-output") {
      args.output = value;
    } else if (flag == "-mapper") {
      args.mapper = value;
    } else if (flag == "-reducer") {
      args.reducer = value;
    } else if (flag == "-file") {
      args.files.push_back(value);
    } else if (flag == "-numReduceTasks") {
      int n = 0;
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
      if (ec != std::errc() || ptr != value.data() + value.size() || n < 1) {
        return BadValue(flag, "'" + value + "' is not an integer >= 1");
      }
      args.num_reduce_tasks = n;
    } else if (flag == "-jobname") {
      args.jobname = value;
    }
    if (value.empty()) return BadValue(flag, "empty value");
  }
  if (args.input.empty()) return MissingRequired("-input");
  if (args.output.empty()) return MissingRequired("-output");
  if (args.mapper.empty()) return MissingRequired("-mapper");
  return args;
}

}  // namespace mrs::cli
