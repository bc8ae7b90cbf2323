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

#ifndef MRS_ENGINE_JOB_H_
#define MRS_ENGINE_JOB_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mrs::engine {

inline constexpr std::string_view kTextInputFormat =
    "org.apache.hadoop.mapred.TextInputFormat";
inline constexpr std::string_view kTextInputFormatAlias = "text";

bool IsAcceptedInputFormat(std::string_view format);

using JobId = std::string;

struct JobSpec {
  std::string input;
  std::string output;
  std::string mapper_cmd;
  // Absent means a map-only job.
  std::optional<std::string> reducer_cmd;
  // DFS paths staged into every task's working directory.
  std::vector<std::string> files;
  std::string input_format = std::string(kTextInputFormat);
  int num_reducers = 1;
  std::optional<std::string> job_name;

  bool map_only() const { return !reducer_cmd.has_value(); }
};

enum class Phase { kPending, kMapping, kReducing, kSucceeded, kFailed };

std::string_view PhaseName(Phase phase);
std::optional<Phase> PhaseFromName(std::string_view name);
inline bool IsTerminal(Phase p) { return p == Phase::kSucceeded || p == Phase::kFailed; }

struct JobStatus {
  JobId id;
  Phase phase = Phase::kPending;
  int map_done = 0;
  int map_total = 0;
  int reduce_done = 0;
  int reduce_total = 0;
  std::map<std::string, int64_t> counters;
  std::vector<std::string> diagnostics;
};

enum class TaskKind { kMap, kReduce };

inline std::string_view TaskKindName(TaskKind k) {
  return k == TaskKind::kMap ? "map" : "reduce";
}

enum class AttemptState { kRunning, kSucceeded, kFailed, kKilled };

// Zero-padded five digit ordinal: part-00007.
std::string PartFileName(int index);

}  // namespace mrs::engine

#endif  // MRS_ENGINE_JOB_H_
