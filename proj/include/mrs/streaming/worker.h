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

#ifndef MRS_STREAMING_WORKER_H_
#define MRS_STREAMING_WORKER_H_

#include <atomic>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mrs/common/clock.h"
#include "mrs/common/status.h"
#include "mrs/streaming/codec.h"

namespace mrs::streaming {

inline constexpr size_t kStderrTailBytes = 4096;
inline constexpr Duration kDefaultWorkerTimeout = std::chrono::seconds(600);

struct WorkerSpec {
  // argv[0] is resolved against the staged workdir first, then taken
  // verbatim (absolute path) or looked up on PATH.
  std::vector<std::string> argv;
  std::filesystem::path workdir;
  // Added to (or overriding) the parent environment.
  std::vector<std::pair<std::string, std::string>> env;
  Duration timeout = kDefaultWorkerTimeout;
  // Polled while the worker runs; when set the process group is killed and
  // kCancelled is returned.
  const std::atomic<bool>* cancel = nullptr;
};

// Splits a command line on whitespace. No quoting, no shell.
std::vector<std::string> SplitCommandLine(std::string_view cmd);

// Produces the next stdin line (without newline). Returns false when done.
using LineSource = std::function<bool(std::string* line)>;
// Receives raw stdout bytes as they arrive.
using ChunkSink = std::function<Status(std::string_view chunk)>;

struct ProcessOutcome {
  int exit_code = 0;
  std::string stderr_tail;
};

// Runs one worker: feeds stdin, drains stdout and stderr concurrently, and
// waits for exit. A nonzero exit is reported in the outcome, not as an
// error. Errors: kSpawnFailed, kTimeout, kCancelled, kWorkerFailed (broken
// pipe on stdin, or the sink rejected output).
Result<ProcessOutcome> RunProcess(const WorkerSpec& spec, const LineSource& input,
                                  const ChunkSink& output);

struct WorkerResult {
  std::vector<Record> records;
  int exit_code = 0;
  std::string stderr_tail;
};

// RunProcess plus line decoding into a vector. Records are cleared when the
// worker exits nonzero.
Result<WorkerResult> SpawnWorker(const WorkerSpec& spec, const LineSource& input);

// Streaming variant: every decoded stdout record goes to `sink` as soon as
// its line is complete.
Result<ProcessOutcome> RunRecordWorker(
    const WorkerSpec& spec, const LineSource& input,
    const std::function<Status(Record&&)>& sink);

// Convenience source over an in-memory list.
LineSource VectorSource(const std::vector<std::string>& lines);

}  // namespace mrs::streaming

#endif  // MRS_STREAMING_WORKER_H_
