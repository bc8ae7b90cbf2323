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

#ifndef MRS_ENGINE_ATTEMPTS_H_
#define MRS_ENGINE_ATTEMPTS_H_

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mrs/cluster/cluster.h"
#include "mrs/common/clock.h"
#include "mrs/common/status.h"
#include "mrs/dfs/dfs.h"
#include "mrs/engine/job.h"
#include "mrs/engine/splits.h"
#include "mrs/streaming/cache.h"
#include "mrs/streaming/worker.h"

namespace mrs::engine {

// Shared services an attempt runs against.
struct AttemptEnv {
  dfs::Dfs* dfs = nullptr;
  cluster::Cluster* cluster = nullptr;
  streaming::Stager* stager = nullptr;
  // Per-node scratch space: <local_root>/node-<id>/<job>/...
  std::filesystem::path local_root;
  Duration worker_timeout = streaming::kDefaultWorkerTimeout;
};

struct AttemptRequest {
  JobId job;
  const JobSpec* spec = nullptr;
  int index = 0;
  int attempt_no = 1;
  cluster::NodeId node;
  const std::atomic<bool>* cancel = nullptr;
};

// Where a committed map attempt left its per-partition spills.
struct MapOutput {
  cluster::NodeId node;
  std::filesystem::path dir;
};

struct AttemptResult {
  int64_t records_in = 0;
  int64_t records_out = 0;
  // Set for map attempts of jobs with a reduce phase.
  MapOutput map_output;
  // False when another attempt of the same task already committed.
  bool committed = true;
};

std::filesystem::path JobLocalDir(const std::filesystem::path& local_root,
                                  const JobId& job, cluster::NodeId node);
// m{map}-p{partition}
std::string SpillFileName(int map_index, int partition);
// {output}/_tmp/{m|r}NNNNN.{attempt}
std::string TempOutputPath(const std::string& output, TaskKind kind, int index,
                           int attempt_no);

// Reads the split, runs the mapper, partitions and stably sorts its output.
// With a reduce phase the spills land on the node's local disk; a map-only
// job commits the sorted records straight to {output}/part-{index}.
Result<AttemptResult> RunMapAttempt(const AttemptEnv& env, const AttemptRequest& req,
                                    const InputSplit& split);

// Merges partition `req.index` of every map output, streams it through the
// reducer and commits stdout to {output}/part-{index} by rename. On
// kFetchFailed, *failed_map names the map task whose spill was unreadable.
Result<AttemptResult> RunReduceAttempt(const AttemptEnv& env, const AttemptRequest& req,
                                       const std::vector<MapOutput>& maps,
                                       int* failed_map);

}  // namespace mrs::engine

#endif  // MRS_ENGINE_ATTEMPTS_H_
