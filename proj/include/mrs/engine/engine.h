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

#ifndef MRS_ENGINE_ENGINE_H_
#define MRS_ENGINE_ENGINE_H_

#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "mrs/cluster/cluster.h"
#include "mrs/common/status.h"
#include "mrs/dfs/dfs.h"
#include "mrs/engine/attempts.h"
#include "mrs/engine/job.h"
#include "mrs/engine/splits.h"
#include "mrs/streaming/cache.h"

namespace mrs::engine {

struct EngineOptions {
  std::filesystem::path local_root;
  // 0 means the DFS block size.
  uint64_t split_size = 0;
  int max_attempts = 4;
  Duration worker_timeout = streaming::kDefaultWorkerTimeout;
  // When set, dispatch choices, completion-event order and attempt start
  // jitter are drawn from an RNG with this seed.
  std::optional<uint64_t> shuffle_seed;
};

// Invoked on the scheduler thread, with no engine lock held, after every
// task completion.
using ProgressListener = std::function<void(const JobStatus&)>;

// Runs jobs. A single scheduler thread owns all job state transitions and
// consumes completion events from attempt threads; at most `capacity`
// attempts run per live node. Jobs share free slots round-robin.
class Engine {
 public:
  Engine(dfs::Dfs& dfs, cluster::Cluster& cluster, EngineOptions options);
  ~Engine();

  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  // Validates, plans splits and queues the job. Errors: kNotFound (input),
  // kAlreadyExists (output), kInvalidArgument (format, counts, cache names),
  // kNoLiveNodes.
  Result<JobId> Submit(JobSpec spec);
  Result<JobStatus> GetStatus(const JobId& id) const;
  // kWaitTimeout if the job is not terminal within `timeout`.
  Result<JobStatus> Wait(const JobId& id, Duration timeout) const;
  // Cancels running attempts, removes committed output and marks the job
  // FAILED. Returns once the job is terminal.
  Status Kill(const JobId& id);
  std::vector<JobStatus> ListJobs() const;

  void SetProgressListener(ProgressListener listener);

  const EngineOptions& options() const { return options_; }

 private:
  enum class CancelReason { kNone, kNodeDeath, kJobEnd, kInputLost };

  struct Attempt {
    JobId job;
    TaskKind kind = TaskKind::kMap;
    int index = 0;
    int attempt_no = 1;
    cluster::NodeId node;
    std::atomic<bool> cancel{false};
    CancelReason reason = CancelReason::kNone;
    Result<AttemptResult> result{Status(ErrorCode::kCancelled, "not run")};
    int failed_map = -1;
    std::thread thread;
  };

  enum class TaskState { kPending, kRunning, kDone };

  struct Task {
    TaskState state = TaskState::kPending;
    int next_attempt = 1;
    int failures = 0;
    std::optional<cluster::NodeId> last_failed;
    std::vector<std::shared_ptr<Attempt>> running;
    AttemptResult committed;
  };

  struct Job {
    JobId id;
    JobSpec spec;
    std::vector<InputSplit> splits;
    Phase phase = Phase::kPending;
    std::vector<Task> maps;
    std::vector<Task> reduces;
    int map_done = 0;
    int reduce_done = 0;
    int64_t map_attempts = 0;
    int64_t reduce_attempts = 0;
    int64_t failed_attempts = 0;
    std::vector<std::string> diagnostics;
    // Failure or kill in progress; waits for running attempts to drain.
    bool ending = false;
    int running = 0;
  };

  struct AttemptFinished {
    std::shared_ptr<Attempt> attempt;
  };
  struct NodeDied {
    cluster::NodeId node;
  };
  struct Poke {};
  using Event = std::variant<AttemptFinished, NodeDied, Poke>;

  void Loop();
  void PostLocked(Event e);
  void HandleLocked(AttemptFinished& e);
  void HandleLocked(const NodeDied& e);
  void HandleLocked(const Poke&) {}
  void DispatchLocked();
  bool LaunchOneLocked(Job& job, const std::vector<cluster::NodeId>& live,
                       std::map<cluster::NodeId, int>& free);
  void LaunchLocked(Job& job, TaskKind kind, int index, cluster::NodeId node);
  std::optional<cluster::NodeId> ChooseNodeLocked(
      const Job& job, TaskKind kind, int index, const Task& task,
      const std::vector<cluster::NodeId>& live,
      const std::map<cluster::NodeId, int>& free);

  void ResetMapLocked(Job& job, int map_index, const std::string& why);
  void BeginEndLocked(Job& job, const std::string& reason);
  void FinalizeFailedLocked(Job& job);
  void SucceedLocked(Job& job);
  void CleanupLocalLocked(const Job& job);
  void OnNodeDeath(cluster::NodeId node);

  JobStatus SnapshotLocked(const Job& job) const;
  Job* FindLocked(const JobId& id);
  const Job* FindLocked(const JobId& id) const;

  dfs::Dfs& dfs_;
  cluster::Cluster& cluster_;
  const EngineOptions options_;
  streaming::Stager stager_;
  AttemptEnv env_;

  mutable std::mutex mu_;
  std::condition_variable events_cv_;
  mutable std::condition_variable status_cv_;
  std::vector<Event> events_;
  bool stop_ = false;

  std::map<JobId, std::unique_ptr<Job>> jobs_;
  std::vector<JobId> order_;
  size_t rr_cursor_ = 0;
  uint64_t next_job_ = 1;
  std::map<cluster::NodeId, int> busy_;
  std::optional<std::mt19937_64> shuffle_rng_;

  ProgressListener progress_;
  std::vector<JobStatus> pending_progress_;

  std::thread scheduler_;
};

}  // namespace mrs::engine

#endif  // MRS_ENGINE_ENGINE_H_
