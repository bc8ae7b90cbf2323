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

#ifndef MRS_JOBD_DAEMON_H_
#define MRS_JOBD_DAEMON_H_

#include <atomic>
#include <condition_variable>
#include <filesystem>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "mrs/cluster/cluster.h"
#include "mrs/common/clock.h"
#include "mrs/dfs/dfs.h"
#include "mrs/engine/engine.h"
#include "mrs/jobd/protocol.h"

namespace mrs::jobd {

struct DaemonConfig {
  std::string listen = std::string(kDefaultListen);
  // Holds dfs/ (block replicas) and local/ (per-node scratch).
  std::filesystem::path data_dir;

  int nodes = 4;
  int capacity = 2;
  Duration heartbeat_timeout = std::chrono::seconds(5);

  uint64_t block_size = 1 << 20;
  int replication = 2;
  uint64_t placement_seed = 0x5eed;

  uint64_t split_size = 0;
  int max_attempts = 4;
  Duration worker_timeout = streaming::kDefaultWorkerTimeout;
  std::optional<uint64_t> shuffle_seed;
};

// Owns the cluster registry, the file system and the job engine, plus the
// in-process simulated nodes and their heartbeat driver.
class Daemon {
 public:
  // With a null clock the daemon uses the steady system clock.
  explicit Daemon(DaemonConfig config, const Clock* clock = nullptr);
  ~Daemon();

  Daemon(const Daemon&) = delete;
  Daemon& operator=(const Daemon&) = delete;

  // Registers config.nodes simulated nodes. With `drive_heartbeats` a
  // background thread heartbeats every live node and runs failure
  // detection every timeout/5.
  Status Start(bool drive_heartbeats = true);

  // Executes one protocol request. Never throws.
  Json Handle(const Json& request);

  // Stops heartbeating `node` so that failure detection notices it.
  void SilenceNode(cluster::NodeId node);

  const DaemonConfig& config() const { return config_; }
  const Clock& clock() const { return *clock_; }
  cluster::Cluster& cluster() { return *cluster_; }
  dfs::Dfs& dfs() { return *dfs_; }
  engine::Engine& engine() { return *engine_; }
  std::vector<cluster::NodeId> nodes() const;

 private:
  Json Dispatch(const std::string& op, const Json& req);
  void HeartbeatLoop();

  DaemonConfig config_;
  SystemClock system_clock_;
  const Clock* clock_;
  std::unique_ptr<cluster::Cluster> cluster_;
  std::unique_ptr<dfs::Dfs> dfs_;
  std::unique_ptr<engine::Engine> engine_;

  mutable std::mutex mu_;
  std::condition_variable cv_;
  bool stop_ = false;
  std::vector<cluster::NodeId> nodes_;
  std::set<cluster::NodeId> silenced_;
  std::thread heartbeats_;
};

}  // namespace mrs::jobd

#endif  // MRS_JOBD_DAEMON_H_
