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

#ifndef MRS_CLUSTER_CLUSTER_H_
#define MRS_CLUSTER_CLUSTER_H_

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "mrs/common/clock.h"
#include "mrs/common/status.h"

namespace mrs::cluster {

struct NodeId {
  uint32_t value = 0;
  auto operator<=>(const NodeId&) const = default;
};

std::string ToString(NodeId id);

enum class NodeState { kAlive, kDead };

struct NodeInfo {
  NodeId id;
  NodeState state = NodeState::kAlive;
  TimePoint last_heartbeat;
  int capacity = 1;
};

// Called once for every node that transitions ALIVE -> DEAD, after the
// registry has recorded the death.
using DeathListener = std::function<void(NodeId)>;

// Node registry. Transitions are ALIVE -> DEAD only; a node that comes back
// must register again and receives a fresh id.
class Cluster {
 public:
  Cluster(const Clock& clock, Duration heartbeat_timeout);

  Cluster(const Cluster&) = delete;
  Cluster& operator=(const Cluster&) = delete;

  Result<NodeId> RegisterNode(int capacity);
  Status Heartbeat(NodeId node);

  // Marks every ALIVE node whose last heartbeat is older than the timeout
  // as DEAD and returns them in ascending id order. Idempotent.
  std::vector<NodeId> DetectFailures(TimePoint now);

  // Test hook: kill a node immediately.
  Status InjectNodeFailure(NodeId node);

  std::vector<NodeInfo> ListNodes() const;
  std::vector<NodeId> LiveNodes() const;
  bool IsAlive(NodeId node) const;
  Result<NodeInfo> GetNode(NodeId node) const;

  // Listeners run synchronously on the thread that observed the death, in
  // registration order.
  void AddDeathListener(DeathListener listener);

  const Clock& clock() const { return clock_; }
  Duration heartbeat_timeout() const { return timeout_; }

 private:
  void NotifyDeaths(const std::vector<NodeId>& dead);

  const Clock& clock_;
  const Duration timeout_;

  mutable std::mutex mu_;
  std::map<NodeId, NodeInfo> nodes_;
  uint32_t next_id_ = 1;

  // Held while listeners run so that two deaths are never processed
  // interleaved.
  std::mutex listeners_mu_;
  std::vector<DeathListener> listeners_;
};

}  // namespace mrs::cluster

#endif  // MRS_CLUSTER_CLUSTER_H_
