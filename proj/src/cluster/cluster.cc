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

#include "mrs/cluster/cluster.h"

#include <utility>

namespace mrs::cluster {

std::string ToString(NodeId id) { return "node-" + std::to_string(id.value); }

Cluster::Cluster(const Clock& clock, Duration heartbeat_timeout)
    : clock_(clock), timeout_(heartbeat_timeout) {}

Result<NodeId> Cluster::RegisterNode(int capacity) {
  if (capacity < 1) {
    return InvalidArgument("node capacity must be >= 1, got " +
                           std::to_string(capacity));
  }
  std::lock_guard<std::mutex> l(mu_);
  NodeInfo info;
  info.id = NodeId{next_id_++};
  info.state = NodeState::kAlive;
  info.last_heartbeat = clock_.Now();
  info.capacity = capacity;
  nodes_.emplace(info.id, info);
  return info.id;
}

Status Cluster::Heartbeat(NodeId node) {
  std::lock_guard<std::mutex> l(mu_);
  auto it = nodes_.find(node);
  if (it == nodes_.end()) {
    return {ErrorCode::kUnknownNode, ToString(node)};
  }
  // Dead nodes stay dead; the timestamp is still recorded for diagnostics.
  it->second.last_heartbeat = clock_.Now();
  return Status::OK();
}

std::vector<NodeId> Cluster::DetectFailures(TimePoint now) {
  std::vector<NodeId> dead;
  {
    std::lock_guard<std::mutex> l(mu_);
    for (auto& [id, info] : nodes_) {
      if (info.state == NodeState::kAlive &&
          now - info.last_heartbeat > timeout_) {
        info.state = NodeState::kDead;
        dead.push_back(id);
      }
    }
  }
  NotifyDeaths(dead);
  return dead;
}

Status Cluster::InjectNodeFailure(NodeId node) {
  {
    std::lock_guard<std::mutex> l(mu_);
    auto it = nodes_.find(node);
    if (it == nodes_.end()) {
      return {ErrorCode::kUnknownNode, ToString(node)};
    }
    if (it->second.state == NodeState::kDead) {
      return {ErrorCode::kAlreadyDead, ToString(node)};
    }
    it->second.state = NodeState::kDead;
  }
  NotifyDeaths({node});
  return Status::OK();
}

std::vector<NodeInfo> Cluster::ListNodes() const {
  std::lock_guard<std::mutex> l(mu_);
  std::vector<NodeInfo> out;
  out.reserve(nodes_.size());
  for (const auto& [id, info] : nodes_) out.push_back(info);
  return out;
}

std::vector<NodeId> Cluster::LiveNodes() const {
  std::lock_guard<std::mutex> l(mu_);
  std::vector<NodeId> out;
  for (const auto& [id, info] : nodes_) {
    if (info.state == NodeState::kAlive) out.push_back(id);
  }
  return out;
}

bool Cluster::IsAlive(NodeId node) const {
  std::lock_guard<std::mutex> l(mu_);
  auto it = nodes_.find(node);
  return it != nodes_.end() && it->second.state == NodeState::kAlive;
}

Result<NodeInfo> Cluster::GetNode(NodeId node) const {
  std::lock_guard<std::mutex> l(mu_);
  auto it = nodes_.find(node);
  if (it == nodes_.end()) {
    return Status(ErrorCode::kUnknownNode, ToString(node));
  }
  return it->second;
}

void Cluster::AddDeathListener(DeathListener listener) {
  std::lock_guard<std::mutex> l(listeners_mu_);
  listeners_.push_back(std::move(listener));
}

void Cluster::NotifyDeaths(const std::vector<NodeId>& dead) {
  if (dead.empty()) return;
  std::lock_guard<std::mutex> l(listeners_mu_);
  for (NodeId id : dead) {
    for (const auto& listener : listeners_) listener(id);
  }
}

}  // namespace mrs::cluster
