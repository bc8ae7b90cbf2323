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

#include "mrs/jobd/daemon.h"

#include <utility>

namespace mrs::jobd {

using cluster::NodeId;

namespace {

constexpr int64_t kDefaultWaitMillis = 24LL * 3600 * 1000;

std::string RequireString(const Json& req, const char* field) {
  return req.at(field).get<std::string>();
}

}  // namespace

Daemon::Daemon(DaemonConfig config, const Clock* clock)
    : config_(std::move(config)), clock_(clock != nullptr ? clock : &system_clock_) {
  cluster_ = std::make_unique<cluster::Cluster>(*clock_, config_.heartbeat_timeout);
  dfs::DfsOptions dopts;
  dopts.root = config_.data_dir / "dfs";
  dopts.block_size = config_.block_size;
  dopts.replication = config_.replication;
  dopts.seed = config_.placement_seed;
  dfs_ = std::make_unique<dfs::Dfs>(*cluster_, dopts);
  engine::EngineOptions eopts;
  eopts.local_root = config_.data_dir / "local";
  eopts.split_size = config_.split_size;
  eopts.max_attempts = config_.max_attempts;
  eopts.worker_timeout = config_.worker_timeout;
  eopts.shuffle_seed = config_.shuffle_seed;
  engine_ = std::make_unique<engine::Engine>(*dfs_, *cluster_, eopts);
}

Daemon::~Daemon() {
  {
    std::lock_guard<std::mutex> l(mu_);
    stop_ = true;
  }
  cv_.notify_all();
  if (heartbeats_.joinable()) heartbeats_.join();
  engine_.reset();
}

Status Daemon::Start(bool drive_heartbeats) {
  std::vector<NodeId> ids;
  for (int i = 0; i < config_.nodes; ++i) {
    MRS_ASSIGN_OR_RETURN(NodeId id, cluster_->RegisterNode(config_.capacity));
    ids.push_back(id);
  }
  {
    std::lock_guard<std::mutex> l(mu_);
    nodes_.insert(nodes_.end(), ids.begin(), ids.end());
  }
  if (drive_heartbeats) heartbeats_ = std::thread([this] { HeartbeatLoop(); });
  return Status::OK();
}

std::vector<NodeId> Daemon::nodes() const {
  std::lock_guard<std::mutex> l(mu_);
  return nodes_;
}

void Daemon::SilenceNode(NodeId node) {
  std::lock_guard<std::mutex> l(mu_);
  silenced_.insert(node);
}

void Daemon::HeartbeatLoop() {
  const auto period = std::max(Duration(1), config_.heartbeat_timeout / 5);
  std::unique_lock<std::mutex> l(mu_);
  while (!stop_) {
    std::vector<NodeId> beating;
    for (NodeId n : nodes_) {
      if (!silenced_.count(n)) beating.push_back(n);
    }
    l.unlock();
    for (NodeId n : beating) (void)cluster_->Heartbeat(n);
    cluster_->DetectFailures(clock_->Now());
    l.lock();
    cv_.wait_for(l, period, [&] { return stop_; });
  }
}

Json Daemon::Handle(const Json& request) {
  try {
    if (!request.is_object() || !request.contains("op") || !request["op"].is_string()) {
      return ErrorResponse(InvalidArgument("request needs a string 'op'"));
    }
    return Dispatch(request["op"].get<std::string>(), request);
  } catch (const Json::exception& e) {
    return ErrorResponse(InvalidArgument(std::string("malformed request: ") + e.what()));
  }
}

Json Daemon::Dispatch(const std::string& op, const Json& req) {
  if (op == "ping") {
    Json r = OkResponse();
    r["live_nodes"] = cluster_->LiveNodes().size();
    return r;
  }
  if (op == "put" || op == "append") {
    const std::string path = RequireString(req, "path");
    auto data = Base64Decode(RequireString(req, "data"));
    if (!data.ok()) return ErrorResponse(data.status());
    auto meta = op == "put" ? dfs_->Put(path, *data) : dfs_->Append(path, *data);
    if (!meta.ok()) return ErrorResponse(meta.status());
    Json r = OkResponse();
    r["file"] = ToJson(*meta);
    return r;
  }
  if (op == "get") {
    auto data = dfs_->Get(RequireString(req, "path"));
    if (!data.ok()) return ErrorResponse(data.status());
    Json r = OkResponse();
    r["data"] = Base64Encode(*data);
    return r;
  }
  if (op == "ls") {
    const std::string prefix = req.value("prefix", "/");
    Json files = Json::array();
    for (const auto& f : dfs_->Ls(prefix)) files.push_back(ToJson(f));
    Json r = OkResponse();
    r["files"] = std::move(files);
    return r;
  }
  if (op == "rename") {
    Status st = dfs_->Rename(RequireString(req, "src"), RequireString(req, "dst"));
    return st.ok() ? OkResponse() : ErrorResponse(st);
  }
  if (op == "delete") {
    Status st = dfs_->Delete(RequireString(req, "path"));
    return st.ok() ? OkResponse() : ErrorResponse(st);
  }
  if (op == "submit") {
    const Json& spec_json = req.contains("spec") ? req["spec"] : req;
    auto spec = JobSpecFromJson(spec_json);
    if (!spec.ok()) return ErrorResponse(spec.status());
    auto id = engine_->Submit(std::move(spec).value());
    if (!id.ok()) return ErrorResponse(id.status());
    Json r = OkResponse();
    r["id"] = *id;
    return r;
  }
  if (op == "status" || op == "wait") {
    const std::string id = RequireString(req, "id");
    auto status = op == "status"
                      ? engine_->GetStatus(id)
                      : engine_->Wait(id, Duration(req.value("timeout_ms", kDefaultWaitMillis)));
    if (!status.ok()) return ErrorResponse(status.status());
    Json r = OkResponse();
    r["status"] = ToJson(*status);
    return r;
  }
  if (op == "kill") {
    Status st = engine_->Kill(RequireString(req, "id"));
    return st.ok() ? OkResponse() : ErrorResponse(st);
  }
  if (op == "jobs") {
    Json jobs = Json::array();
    for (const auto& s : engine_->ListJobs()) jobs.push_back(ToJson(s));
    Json r = OkResponse();
    r["jobs"] = std::move(jobs);
    return r;
  }
  if (op == "nodes") {
    Json nodes = Json::array();
    for (const auto& n : cluster_->ListNodes()) {
      nodes.push_back({{"id", n.id.value},
                       {"state", n.state == cluster::NodeState::kAlive ? "ALIVE" : "DEAD"},
                       {"capacity", n.capacity}});
    }
    Json r = OkResponse();
    r["nodes"] = std::move(nodes);
    return r;
  }
  if (op == "fail_node") {
    Status st = cluster_->InjectNodeFailure(NodeId{req.at("node").get<uint32_t>()});
    return st.ok() ? OkResponse() : ErrorResponse(st);
  }
  return ErrorResponse(InvalidArgument("unknown op '" + op + "'"));
}

}  // namespace mrs::jobd
