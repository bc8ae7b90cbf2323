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

#include "mrs/engine/engine.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <system_error>
#include <utility>

namespace mrs::engine {

namespace fs = std::filesystem;
using cluster::NodeId;

namespace {

std::string TaskLabel(TaskKind kind, int index) {
  return std::string(TaskKindName(kind)) + " " + std::to_string(index);
}

}  // namespace

Engine::Engine(dfs::Dfs& dfs, cluster::Cluster& cluster, EngineOptions options)
    : dfs_(dfs),
      cluster_(cluster),
      options_(std::move(options)),
      stager_(options_.local_root, &dfs) {
  env_.dfs = &dfs_;
  env_.cluster = &cluster_;
  env_.stager = &stager_;
  env_.local_root = options_.local_root;
  env_.worker_timeout = options_.worker_timeout;
  if (options_.shuffle_seed) shuffle_rng_.emplace(*options_.shuffle_seed);
  cluster_.AddDeathListener([this](NodeId id) { OnNodeDeath(id); });
  scheduler_ = std::thread([this] { Loop(); });
}

Engine::~Engine() {
  std::vector<std::shared_ptr<Attempt>> running;
  {
    std::lock_guard<std::mutex> l(mu_);
    stop_ = true;
    for (auto& [id, job] : jobs_) {
      for (auto* tasks : {&job->maps, &job->reduces}) {
        for (auto& t : *tasks) {
          for (auto& a : t.running) {
            a->cancel = true;
            running.push_back(a);
          }
        }
      }
    }
  }
  events_cv_.notify_all();
  scheduler_.join();
  for (auto& a : running) {
    if (a->thread.joinable()) a->thread.join();
  }
}

void Engine::SetProgressListener(ProgressListener listener) {
  std::lock_guard<std::mutex> l(mu_);
  progress_ = std::move(listener);
}

void Engine::PostLocked(Event e) {
  events_.push_back(std::move(e));
  events_cv_.notify_one();
}

Engine::Job* Engine::FindLocked(const JobId& id) {
  auto it = jobs_.find(id);
  return it == jobs_.end() ? nullptr : it->second.get();
}

const Engine::Job* Engine::FindLocked(const JobId& id) const {
  auto it = jobs_.find(id);
  return it == jobs_.end() ? nullptr : it->second.get();
}

Result<JobId> Engine::Submit(JobSpec spec) {
  if (!IsAcceptedInputFormat(spec.input_format)) {
    return InvalidArgument("unsupported input format '" + spec.input_format +
                           "'; only text input is accepted");
  }
  if (streaming::SplitCommandLine(spec.mapper_cmd).empty()) {
    return InvalidArgument("mapper command is empty");
  }
  if (spec.reducer_cmd && streaming::SplitCommandLine(*spec.reducer_cmd).empty()) {
    return InvalidArgument("reducer command is empty");
  }
  if (!spec.map_only() && spec.num_reducers < 1) {
    return InvalidArgument("num_reducers must be >= 1");
  }
  MRS_RETURN_IF_ERROR(dfs::ValidatePath(spec.output));
  std::vector<streaming::CacheEntry> entries;
  for (const auto& f : spec.files) entries.push_back(streaming::CacheEntry::FromDfs(f));
  MRS_RETURN_IF_ERROR(streaming::CheckStagedNames(entries));
  for (const auto& f : spec.files) {
    if (!dfs_.Exists(f)) return NotFound("cache file " + f);
  }
  auto input = dfs_.Stat(spec.input);
  if (!input.ok()) return NotFound("input " + spec.input);
  if (dfs_.Exists(spec.output) || !dfs_.Ls(spec.output + "/").empty()) {
    return AlreadyExists("output " + spec.output + " already exists");
  }
  if (cluster_.LiveNodes().empty()) {
    return Status(ErrorCode::kNoLiveNodes, "no live nodes");
  }

  const uint64_t split_size =
      options_.split_size != 0 ? options_.split_size : dfs_.options().block_size;
  auto job = std::make_unique<Job>();
  job->spec = std::move(spec);
  job->splits = PlanSplits(*input, split_size);
  job->maps.resize(job->splits.size());
  job->reduces.resize(job->spec.map_only() ? 0 : job->spec.num_reducers);

  std::lock_guard<std::mutex> l(mu_);
  for (const auto& [id, other] : jobs_) {
    if (!IsTerminal(other->phase) && other->spec.output == job->spec.output) {
      return AlreadyExists("output " + job->spec.output + " claimed by " + id);
    }
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "job_%06llu",
                static_cast<unsigned long long>(next_job_++));
  job->id = buf;
  const JobId id = job->id;
  jobs_.emplace(id, std::move(job));
  order_.push_back(id);
  PostLocked(Poke{});
  return id;
}

Result<JobStatus> Engine::GetStatus(const JobId& id) const {
  std::lock_guard<std::mutex> l(mu_);
  const Job* job = FindLocked(id);
  if (job == nullptr) return Status(ErrorCode::kUnknownJob, id);
  return SnapshotLocked(*job);
}

Result<JobStatus> Engine::Wait(const JobId& id, Duration timeout) const {
  std::unique_lock<std::mutex> l(mu_);
  const Job* job = FindLocked(id);
  if (job == nullptr) return Status(ErrorCode::kUnknownJob, id);
  const bool done = status_cv_.wait_for(l, timeout, [&] { return IsTerminal(job->phase); });
  if (!done) {
    return Status(ErrorCode::kWaitTimeout,
                  id + " still " + std::string(PhaseName(job->phase)));
  }
  return SnapshotLocked(*job);
}

Status Engine::Kill(const JobId& id) {
  std::unique_lock<std::mutex> l(mu_);
  Job* job = FindLocked(id);
  if (job == nullptr) return Status(ErrorCode::kUnknownJob, id);
  if (IsTerminal(job->phase) || job->ending) {
    return Status(ErrorCode::kAlreadyTerminal,
                  id + " is " + std::string(PhaseName(job->phase)));
  }
  BeginEndLocked(*job, "killed by client");
  status_cv_.notify_all();
  status_cv_.wait(l, [&] { return IsTerminal(job->phase) || stop_; });
  return Status::OK();
}

std::vector<JobStatus> Engine::ListJobs() const {
  std::lock_guard<std::mutex> l(mu_);
  std::vector<JobStatus> out;
  for (const auto& id : order_) out.push_back(SnapshotLocked(*jobs_.at(id)));
  return out;
}

JobStatus Engine::SnapshotLocked(const Job& job) const {
  JobStatus s;
  s.id = job.id;
  s.phase = job.phase;
  s.map_done = job.map_done;
  s.map_total = static_cast<int>(job.maps.size());
  s.reduce_done = job.reduce_done;
  s.reduce_total = static_cast<int>(job.reduces.size());
  int64_t in = 0, map_out = 0, red_out = 0;
  for (const auto& t : job.maps) {
    if (t.state != TaskState::kDone) continue;
    in += t.committed.records_in;
    map_out += t.committed.records_out;
  }
  for (const auto& t : job.reduces) {
    if (t.state == TaskState::kDone) red_out += t.committed.records_out;
  }
  s.counters["records_in"] = in;
  s.counters["records_out"] = job.spec.map_only() ? map_out : red_out;
  s.counters["map_records_out"] = map_out;
  s.counters["map_attempts"] = job.map_attempts;
  s.counters["reduce_attempts"] = job.reduce_attempts;
  s.counters["failed_attempts"] = job.failed_attempts;
  s.diagnostics = job.diagnostics;
  return s;
}

void Engine::Loop() {
  std::unique_lock<std::mutex> l(mu_);
  for (;;) {
    events_cv_.wait(l, [&] { return stop_ || !events_.empty(); });
    if (stop_) return;
    std::vector<Event> batch = std::move(events_);
    events_.clear();
    if (shuffle_rng_) std::shuffle(batch.begin(), batch.end(), *shuffle_rng_);
    for (auto& e : batch) {
      std::visit([this](auto& ev) { HandleLocked(ev); }, e);
    }
    DispatchLocked();
    status_cv_.notify_all();
    if (progress_ && !pending_progress_.empty()) {
      auto snaps = std::move(pending_progress_);
      pending_progress_.clear();
      auto listener = progress_;
      l.unlock();
      for (const auto& s : snaps) listener(s);
      l.lock();
    } else {
      pending_progress_.clear();
    }
  }
}

void Engine::OnNodeDeath(NodeId node) {
  std::lock_guard<std::mutex> l(mu_);
  for (auto& [id, job] : jobs_) {
    for (auto* tasks : {&job->maps, &job->reduces}) {
      for (auto& t : *tasks) {
        for (auto& a : t.running) {
          if (a->node == node && a->reason == CancelReason::kNone) {
            a->reason = CancelReason::kNodeDeath;
            a->cancel = true;
          }
        }
      }
    }
  }
  PostLocked(NodeDied{node});
}

void Engine::HandleLocked(const NodeDied& e) {
  for (auto& [id, job] : jobs_) {
    if (IsTerminal(job->phase) || job->ending || job->spec.map_only()) continue;
    if (job->reduce_done == static_cast<int>(job->reduces.size())) continue;
    for (int m = 0; m < static_cast<int>(job->maps.size()); ++m) {
      const Task& t = job->maps[static_cast<size_t>(m)];
      if (t.state == TaskState::kDone && t.committed.map_output.node == e.node) {
        ResetMapLocked(*job, m, "output lost with " + cluster::ToString(e.node));
      }
    }
  }
}

void Engine::ResetMapLocked(Job& job, int map_index, const std::string& why) {
  Task& t = job.maps[static_cast<size_t>(map_index)];
  if (t.state != TaskState::kDone) return;
  t.state = TaskState::kPending;
  t.committed = AttemptResult{};
  --job.map_done;
  job.diagnostics.push_back("map " + std::to_string(map_index) + " re-queued: " + why);
  if (job.phase == Phase::kReducing) job.phase = Phase::kMapping;
  // Running reducers may already be reading the lost spill.
  for (auto& r : job.reduces) {
    for (auto& a : r.running) {
      if (a->reason == CancelReason::kNone) {
        a->reason = CancelReason::kInputLost;
        a->cancel = true;
      }
    }
  }
}

void Engine::HandleLocked(AttemptFinished& e) {
  std::shared_ptr<Attempt> a = std::move(e.attempt);
  if (a->thread.joinable()) a->thread.join();
  Job* job = FindLocked(a->job);
  if (job == nullptr) return;
  auto& tasks = a->kind == TaskKind::kMap ? job->maps : job->reduces;
  Task& task = tasks[static_cast<size_t>(a->index)];
  std::erase(task.running, a);
  if (--busy_[a->node] <= 0) busy_.erase(a->node);
  --job->running;
  const std::string label = TaskLabel(a->kind, a->index) + " attempt " +
                            std::to_string(a->attempt_no) + " on " +
                            cluster::ToString(a->node);

  if (job->ending) {
    if (job->running == 0) FinalizeFailedLocked(*job);
    return;
  }
  if (IsTerminal(job->phase)) return;

  if (a->result.ok()) {
    const bool loses_spills = a->kind == TaskKind::kMap && !job->spec.map_only() &&
                              !cluster_.IsAlive(a->node);
    if (task.state == TaskState::kDone) return;
    if (loses_spills) {
      task.state = TaskState::kPending;
      job->diagnostics.push_back(label + " finished on a dead node; re-queued");
      return;
    }
    task.state = TaskState::kDone;
    task.committed = std::move(a->result).value();
    if (a->kind == TaskKind::kMap) {
      ++job->map_done;
      if (job->map_done == static_cast<int>(job->maps.size())) {
        if (job->spec.map_only()) {
          SucceedLocked(*job);
        } else {
          job->phase = Phase::kReducing;
        }
      }
    } else {
      ++job->reduce_done;
      if (job->reduce_done == static_cast<int>(job->reduces.size())) SucceedLocked(*job);
    }
    pending_progress_.push_back(SnapshotLocked(*job));
    return;
  }

  const Status& st = a->result.status();
  if (task.state == TaskState::kDone) return;
  if (a->reason == CancelReason::kInputLost || a->reason == CancelReason::kJobEnd) {
    task.state = TaskState::kPending;
    return;
  }
  if (st.code() == ErrorCode::kFetchFailed && a->failed_map >= 0) {
    task.state = TaskState::kPending;
    ResetMapLocked(*job, a->failed_map, label + ": " + st.message());
    return;
  }
  ++task.failures;
  ++job->failed_attempts;
  task.last_failed = a->node;
  job->diagnostics.push_back(label + " FAILED: " + st.ToString());
  if (task.failures >= options_.max_attempts) {
    BeginEndLocked(*job, TaskLabel(a->kind, a->index) + " failed " +
                             std::to_string(task.failures) + " times");
    return;
  }
  task.state = TaskState::kPending;
}

void Engine::DispatchLocked() {
  const auto live = cluster_.LiveNodes();
  std::vector<Job*> active;
  for (size_t i = 0; i < order_.size(); ++i) {
    Job* job = jobs_.at(order_[(rr_cursor_ + i) % order_.size()]).get();
    if (IsTerminal(job->phase) || job->ending) continue;
    if (job->phase == Phase::kPending) job->phase = Phase::kMapping;
    if (job->phase == Phase::kMapping && job->maps.empty()) {
      if (job->spec.map_only()) {
        SucceedLocked(*job);
        continue;
      }
      job->phase = Phase::kReducing;
    }
    if (job->phase == Phase::kReducing && job->reduces.empty()) {
      SucceedLocked(*job);
      continue;
    }
    active.push_back(job);
  }
  if (!order_.empty()) rr_cursor_ = (rr_cursor_ + 1) % order_.size();
  if (active.empty()) return;

  if (live.empty()) {
    for (Job* job : active) BeginEndLocked(*job, "NO_LIVE_NODES: every node is dead");
    return;
  }
  std::map<NodeId, int> free;
  for (NodeId n : live) {
    auto info = cluster_.GetNode(n);
    if (!info.ok()) continue;
    const int used = busy_.count(n) ? busy_.at(n) : 0;
    if (info->capacity > used) free[n] = info->capacity - used;
  }
  bool progress = true;
  while (progress && !free.empty()) {
    progress = false;
    for (Job* job : active) {
      if (job->ending || IsTerminal(job->phase)) continue;
      if (LaunchOneLocked(*job, live, free)) progress = true;
      if (free.empty()) break;
    }
  }
}

bool Engine::LaunchOneLocked(Job& job, const std::vector<NodeId>& live,
                             std::map<NodeId, int>& free) {
  const TaskKind kind = job.phase == Phase::kMapping ? TaskKind::kMap : TaskKind::kReduce;
  auto& tasks = kind == TaskKind::kMap ? job.maps : job.reduces;
  std::vector<int> pending;
  for (int i = 0; i < static_cast<int>(tasks.size()); ++i) {
    if (tasks[static_cast<size_t>(i)].state == TaskState::kPending) pending.push_back(i);
  }
  if (shuffle_rng_) std::shuffle(pending.begin(), pending.end(), *shuffle_rng_);
  for (int index : pending) {
    auto node = ChooseNodeLocked(job, kind, index, tasks[static_cast<size_t>(index)], live, free);
    if (!node) continue;
    if (--free[*node] == 0) free.erase(*node);
    LaunchLocked(job, kind, index, *node);
    return true;
  }
  return false;
}

std::optional<NodeId> Engine::ChooseNodeLocked(const Job& job, TaskKind kind, int index,
                                               const Task& task,
                                               const std::vector<NodeId>& live,
                                               const std::map<NodeId, int>& free) {
  std::vector<NodeId> candidates;
  for (const auto& [n, slots] : free) {
    // A retry avoids the node that just failed it unless no other node lives.
    if (task.last_failed && *task.last_failed == n && live.size() > 1) continue;
    candidates.push_back(n);
  }
  if (candidates.empty()) return std::nullopt;

  if (kind == TaskKind::kMap) {
    const InputSplit& split = job.splits[static_cast<size_t>(index)];
    auto meta = dfs_.Stat(split.path);
    if (meta.ok()) {
      uint64_t start = 0;
      for (const auto& block : meta->blocks) {
        if (split.offset < start + block.length) {
          std::vector<NodeId> local;
          for (NodeId n : candidates) {
            if (std::binary_search(block.locations.begin(), block.locations.end(), n)) {
              local.push_back(n);
            }
          }
          if (!local.empty()) candidates = std::move(local);
          break;
        }
        start += block.length;
      }
    }
  }
  if (shuffle_rng_) {
    std::uniform_int_distribution<size_t> pick(0, candidates.size() - 1);
    return candidates[pick(*shuffle_rng_)];
  }
  // Most free slots first, lowest id on ties.
  return *std::max_element(candidates.begin(), candidates.end(), [&](NodeId a, NodeId b) {
    const int fa = free.at(a), fb = free.at(b);
    return fa != fb ? fa < fb : a > b;
  });
}

void Engine::LaunchLocked(Job& job, TaskKind kind, int index, NodeId node) {
  auto& tasks = kind == TaskKind::kMap ? job.maps : job.reduces;
  Task& task = tasks[static_cast<size_t>(index)];
  auto a = std::make_shared<Attempt>();
  a->job = job.id;
  a->kind = kind;
  a->index = index;
  a->attempt_no = task.next_attempt++;
  a->node = node;
  task.state = TaskState::kRunning;
  task.running.push_back(a);
  ++busy_[node];
  ++job.running;
  (kind == TaskKind::kMap ? job.map_attempts : job.reduce_attempts)++;

  std::chrono::microseconds jitter{0};
  if (shuffle_rng_) {
    jitter = std::chrono::microseconds(
        std::uniform_int_distribution<int>(0, 3000)(*shuffle_rng_));
  }
  AttemptRequest req;
  req.job = job.id;
  req.spec = &job.spec;
  req.index = index;
  req.attempt_no = a->attempt_no;
  req.node = node;
  req.cancel = &a->cancel;

  std::vector<MapOutput> maps;
  std::optional<InputSplit> split;
  if (kind == TaskKind::kReduce) {
    for (const auto& m : job.maps) maps.push_back(m.committed.map_output);
  } else {
    split = job.splits[static_cast<size_t>(index)];
  }
  Attempt* raw = a.get();
  a->thread = std::thread([this, raw, req, maps = std::move(maps),
                           split = std::move(split), jitter] {
    if (jitter.count() > 0) std::this_thread::sleep_for(jitter);
    if (raw->kind == TaskKind::kMap) {
      raw->result = RunMapAttempt(env_, req, *split);
    } else {
      raw->result = RunReduceAttempt(env_, req, maps, &raw->failed_map);
    }
    std::lock_guard<std::mutex> l(mu_);
    // Re-find the owning pointer so the event keeps the attempt alive.
    Job* job = FindLocked(raw->job);
    auto& tasks = raw->kind == TaskKind::kMap ? job->maps : job->reduces;
    for (auto& p : tasks[static_cast<size_t>(raw->index)].running) {
      if (p.get() == raw) {
        PostLocked(AttemptFinished{p});
        break;
      }
    }
  });
}

void Engine::BeginEndLocked(Job& job, const std::string& reason) {
  if (job.ending || IsTerminal(job.phase)) return;
  job.ending = true;
  job.diagnostics.push_back(reason);
  for (auto* tasks : {&job.maps, &job.reduces}) {
    for (auto& t : *tasks) {
      for (auto& a : t.running) {
        a->reason = CancelReason::kJobEnd;
        a->cancel = true;
      }
    }
  }
  if (job.running == 0) FinalizeFailedLocked(job);
}

void Engine::FinalizeFailedLocked(Job& job) {
  for (const auto& f : dfs_.Ls(job.spec.output + "/")) (void)dfs_.Delete(f.path);
  CleanupLocalLocked(job);
  job.ending = false;
  job.phase = Phase::kFailed;
  status_cv_.notify_all();
}

void Engine::SucceedLocked(Job& job) {
  for (const auto& f : dfs_.Ls(job.spec.output + "/_tmp/")) (void)dfs_.Delete(f.path);
  CleanupLocalLocked(job);
  job.phase = Phase::kSucceeded;
  status_cv_.notify_all();
}

void Engine::CleanupLocalLocked(const Job& job) {
  stager_.Cleanup(job.id);
  std::error_code ec;
  for (const auto& info : cluster_.ListNodes()) {
    fs::remove_all(JobLocalDir(options_.local_root, job.id, info.id), ec);
  }
}

}  // namespace mrs::engine
