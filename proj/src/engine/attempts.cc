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

#include "mrs/engine/attempts.h"

#include <algorithm>
#include <cstdio>
#include <memory>
#include <system_error>

#include "mrs/common/file_util.h"
#include "mrs/engine/merge.h"
#include "mrs/engine/partition.h"

namespace mrs::engine {

namespace fs = std::filesystem;

namespace {

std::vector<streaming::CacheEntry> CacheEntries(const JobSpec& spec) {
  std::vector<streaming::CacheEntry> entries;
  for (const auto& f : spec.files) entries.push_back(streaming::CacheEntry::FromDfs(f));
  return entries;
}

streaming::WorkerSpec MakeWorkerSpec(const AttemptEnv& env, const AttemptRequest& req,
                                     TaskKind kind, const std::string& cmd,
                                     const fs::path& workdir) {
  streaming::WorkerSpec ws;
  ws.argv = streaming::SplitCommandLine(cmd);
  ws.workdir = workdir;
  ws.env = {{"MRS_TASK_KIND", std::string(TaskKindName(kind))},
            {"MRS_TASK_INDEX", std::to_string(req.index)},
            {"MRS_ATTEMPT", std::to_string(req.attempt_no)}};
  ws.timeout = env.worker_timeout;
  ws.cancel = req.cancel;
  return ws;
}

Status WorkerExitStatus(const streaming::ProcessOutcome& outcome) {
  std::string msg = "worker exited with status " + std::to_string(outcome.exit_code);
  if (!outcome.stderr_tail.empty()) msg += "; stderr: " + outcome.stderr_tail;
  return Status(ErrorCode::kWorkerFailed, std::move(msg));
}

bool Cancelled(const AttemptRequest& req) {
  return req.cancel != nullptr && req.cancel->load();
}

// Puts `content` at the attempt's temp path and renames it onto the part
// file. Losing the rename race is not an error.
Result<bool> CommitOutput(const AttemptEnv& env, const AttemptRequest& req,
                          TaskKind kind, const std::string& content) {
  const std::string& output = req.spec->output;
  const std::string tmp = TempOutputPath(output, kind, req.index, req.attempt_no);
  MRS_RETURN_IF_ERROR(env.dfs->Put(tmp, content).status());
  if (Cancelled(req)) {
    (void)env.dfs->Delete(tmp);
    return Status(ErrorCode::kCancelled, "cancelled before commit");
  }
  Status st = env.dfs->Rename(tmp, output + "/" + PartFileName(req.index));
  if (st.code() == ErrorCode::kAlreadyExists) {
    (void)env.dfs->Delete(tmp);
    return false;
  }
  if (!st.ok()) {
    (void)env.dfs->Delete(tmp);
    return st;
  }
  return true;
}

int64_t CountLines(const std::string& data) {
  int64_t n = std::count(data.begin(), data.end(), '\n');
  if (!data.empty() && data.back() != '\n') ++n;
  return n;
}

}  // namespace

fs::path JobLocalDir(const fs::path& local_root, const JobId& job,
                     cluster::NodeId node) {
  return local_root / ("node-" + std::to_string(node.value)) / job;
}

std::string SpillFileName(int map_index, int partition) {
  return "m" + std::to_string(map_index) + "-p" + std::to_string(partition);
}

std::string TempOutputPath(const std::string& output, TaskKind kind, int index,
                           int attempt_no) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "/_tmp/%c%05d.%d", kind == TaskKind::kMap ? 'm' : 'r',
                index, attempt_no);
  return output + buf;
}

Result<AttemptResult> RunMapAttempt(const AttemptEnv& env, const AttemptRequest& req,
                                    const InputSplit& split) {
  const JobSpec& spec = *req.spec;
  MRS_ASSIGN_OR_RETURN(std::vector<std::string> lines, ReadSplitLines(*env.dfs, split));
  MRS_ASSIGN_OR_RETURN(fs::path workdir,
                       env.stager->ShipFiles(CacheEntries(spec), req.job, req.node));

  AttemptResult result;
  result.records_in = static_cast<int64_t>(lines.size());
  const int partitions = spec.map_only() ? 1 : spec.num_reducers;
  std::vector<std::vector<Record>> parts(static_cast<size_t>(partitions));
  auto sink = [&](Record&& r) {
    const int p = partitions == 1 ? 0 : Partition(r.key, partitions);
    parts[static_cast<size_t>(p)].push_back(std::move(r));
    ++result.records_out;
    return Status::OK();
  };
  auto ws = MakeWorkerSpec(env, req, TaskKind::kMap, spec.mapper_cmd, workdir);
  MRS_ASSIGN_OR_RETURN(streaming::ProcessOutcome outcome,
                       streaming::RunRecordWorker(ws, streaming::VectorSource(lines), sink));
  if (outcome.exit_code != 0) return WorkerExitStatus(outcome);
  for (auto& part : parts) StableSortByKey(part);

  if (spec.map_only()) {
    std::string content;
    for (const auto& r : parts[0]) streaming::AppendEncoded(r, &content);
    MRS_ASSIGN_OR_RETURN(result.committed, CommitOutput(env, req, TaskKind::kMap, content));
    return result;
  }

  const fs::path dir = JobLocalDir(env.local_root, req.job, req.node) / "spill" /
                       ("m" + std::to_string(req.index) + ".a" +
                        std::to_string(req.attempt_no));
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) return IOError("mkdir " + dir.string() + ": " + ec.message());
  for (int p = 0; p < partitions; ++p) {
    std::string content;
    for (const auto& r : parts[static_cast<size_t>(p)]) streaming::AppendEncoded(r, &content);
    MRS_RETURN_IF_ERROR(WriteFileAtomic(dir / SpillFileName(req.index, p), content));
  }
  if (Cancelled(req)) return Status(ErrorCode::kCancelled, "cancelled after spill");
  result.map_output = MapOutput{req.node, dir};
  return result;
}

Result<AttemptResult> RunReduceAttempt(const AttemptEnv& env, const AttemptRequest& req,
                                       const std::vector<MapOutput>& maps,
                                       int* failed_map) {
  const JobSpec& spec = *req.spec;
  *failed_map = -1;
  std::vector<std::unique_ptr<RecordStream>> streams;
  for (size_t m = 0; m < maps.size(); ++m) {
    const fs::path spill = maps[m].dir / SpillFileName(static_cast<int>(m), req.index);
    if (!env.cluster->IsAlive(maps[m].node)) {
      *failed_map = static_cast<int>(m);
      return Status(ErrorCode::kFetchFailed, "map output " + spill.string() +
                                                 " is on dead " + cluster::ToString(maps[m].node));
    }
    auto reader = SpillFileReader::Open(spill);
    if (!reader.ok()) {
      *failed_map = static_cast<int>(m);
      return reader.status();
    }
    streams.push_back(std::move(reader).value());
  }
  MRS_ASSIGN_OR_RETURN(fs::path workdir,
                       env.stager->ShipFiles(CacheEntries(spec), req.job, req.node));

  AttemptResult result;
  MergingRecordStream merged(std::move(streams));
  Status merge_status;
  Record rec;
  streaming::LineSource source = [&](std::string* line) {
    auto has = merged.Next(&rec);
    if (!has.ok()) {
      merge_status = has.status();
      return false;
    }
    if (!*has) return false;
    line->clear();
    line->append(rec.key);
    line->push_back(streaming::kFieldSeparator);
    line->append(rec.value);
    ++result.records_in;
    return true;
  };
  std::string out;
  auto ws = MakeWorkerSpec(env, req, TaskKind::kReduce, *spec.reducer_cmd, workdir);
  MRS_ASSIGN_OR_RETURN(streaming::ProcessOutcome outcome,
                       streaming::RunProcess(ws, source, [&](std::string_view chunk) {
                         out.append(chunk);
                         return Status::OK();
                       }));
  if (!merge_status.ok()) return merge_status;
  if (outcome.exit_code != 0) return WorkerExitStatus(outcome);
  result.records_out = CountLines(out);
  MRS_ASSIGN_OR_RETURN(result.committed, CommitOutput(env, req, TaskKind::kReduce, out));
  return result;
}

}  // namespace mrs::engine
