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

#include "mrs/dfs/dfs.h"

#include <algorithm>
#include <iterator>
#include <set>
#include <utility>

namespace mrs::dfs {

using cluster::NodeId;

Status ValidatePath(std::string_view path) {
  if (path.size() < 2 || path.front() != '/') {
    return InvalidArgument("path must be absolute: '" + std::string(path) + "'");
  }
  if (path.back() == '/') {
    return InvalidArgument("path must not end with '/': " + std::string(path));
  }
  if (path.find("//") != std::string_view::npos) {
    return InvalidArgument("empty path component: " + std::string(path));
  }
  if (path.find_first_of("\n\t\r") != std::string_view::npos ||
      path.find('\0') != std::string_view::npos) {
    return InvalidArgument("control byte in path");
  }
  return Status::OK();
}

Dfs::Dfs(cluster::Cluster& cluster, DfsOptions options)
    : cluster_(cluster),
      options_(std::move(options)),
      store_(options_.root),
      rng_(options_.seed) {
  cluster_.AddDeathListener([this](NodeId id) {
    const RepairReport report = ReplicateRepair(id);
    std::lock_guard<std::mutex> l(observer_mu_);
    if (observer_) observer_(id, report);
  });
}

void Dfs::SetRepairObserver(RepairObserver observer) {
  std::lock_guard<std::mutex> l(observer_mu_);
  observer_ = std::move(observer);
}

bool Dfs::ConflictsLocked(std::string_view path, std::string_view ignore) const {
  auto taken = [&](std::string_view p) {
    return p != ignore && files_.find(p) != files_.end();
  };
  if (taken(path)) return true;
  for (size_t i = 1; i < path.size(); ++i) {
    if (path[i] == '/' && taken(path.substr(0, i))) return true;
  }
  std::string dir(path);
  dir += '/';
  for (auto it = files_.lower_bound(dir);
       it != files_.end() && it->first.starts_with(dir); ++it) {
    if (it->first != ignore) return true;
  }
  return false;
}

std::vector<NodeId> Dfs::PickNodesLocked(const std::vector<NodeId>& candidates,
                                         size_t count) {
  std::vector<NodeId> picked;
  std::sample(candidates.begin(), candidates.end(), std::back_inserter(picked),
              count, rng_);
  return picked;
}

Result<BlockMeta> Dfs::WriteNewBlock(std::string_view data) {
  BlockMeta block;
  block.length = data.size();
  {
    std::lock_guard<std::mutex> l(mu_);
    const auto live = cluster_.LiveNodes();
    const auto need = static_cast<size_t>(options_.replication);
    if (live.size() < need) {
      return Status(ErrorCode::kInsufficientNodes,
                    std::to_string(live.size()) + " live nodes, replication " +
                        std::to_string(need));
    }
    block.id = NextBlockIdLocked();
    block.locations = PickNodesLocked(live, need);
  }
  for (size_t i = 0; i < block.locations.size(); ++i) {
    Status st = store_.Write(block.locations[i], block.id, data);
    if (!st.ok()) {
      for (size_t j = 0; j < i; ++j) store_.Remove(block.locations[j], block.id);
      return st;
    }
  }
  return block;
}

Result<std::string> Dfs::ReadBlock(const BlockMeta& block, uint64_t offset,
                                   uint64_t length) const {
  for (NodeId loc : block.locations) {
    if (!cluster_.IsAlive(loc)) continue;
    auto data = store_.Read(loc, block.id, offset, length);
    if (data.ok()) return data;
  }
  return Status(ErrorCode::kBlockUnavailable,
                "no live replica of block " + std::to_string(block.id.value));
}

void Dfs::DropReplicas(const std::vector<BlockMeta>& blocks) {
  for (const auto& b : blocks) {
    for (NodeId loc : b.locations) store_.Remove(loc, b.id);
  }
}

bool Dfs::RepairBlockLocked(BlockMeta& block, const std::vector<NodeId>& live,
                            bool* lost) {
  *lost = false;
  std::erase_if(block.locations, [&](NodeId n) {
    return !std::binary_search(live.begin(), live.end(), n);
  });
  if (block.locations.empty()) {
    *lost = true;
    return false;
  }
  const size_t target =
      std::min(static_cast<size_t>(options_.replication), live.size());
  if (block.locations.size() >= target) return false;

  auto data = ReadBlock(block, 0, block.length);
  if (!data.ok()) {
    *lost = true;
    return false;
  }
  std::vector<NodeId> candidates;
  std::set_difference(live.begin(), live.end(), block.locations.begin(),
                      block.locations.end(), std::back_inserter(candidates));
  bool added = false;
  for (NodeId n : PickNodesLocked(candidates, target - block.locations.size())) {
    if (store_.Write(n, block.id, *data).ok()) {
      block.locations.push_back(n);
      added = true;
    }
  }
  std::sort(block.locations.begin(), block.locations.end());
  return added;
}

Result<FileMeta> Dfs::Put(std::string_view path, std::string_view content) {
  MRS_RETURN_IF_ERROR(ValidatePath(path));
  {
    std::lock_guard<std::mutex> l(mu_);
    if (ConflictsLocked(path, {})) {
      return AlreadyExists(std::string(path));
    }
  }
  const auto live = cluster_.LiveNodes();
  if (live.size() < static_cast<size_t>(options_.replication)) {
    return Status(ErrorCode::kInsufficientNodes,
                  std::to_string(live.size()) + " live nodes, replication " +
                      std::to_string(options_.replication));
  }

  FileMeta meta;
  meta.path = std::string(path);
  meta.length = content.size();
  for (uint64_t off = 0; off < content.size(); off += options_.block_size) {
    auto block = WriteNewBlock(content.substr(off, options_.block_size));
    if (!block.ok()) {
      DropReplicas(meta.blocks);
      return block.status();
    }
    std::sort(block->locations.begin(), block->locations.end());
    meta.blocks.push_back(std::move(block).value());
  }

  std::lock_guard<std::mutex> l(mu_);
  if (ConflictsLocked(path, {})) {
    DropReplicas(meta.blocks);
    return AlreadyExists(std::string(path));
  }
  // A holder may have died while the payload was in flight.
  const auto now_live = cluster_.LiveNodes();
  for (auto& block : meta.blocks) {
    bool lost = false;
    RepairBlockLocked(block, now_live, &lost);
    if (lost) {
      DropReplicas(meta.blocks);
      return Status(ErrorCode::kBlockUnavailable,
                    "all replicas lost while writing " + meta.path);
    }
  }
  files_.emplace(meta.path, meta);
  return meta;
}

Result<FileMeta> Dfs::Stat(std::string_view path) const {
  std::lock_guard<std::mutex> l(mu_);
  auto it = files_.find(path);
  if (it == files_.end()) return NotFound(std::string(path));
  return it->second;
}

bool Dfs::Exists(std::string_view path) const {
  std::lock_guard<std::mutex> l(mu_);
  return files_.find(path) != files_.end();
}

Result<std::string> Dfs::Get(std::string_view path) const {
  return ReadRange(path, 0, UINT64_MAX);
}

Result<std::string> Dfs::ReadRange(std::string_view path, uint64_t offset,
                                   uint64_t length) const {
  MRS_ASSIGN_OR_RETURN(FileMeta meta, Stat(path));
  if (offset >= meta.length) return std::string();
  const uint64_t end = offset + std::min(length, meta.length - offset);
  std::string out;
  out.reserve(end - offset);
  uint64_t block_start = 0;
  for (const auto& block : meta.blocks) {
    const uint64_t block_end = block_start + block.length;
    if (block_end > offset && block_start < end) {
      const uint64_t from = std::max(offset, block_start) - block_start;
      const uint64_t to = std::min(end, block_end) - block_start;
      MRS_ASSIGN_OR_RETURN(std::string piece, ReadBlock(block, from, to - from));
      out += piece;
    }
    if (block_end >= end) break;
    block_start = block_end;
  }
  return out;
}

Result<FileMeta> Dfs::Append(std::string_view path, std::string_view suffix) {
  std::lock_guard<std::mutex> l(mu_);
  auto it = files_.find(path);
  if (it == files_.end()) return NotFound(std::string(path));
  if (suffix.empty()) return it->second;

  const auto live = cluster_.LiveNodes();
  const auto need = static_cast<size_t>(options_.replication);
  FileMeta updated = it->second;
  std::string_view rest = suffix;

  // Only the unsealed final block is ever rewritten.
  if (!updated.blocks.empty() &&
      updated.blocks.back().length < options_.block_size) {
    BlockMeta& last = updated.blocks.back();
    const uint64_t fill =
        std::min<uint64_t>(options_.block_size - last.length, rest.size());
    MRS_ASSIGN_OR_RETURN(std::string data, ReadBlock(last, 0, last.length));
    data.append(rest.substr(0, fill));
    for (NodeId loc : last.locations) {
      if (!cluster_.IsAlive(loc)) continue;
      MRS_RETURN_IF_ERROR(store_.Write(loc, last.id, data));
    }
    last.length += fill;
    rest.remove_prefix(fill);
  }

  std::vector<BlockMeta> fresh;
  while (!rest.empty()) {
    if (live.size() < need) {
      DropReplicas(fresh);
      return Status(ErrorCode::kInsufficientNodes,
                    std::to_string(live.size()) + " live nodes, replication " +
                        std::to_string(need));
    }
    BlockMeta block;
    block.id = NextBlockIdLocked();
    block.locations = PickNodesLocked(live, need);
    std::sort(block.locations.begin(), block.locations.end());
    const auto chunk = rest.substr(0, options_.block_size);
    block.length = chunk.size();
    for (NodeId loc : block.locations) {
      Status st = store_.Write(loc, block.id, chunk);
      if (!st.ok()) {
        DropReplicas(fresh);
        return st;
      }
    }
    fresh.push_back(std::move(block));
    rest.remove_prefix(chunk.size());
  }
  for (auto& b : fresh) updated.blocks.push_back(std::move(b));
  updated.length += suffix.size();
  it->second = updated;
  return updated;
}

Status Dfs::Rename(std::string_view src, std::string_view dst) {
  MRS_RETURN_IF_ERROR(ValidatePath(dst));
  std::lock_guard<std::mutex> l(mu_);
  auto it = files_.find(src);
  if (it == files_.end()) return NotFound(std::string(src));
  if (ConflictsLocked(dst, src)) return AlreadyExists(std::string(dst));
  auto node = files_.extract(it);
  node.key() = std::string(dst);
  node.mapped().path = std::string(dst);
  files_.insert(std::move(node));
  return Status::OK();
}

Status Dfs::Delete(std::string_view path) {
  std::vector<BlockMeta> blocks;
  {
    std::lock_guard<std::mutex> l(mu_);
    auto it = files_.find(path);
    if (it == files_.end()) return NotFound(std::string(path));
    blocks = std::move(it->second.blocks);
    files_.erase(it);
  }
  DropReplicas(blocks);
  return Status::OK();
}

std::vector<FileMeta> Dfs::Ls(std::string_view prefix) const {
  std::lock_guard<std::mutex> l(mu_);
  std::vector<FileMeta> out;
  for (auto it = files_.lower_bound(prefix);
       it != files_.end() && it->first.starts_with(prefix); ++it) {
    out.push_back(it->second);
  }
  return out;
}

RepairReport Dfs::ReplicateRepair(NodeId failed) {
  RepairReport report;
  std::lock_guard<std::mutex> l(mu_);
  const auto live = cluster_.LiveNodes();
  for (auto& [path, meta] : files_) {
    for (auto& block : meta.blocks) {
      const bool touched =
          std::find(block.locations.begin(), block.locations.end(), failed) !=
              block.locations.end() ||
          std::any_of(block.locations.begin(), block.locations.end(),
                      [&](NodeId n) {
                        return !std::binary_search(live.begin(), live.end(), n);
                      });
      if (!touched) continue;
      bool lost = false;
      if (RepairBlockLocked(block, live, &lost)) ++report.repaired;
      if (lost) report.irreparable.push_back(block.id);
    }
  }
  return report;
}

}  // namespace mrs::dfs
