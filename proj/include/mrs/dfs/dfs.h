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

#ifndef MRS_DFS_DFS_H_
#define MRS_DFS_DFS_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "mrs/cluster/cluster.h"
#include "mrs/common/status.h"
#include "mrs/dfs/block_store.h"

namespace mrs::dfs {

struct BlockMeta {
  BlockId id;
  uint64_t length = 0;
  // Distinct holders, ascending.
  std::vector<cluster::NodeId> locations;
};

struct FileMeta {
  std::string path;
  std::vector<BlockMeta> blocks;
  uint64_t length = 0;
};

struct DfsOptions {
  std::filesystem::path root;
  uint64_t block_size = 1 << 20;
  int replication = 2;
  // Seeds replica placement.
  uint64_t seed = 0x5eed;
};

struct RepairReport {
  size_t repaired = 0;
  // Blocks left with no live replica. They stay in the namespace but are
  // unreadable.
  std::vector<BlockId> irreparable;
};

// Paths must be absolute, slash separated, without empty components, a
// trailing slash, or newline/tab bytes.
Status ValidatePath(std::string_view path);

// Append-only replicated file system. The namespace is a flat map of full
// paths; "directories" exist only as path prefixes. All metadata mutations
// are serialized by one mutex; block payload I/O for put and get runs
// outside it.
class Dfs {
 public:
  // Registers a death listener on `cluster` that runs ReplicateRepair.
  Dfs(cluster::Cluster& cluster, DfsOptions options);

  Dfs(const Dfs&) = delete;
  Dfs& operator=(const Dfs&) = delete;

  Result<FileMeta> Put(std::string_view path, std::string_view content);
  Result<std::string> Get(std::string_view path) const;
  // Bytes [offset, offset + length) clamped to the file length.
  Result<std::string> ReadRange(std::string_view path, uint64_t offset,
                                uint64_t length) const;
  Result<FileMeta> Append(std::string_view path, std::string_view suffix);
  Status Rename(std::string_view src, std::string_view dst);
  Status Delete(std::string_view path);
  std::vector<FileMeta> Ls(std::string_view prefix) const;
  Result<FileMeta> Stat(std::string_view path) const;
  bool Exists(std::string_view path) const;

  // Restores every block that lost a replica to min(replication, live)
  // distinct live holders.
  RepairReport ReplicateRepair(cluster::NodeId failed);

  // Receives the report of every repair triggered by a node death.
  using RepairObserver = std::function<void(cluster::NodeId, const RepairReport&)>;
  void SetRepairObserver(RepairObserver observer);

  const DfsOptions& options() const { return options_; }
  const BlockStore& store() const { return store_; }

 private:
  using Files = std::map<std::string, FileMeta, std::less<>>;

  // True if `path` equals an existing file or one of them is a
  // directory-prefix of the other. `ignore` is skipped (rename source).
  bool ConflictsLocked(std::string_view path, std::string_view ignore) const;
  std::vector<cluster::NodeId> PickNodesLocked(
      const std::vector<cluster::NodeId>& candidates, size_t count);
  BlockId NextBlockIdLocked() { return BlockId{next_block_++}; }

  // Writes `data` as a fresh block on `replication` live nodes.
  Result<BlockMeta> WriteNewBlock(std::string_view data);
  Result<std::string> ReadBlock(const BlockMeta& block, uint64_t offset,
                                uint64_t length) const;
  // Drops dead holders and tops the block back up. Returns true if the
  // location set changed; sets *lost when no live replica remains.
  bool RepairBlockLocked(BlockMeta& block,
                         const std::vector<cluster::NodeId>& live, bool* lost);
  void DropReplicas(const std::vector<BlockMeta>& blocks);

  cluster::Cluster& cluster_;
  const DfsOptions options_;
  BlockStore store_;

  mutable std::mutex mu_;
  Files files_;
  uint64_t next_block_ = 1;
  std::mt19937_64 rng_;

  std::mutex observer_mu_;
  RepairObserver observer_;
};

}  // namespace mrs::dfs

#endif  // MRS_DFS_DFS_H_
