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

#ifndef MRS_DFS_BLOCK_STORE_H_
#define MRS_DFS_BLOCK_STORE_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "mrs/cluster/cluster.h"
#include "mrs/common/status.h"

namespace mrs::dfs {

struct BlockId {
  uint64_t value = 0;
  auto operator<=>(const BlockId&) const = default;
};

// Block replicas on local disk: <root>/node-<id>/<block id in decimal>.
// Every simulated holder owns one directory. Writes go through a temp file
// and a rename so a reader never sees a torn block.
class BlockStore {
 public:
  explicit BlockStore(std::filesystem::path root);

  Status Write(cluster::NodeId node, BlockId block, std::string_view data);
  Result<std::string> Read(cluster::NodeId node, BlockId block,
                           uint64_t offset, uint64_t length) const;
  void Remove(cluster::NodeId node, BlockId block);
  bool Exists(cluster::NodeId node, BlockId block) const;

  std::filesystem::path NodeDir(cluster::NodeId node) const;
  std::filesystem::path BlockPath(cluster::NodeId node, BlockId block) const;
  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
};

}  // namespace mrs::dfs

#endif  // MRS_DFS_BLOCK_STORE_H_
