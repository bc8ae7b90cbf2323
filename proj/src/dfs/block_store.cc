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

#include "mrs/dfs/block_store.h"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <system_error>
#include <utility>

#include "mrs/common/file_util.h"

namespace mrs::dfs {

namespace fs = std::filesystem;

BlockStore::BlockStore(fs::path root) : root_(std::move(root)) {}

fs::path BlockStore::NodeDir(cluster::NodeId node) const {
  return root_ / ("node-" + std::to_string(node.value));
}

fs::path BlockStore::BlockPath(cluster::NodeId node, BlockId block) const {
  return NodeDir(node) / std::to_string(block.value);
}

Status BlockStore::Write(cluster::NodeId node, BlockId block,
                         std::string_view data) {
  std::error_code ec;
  fs::create_directories(NodeDir(node), ec);
  if (ec) return IOError("mkdir " + NodeDir(node).string() + ": " + ec.message());
  return WriteFileAtomic(BlockPath(node, block), data);
}

Result<std::string> BlockStore::Read(cluster::NodeId node, BlockId block,
                                     uint64_t offset, uint64_t length) const {
  const fs::path p = BlockPath(node, block);
  int fd = ::open(p.c_str(), O_RDONLY | O_CLOEXEC);
  if (fd < 0) return IOError("open " + p.string());
  std::string buf(length, '\0');
  uint64_t got = 0;
  while (got < length) {
    ssize_t n = ::pread(fd, buf.data() + got, length - got,
                        static_cast<off_t>(offset + got));
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    got += static_cast<uint64_t>(n);
  }
  ::close(fd);
  if (got != length) return IOError("short read on " + p.string());
  return buf;
}

void BlockStore::Remove(cluster::NodeId node, BlockId block) {
  std::error_code ec;
  fs::remove(BlockPath(node, block), ec);
}

bool BlockStore::Exists(cluster::NodeId node, BlockId block) const {
  std::error_code ec;
  return fs::exists(BlockPath(node, block), ec);
}

}  // namespace mrs::dfs
