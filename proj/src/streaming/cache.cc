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

#include "mrs/streaming/cache.h"

#include <system_error>

#include "mrs/common/file_util.h"
#include "mrs/dfs/dfs.h"

namespace mrs::streaming {

namespace fs = std::filesystem;

CacheEntry CacheEntry::FromDfs(std::string path) {
  CacheEntry e;
  e.staged_name = fs::path(path).filename().string();
  e.source_path = std::move(path);
  e.origin = Origin::kDfs;
  return e;
}

CacheEntry CacheEntry::FromLocal(std::string path) {
  CacheEntry e = FromDfs(std::move(path));
  e.origin = Origin::kLocal;
  return e;
}

Status CheckStagedNames(const std::vector<CacheEntry>& entries) {
  std::set<std::string> seen;
  for (const auto& e : entries) {
    if (e.staged_name.empty() || e.staged_name == "." || e.staged_name == "..") {
      return Status(ErrorCode::kSourceMissing, "no file name in '" + e.source_path + "'");
    }
    if (!seen.insert(e.staged_name).second) {
      return Status(ErrorCode::kDuplicateName,
                    "two cache entries stage as '" + e.staged_name + "'");
    }
  }
  return Status::OK();
}

Stager::Stager(fs::path root, const dfs::Dfs* dfs)
    : root_(std::move(root)), dfs_(dfs) {}

fs::path Stager::NodeRoot(cluster::NodeId node) const {
  return root_ / ("node-" + std::to_string(node.value));
}

fs::path Stager::WorkDir(const std::string& job, cluster::NodeId node) const {
  return NodeRoot(node) / job / "work";
}

Result<fs::path> Stager::ShipFiles(const std::vector<CacheEntry>& entries,
                                   const std::string& job, cluster::NodeId node) {
  MRS_RETURN_IF_ERROR(CheckStagedNames(entries));
  const fs::path dir = WorkDir(job, node);
  std::lock_guard<std::mutex> l(mu_);
  if (shipped_.count({job, node.value}) != 0) return dir;

  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) return IOError("mkdir " + dir.string() + ": " + ec.message());
  for (const auto& e : entries) {
    Result<std::string> data = Status(ErrorCode::kSourceMissing, e.source_path);
    if (e.origin == CacheEntry::Origin::kDfs) {
      if (dfs_ != nullptr) data = dfs_->Get(e.source_path);
    } else {
      data = ReadFile(e.source_path);
    }
    if (!data.ok()) {
      return Status(ErrorCode::kSourceMissing,
                    "cannot read '" + e.source_path + "': " + data.status().ToString());
    }
    MRS_RETURN_IF_ERROR(WriteFileAtomic(dir / e.staged_name, *data, 0755));
  }
  shipped_.insert({job, node.value});
  return dir;
}

void Stager::Cleanup(const std::string& job) {
  std::lock_guard<std::mutex> l(mu_);
  for (auto it = shipped_.begin(); it != shipped_.end();) {
    if (it->first == job) {
      std::error_code ec;
      fs::remove_all(NodeRoot(cluster::NodeId{it->second}) / job / "work", ec);
      it = shipped_.erase(it);
    } else {
      ++it;
    }
  }
}

}  // namespace mrs::streaming
