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

#ifndef MRS_STREAMING_CACHE_H_
#define MRS_STREAMING_CACHE_H_

#include <filesystem>
#include <mutex>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mrs/cluster/cluster.h"
#include "mrs/common/status.h"

namespace mrs::dfs {
class Dfs;
}

namespace mrs::streaming {

// One file shipped to every node that runs a task of the job.
struct CacheEntry {
  enum class Origin { kLocal, kDfs };

  std::string source_path;
  std::string staged_name;  // base name of source_path
  Origin origin = Origin::kDfs;

  static CacheEntry FromDfs(std::string path);
  static CacheEntry FromLocal(std::string path);
};

// Stages distributed-cache files into per-(job, node) work directories:
// <root>/node-<id>/<job>/work.
class Stager {
 public:
  // `dfs` may be null when only local entries are shipped.
  Stager(std::filesystem::path root, const dfs::Dfs* dfs);

  // Creates the work directory and copies every entry into it with the
  // executable bit set. Repeated calls for the same (job, node) reuse the
  // directory. Errors: kDuplicateName, kSourceMissing.
  Result<std::filesystem::path> ShipFiles(const std::vector<CacheEntry>& entries,
                                          const std::string& job,
                                          cluster::NodeId node);

  std::filesystem::path NodeRoot(cluster::NodeId node) const;
  std::filesystem::path WorkDir(const std::string& job, cluster::NodeId node) const;

  // Forgets and removes every work directory of `job`.
  void Cleanup(const std::string& job);

 private:
  std::filesystem::path root_;
  const dfs::Dfs* dfs_;

  std::mutex mu_;
  std::set<std::pair<std::string, uint32_t>> shipped_;
};

// Rejects two entries with the same staged name.
Status CheckStagedNames(const std::vector<CacheEntry>& entries);

}  // namespace mrs::streaming

#endif  // MRS_STREAMING_CACHE_H_
