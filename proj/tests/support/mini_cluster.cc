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

#include "mini_cluster.h"

#include <stdexcept>

#include "mrs/common/file_util.h"
#include "mrs/engine/job.h"

#ifndef MRS_FIXTURES_DIR
#error "MRS_FIXTURES_DIR must be defined"
#endif

namespace mrs::testing {

namespace fs = std::filesystem;

MiniCluster::MiniCluster(const fs::path& root, MiniClusterOptions o) {
  cluster_ = std::make_unique<cluster::Cluster>(clock_, std::chrono::seconds(5));
  for (int i = 0; i < o.nodes; ++i) nodes_.push_back(*cluster_->RegisterNode(o.capacity));
  dfs_ = std::make_unique<dfs::Dfs>(
      *cluster_, dfs::DfsOptions{root / "dfs", o.block_size, o.replication, o.placement_seed});
  engine::EngineOptions eo;
  eo.local_root = root / "local";
  eo.split_size = o.split_size;
  eo.max_attempts = o.max_attempts;
  eo.shuffle_seed = o.shuffle_seed;
  engine_ = std::make_unique<engine::Engine>(*dfs_, *cluster_, eo);
}

MiniCluster::~MiniCluster() = default;

std::string MiniCluster::Upload(const fs::path& local, const std::string& dfs_path) {
  auto data = ReadFile(local);
  if (!data.ok()) throw std::runtime_error(data.status().ToString());
  auto put = dfs_->Put(dfs_path, *data);
  if (!put.ok()) throw std::runtime_error(put.status().ToString());
  return dfs_path;
}

Result<engine::JobStatus> MiniCluster::Run(engine::JobSpec spec, Duration timeout) {
  MRS_ASSIGN_OR_RETURN(auto id, engine_->Submit(std::move(spec)));
  return engine_->Wait(id, timeout);
}

Result<std::string> MiniCluster::Output(const std::string& output, int expected_parts) const {
  const auto files = dfs_->Ls(output + "/");
  if (files.size() != static_cast<size_t>(expected_parts)) {
    return Status(ErrorCode::kInvalidArgument,
                  std::to_string(files.size()) + " files under " + output);
  }
  std::string all;
  for (int i = 0; i < expected_parts; ++i) {
    const std::string want = output + "/" + engine::PartFileName(i);
    if (files[static_cast<size_t>(i)].path != want) {
      return Status(ErrorCode::kInvalidArgument, "unexpected file " + files[i].path);
    }
    MRS_ASSIGN_OR_RETURN(auto part, dfs_->Get(want));
    all += part;
  }
  return all;
}

fs::path Fixture(const std::string& name) { return fs::path(MRS_FIXTURES_DIR) / name; }

}  // namespace mrs::testing
