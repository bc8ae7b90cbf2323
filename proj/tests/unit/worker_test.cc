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

#include "mrs/streaming/worker.h"

#include <gtest/gtest.h>
#include <sys/stat.h>

#include <atomic>
#include <thread>

#include "mrs/common/file_util.h"
#include "mrs/streaming/cache.h"
#include "temp_dir.h"

namespace mrs::streaming {
namespace {

using namespace std::chrono_literals;

WorkerSpec Sh(const std::string& script, const std::filesystem::path& dir) {
  WorkerSpec spec;
  spec.argv = {"/bin/sh", "-c", script};
  spec.workdir = dir;
  return spec;
}

TEST(SplitCommandLine, Whitespace) {
  EXPECT_EQ(SplitCommandLine("  a  b\tc "), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_TRUE(SplitCommandLine("   ").empty());
}

TEST(Worker, CatEchoesRecords) {
  testing::TempDir tmp;
  WorkerSpec spec;
  spec.argv = {"cat"};
  spec.workdir = tmp.path();
  auto r = SpawnWorker(spec, VectorSource({"a\tb"}));
  ASSERT_TRUE(r.ok()) << r.status().ToString();
  EXPECT_EQ(r->exit_code, 0);
  EXPECT_EQ(r->records, (std::vector<Record>{{"a", "b"}}));
}

TEST(Worker, NonzeroExitDiscardsRecords) {
  testing::TempDir tmp;
  auto r = SpawnWorker(Sh("echo partial; echo oops >&2; exit 1", tmp.path()), VectorSource({}));
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->exit_code, 1);
  EXPECT_TRUE(r->records.empty());
  EXPECT_EQ(r->stderr_tail, "oops\n");
}

TEST(Worker, MissingExecutable) {
  testing::TempDir tmp;
  WorkerSpec spec;
  spec.argv = {"/definitely/not/here"};
  spec.workdir = tmp.path();
  EXPECT_EQ(SpawnWorker(spec, VectorSource({})).status().code(), ErrorCode::kSpawnFailed);
}

TEST(Worker, RunsInWorkdirWithEnv) {
  testing::TempDir tmp;
  auto spec = Sh("pwd; echo \"$MRS_TASK_KIND $MRS_TASK_INDEX $MRS_ATTEMPT\"", tmp.path());
  spec.env = {{"MRS_TASK_KIND", "map"}, {"MRS_TASK_INDEX", "3"}, {"MRS_ATTEMPT", "2"}};
  auto r = SpawnWorker(spec, VectorSource({}));
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r->records.size(), 2u);
  EXPECT_EQ(std::filesystem::canonical(r->records[0].key), std::filesystem::canonical(tmp.path()));
  EXPECT_EQ(r->records[1].key, "map 3 2");
}

TEST(Worker, StagedExecutableResolvedInWorkdir) {
  testing::TempDir tmp;
  ASSERT_TRUE(WriteFileAtomic(tmp / "tool.sh", "#!/bin/sh\necho staged\n", 0755).ok());
  WorkerSpec spec;
  spec.argv = {"tool.sh"};
  spec.workdir = tmp.path();
  auto r = SpawnWorker(spec, VectorSource({}));
  ASSERT_TRUE(r.ok()) << r.status().ToString();
  EXPECT_EQ(r->records, (std::vector<Record>{{"staged", ""}}));
}

TEST(Worker, NoDeadlockOnLargeInterleavedIo) {
  // cat writes as fast as it reads; 8 MiB through both pipes at once.
  testing::TempDir tmp;
  WorkerSpec spec;
  spec.argv = {"cat"};
  spec.workdir = tmp.path();
  const std::string line(1023, 'x');
  int fed = 0;
  LineSource src = [&](std::string* out) {
    if (fed == 8192) return false;
    ++fed;
    *out = line;
    return true;
  };
  size_t bytes = 0;
  auto r = RunProcess(spec, src, [&](std::string_view chunk) {
    bytes += chunk.size();
    return Status::OK();
  });
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(bytes, 8192u * 1024u);
}

TEST(Worker, StderrTailCapped) {
  testing::TempDir tmp;
  auto r = SpawnWorker(Sh("head -c 10000 /dev/zero | tr '\\0' e >&2; printf END >&2", tmp.path()),
                       VectorSource({}));
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->stderr_tail.size(), kStderrTailBytes);
  EXPECT_EQ(r->stderr_tail.substr(kStderrTailBytes - 3), "END");
}

TEST(Worker, Timeout) {
  testing::TempDir tmp;
  auto spec = Sh("sleep 30", tmp.path());
  spec.timeout = 200ms;
  const auto start = std::chrono::steady_clock::now();
  EXPECT_EQ(SpawnWorker(spec, VectorSource({})).status().code(), ErrorCode::kTimeout);
  EXPECT_LT(std::chrono::steady_clock::now() - start, 5s);
}

TEST(Worker, Cancel) {
  testing::TempDir tmp;
  std::atomic<bool> cancel{false};
  auto spec = Sh("sleep 30", tmp.path());
  spec.cancel = &cancel;
  std::thread t([&] {
    std::this_thread::sleep_for(100ms);
    cancel = true;
  });
  EXPECT_EQ(SpawnWorker(spec, VectorSource({})).status().code(), ErrorCode::kCancelled);
  t.join();
}

TEST(Worker, EarlyExitWithUnreadInputFails) {
  testing::TempDir tmp;
  std::vector<std::string> lines(100000, std::string(100, 'y'));
  auto r = SpawnWorker(Sh("exit 0", tmp.path()), VectorSource(lines));
  EXPECT_FALSE(r.ok() && r->exit_code == 0);
}

TEST(Stager, ShipsExecutableFiles) {
  testing::TempDir tmp;
  ASSERT_TRUE(WriteFileAtomic(tmp / "map.R", "#!/bin/sh\ncat\n", 0644).ok());
  Stager stager(tmp / "local", nullptr);
  auto dir = stager.ShipFiles({CacheEntry::FromLocal((tmp / "map.R").string())}, "job_000001",
                              cluster::NodeId{1});
  ASSERT_TRUE(dir.ok()) << dir.status().ToString();
  struct stat st {};
  ASSERT_EQ(::stat((*dir / "map.R").c_str(), &st), 0);
  EXPECT_TRUE(st.st_mode & S_IXUSR);
  // Idempotent.
  EXPECT_TRUE(stager.ShipFiles({CacheEntry::FromLocal((tmp / "map.R").string())}, "job_000001",
                               cluster::NodeId{1})
                  .ok());
}

TEST(Stager, EmptyListGivesWorkdir) {
  testing::TempDir tmp;
  Stager stager(tmp.path(), nullptr);
  auto dir = stager.ShipFiles({}, "job_000001", cluster::NodeId{2});
  ASSERT_TRUE(dir.ok());
  EXPECT_TRUE(std::filesystem::is_directory(*dir));
}

TEST(Stager, DuplicateAndMissing) {
  testing::TempDir tmp;
  Stager stager(tmp.path(), nullptr);
  EXPECT_EQ(CheckStagedNames({CacheEntry::FromLocal("/x/map.R"), CacheEntry::FromLocal("/y/map.R")})
                .code(),
            ErrorCode::kDuplicateName);
  EXPECT_EQ(stager.ShipFiles({CacheEntry::FromLocal((tmp / "nope").string())}, "j",
                             cluster::NodeId{1})
                .status()
                .code(),
            ErrorCode::kSourceMissing);
}

}  // namespace
}  // namespace mrs::streaming
