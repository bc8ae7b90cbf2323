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

#include <arpa/inet.h>
#include <gtest/gtest.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <random>
#include <thread>

#include "mini_cluster.h"
#include "mrs/common/file_util.h"
#include "mrs/jobd/daemon.h"
#include "mrs/jobd/net.h"
#include "mrs/jobd/protocol.h"
#include "temp_dir.h"

namespace mrs::jobd {
namespace {

using namespace std::chrono_literals;

TEST(Base64, RoundTrip) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 500; ++i) {
    std::string s(rng() % 100, '\0');
    for (auto& c : s) c = static_cast<char>(rng() & 0xff);
    auto back = Base64Decode(Base64Encode(s));
    ASSERT_TRUE(back.ok());
    ASSERT_EQ(*back, s);
  }
  EXPECT_EQ(Base64Encode("hi"), "aGk=");
  EXPECT_EQ(*Base64Decode("aGk="), "hi");
  EXPECT_EQ(*Base64Decode(""), "");
  EXPECT_FALSE(Base64Decode("a!==").ok());
  EXPECT_FALSE(Base64Decode("abc").ok());
}

TEST(ProtocolJson, SpecRoundTrip) {
  engine::JobSpec spec;
  spec.input = "/in";
  spec.output = "/out";
  spec.mapper_cmd = "map.R";
  spec.reducer_cmd = "reduce.R -v";
  spec.files = {"/s/map.R", "/s/reduce.R"};
  spec.num_reducers = 3;
  spec.job_name = "wc";
  auto back = JobSpecFromJson(ToJson(spec));
  ASSERT_TRUE(back.ok());
  EXPECT_EQ(back->input, "/in");
  EXPECT_EQ(back->reducer_cmd, spec.reducer_cmd);
  EXPECT_EQ(back->files, spec.files);
  EXPECT_EQ(back->num_reducers, 3);
  EXPECT_EQ(back->job_name, spec.job_name);

  Json map_only = {{"input", "/in"}, {"output", "/o"}, {"mapper", "cat"}};
  auto m = JobSpecFromJson(map_only);
  ASSERT_TRUE(m.ok());
  EXPECT_TRUE(m->map_only());
  EXPECT_EQ(m->num_reducers, 1);
  EXPECT_FALSE(JobSpecFromJson(Json{{"input", "/in"}}).ok());
}

TEST(ProtocolJson, StatusRoundTrip) {
  engine::JobStatus s;
  s.id = "job_000004";
  s.phase = engine::Phase::kReducing;
  s.map_done = 3;
  s.map_total = 3;
  s.reduce_done = 1;
  s.reduce_total = 2;
  s.counters = {{"records_in", 10}, {"records_out", 4}};
  s.diagnostics = {"x"};
  const Json j = ToJson(s);
  EXPECT_EQ(j["phase"], "REDUCING");
  auto back = JobStatusFromJson(j);
  ASSERT_TRUE(back.ok());
  EXPECT_EQ(back->counters, s.counters);
  EXPECT_EQ(back->diagnostics, s.diagnostics);
  EXPECT_EQ(back->reduce_total, 2);
}

TEST(ProtocolJson, ErrorEnvelope) {
  const Json e = ErrorResponse(Status(ErrorCode::kUnknownJob, "job_000009"));
  EXPECT_EQ(e, (Json{{"ok", false}, {"error", "UNKNOWN_JOB"}, {"message", "job_000009"}}));
  EXPECT_EQ(ResponseStatus(e).code(), ErrorCode::kUnknownJob);
  EXPECT_TRUE(ResponseStatus(OkResponse()).ok());
}

TEST(ProtocolJson, WireErrorNames) {
  EXPECT_EQ(ErrorCodeName(ErrorCode::kNotFound), "NOT_FOUND");
  EXPECT_EQ(ErrorCodeName(ErrorCode::kAlreadyExists), "ALREADY_EXISTS");
  EXPECT_EQ(ErrorCodeName(ErrorCode::kInvalidArgument), "BAD_REQUEST");
  EXPECT_EQ(ErrorCodeName(ErrorCode::kNoLiveNodes), "NO_LIVE_NODES");
  EXPECT_EQ(ErrorCodeName(ErrorCode::kInsufficientNodes), "NO_LIVE_NODES");
  EXPECT_EQ(ErrorCodeName(ErrorCode::kUnknownJob), "UNKNOWN_JOB");
  EXPECT_EQ(ErrorCodeName(ErrorCode::kWaitTimeout), "WAIT_TIMEOUT");
  EXPECT_EQ(ErrorCodeName(ErrorCode::kAlreadyTerminal), "TERMINAL");
}

TEST(Endpoint, Parse) {
  auto e = ParseEndpoint("127.0.0.1:7070");
  ASSERT_TRUE(e.ok());
  EXPECT_EQ(e->host, "127.0.0.1");
  EXPECT_EQ(e->port, 7070);
  EXPECT_FALSE(ParseEndpoint("nohost").ok());
  EXPECT_FALSE(ParseEndpoint("h:99999").ok());
}

class DaemonTest : public ::testing::Test {
 protected:
  DaemonTest() {
    DaemonConfig c;
    c.data_dir = tmp_.path();
    c.listen = "127.0.0.1:0";
    daemon_ = std::make_unique<Daemon>(c);
    EXPECT_TRUE(daemon_->Start(false).ok());
  }

  Json Call(Json req) { return daemon_->Handle(req); }
  std::string Error(Json req) { return Call(std::move(req)).value("error", "OK"); }

  Json Put(const std::string& path, const std::string& data) {
    return Call({{"op", "put"}, {"path", path}, {"data", Base64Encode(data)}});
  }

  void UploadFixtures() {
    for (const char* f : {"wc_map.sh", "wc_reduce.sh", "slow_cat.sh"}) {
      ASSERT_EQ(Put(std::string("/cache/") + f, *ReadFile(testing::Fixture(f)))["ok"], true);
    }
  }

  Json WordCountSubmit(const std::string& output) {
    return {{"op", "submit"},
            {"input", "/in"},
            {"output", output},
            {"mapper", "wc_map.sh"},
            {"reducer", "wc_reduce.sh"},
            {"files", {"/cache/wc_map.sh", "/cache/wc_reduce.sh"}},
            {"num_reducers", 2}};
  }

  testing::TempDir tmp_;
  std::unique_ptr<Daemon> daemon_;
};

TEST_F(DaemonTest, Ping) {
  auto r = Call({{"op", "ping"}});
  EXPECT_EQ(r["ok"], true);
  EXPECT_EQ(r["live_nodes"], 4);
}

TEST_F(DaemonTest, FileOps) {
  auto put = Put("/a", "hello");
  ASSERT_EQ(put["ok"], true);
  EXPECT_EQ(put["file"]["length"], 5);
  EXPECT_EQ(Error({{"op", "put"}, {"path", "/a"}, {"data", ""}}), "ALREADY_EXISTS");
  ASSERT_EQ(Call({{"op", "append"}, {"path", "/a"}, {"data", Base64Encode("!")}})["ok"], true);
  EXPECT_EQ(*Base64Decode(Call({{"op", "get"}, {"path", "/a"}})["data"].get<std::string>()),
            "hello!");
  ASSERT_EQ(Call({{"op", "rename"}, {"src", "/a"}, {"dst", "/b"}})["ok"], true);
  auto ls = Call({{"op", "ls"}, {"prefix", "/"}});
  ASSERT_EQ(ls["files"].size(), 1u);
  EXPECT_EQ(ls["files"][0]["path"], "/b");
  EXPECT_EQ(ls["files"][0]["length"], 6);
  ASSERT_EQ(Call({{"op", "delete"}, {"path", "/b"}})["ok"], true);
  EXPECT_EQ(Error({{"op", "get"}, {"path", "/b"}}), "NOT_FOUND");
  EXPECT_EQ(Error({{"op", "delete"}, {"path", "/b"}}), "NOT_FOUND");
}

TEST_F(DaemonTest, BadRequests) {
  EXPECT_EQ(Error(Json::array()), "BAD_REQUEST");
  EXPECT_EQ(Error({{"op", "frobnicate"}}), "BAD_REQUEST");
  EXPECT_EQ(Error({{"op", "get"}}), "BAD_REQUEST");
  EXPECT_EQ(Error({{"op", "put"}, {"path", "/x"}, {"data", "@@@"}}), "BAD_REQUEST");
  EXPECT_EQ(Error({{"op", "put"}, {"path", "rel"}, {"data", ""}}), "BAD_REQUEST");
  EXPECT_EQ(Error({{"op", "get"}, {"path", 5}}), "BAD_REQUEST");
}

TEST_F(DaemonTest, JobLifecycle) {
  UploadFixtures();
  Put("/in", "b a\na b b\n");
  auto sub = Call(WordCountSubmit("/out"));
  ASSERT_EQ(sub["ok"], true) << sub.dump();
  EXPECT_EQ(sub["id"], "job_000001");
  auto st = Call({{"op", "wait"}, {"id", "job_000001"}, {"timeout_ms", 60000}});
  ASSERT_EQ(st["ok"], true) << st.dump();
  EXPECT_EQ(st["status"]["phase"], "SUCCEEDED");
  EXPECT_EQ(st["status"]["reduce_done"], 2);
  EXPECT_EQ(Call({{"op", "status"}, {"id", "job_000001"}})["status"], st["status"]);
  EXPECT_EQ(Call({{"op", "jobs"}})["jobs"].size(), 1u);
  EXPECT_EQ(Error({{"op", "kill"}, {"id", "job_000001"}}), "TERMINAL");
  EXPECT_EQ(Error({{"op", "status"}, {"id", "job_000077"}}), "UNKNOWN_JOB");
  EXPECT_EQ(Error(WordCountSubmit("/out")), "ALREADY_EXISTS");
  auto nested = WordCountSubmit("/out2");
  nested["spec"] = nested;
  nested["spec"].erase("op");
  nested.erase("input");
  EXPECT_EQ(Call(nested)["ok"], true);
}

TEST_F(DaemonTest, WaitTimeoutThenKill) {
  UploadFixtures();
  Put("/in", "x\n");
  auto req = WordCountSubmit("/out");
  req["mapper"] = "slow_cat.sh";
  req["files"] = {"/cache/slow_cat.sh", "/cache/wc_reduce.sh"};
  const std::string id = Call(req)["id"];
  EXPECT_EQ(Error({{"op", "wait"}, {"id", id}, {"timeout_ms", 0}}), "WAIT_TIMEOUT");
  ASSERT_EQ(Call({{"op", "kill"}, {"id", id}})["ok"], true);
  EXPECT_EQ(Call({{"op", "status"}, {"id", id}})["status"]["phase"], "FAILED");
  EXPECT_EQ(Error({{"op", "kill"}, {"id", id}}), "TERMINAL");
}

TEST_F(DaemonTest, NoLiveNodes) {
  UploadFixtures();
  Put("/in", "x\n");
  for (int n = 1; n <= 4; ++n) ASSERT_EQ(Call({{"op", "fail_node"}, {"node", n}})["ok"], true);
  EXPECT_EQ(Error(WordCountSubmit("/out")), "NO_LIVE_NODES");
  EXPECT_EQ(Error({{"op", "put"}, {"path", "/z"}, {"data", ""}}), "NO_LIVE_NODES");
  auto nodes = Call({{"op", "nodes"}})["nodes"];
  ASSERT_EQ(nodes.size(), 4u);
  EXPECT_EQ(nodes[0]["state"], "DEAD");
}

// Sends raw bytes and returns the response line.
std::string RawExchange(const Endpoint& ep, const std::string& bytes) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(ep.port);
  ::inet_pton(AF_INET, ep.host.c_str(), &addr.sin_addr);
  EXPECT_EQ(::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)), 0);
  EXPECT_EQ(::write(fd, bytes.data(), bytes.size()), static_cast<ssize_t>(bytes.size()));
  std::string out;
  char buf[4096];
  ssize_t n;
  while ((n = ::read(fd, buf, sizeof(buf))) > 0) out.append(buf, static_cast<size_t>(n));
  ::close(fd);
  return out;
}

TEST_F(DaemonTest, ServerOverTcp) {
  Server server(*daemon_);
  ASSERT_TRUE(server.Start("127.0.0.1:0").ok());
  ASSERT_NE(server.address().port, 0);
  Client client(server.address().ToString());

  auto pong = client.Checked({{"op", "ping"}});
  ASSERT_TRUE(pong.ok()) << pong.status().ToString();

  std::string big(3 << 20, '\0');
  std::mt19937_64 rng(2);
  for (auto& c : big) c = static_cast<char>(rng() & 0xff);
  ASSERT_TRUE(client.Checked({{"op", "put"}, {"path", "/big"}, {"data", Base64Encode(big)}}).ok());
  auto got = client.Checked({{"op", "get"}, {"path", "/big"}});
  ASSERT_TRUE(got.ok());
  EXPECT_EQ(*Base64Decode((*got)["data"].get<std::string>()), big);

  auto missing = client.Checked({{"op", "get"}, {"path", "/nope"}});
  EXPECT_EQ(missing.status().code(), ErrorCode::kNotFound);

  // Concurrent connections.
  std::vector<std::thread> threads;
  std::atomic<int> ok{0};
  for (int t = 0; t < 16; ++t) {
    threads.emplace_back([&, t] {
      const std::string p = "/c" + std::to_string(t);
      if (client.Checked({{"op", "put"}, {"path", p}, {"data", Base64Encode(p)}}).ok()) ++ok;
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(ok.load(), 16);

  // One JSON object per line; garbage gets a BAD_REQUEST line back.
  const std::string reply = RawExchange(server.address(), "{not json\n");
  ASSERT_FALSE(reply.empty());
  EXPECT_EQ(reply.back(), '\n');
  EXPECT_EQ(Json::parse(reply)["error"], "BAD_REQUEST");
  const std::string pong_line = RawExchange(server.address(), "{\"op\":\"ping\"}\n");
  EXPECT_EQ(Json::parse(pong_line)["ok"], true);
  server.Stop();
}

TEST(Client, TransportErrorWhenNothingListens) {
  // Bind then close to get a port that is very likely free.
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  ASSERT_EQ(::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)), 0);
  socklen_t len = sizeof(addr);
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  ::close(fd);
  Client client("127.0.0.1:" + std::to_string(ntohs(addr.sin_port)));
  EXPECT_EQ(client.Call({{"op", "ping"}}).status().code(), ErrorCode::kIOError);
}

}  // namespace
}  // namespace mrs::jobd
