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

#include "mrs/cli/commands.h"

#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <random>

#include "mrs/common/file_util.h"
#include "mrs/jobd/net.h"
#include "mrs/jobd/protocol.h"

namespace mrs::cli {

namespace fs = std::filesystem;
using jobd::Json;

namespace {

// Splits a Call() outcome into the two failure classes the CLI reports.
struct Reply {
  Json body;
  Status daemon_error;
  Status transport_error;
};

Reply Send(const jobd::Client& client, const Json& request) {
  Reply r;
  auto response = client.Call(request);
  if (!response.ok()) {
    r.transport_error = response.status();
    return r;
  }
  r.body = std::move(response).value();
  r.daemon_error = jobd::ResponseStatus(r.body);
  return r;
}

int Report(const Reply& r, std::ostream& err) {
  if (!r.transport_error.ok()) {
    err << "mrs: cannot reach daemon: " << r.transport_error.message() << "\n";
    return kExitClientError;
  }
  err << "mrs: " << r.daemon_error.ToString() << "\n";
  return kExitJobFailed;
}

bool Failed(const Reply& r) { return !r.transport_error.ok() || !r.daemon_error.ok(); }

std::string StagingToken() {
  std::random_device rd;
  const auto now = std::chrono::system_clock::now().time_since_epoch().count();
  return std::to_string(::getpid()) + "-" + std::to_string(now) + "-" +
         std::to_string(rd() % 100000);
}

}  // namespace

std::string ResolveDaemonAddress(const std::optional<std::string>& flag) {
  if (flag && !flag->empty()) return *flag;
  if (const char* env = std::getenv("MRS_DAEMON"); env != nullptr && *env != '\0') {
    return env;
  }
  return std::string(jobd::kDefaultListen);
}

std::string NormalizeDfsPath(std::string_view path) {
  if (!path.empty() && path.front() == '/') return std::string(path);
  return "/" + std::string(path);
}

int RunStreaming(const StreamingArgs& args, const std::string& daemon,
                 std::ostream& out, std::ostream& err) {
  jobd::Client client(daemon);
  const std::string staging = "/_staging/" + StagingToken();
  std::vector<std::string> staged;
  auto cleanup = [&] {
    for (const auto& p : staged) (void)client.Call({{"op", "delete"}, {"path", p}});
  };

  for (const auto& local : args.files) {
    auto data = ReadFile(local);
    if (!data.ok()) {
      err << "mrs: -file " << local << ": " << data.status().ToString() << "\n";
      cleanup();
      return kExitClientError;
    }
    const std::string dst = staging + "/" + fs::path(local).filename().string();
    Reply r = Send(client, {{"op", "put"}, {"path", dst}, {"data", jobd::Base64Encode(*data)}});
    if (Failed(r)) {
      cleanup();
      return Report(r, err);
    }
    staged.push_back(dst);
  }

  engine::JobSpec spec;
  spec.input = NormalizeDfsPath(args.input);
  spec.output = NormalizeDfsPath(args.output);
  spec.mapper_cmd = args.mapper;
  spec.reducer_cmd = args.reducer;
  spec.files = staged;
  spec.input_format = args.inputformat;
  spec.num_reducers = args.num_reduce_tasks;
  spec.job_name = args.jobname;

  Json submit = jobd::ToJson(spec);
  submit["op"] = "submit";
  Reply sub = Send(client, submit);
  if (Failed(sub)) {
    cleanup();
    return Report(sub, err);
  }
  const std::string id = sub.body["id"].get<std::string>();
  err << "mrs: submitted " << id << "\n";

  Reply wait = Send(client, {{"op", "wait"}, {"id", id}});
  cleanup();
  if (Failed(wait)) return Report(wait, err);
  auto status = jobd::JobStatusFromJson(wait.body["status"]);
  if (!status.ok()) {
    err << "mrs: " << status.status().ToString() << "\n";
    return kExitClientError;
  }
  out << engine::PhaseName(status->phase) << " maps=" << status->map_total
      << " reduces=" << status->reduce_total << "\n";
  if (status->phase == engine::Phase::kSucceeded) return kExitOk;
  for (const auto& d : status->diagnostics) err << "mrs: " << d << "\n";
  return kExitJobFailed;
}

int RunDfsCommand(const std::vector<std::string>& argv, const std::string& daemon,
                  std::ostream& out, std::ostream& err) {
  auto usage = [&] {
    err << "usage: mrs dfs put <local> <dfs> | get <dfs> <local> | ls [prefix] |"
           " rm <dfs> | mv <src> <dst>\n";
    return kExitClientError;
  };
  if (argv.empty()) return usage();
  const std::string& cmd = argv[0];
  jobd::Client client(daemon);

  if (cmd == "put" && argv.size() == 3) {
    auto data = ReadFile(argv[1]);
    if (!data.ok()) {
      err << "mrs: " << argv[1] << ": " << data.status().ToString() << "\n";
      return kExitClientError;
    }
    Reply r = Send(client, {{"op", "put"},
                            {"path", NormalizeDfsPath(argv[2])},
                            {"data", jobd::Base64Encode(*data)}});
    return Failed(r) ? Report(r, err) : kExitOk;
  }
  if (cmd == "get" && argv.size() == 3) {
    Reply r = Send(client, {{"op", "get"}, {"path", NormalizeDfsPath(argv[1])}});
    if (Failed(r)) return Report(r, err);
    auto data = jobd::Base64Decode(r.body["data"].get<std::string>());
    if (!data.ok()) {
      err << "mrs: " << data.status().ToString() << "\n";
      return kExitClientError;
    }
    if (argv[2] == "-") {
      out << *data;
      return out.flush() ? kExitOk : kExitClientError;
    }
    Status st = WriteFileAtomic(argv[2], *data);
    if (!st.ok()) {
      err << "mrs: " << st.ToString() << "\n";
      return kExitClientError;
    }
    return kExitOk;
  }
  if (cmd == "ls" && argv.size() <= 2) {
    const std::string prefix = argv.size() == 2 ? NormalizeDfsPath(argv[1]) : "/";
    Reply r = Send(client, {{"op", "ls"}, {"prefix", prefix}});
    if (Failed(r)) return Report(r, err);
    for (const auto& f : r.body["files"]) {
      out << f["path"].get<std::string>() << '\t' << f["length"].get<uint64_t>() << '\n';
    }
    return kExitOk;
  }
  if (cmd == "rm" && argv.size() == 2) {
    Reply r = Send(client, {{"op", "delete"}, {"path", NormalizeDfsPath(argv[1])}});
    return Failed(r) ? Report(r, err) : kExitOk;
  }
  if (cmd == "mv" && argv.size() == 3) {
    Reply r = Send(client, {{"op", "rename"},
                            {"src", NormalizeDfsPath(argv[1])},
                            {"dst", NormalizeDfsPath(argv[2])}});
    return Failed(r) ? Report(r, err) : kExitOk;
  }
  return usage();
}

}  // namespace mrs::cli
