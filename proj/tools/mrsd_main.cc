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

// mrsd: the job daemon. Options use the dotted config key names and may
// also come from a TOML/INI file given with --config.

#include <csignal>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mrs/common/file_util.h"
#include "mrs/jobd/daemon.h"
#include "mrs/jobd/net.h"

namespace {

// CLI11 maps config sections to subcommands; flatten "[cluster] nodes = 4"
// (and "cluster.nodes = 4") onto the dotted option names instead.
class FlatConfig : public CLI::ConfigTOML {
 public:
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    std::vector<CLI::ConfigItem> flat;
    for (auto& item : CLI::ConfigTOML::from_config(input)) {
      if (item.name == "++" || item.name == "--") continue;
      std::string name;
      for (const auto& p : item.parents) name += p + ".";
      item.name = name + item.name;
      item.parents.clear();
      flat.push_back(std::move(item));
    }
    return flat;
  }
};

int WaitForSignal() {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  int sig = 0;
  sigwait(&set, &sig);
  return sig;
}

}  // namespace

int main(int argc, char** argv) {
  // Block termination signals before any thread starts so that only
  // sigwait() sees them.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  mrs::jobd::DaemonConfig config;
  CLI::App app{"mrsd - MapReduce job daemon"};
  app.set_config("--config", "", "TOML/INI config file");
  app.config_formatter(std::make_shared<FlatConfig>());

  std::string data_dir = "mrs-data";
  int64_t heartbeat_ms = config.heartbeat_timeout.count();
  int64_t worker_timeout_s =
      std::chrono::duration_cast<std::chrono::seconds>(config.worker_timeout).count();
  std::optional<uint64_t> shuffle_seed;
  std::string address_file;

  app.add_option("--jobd.listen", config.listen, "listen address (port 0 = ephemeral)")
      ->capture_default_str();
  app.add_option("--jobd.data_dir", data_dir, "DFS blocks and node scratch space")
      ->capture_default_str();
  app.add_option("--cluster.nodes", config.nodes, "simulated nodes")
      ->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--cluster.capacity", config.capacity, "task slots per node")
      ->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--cluster.heartbeat_timeout_ms", heartbeat_ms)
      ->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--dfs.block_size", config.block_size, "bytes")
      ->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--dfs.replication", config.replication)
      ->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--dfs.placement_seed", config.placement_seed)->capture_default_str();
  app.add_option("--engine.split_size", config.split_size, "bytes; 0 = block size")
      ->capture_default_str();
  app.add_option("--engine.max_attempts", config.max_attempts)
      ->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--engine.worker_timeout_s", worker_timeout_s)
      ->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--engine.shuffle_seed", shuffle_seed,
                 "randomize dispatch and completion order");
  app.add_option("--address-file", address_file, "write the bound address here");

  CLI11_PARSE(app, argc, argv);

  config.data_dir = data_dir;
  config.heartbeat_timeout = std::chrono::milliseconds(heartbeat_ms);
  config.worker_timeout = std::chrono::seconds(worker_timeout_s);
  config.shuffle_seed = shuffle_seed;

  mrs::jobd::Daemon daemon(config);
  if (auto st = daemon.Start(); !st.ok()) {
    std::cerr << "mrsd: " << st.ToString() << "\n";
    return 1;
  }
  mrs::jobd::Server server(daemon);
  if (auto st = server.Start(config.listen); !st.ok()) {
    std::cerr << "mrsd: " << st.ToString() << "\n";
    return 1;
  }
  const std::string bound = server.address().ToString();
  std::cerr << "mrsd: listening on " << bound << " with " << config.nodes << " nodes\n";
  if (!address_file.empty()) {
    if (auto st = mrs::WriteFileAtomic(address_file, bound + "\n"); !st.ok()) {
      std::cerr << "mrsd: " << st.ToString() << "\n";
      return 1;
    }
  }

  const int sig = WaitForSignal();
  std::cerr << "mrsd: signal " << sig << ", shutting down\n";
  server.Stop();
  return 0;
}
