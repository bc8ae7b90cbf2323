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

#include "properties.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <thread>
#include <vector>

#include "mrs/cluster/cluster.h"
#include "mrs/dfs/dfs.h"
#include "mrs/streaming/codec.h"

namespace mrs::testing {

namespace fs = std::filesystem;
using cluster::Cluster;
using cluster::NodeId;
using dfs::Dfs;
using dfs::DfsOptions;
using streaming::Record;

namespace {

// Runs `body(rng, case_no)` until it returns a non-empty failure or all
// cases pass.
template <typename Body>
PropertyOutcome Run(std::string name, uint64_t seed, int cases, Body&& body) {
  PropertyOutcome out;
  out.name = std::move(name);
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(seed);
  for (int i = 0; i < cases; ++i) {
    std::string failure = body(rng, i);
    ++out.cases;
    if (!failure.empty()) {
      out.ok = false;
      out.failure = "case " + std::to_string(i) + " (seed " + std::to_string(seed) + "): " + failure;
      break;
    }
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

uint64_t Uniform(std::mt19937_64& rng, uint64_t lo, uint64_t hi) {  // inclusive
  return lo + rng() % (hi - lo + 1);
}

std::string RandomBytes(std::mt19937_64& rng, size_t n) {
  std::string s(n, '\0');
  for (auto& c : s) c = static_cast<char>(rng() & 0xff);
  return s;
}

// Newline-free bytes with tabs over-represented; optionally tab-free.
std::string RandomField(std::mt19937_64& rng, size_t max_len, bool allow_tab) {
  std::string s(Uniform(rng, 0, max_len), '\0');
  for (auto& c : s) {
    do {
      c = (rng() % 8 == 0) ? '\t' : static_cast<char>(rng() & 0xff);
    } while (c == '\n' || (!allow_tab && c == '\t'));
  }
  return s;
}

// A fresh cluster + Dfs rooted in its own directory.
struct Fixture {
  ManualClock clock;
  std::unique_ptr<Cluster> cluster;
  std::unique_ptr<Dfs> dfs;

  Fixture(const fs::path& root, int nodes, uint64_t block_size, int replication, uint64_t seed) {
    cluster = std::make_unique<Cluster>(clock, std::chrono::seconds(5));
    for (int i = 0; i < nodes; ++i) (void)cluster->RegisterNode(1);
    dfs = std::make_unique<Dfs>(*cluster, DfsOptions{root, block_size, replication, seed});
  }
};

std::string ShapeError(const dfs::FileMeta& m, uint64_t block_size, uint64_t expected_len) {
  if (m.length != expected_len) return "length " + std::to_string(m.length);
  const uint64_t want_blocks = (expected_len + block_size - 1) / block_size;
  if (m.blocks.size() != want_blocks) return "block count " + std::to_string(m.blocks.size());
  uint64_t sum = 0;
  for (size_t i = 0; i < m.blocks.size(); ++i) {
    const uint64_t len = m.blocks[i].length;
    sum += len;
    if (i + 1 < m.blocks.size() && len != block_size) return "short inner block";
    if (len == 0 || len > block_size) return "bad last block length";
  }
  return sum == expected_len ? "" : "lengths do not sum";
}

std::string ReplicationError(const Dfs& d, const Cluster& c, const std::string& path) {
  auto meta = d.Stat(path);
  if (!meta.ok()) return meta.status().ToString();
  const auto live = c.LiveNodes();
  const size_t want = std::min<size_t>(d.options().replication, live.size());
  for (const auto& b : meta->blocks) {
    if (b.locations.size() != want) {
      return "block " + std::to_string(b.id.value) + " has " +
             std::to_string(b.locations.size()) + " replicas, want " + std::to_string(want);
    }
    std::set<NodeId> distinct(b.locations.begin(), b.locations.end());
    if (distinct.size() != b.locations.size()) return "duplicate location";
    for (NodeId n : b.locations) {
      if (!c.IsAlive(n)) return "dead location " + cluster::ToString(n);
    }
  }
  return "";
}

}  // namespace

PropertyOutcome CheckDfsRoundTrip(uint64_t seed, int cases, const fs::path& scratch) {
  return Run("dfs round-trip", seed, cases, [&](std::mt19937_64& rng, int i) -> std::string {
    const size_t len = Uniform(rng, 0, 600);
    const uint64_t bs = Uniform(rng, std::max<uint64_t>(1, len / 12), 700);
    Fixture fx(scratch / ("rt" + std::to_string(i)), 4, bs, static_cast<int>(Uniform(rng, 1, 3)),
               rng());
    const std::string content = RandomBytes(rng, len);
    if (auto put = fx.dfs->Put("/f", content); !put.ok()) return put.status().ToString();
    auto got = fx.dfs->Get("/f");
    if (!got.ok()) return got.status().ToString();
    if (*got != content) return "content mismatch";
    const uint64_t off = Uniform(rng, 0, len), n = Uniform(rng, 0, len + 5);
    auto range = fx.dfs->ReadRange("/f", off, n);
    if (!range.ok()) return range.status().ToString();
    if (*range != content.substr(off, n)) return "range mismatch";
    return "";
  });
}

PropertyOutcome CheckDfsSplitShape(uint64_t seed, int cases, const fs::path& scratch) {
  return Run("dfs split shape", seed, cases, [&](std::mt19937_64& rng, int i) -> std::string {
    const size_t len = Uniform(rng, 0, 600);
    const uint64_t bs = Uniform(rng, std::max<uint64_t>(1, len / 12), 700);
    Fixture fx(scratch / ("ss" + std::to_string(i)), 3, bs, 1, rng());
    auto put = fx.dfs->Put("/f", RandomBytes(rng, len));
    if (!put.ok()) return put.status().ToString();
    if (auto e = ShapeError(*put, bs, len); !e.empty()) return "put: " + e;
    // Appends keep the shape too.
    const size_t extra = Uniform(rng, 0, 3 * bs);
    auto app = fx.dfs->Append("/f", RandomBytes(rng, extra));
    if (!app.ok()) return app.status().ToString();
    if (auto e = ShapeError(*app, bs, len + extra); !e.empty()) return "append: " + e;
    return "";
  });
}

PropertyOutcome CheckDfsReplication(uint64_t seed, int cases, const fs::path& scratch) {
  return Run("dfs replication count", seed, cases, [&](std::mt19937_64& rng, int i) -> std::string {
    const int nodes = static_cast<int>(Uniform(rng, 1, 5));
    const int rep = static_cast<int>(Uniform(rng, 1, nodes));
    const size_t len = Uniform(rng, 1, 200);
    Fixture fx(scratch / ("rp" + std::to_string(i)), nodes, Uniform(rng, 16, 64), rep, rng());
    const std::string content = RandomBytes(rng, len);
    if (auto put = fx.dfs->Put("/f", content); !put.ok()) return put.status().ToString();
    if (auto e = ReplicationError(*fx.dfs, *fx.cluster, "/f"); !e.empty()) return "put: " + e;
    if (nodes == 1) return "";
    const auto live = fx.cluster->LiveNodes();
    const NodeId victim = live[rng() % live.size()];
    if (auto st = fx.cluster->InjectNodeFailure(victim); !st.ok()) return st.ToString();
    if (rep >= 2) {
      if (auto e = ReplicationError(*fx.dfs, *fx.cluster, "/f"); !e.empty()) return "repair: " + e;
      auto got = fx.dfs->Get("/f");
      if (!got.ok() || *got != content) return "unreadable after repair";
    }
    return "";
  });
}

PropertyOutcome CheckDfsAppendOnly(uint64_t seed, int cases, const fs::path& scratch) {
  return Run("dfs append-only", seed, cases, [&](std::mt19937_64& rng, int i) -> std::string {
    const uint64_t bs = Uniform(rng, 1, 32);
    Fixture fx(scratch / ("ao" + std::to_string(i)), 3, bs, 2, rng());
    std::map<std::string, std::string> model;
    const std::vector<std::string> paths = {"/a", "/b", "/d/c"};
    for (int step = 0; step < 6; ++step) {
      const std::string& p = paths[rng() % paths.size()];
      const std::string data = RandomBytes(rng, Uniform(rng, 0, 40));
      const bool exists = model.count(p) > 0;
      switch (rng() % 3) {
        case 0: {  // put: only a fresh path may be written
          auto r = fx.dfs->Put(p, data);
          if (exists && r.status().code() != ErrorCode::kAlreadyExists) return "update allowed";
          if (!exists && !r.ok()) return r.status().ToString();
          if (!exists) model[p] = data;
          break;
        }
        case 1: {
          auto r = fx.dfs->Append(p, data);
          if (!exists && r.status().code() != ErrorCode::kNotFound) return "append to missing";
          if (exists && !r.ok()) return r.status().ToString();
          if (exists) model[p] += data;
          break;
        }
        default: {  // rename onto an existing file must be refused
          const std::string& q = paths[rng() % paths.size()];
          if (exists && model.count(q) && p != q) {
            if (fx.dfs->Rename(p, q).code() != ErrorCode::kAlreadyExists) return "rename clobbered";
          }
          break;
        }
      }
      // Every previously readable byte is still there.
      for (const auto& [path, want] : model) {
        auto got = fx.dfs->Get(path);
        if (!got.ok()) return path + ": " + got.status().ToString();
        if (*got != want) return path + ": bytes changed";
      }
    }
    return "";
  });
}

PropertyOutcome CheckDfsRenameAtomicity(uint64_t seed, int cases, const fs::path& scratch) {
  Fixture fx(scratch / "rn", 3, 16, 2, seed);
  return Run("dfs rename atomicity", seed, cases, [&](std::mt19937_64& rng, int i) -> std::string {
    const std::string dir = "/r" + std::to_string(i) + "/";
    const std::string src = dir + "src", dst = dir + "dst";
    const std::string content = RandomBytes(rng, Uniform(rng, 0, 64));
    if (auto put = fx.dfs->Put(src, content); !put.ok()) return put.status().ToString();
    if (rng() % 4 == 0) {  // occupied target: nothing moves
      if (auto put = fx.dfs->Put(dst, "x"); !put.ok()) return put.status().ToString();
      if (fx.dfs->Rename(src, dst).code() != ErrorCode::kAlreadyExists) return "rename clobbered";
      auto got = fx.dfs->Get(src);
      return got.ok() && *got == content ? "" : "src damaged by refused rename";
    }
    std::atomic<bool> done{false};
    std::atomic<int> bad{0}, looks{0};
    std::thread observer([&] {
      do {
        const auto files = fx.dfs->Ls(dir);  // one atomic snapshot
        if (files.size() != 1) bad.fetch_add(1);
        looks.fetch_add(1);
      } while (!done.load());
    });
    const Status st = fx.dfs->Rename(src, dst);
    done.store(true);
    observer.join();
    if (!st.ok()) return st.ToString();
    if (bad.load() > 0) return std::to_string(bad.load()) + " bad snapshots";
    if (fx.dfs->Exists(src)) return "src still visible";
    auto got = fx.dfs->Get(dst);
    return got.ok() && *got == content ? "" : "dst content differs";
  });
}

PropertyOutcome CheckCodecRoundTrip(uint64_t seed, int cases) {
  return Run("codec round-trip", seed, cases, [](std::mt19937_64& rng, int) -> std::string {
    const Record r{RandomField(rng, 40, false), RandomField(rng, 40, false)};
    auto line = streaming::EncodeRecord(r);
    if (!line.ok()) return line.status().ToString();
    if (line->size() != r.key.size() + r.value.size() + 2 || line->back() != '\n' ||
        (*line)[r.key.size()] != '\t') {
      return "bad framing";
    }
    std::string_view body(*line);
    body.remove_suffix(1);
    if (!(streaming::DecodeWorkerLine(body) == r)) return "decode mismatch";
    // A newline anywhere is refused.
    Record bad = r;
    std::string& field = (rng() % 2) ? bad.key : bad.value;
    field.insert(Uniform(rng, 0, field.size()), 1, '\n');
    if (streaming::EncodeRecord(bad).status().code() != ErrorCode::kIllegalByte) {
      return "newline accepted";
    }
    return "";
  });
}

PropertyOutcome CheckCodecFirstTab(uint64_t seed, int cases) {
  return Run("codec first-tab", seed, cases, [](std::mt19937_64& rng, int) -> std::string {
    const std::string line = RandomField(rng, 80, true);
    const Record r = streaming::DecodeWorkerLine(line);
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      if (r.key != line || !r.value.empty()) return "tab-free line must be all key";
      return "";
    }
    if (r.key != line.substr(0, tab) || r.value != line.substr(tab + 1)) return "not first tab";
    auto again = streaming::EncodeRecord(r);
    if (!again.ok() || *again != line + "\n") return "re-encode differs";
    return "";
  });
}

}  // namespace mrs::testing
