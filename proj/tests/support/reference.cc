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

#include "reference.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mrs::testing {

namespace fs = std::filesystem;

uint64_t OracleFnv1a64(std::string_view bytes) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void Spit(const fs::path& p, const std::string& data) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << data;
  if (!out) throw std::runtime_error("write " + p.string());
}

void Shell(const std::string& cmd, const fs::path& in, const fs::path& out) {
  const std::string line = cmd + " < '" + in.string() + "' > '" + out.string() + "'";
  if (std::system(line.c_str()) != 0) throw std::runtime_error("failed: " + line);
}

}  // namespace

std::string ReferenceStreaming(const std::string& input, const std::string& mapper_cmd,
                               const std::string& reducer_cmd, int num_reducers,
                               const fs::path& scratch) {
  fs::create_directories(scratch);
  Spit(scratch / "input", input);
  Shell(mapper_cmd, scratch / "input", scratch / "mapped");

  std::vector<std::vector<std::pair<std::string, std::string>>> parts(num_reducers);
  std::istringstream mapped(Slurp(scratch / "mapped"));
  std::string line;
  while (std::getline(mapped, line)) {
    const size_t tab = line.find('\t');
    std::string key = line.substr(0, tab);
    std::string value = tab == std::string::npos ? "" : line.substr(tab + 1);
    const size_t p = OracleFnv1a64(key) % static_cast<uint64_t>(num_reducers);
    parts[p].emplace_back(std::move(key), std::move(value));
  }

  std::string result;
  for (int p = 0; p < num_reducers; ++p) {
    auto& recs = parts[p];
    std::stable_sort(recs.begin(), recs.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::string text;
    for (const auto& [k, v] : recs) text += k + "\t" + v + "\n";
    const fs::path in = scratch / ("r" + std::to_string(p) + ".in");
    const fs::path out = scratch / ("r" + std::to_string(p) + ".out");
    Spit(in, text);
    Shell(reducer_cmd, in, out);
    result += Slurp(out);
  }
  return result;
}

std::string DirectWordCount(const std::string& input, int num_reducers) {
  std::vector<std::map<std::string, uint64_t>> parts(num_reducers);
  size_t i = 0;
  while (i < input.size()) {
    while (i < input.size() && (input[i] == ' ' || input[i] == '\t' || input[i] == '\n')) ++i;
    size_t j = i;
    while (j < input.size() && input[j] != ' ' && input[j] != '\t' && input[j] != '\n') ++j;
    if (j > i) {
      std::string w = input.substr(i, j - i);
      ++parts[OracleFnv1a64(w) % static_cast<uint64_t>(num_reducers)][w];
    }
    i = j;
  }
  std::string out;
  for (const auto& part : parts) {
    for (const auto& [w, n] : part) out += w + "\t" + std::to_string(n) + "\n";
  }
  return out;
}

}  // namespace mrs::testing
