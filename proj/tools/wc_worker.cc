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

// mrs_wc: compiled word-count worker, a drop-in for the shell fixtures.
//   mrs_wc map     stdin lines -> "word\t1"
//   mrs_wc reduce  key-sorted "word\tn" -> "word\ttotal"

#include <cstdint>
#include <iostream>
#include <string>
#include <string_view>

namespace {

bool IsBlank(char c) { return c == ' ' || c == '\t'; }

int Map() {
  std::string line;
  while (std::getline(std::cin, line)) {
    std::string_view rest = line;
    while (!rest.empty()) {
      size_t b = 0;
      while (b < rest.size() && IsBlank(rest[b])) ++b;
      size_t e = b;
      while (e < rest.size() && !IsBlank(rest[e])) ++e;
      if (e > b) std::cout << rest.substr(b, e - b) << "\t1\n";
      rest.remove_prefix(e);
    }
  }
  return std::cout.good() ? 0 : 1;
}

int Reduce() {
  std::string line, prev;
  uint64_t total = 0;
  bool any = false;
  while (std::getline(std::cin, line)) {
    const size_t tab = line.find('\t');
    std::string key = line.substr(0, tab);
    const uint64_t n = tab == std::string::npos ? 0 : std::stoull(line.substr(tab + 1));
    if (any && key != prev) {
      std::cout << prev << '\t' << total << '\n';
      total = 0;
    }
    prev = std::move(key);
    total += n;
    any = true;
  }
  if (any) std::cout << prev << '\t' << total << '\n';
  return std::cout.good() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  const std::string_view mode = argc == 2 ? argv[1] : "";
  if (mode == "map") return Map();
  if (mode == "reduce") return Reduce();
  std::cerr << "usage: mrs_wc map|reduce\n";
  return 2;
}
