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

// mrs_gen_corpus: writes the seeded word-count corpus to a file.

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "corpus.h"
#include "mrs/common/file_util.h"

int main(int argc, char** argv) {
  CLI::App app{"generate a deterministic text corpus"};
  uint64_t seed = 42;
  size_t bytes = 10u << 20;
  std::string out;
  app.add_option("--seed", seed)->capture_default_str();
  app.add_option("--bytes", bytes)->capture_default_str();
  app.add_option("output", out)->required();
  CLI11_PARSE(app, argc, argv);
  if (auto st = mrs::WriteFileAtomic(out, mrs::testing::GenerateCorpus(seed, bytes)); !st.ok()) {
    std::cerr << st.ToString() << "\n";
    return 1;
  }
  return 0;
}
