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

#ifndef MRS_TESTS_SUPPORT_CORPUS_H_
#define MRS_TESTS_SUPPORT_CORPUS_H_

#include <cstdint>
#include <string>

namespace mrs::testing {

// Deterministic text: lines of lowercase words drawn with a skewed
// frequency from a fixed vocabulary. Uses raw mt19937_64 output only, so
// the bytes are identical on every standard library.
std::string GenerateCorpus(uint64_t seed, size_t target_bytes);

}  // namespace mrs::testing

#endif  // MRS_TESTS_SUPPORT_CORPUS_H_
