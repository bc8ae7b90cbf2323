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

#ifndef MRS_ENGINE_PARTITION_H_
#define MRS_ENGINE_PARTITION_H_

#include <cstdint>
#include <string_view>

namespace mrs::engine {

inline constexpr uint64_t kFnvOffsetBasis = 14695981039346656037ULL;
inline constexpr uint64_t kFnvPrime = 1099511628211ULL;

// 64-bit FNV-1a over raw bytes.
constexpr uint64_t Fnv1a64(std::string_view bytes) {
  uint64_t h = kFnvOffsetBasis;
  for (char c : bytes) {
    h ^= static_cast<uint8_t>(c);
    h *= kFnvPrime;
  }
  return h;
}

// Reduce partition for `key`; num_reducers must be >= 1.
constexpr int Partition(std::string_view key, int num_reducers) {
  return static_cast<int>(Fnv1a64(key) % static_cast<uint64_t>(num_reducers));
}

}  // namespace mrs::engine

#endif  // MRS_ENGINE_PARTITION_H_
