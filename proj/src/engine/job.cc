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

#include "mrs/engine/job.h"

#include <cstdio>

namespace mrs::engine {

bool IsAcceptedInputFormat(std::string_view format) {
  return format == kTextInputFormat || format == kTextInputFormatAlias;
}

std::string_view PhaseName(Phase phase) {
  switch (phase) {
    case Phase::kPending: return "PENDING";
    case Phase::kMapping: return "MAPPING";
    case Phase::kReducing: return "REDUCING";
    case Phase::kSucceeded: return "SUCCEEDED";
    case Phase::kFailed: return "FAILED";
  }
  return "UNKNOWN";
}

std::optional<Phase> PhaseFromName(std::string_view name) {
  for (Phase p : {Phase::kPending, Phase::kMapping, Phase::kReducing,
                  Phase::kSucceeded, Phase::kFailed}) {
    if (PhaseName(p) == name) return p;
  }
  return std::nullopt;
}

std::string PartFileName(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "part-%05d", index);
  return buf;
}

}  // namespace mrs::engine
