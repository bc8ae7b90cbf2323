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

#include "mrs/common/status.h"

#include <array>
#include <utility>

namespace mrs {

namespace {

constexpr std::array<std::pair<ErrorCode, std::string_view>, 23> kNames = {{
    {ErrorCode::kOk, "OK"},
    {ErrorCode::kNotFound, "NOT_FOUND"},
    {ErrorCode::kAlreadyExists, "ALREADY_EXISTS"},
    {ErrorCode::kInsufficientNodes, "NO_LIVE_NODES"},
    {ErrorCode::kBlockUnavailable, "NO_LIVE_NODES"},
    {ErrorCode::kIrreparableBlock, "IRREPARABLE_BLOCK"},
    {ErrorCode::kUnknownNode, "UNKNOWN_NODE"},
    {ErrorCode::kAlreadyDead, "ALREADY_DEAD"},
    {ErrorCode::kInvalidArgument, "BAD_REQUEST"},
    {ErrorCode::kIllegalByte, "BAD_REQUEST"},
    {ErrorCode::kSpawnFailed, "SPAWN_FAILED"},
    {ErrorCode::kTimeout, "TIMEOUT"},
    {ErrorCode::kWorkerFailed, "WORKER_FAILED"},
    {ErrorCode::kFetchFailed, "FETCH_FAILED"},
    {ErrorCode::kDuplicateName, "BAD_REQUEST"},
    {ErrorCode::kSourceMissing, "NOT_FOUND"},
    {ErrorCode::kUnknownJob, "UNKNOWN_JOB"},
    {ErrorCode::kWaitTimeout, "WAIT_TIMEOUT"},
    {ErrorCode::kAlreadyTerminal, "TERMINAL"},
    {ErrorCode::kNoLiveNodes, "NO_LIVE_NODES"},
    {ErrorCode::kCancelled, "CANCELLED"},
    {ErrorCode::kIOError, "INTERNAL"},
    {ErrorCode::kProtocolError, "BAD_REQUEST"},
}};

}  // namespace

std::string_view ErrorCodeName(ErrorCode code) {
  for (const auto& [c, name] : kNames) {
    if (c == code) return name;
  }
  return "INTERNAL";
}

ErrorCode ErrorCodeFromName(std::string_view name) {
  // First match wins, so aliases decode to the canonical code.
  static constexpr std::pair<std::string_view, ErrorCode> kWire[] = {
      {"OK", ErrorCode::kOk},
      {"NOT_FOUND", ErrorCode::kNotFound},
      {"ALREADY_EXISTS", ErrorCode::kAlreadyExists},
      {"BAD_REQUEST", ErrorCode::kInvalidArgument},
      {"NO_LIVE_NODES", ErrorCode::kNoLiveNodes},
      {"UNKNOWN_JOB", ErrorCode::kUnknownJob},
      {"WAIT_TIMEOUT", ErrorCode::kWaitTimeout},
      {"TERMINAL", ErrorCode::kAlreadyTerminal},
      {"UNKNOWN_NODE", ErrorCode::kUnknownNode},
      {"ALREADY_DEAD", ErrorCode::kAlreadyDead},
  };
  for (const auto& [n, c] : kWire) {
    if (n == name) return c;
  }
  return ErrorCode::kIOError;
}

std::string Status::ToString() const {
  if (ok()) return "OK";
  std::string out(ErrorCodeName(code_));
  if (!message_.empty()) {
    out += ": ";
    out += message_;
  }
  return out;
}

}  // namespace mrs
