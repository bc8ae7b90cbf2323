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

#ifndef MRS_COMMON_STATUS_H_
#define MRS_COMMON_STATUS_H_

#include <cassert>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace mrs {

// Error codes shared by every module. The ones with a wire spelling are
// stable; see ErrorCodeName().
enum class ErrorCode {
  kOk = 0,
  kNotFound,
  kAlreadyExists,
  kInsufficientNodes,
  kBlockUnavailable,
  kIrreparableBlock,
  kUnknownNode,
  kAlreadyDead,
  kInvalidArgument,
  kIllegalByte,
  kSpawnFailed,
  kTimeout,
  kWorkerFailed,
  kFetchFailed,
  kDuplicateName,
  kSourceMissing,
  kUnknownJob,
  kWaitTimeout,
  kAlreadyTerminal,
  kNoLiveNodes,
  kCancelled,
  kIOError,
  kProtocolError,
};

// Wire spelling used by the daemon protocol.
std::string_view ErrorCodeName(ErrorCode code);
// Inverse of ErrorCodeName for codes that travel over the wire.
ErrorCode ErrorCodeFromName(std::string_view name);

class Status {
 public:
  Status() = default;
  Status(ErrorCode code, std::string message)
      : code_(code), message_(std::move(message)) {}

  static Status OK() { return Status(); }

  bool ok() const { return code_ == ErrorCode::kOk; }
  ErrorCode code() const { return code_; }
  const std::string& message() const { return message_; }
  std::string ToString() const;

 private:
  ErrorCode code_ = ErrorCode::kOk;
  std::string message_;
};

inline Status NotFound(std::string msg) { return {ErrorCode::kNotFound, std::move(msg)}; }
inline Status AlreadyExists(std::string msg) { return {ErrorCode::kAlreadyExists, std::move(msg)}; }
inline Status InvalidArgument(std::string msg) { return {ErrorCode::kInvalidArgument, std::move(msg)}; }
inline Status IOError(std::string msg) { return {ErrorCode::kIOError, std::move(msg)}; }

// Either a value or a non-OK Status.
template <typename T>
class Result {
 public:
  Result(T value) : rep_(std::move(value)) {}  // NOLINT(runtime/explicit)
  Result(Status status) : rep_(std::move(status)) {  // NOLINT(runtime/explicit)
    assert(!std::get<Status>(rep_).ok());
  }
  Result(ErrorCode code, std::string message)
      : Result(Status(code, std::move(message))) {}

  bool ok() const { return std::holds_alternative<T>(rep_); }
  explicit operator bool() const { return ok(); }

  const Status& status() const {
    static const Status kOk;
    return ok() ? kOk : std::get<Status>(rep_);
  }

  T& value() & { return std::get<T>(rep_); }
  const T& value() const& { return std::get<T>(rep_); }
  T&& value() && { return std::get<T>(std::move(rep_)); }

  T& operator*() & { return value(); }
  const T& operator*() const& { return value(); }
  T* operator->() { return &value(); }
  const T* operator->() const { return &value(); }

 private:
  std::variant<T, Status> rep_;
};

}  // namespace mrs

#define MRS_RETURN_IF_ERROR(expr)          \
  do {                                     \
    ::mrs::Status _st = (expr);            \
    if (!_st.ok()) return _st;             \
  } while (0)

#define MRS_CONCAT_INNER_(a, b) a##b
#define MRS_CONCAT_(a, b) MRS_CONCAT_INNER_(a, b)
#define MRS_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, expr) \
  auto tmp = (expr);                               \
  if (!tmp.ok()) return tmp.status();              \
  lhs = std::move(tmp).value()
#define MRS_ASSIGN_OR_RETURN(lhs, expr) \
  MRS_ASSIGN_OR_RETURN_IMPL_(MRS_CONCAT_(_res_, __LINE__), lhs, expr)

#endif  // MRS_COMMON_STATUS_H_
