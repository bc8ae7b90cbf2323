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

#ifndef MRS_COMMON_CLOCK_H_
#define MRS_COMMON_CLOCK_H_

#include <atomic>
#include <chrono>

namespace mrs {

using Duration = std::chrono::milliseconds;
// Monotonic instant, measured from an arbitrary epoch owned by the clock.
using TimePoint = std::chrono::time_point<std::chrono::steady_clock, Duration>;

class Clock {
 public:
  virtual ~Clock() = default;
  virtual TimePoint Now() const = 0;
};

class SystemClock final : public Clock {
 public:
  TimePoint Now() const override {
    return std::chrono::time_point_cast<Duration>(
        std::chrono::steady_clock::now());
  }
};

// Only moves when told to. Used by tests to drive failure detection.
class ManualClock final : public Clock {
 public:
  TimePoint Now() const override { return TimePoint(Duration(now_ms_.load())); }
  void Advance(Duration d) { now_ms_.fetch_add(d.count()); }
  void Set(TimePoint t) { now_ms_.store(t.time_since_epoch().count()); }

 private:
  std::atomic<Duration::rep> now_ms_{0};
};

}  // namespace mrs

#endif  // MRS_COMMON_CLOCK_H_
