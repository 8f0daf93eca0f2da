// Copyright 2026 The d4mbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace d4mbench {

/// Simulated time in seconds. Each owner (a writer, the balancer) keeps its own.
class SimClock {
 public:
  explicit SimClock(double start = 0.0) : now_(start) {}

  double now() const noexcept { return now_; }
  void advance(double dt) noexcept {
    if (dt > 0) now_ += dt;
  }
  void advance_to(double t) noexcept {
    if (t > now_) now_ = t;
  }

 private:
  double now_;
};

struct ThroughputSample {
  double timestamp = 0.0;
  std::uint64_t cumulative_inserts = 0;

  friend bool operator==(const ThroughputSample&, const ThroughputSample&) = default;
};

/// An ingest event: `count` inserts acknowledged at simulated time `timestamp`.
struct InsertEvent {
  double timestamp = 0.0;
  std::uint64_t count = 0;
};

/// Cumulative series, one sample per distinct event time, sorted by time.
std::vector<ThroughputSample> cumulative_series(std::vector<InsertEvent> events);

/// Step-function value of the cumulative series at time t (0 before the first sample).
std::uint64_t cumulative_at(std::span<const ThroughputSample> series, double t);

/// (cum(t) - cum(t - window)) / window: the monitor-page style averaged rate.
double windowed_rate(std::span<const ThroughputSample> series, double t, double window);

struct RatePoint {
  double elapsed_seconds = 0.0;
  std::uint64_t cumulative_inserts = 0;
  double windowed_rate = 0.0;

  friend bool operator==(const RatePoint&, const RatePoint&) = default;
};

/// Samples the series every `interval` seconds from 0 through the last event
/// (inclusive of one point at or past it).
std::vector<RatePoint> resample(std::span<const ThroughputSample> series, double interval,
                                double window);

}  // namespace d4mbench
