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

#include "d4mbench/throughput.hpp"

#include <algorithm>

#include "d4mbench/error.hpp"

namespace d4mbench {

std::vector<ThroughputSample> cumulative_series(std::vector<InsertEvent> events) {
  std::sort(events.begin(), events.end(),
            [](const InsertEvent& x, const InsertEvent& y) { return x.timestamp < y.timestamp; });
  std::vector<ThroughputSample> out;
  std::uint64_t total = 0;
  for (const auto& e : events) {
    total += e.count;
    if (!out.empty() && out.back().timestamp == e.timestamp) {
      out.back().cumulative_inserts = total;
    } else {
      out.push_back(ThroughputSample{e.timestamp, total});
    }
  }
  return out;
}

std::uint64_t cumulative_at(std::span<const ThroughputSample> series, double t) {
  auto it = std::upper_bound(series.begin(), series.end(), t,
                             [](double x, const ThroughputSample& s) { return x < s.timestamp; });
  return it == series.begin() ? 0 : std::prev(it)->cumulative_inserts;
}

double windowed_rate(std::span<const ThroughputSample> series, double t, double window) {
  if (!(window > 0)) throw Error(Errc::invalid_argument, "averaging window must be positive");
  const auto now = cumulative_at(series, t);
  const auto before = cumulative_at(series, t - window);
  return static_cast<double>(now - before) / window;
}

std::vector<RatePoint> resample(std::span<const ThroughputSample> series, double interval,
                                double window) {
  if (!(interval > 0)) throw Error(Errc::invalid_argument, "sample interval must be positive");
  const double end = series.empty() ? 0.0 : series.back().timestamp;
  std::vector<RatePoint> out;
  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * interval;
    out.push_back(RatePoint{t, cumulative_at(series, t), windowed_rate(series, t, window)});
    if (t >= end) break;
  }
  return out;
}

}  // namespace d4mbench
