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

#include <iosfwd>
#include <string>
#include <vector>

#include "d4mbench/graph500.hpp"

namespace d4mbench {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;

// Degree-distribution gate used by `verify`: the slope fit is only
// meaningful once the graph has a long enough tail.
inline constexpr unsigned kSlopeMinScale = 14;
inline constexpr double kSlopeBandLow = -0.85;
inline constexpr double kSlopeBandHigh = -0.40;

struct DegreeCheck {
  bool skipped = false;
  bool passed = false;
  double slope = 0.0;
  std::string detail;
};

DegreeCheck check_degree_slope(const graph500::EdgeList& edges, unsigned scale);

/// `args` excludes the program name. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace d4mbench
