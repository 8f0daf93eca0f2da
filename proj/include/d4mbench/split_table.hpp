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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace d4mbench {

struct SplitPoint {
  std::string key;  // inclusive low key of the tablet that starts here
  std::uint32_t server = 0;

  friend bool operator==(const SplitPoint&, const SplitPoint&) = default;
};

/// Tablet boundaries of one table with the server hosting each tablet.
/// Tablet 0 is the unbounded first tablet; tablet i > 0 starts at
/// boundaries[i - 1].key.
struct SplitTable {
  std::vector<SplitPoint> boundaries;
  std::uint32_t first_tablet_server = 0;

  std::size_t tablet_count() const noexcept { return boundaries.size() + 1; }
  std::uint32_t server_of(std::size_t tablet) const;
  /// Inclusive low key; empty for the first tablet.
  std::string_view tablet_low(std::size_t tablet) const;
  /// Exclusive high key; nullopt for the last tablet.
  std::optional<std::string_view> tablet_high(std::size_t tablet) const;

  /// Throws Errc::invalid_argument unless keys are non-empty and strictly
  /// increasing and every server id is below n_servers.
  void validate(std::uint32_t n_servers) const;

  friend bool operator==(const SplitTable&, const SplitTable&) = default;
};

/// Marker line recording the first tablet's placement in a split file.
inline constexpr std::string_view kFirstTabletMarker = "#first_tablet";

// Split file: `<key><TAB><server><NEWLINE>` per boundary in key order,
// then `#first_tablet<TAB><server><NEWLINE>`.
void write_split_table(std::ostream& out, const SplitTable& splits);
SplitTable read_split_table(std::istream& in);

void write_split_file(const std::filesystem::path& path, const SplitTable& splits);
/// Throws Errc::io when the file cannot be opened, Errc::parse when malformed.
SplitTable read_split_file(const std::filesystem::path& path);

}  // namespace d4mbench
