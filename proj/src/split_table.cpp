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

#include "d4mbench/split_table.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "d4mbench/error.hpp"

namespace d4mbench {

std::uint32_t SplitTable::server_of(std::size_t tablet) const {
  if (tablet >= tablet_count()) throw Error(Errc::index, "tablet " + std::to_string(tablet));
  return tablet == 0 ? first_tablet_server : boundaries[tablet - 1].server;
}

std::string_view SplitTable::tablet_low(std::size_t tablet) const {
  if (tablet >= tablet_count()) throw Error(Errc::index, "tablet " + std::to_string(tablet));
  return tablet == 0 ? std::string_view() : std::string_view(boundaries[tablet - 1].key);
}

std::optional<std::string_view> SplitTable::tablet_high(std::size_t tablet) const {
  if (tablet >= tablet_count()) throw Error(Errc::index, "tablet " + std::to_string(tablet));
  if (tablet == boundaries.size()) return std::nullopt;
  return std::string_view(boundaries[tablet].key);
}

void SplitTable::validate(std::uint32_t n_servers) const {
  if (first_tablet_server >= n_servers) {
    throw Error(Errc::invalid_argument, "first tablet placed on unknown server");
  }
  for (std::size_t i = 0; i < boundaries.size(); ++i) {
    if (boundaries[i].key.empty()) throw Error(Errc::invalid_argument, "empty split key");
    if (i > 0 && !(boundaries[i - 1].key < boundaries[i].key)) {
      throw Error(Errc::invalid_argument, "split keys must be strictly increasing");
    }
    if (boundaries[i].server >= n_servers) {
      throw Error(Errc::invalid_argument, "split " + boundaries[i].key + " placed on unknown server");
    }
  }
}

void write_split_table(std::ostream& out, const SplitTable& splits) {
  for (const auto& b : splits.boundaries) {
    if (b.key.find_first_of("\t\n") != std::string::npos || b.key.starts_with('#')) {
      throw Error(Errc::encoding, "split key cannot be written to a split file: " + b.key);
    }
    out << b.key << '\t' << b.server << '\n';
  }
  out << kFirstTabletMarker << '\t' << splits.first_tablet_server << '\n';
}

SplitTable read_split_table(std::istream& in) {
  SplitTable out;
  bool saw_first = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto where = "split file line " + std::to_string(lineno);
    if (saw_first) throw Error(Errc::parse, where + ": content after " + std::string(kFirstTabletMarker));
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) throw Error(Errc::parse, where + ": expected key<TAB>server");
    const std::string_view server_text = std::string_view(line).substr(tab + 1);
    std::uint32_t server = 0;
    auto [ptr, ec] = std::from_chars(server_text.data(), server_text.data() + server_text.size(), server);
    if (ec != std::errc() || ptr != server_text.data() + server_text.size() || server_text.empty()) {
      throw Error(Errc::parse, where + ": bad server id");
    }
    std::string key = line.substr(0, tab);
    if (key == kFirstTabletMarker) {
      out.first_tablet_server = server;
      saw_first = true;
    } else {
      if (!out.boundaries.empty() && !(out.boundaries.back().key < key)) {
        throw Error(Errc::parse, where + ": split keys out of order");
      }
      out.boundaries.push_back(SplitPoint{std::move(key), server});
    }
  }
  if (!saw_first) throw Error(Errc::parse, "split file has no " + std::string(kFirstTabletMarker) + " line");
  return out;
}

void write_split_file(const std::filesystem::path& path, const SplitTable& splits) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io, "cannot write " + path.string());
  write_split_table(out, splits);
  if (!out) throw Error(Errc::io, "failed writing " + path.string());
}

SplitTable read_split_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open split file " + path.string());
  return read_split_table(in);
}

}  // namespace d4mbench
