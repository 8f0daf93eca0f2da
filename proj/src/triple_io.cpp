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

#include "d4mbench/triple_io.hpp"

#include <istream>
#include <ostream>
#include <string>

#include "d4mbench/error.hpp"

namespace d4mbench {
namespace {

bool has_separator(std::string_view s) {
  return s.find_first_of("\t\n") != std::string_view::npos;
}

}  // namespace

void write_triples(std::ostream& out, std::span<const Triple> triples) {
  for (const auto& t : triples) {
    const std::string v = t.val.to_string();
    if (has_separator(t.row) || has_separator(t.col) || has_separator(v)) {
      throw Error(Errc::encoding, "triple field contains a tab or newline");
    }
    out << t.row << '\t' << t.col << '\t' << v << '\n';
  }
}

std::vector<Triple> read_triples(std::istream& in) {
  struct Raw {
    std::string row, col, val;
  };
  std::vector<Raw> raw;
  bool all_numeric = true;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
      throw Error(Errc::parse, "line " + std::to_string(lineno) + ": expected row<TAB>col<TAB>value");
    }
    Raw r{line.substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1), line.substr(t2 + 1)};
    if (r.row.empty() || r.col.empty() || r.val.empty()) {
      throw Error(Errc::parse, "line " + std::to_string(lineno) + ": empty field");
    }
    all_numeric = all_numeric && parse_number(r.val).has_value();
    raw.push_back(std::move(r));
  }

  std::vector<Triple> out;
  out.reserve(raw.size());
  for (auto& r : raw) {
    Value v = all_numeric ? Value(*parse_number(r.val)) : Value(std::move(r.val));
    out.push_back(Triple{std::move(r.row), std::move(r.col), std::move(v)});
  }
  return out;
}

}  // namespace d4mbench
