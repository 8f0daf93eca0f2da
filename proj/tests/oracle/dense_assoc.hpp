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

// Brute-force reference model for associative arrays: a plain ordered map
// from (row, col) to value, with every operation written the obvious way
// (loops over all key pairs, no index structures). Shares only Value and
// Triple with the library.

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "d4mbench/value.hpp"

namespace oracle {

using d4mbench::Triple;
using d4mbench::Value;

struct Dense {
  std::map<std::pair<std::string, std::string>, Value> cells;

  std::set<std::string> rows() const {
    std::set<std::string> out;
    for (const auto& [k, v] : cells) out.insert(k.first);
    return out;
  }
  std::set<std::string> cols() const {
    std::set<std::string> out;
    for (const auto& [k, v] : cells) out.insert(k.second);
    return out;
  }
  std::vector<Triple> triples() const {
    std::vector<Triple> out;
    for (const auto& [k, v] : cells) out.push_back(Triple{k.first, k.second, v});
    return out;
  }
  bool textual() const {
    for (const auto& [k, v] : cells) {
      if (!v.is_numeric()) return true;
    }
    return false;
  }
};

inline bool is_zero(const Value& v) { return v.is_numeric() && v.number() == 0.0; }

inline Dense keep_last(const std::vector<Triple>& in) {
  Dense d;
  for (const auto& t : in) d.cells.insert_or_assign({t.row, t.col}, t.val);
  for (auto it = d.cells.begin(); it != d.cells.end();) it = is_zero(it->second) ? d.cells.erase(it) : std::next(it);
  return d;
}

inline Dense summed(const std::vector<Triple>& in) {
  std::map<std::pair<std::string, std::string>, double> acc;
  for (const auto& t : in) acc[{t.row, t.col}] += t.val.number();
  Dense d;
  for (const auto& [k, v] : acc) {
    if (v != 0.0) d.cells.emplace(k, Value(v));
  }
  return d;
}

inline Dense project(const Dense& a) {
  Dense d;
  for (const auto& [k, v] : a.cells) d.cells.emplace(k, v.is_numeric() ? v : Value(1.0));
  return d;
}

template <class Keep>
Dense select_rows(const Dense& a, Keep keep) {
  Dense d;
  for (const auto& [k, v] : a.cells) {
    if (keep(k.first)) d.cells.emplace(k, v);
  }
  return d;
}

inline Dense rows_by_position(const Dense& a, std::size_t start, std::size_t stop) {
  const auto rows = a.rows();
  const std::vector<std::string> sorted(rows.begin(), rows.end());
  std::set<std::string> keep;
  for (std::size_t p = start; p <= stop && p <= sorted.size(); ++p) keep.insert(sorted[p - 1]);
  return select_rows(a, [&](const std::string& r) { return keep.count(r) > 0; });
}

inline Dense filter_value(const Dense& a, const Value& v) {
  Dense d;
  for (const auto& [k, x] : a.cells) {
    if (x == v) d.cells.emplace(k, x);
  }
  return d;
}

inline Dense combine(const Dense& a0, const Dense& b0, double sign) {
  const Dense a = project(a0);
  const Dense b = project(b0);
  std::set<std::pair<std::string, std::string>> keys;
  for (const auto& [k, v] : a.cells) keys.insert(k);
  for (const auto& [k, v] : b.cells) keys.insert(k);
  Dense d;
  for (const auto& k : keys) {
    auto ia = a.cells.find(k);
    auto ib = b.cells.find(k);
    double x;
    if (ia != a.cells.end() && ib != b.cells.end()) {
      x = ia->second.number() + sign * ib->second.number();
    } else if (ia != a.cells.end()) {
      x = ia->second.number();
    } else {
      x = sign * ib->second.number();
    }
    if (x != 0.0) d.cells.emplace(k, Value(x));
  }
  return d;
}

inline Dense pattern_and(const Dense& a, const Dense& b) {
  Dense d;
  for (const auto& [k, v] : a.cells) {
    if (b.cells.count(k)) d.cells.emplace(k, Value(1.0));
  }
  return d;
}

inline Dense pattern_or(const Dense& a, const Dense& b) {
  Dense d;
  for (const auto& [k, v] : a.cells) d.cells.emplace(k, Value(1.0));
  for (const auto& [k, v] : b.cells) d.cells.emplace(k, Value(1.0));
  return d;
}

// Triple loop over every (row of A, col of B, shared inner key), inner keys
// visited in ascending order.
inline Dense matmul(const Dense& a0, const Dense& b0) {
  const Dense a = project(a0);
  const Dense b = project(b0);
  const auto inner_a = a.cols();
  const auto inner_b = b.rows();
  Dense d;
  for (const auto& i : a.rows()) {
    for (const auto& j : b.cols()) {
      double sum = 0.0;
      bool any = false;
      for (const auto& k : inner_a) {
        if (!inner_b.count(k)) continue;
        auto x = a.cells.find({i, k});
        auto y = b.cells.find({k, j});
        if (x == a.cells.end() || y == b.cells.end()) continue;
        sum += x->second.number() * y->second.number();
        any = true;
      }
      if (any && sum != 0.0) d.cells.emplace(std::make_pair(i, j), Value(sum));
    }
  }
  return d;
}

inline Dense transpose(const Dense& a) {
  Dense d;
  for (const auto& [k, v] : a.cells) d.cells.emplace(std::make_pair(k.second, k.first), v);
  return d;
}

// Neighbors of the frontier by scanning every edge.
inline Dense bfs_step(const Dense& a, const std::vector<std::string>& frontier, const std::string& row_key) {
  std::set<std::string> f(frontier.begin(), frontier.end());
  std::map<std::string, double> counts;
  for (const auto& [k, v] : a.cells) {
    if (f.count(k.first)) counts[k.second] += v.is_numeric() ? v.number() : 1.0;
  }
  Dense d;
  for (const auto& [c, n] : counts) {
    if (n != 0.0) d.cells.emplace(std::make_pair(row_key, c), Value(n));
  }
  return d;
}

// Random inputs

struct Gen {
  std::mt19937_64 rng;

  explicit Gen(std::uint64_t seed) : rng(seed) {}

  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

  std::string key() {
    static const char alphabet[] = "abcxyz019";
    std::string s(1 + below(3), 'a');
    for (auto& c : s) c = alphabet[below(sizeof(alphabet) - 1)];
    return s;
  }

  std::vector<std::string> keys(std::size_t max_n) {
    std::set<std::string> s;
    const std::size_t n = 1 + below(max_n);
    while (s.size() < n) s.insert(key());
    return {s.begin(), s.end()};
  }

  // Small integers and halves so sums hit exact zero fairly often.
  Value number() {
    static const double choices[] = {-3, -2, -1, -0.5, 0.5, 1, 2, 3, 4, 0.25};
    return Value(choices[below(10)]);
  }

  Value text() {
    static const char* words[] = {"cited", "knows", "x", "47.0a", "bob"};
    return Value(std::string(words[below(5)]));
  }

  std::vector<Triple> triples(std::size_t max_dim, bool textual, std::size_t max_n = 64) {
    const auto rows = keys(max_dim);
    const auto cols = keys(max_dim);
    std::vector<Triple> out;
    const std::size_t n = below(max_n + 1);
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back(Triple{rows[below(rows.size())], cols[below(cols.size())], textual ? text() : number()});
    }
    return out;
  }
};

}  // namespace oracle
