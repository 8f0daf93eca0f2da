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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "d4mbench/value.hpp"

namespace d4mbench {

enum class Collision {
  keep_last,  // later triple overwrites, like a store put
  sum,        // numeric accumulation, like sparse-matrix assembly
};

/// Sparse 2-D array indexed by sorted string keys.
///
/// The representation is canonical: row and column keys are strictly sorted,
/// every key is used by at least one entry, entries are sorted by
/// (row, col), and no entry holds an empty value (numeric zero). An empty
/// array is always numeric. Two arrays are equal iff they hold the same
/// triples.
///
/// Arrays are immutable after construction; every operation below returns a
/// new array.
class AssocArray {
 public:
  struct Entry {
    std::uint32_t row;
    std::uint32_t col;
    Value value;

    friend bool operator==(const Entry&, const Entry&) = default;
  };

  AssocArray() = default;

  static AssocArray from_triples(std::span<const Triple> triples,
                                 Collision collision = Collision::keep_last);

  const std::vector<std::string>& row_keys() const noexcept { return rows_; }
  const std::vector<std::string>& col_keys() const noexcept { return cols_; }
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  ValueKind value_kind() const noexcept { return kind_; }
  std::size_t nnz() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  std::optional<Value> get(std::string_view row, std::string_view col) const;

  friend bool operator==(const AssocArray&, const AssocArray&) = default;

  /// Builds from parts that already satisfy the canonical invariants except
  /// that unused keys and zero values are dropped here.
  static AssocArray from_sorted_parts(std::vector<std::string> rows, std::vector<std::string> cols,
                                      std::vector<Entry> entries, ValueKind kind);

 private:
  std::vector<std::string> rows_;
  std::vector<std::string> cols_;
  std::vector<Entry> entries_;
  ValueKind kind_ = ValueKind::numeric;
};

std::vector<Triple> to_triples(const AssocArray& a);

// Row queries. Column forms compose with transpose().
AssocArray rows_by_keys(const AssocArray& a, std::span<const std::string> keys);
AssocArray rows_by_prefix(const AssocArray& a, std::string_view prefix);
/// Inclusive on both ends.
AssocArray rows_by_range(const AssocArray& a, std::string_view lo, std::string_view hi);
/// 1-based inclusive positions in sorted row order; positions past the end are ignored.
AssocArray rows_by_position(const AssocArray& a, std::size_t start, std::size_t stop);
AssocArray filter_value(const AssocArray& a, const Value& v);

/// Every textual value becomes 1; numeric arrays are returned unchanged.
AssocArray numeric_projection(const AssocArray& a);

// Algebra. Textual operands go through numeric_projection first and entries
// that compute to exactly zero are dropped.
AssocArray add(const AssocArray& a, const AssocArray& b);
AssocArray sub(const AssocArray& a, const AssocArray& b);
AssocArray and_(const AssocArray& a, const AssocArray& b);
AssocArray or_(const AssocArray& a, const AssocArray& b);
AssocArray matmul(const AssocArray& a, const AssocArray& b);
AssocArray transpose(const AssocArray& a);

inline AssocArray operator+(const AssocArray& a, const AssocArray& b) { return add(a, b); }
inline AssocArray operator-(const AssocArray& a, const AssocArray& b) { return sub(a, b); }
inline AssocArray operator&(const AssocArray& a, const AssocArray& b) { return and_(a, b); }
inline AssocArray operator|(const AssocArray& a, const AssocArray& b) { return or_(a, b); }
inline AssocArray operator*(const AssocArray& a, const AssocArray& b) { return matmul(a, b); }

/// Row key of the indicator vector used by bfs_step, and so of its result.
inline constexpr std::string_view kFrontierRow = "frontier";

/// One breadth-first step: indicator(frontier) * numeric_projection(a).
/// Values count how many frontier vertices reach each neighbor.
AssocArray bfs_step(const AssocArray& a, std::span<const std::string> frontier);

/// Replaces each (decimal) row key k with pad_key(k + offset, width).
AssocArray apply_row_offset(const AssocArray& a, std::uint64_t offset, unsigned width);

}  // namespace d4mbench
