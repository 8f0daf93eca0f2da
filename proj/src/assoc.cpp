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

#include "d4mbench/assoc.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <utility>

#include "d4mbench/error.hpp"
#include "d4mbench/keys.hpp"

namespace d4mbench {
namespace {

using Entry = AssocArray::Entry;

bool entry_less(const Entry& x, const Entry& y) noexcept {
  return x.row != y.row ? x.row < y.row : x.col < y.col;
}

bool is_empty_value(const Value& v) { return v.is_numeric() && v.number() == 0.0; }

std::uint32_t index_of(const std::vector<std::string>& keys, std::string_view key) {
  auto it = std::lower_bound(keys.begin(), keys.end(), key);
  return static_cast<std::uint32_t>(it - keys.begin());
}

// Sorted union of two sorted key lists plus the index maps from each input into it.
struct KeyUnion {
  std::vector<std::string> keys;
  std::vector<std::uint32_t> from_a;
  std::vector<std::uint32_t> from_b;
};

KeyUnion unite(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  KeyUnion u;
  u.keys.reserve(a.size() + b.size());
  u.from_a.resize(a.size());
  u.from_b.resize(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    const auto next = static_cast<std::uint32_t>(u.keys.size());
    if (j == b.size() || (i < a.size() && a[i] < b[j])) {
      u.from_a[i] = next;
      u.keys.push_back(a[i++]);
    } else if (i == a.size() || b[j] < a[i]) {
      u.from_b[j] = next;
      u.keys.push_back(b[j++]);
    } else {
      u.from_a[i] = next;
      u.from_b[j] = next;
      u.keys.push_back(a[i]);
      ++i;
      ++j;
    }
  }
  return u;
}

const AssocArray& projected(const AssocArray& a, AssocArray& storage) {
  if (a.value_kind() == ValueKind::numeric) return a;
  storage = numeric_projection(a);
  return storage;
}

// Pattern merge of two numeric arrays. `combine` receives pointers to the
// values present at a key (nullptr when absent) and returns the result value;
// zeros are dropped afterwards.
template <typename Combine>
AssocArray merge_entries(const AssocArray& a_in, const AssocArray& b_in, Combine combine) {
  AssocArray a_proj;
  AssocArray b_proj;
  const AssocArray& a = projected(a_in, a_proj);
  const AssocArray& b = projected(b_in, b_proj);

  KeyUnion rows = unite(a.row_keys(), b.row_keys());
  KeyUnion cols = unite(a.col_keys(), b.col_keys());

  std::vector<Entry> out;
  out.reserve(a.nnz() + b.nnz());
  const auto& ea = a.entries();
  const auto& eb = b.entries();
  std::size_t i = 0;
  std::size_t j = 0;
  // Index maps are monotone, so remapped entries stay sorted.
  using Coord = std::pair<std::uint32_t, std::uint32_t>;
  constexpr Coord kEnd{std::numeric_limits<std::uint32_t>::max(),
                       std::numeric_limits<std::uint32_t>::max()};
  while (i < ea.size() || j < eb.size()) {
    const Coord x = i < ea.size() ? Coord{rows.from_a[ea[i].row], cols.from_a[ea[i].col]} : kEnd;
    const Coord y = j < eb.size() ? Coord{rows.from_b[eb[j].row], cols.from_b[eb[j].col]} : kEnd;
    if (x < y) {
      const double xv = ea[i++].value.number();
      out.push_back(Entry{x.first, x.second, combine(&xv, nullptr)});
    } else if (y < x) {
      const double yv = eb[j++].value.number();
      out.push_back(Entry{y.first, y.second, combine(nullptr, &yv)});
    } else {
      const double xv = ea[i++].value.number();
      const double yv = eb[j++].value.number();
      out.push_back(Entry{x.first, x.second, combine(&xv, &yv)});
    }
  }
  return AssocArray::from_sorted_parts(std::move(rows.keys), std::move(cols.keys), std::move(out),
                                       ValueKind::numeric);
}

AssocArray keep_rows(const AssocArray& a, const std::vector<char>& keep) {
  std::vector<Entry> out;
  for (const auto& e : a.entries()) {
    if (keep[e.row]) out.push_back(e);
  }
  return AssocArray::from_sorted_parts(a.row_keys(), a.col_keys(), std::move(out), a.value_kind());
}

AssocArray keep_row_span(const AssocArray& a, std::size_t first, std::size_t last) {
  std::vector<char> keep(a.row_keys().size(), 0);
  for (std::size_t r = first; r < last; ++r) keep[r] = 1;
  return keep_rows(a, keep);
}

}  // namespace

AssocArray AssocArray::from_sorted_parts(std::vector<std::string> rows,
                                         std::vector<std::string> cols,
                                         std::vector<Entry> entries, ValueKind kind) {
  std::erase_if(entries, [](const Entry& e) { return is_empty_value(e.value); });

  std::vector<std::uint32_t> row_map(rows.size(), 0);
  std::vector<std::uint32_t> col_map(cols.size(), 0);
  std::vector<char> row_used(rows.size(), 0);
  std::vector<char> col_used(cols.size(), 0);
  for (const auto& e : entries) {
    row_used[e.row] = 1;
    col_used[e.col] = 1;
  }

  AssocArray out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!row_used[r]) continue;
    row_map[r] = static_cast<std::uint32_t>(out.rows_.size());
    out.rows_.push_back(std::move(rows[r]));
  }
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (!col_used[c]) continue;
    col_map[c] = static_cast<std::uint32_t>(out.cols_.size());
    out.cols_.push_back(std::move(cols[c]));
  }
  for (auto& e : entries) {
    e.row = row_map[e.row];
    e.col = col_map[e.col];
  }
  out.entries_ = std::move(entries);
  out.kind_ = out.entries_.empty() ? ValueKind::numeric : kind;
  return out;
}

AssocArray AssocArray::from_triples(std::span<const Triple> triples, Collision collision) {
  if (triples.empty()) return {};

  const ValueKind kind = triples.front().val.kind();
  for (const auto& t : triples) {
    if (t.row.empty() || t.col.empty()) {
      throw Error(Errc::invalid_argument, "triple row and column keys must be non-empty");
    }
    if (t.val.kind() != kind) {
      throw Error(Errc::kind_mismatch, "triples mix textual and numeric values");
    }
  }
  if (collision == Collision::sum && kind == ValueKind::textual) {
    throw Error(Errc::policy, "sum collision policy needs numeric values");
  }

  // Stable sort keeps input order among duplicates: the last one wins for
  // keep_last, and sums accumulate in input order.
  std::vector<std::size_t> order(triples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const auto& tx = triples[x];
    const auto& ty = triples[y];
    return tx.row != ty.row ? tx.row < ty.row : tx.col < ty.col;
  });

  std::vector<std::string> rows;
  std::vector<std::string> cols;
  for (const auto& t : triples) cols.push_back(t.col);
  std::sort(cols.begin(), cols.end());
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());

  std::vector<Entry> entries;
  entries.reserve(triples.size());
  for (std::size_t k = 0; k < order.size();) {
    const Triple& first = triples[order[k]];
    std::size_t end = k + 1;
    while (end < order.size() && triples[order[end]].row == first.row &&
           triples[order[end]].col == first.col) {
      ++end;
    }
    Value v = triples[order[end - 1]].val;
    if (collision == Collision::sum) {
      double acc = 0.0;
      for (std::size_t m = k; m < end; ++m) acc += triples[order[m]].val.number();
      v = Value(acc);
    }
    if (rows.empty() || rows.back() != first.row) rows.push_back(first.row);
    entries.push_back(Entry{static_cast<std::uint32_t>(rows.size() - 1), index_of(cols, first.col),
                            std::move(v)});
    k = end;
  }
  return from_sorted_parts(std::move(rows), std::move(cols), std::move(entries), kind);
}

std::optional<Value> AssocArray::get(std::string_view row, std::string_view col) const {
  auto r = std::lower_bound(rows_.begin(), rows_.end(), row);
  auto c = std::lower_bound(cols_.begin(), cols_.end(), col);
  if (r == rows_.end() || *r != row || c == cols_.end() || *c != col) return std::nullopt;
  const Entry probe{static_cast<std::uint32_t>(r - rows_.begin()),
                    static_cast<std::uint32_t>(c - cols_.begin()), Value(0.0)};
  auto it = std::lower_bound(entries_.begin(), entries_.end(), probe, entry_less);
  if (it == entries_.end() || it->row != probe.row || it->col != probe.col) return std::nullopt;
  return it->value;
}

std::vector<Triple> to_triples(const AssocArray& a) {
  std::vector<Triple> out;
  out.reserve(a.nnz());
  for (const auto& e : a.entries()) {
    out.push_back(Triple{a.row_keys()[e.row], a.col_keys()[e.col], e.value});
  }
  return out;
}

AssocArray rows_by_keys(const AssocArray& a, std::span<const std::string> keys) {
  std::vector<char> keep(a.row_keys().size(), 0);
  for (const auto& k : keys) {
    const auto r = index_of(a.row_keys(), k);
    if (r < a.row_keys().size() && a.row_keys()[r] == k) keep[r] = 1;
  }
  return keep_rows(a, keep);
}

AssocArray rows_by_prefix(const AssocArray& a, std::string_view prefix) {
  const auto& rows = a.row_keys();
  auto first = std::lower_bound(rows.begin(), rows.end(), prefix);
  auto last = first;
  while (last != rows.end() && std::string_view(*last).starts_with(prefix)) ++last;
  return keep_row_span(a, first - rows.begin(), last - rows.begin());
}

AssocArray rows_by_range(const AssocArray& a, std::string_view lo, std::string_view hi) {
  if (hi < lo) {
    throw Error(Errc::range, "range start '" + std::string(lo) + "' is after end '" +
                                 std::string(hi) + "'");
  }
  const auto& rows = a.row_keys();
  auto first = std::lower_bound(rows.begin(), rows.end(), lo);
  auto last = std::upper_bound(rows.begin(), rows.end(), hi);
  return keep_row_span(a, first - rows.begin(), last - rows.begin());
}

AssocArray rows_by_position(const AssocArray& a, std::size_t start, std::size_t stop) {
  if (start < 1) throw Error(Errc::index, "row positions are 1-based");
  if (stop < start) throw Error(Errc::index, "stop position precedes start position");
  const std::size_t n = a.row_keys().size();
  const std::size_t first = std::min(start - 1, n);
  const std::size_t last = std::min(stop, n);
  return keep_row_span(a, first, last);
}

AssocArray filter_value(const AssocArray& a, const Value& v) {
  if (v.kind() != a.value_kind()) return {};
  std::vector<Entry> out;
  for (const auto& e : a.entries()) {
    if (e.value == v) out.push_back(e);
  }
  return AssocArray::from_sorted_parts(a.row_keys(), a.col_keys(), std::move(out), a.value_kind());
}

AssocArray numeric_projection(const AssocArray& a) {
  if (a.value_kind() == ValueKind::numeric) return a;
  std::vector<Entry> out = a.entries();
  for (auto& e : out) e.value = Value(1.0);
  return AssocArray::from_sorted_parts(a.row_keys(), a.col_keys(), std::move(out),
                                       ValueKind::numeric);
}

AssocArray add(const AssocArray& a, const AssocArray& b) {
  return merge_entries(a, b, [](const double* x, const double* y) {
    return Value((x ? *x : 0.0) + (y ? *y : 0.0));
  });
}

AssocArray sub(const AssocArray& a, const AssocArray& b) {
  return merge_entries(a, b, [](const double* x, const double* y) {
    return Value((x ? *x : 0.0) - (y ? *y : 0.0));
  });
}

AssocArray and_(const AssocArray& a, const AssocArray& b) {
  return merge_entries(a, b, [](const double* x, const double* y) {
    return Value(x && y ? 1.0 : 0.0);
  });
}

AssocArray or_(const AssocArray& a, const AssocArray& b) {
  return merge_entries(a, b, [](const double*, const double*) { return Value(1.0); });
}

AssocArray matmul(const AssocArray& a_in, const AssocArray& b_in) {
  AssocArray a_proj;
  AssocArray b_proj;
  const AssocArray& a = projected(a_in, a_proj);
  const AssocArray& b = projected(b_in, b_proj);
  if (a.empty() || b.empty()) return {};

  // Inner dimension: a's column keys matched exactly against b's row keys.
  constexpr auto kNone = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> inner(a.col_keys().size(), kNone);
  {
    std::size_t i = 0;
    std::size_t j = 0;
    const auto& ac = a.col_keys();
    const auto& br = b.row_keys();
    while (i < ac.size() && j < br.size()) {
      if (ac[i] < br[j]) {
        ++i;
      } else if (br[j] < ac[i]) {
        ++j;
      } else {
        inner[i++] = static_cast<std::uint32_t>(j++);
      }
    }
  }

  std::vector<std::size_t> b_row_start(b.row_keys().size() + 1, 0);
  for (const auto& e : b.entries()) ++b_row_start[e.row + 1];
  std::partial_sum(b_row_start.begin(), b_row_start.end(), b_row_start.begin());

  std::vector<double> acc(b.col_keys().size(), 0.0);
  std::vector<char> hit(b.col_keys().size(), 0);
  std::vector<std::uint32_t> touched;
  std::vector<Entry> out;

  const auto& ea = a.entries();
  for (std::size_t k = 0; k < ea.size();) {
    const std::uint32_t row = ea[k].row;
    // a's entries within a row come in column-key order, so every C(i,j)
    // accumulates its terms in ascending inner-key order.
    for (; k < ea.size() && ea[k].row == row; ++k) {
      const auto m = inner[ea[k].col];
      if (m == kNone) continue;
      const double x = ea[k].value.number();
      for (std::size_t p = b_row_start[m]; p < b_row_start[m + 1]; ++p) {
        const auto& be = b.entries()[p];
        if (!hit[be.col]) {
          hit[be.col] = 1;
          touched.push_back(be.col);
        }
        acc[be.col] += x * be.value.number();
      }
    }
    std::sort(touched.begin(), touched.end());
    for (auto c : touched) {
      out.push_back(Entry{row, c, Value(acc[c])});
      acc[c] = 0.0;
      hit[c] = 0;
    }
    touched.clear();
  }
  return AssocArray::from_sorted_parts(a.row_keys(), b.col_keys(), std::move(out),
                                       ValueKind::numeric);
}

AssocArray transpose(const AssocArray& a) {
  std::vector<Entry> out;
  out.reserve(a.nnz());
  for (const auto& e : a.entries()) out.push_back(Entry{e.col, e.row, e.value});
  std::sort(out.begin(), out.end(), entry_less);
  return AssocArray::from_sorted_parts(a.col_keys(), a.row_keys(), std::move(out), a.value_kind());
}

AssocArray bfs_step(const AssocArray& a, std::span<const std::string> frontier) {
  std::vector<Triple> indicator;
  indicator.reserve(frontier.size());
  for (const auto& v : frontier) {
    indicator.push_back(Triple{std::string(kFrontierRow), v, Value(1.0)});
  }
  return matmul(AssocArray::from_triples(indicator), numeric_projection(a));
}

AssocArray apply_row_offset(const AssocArray& a, std::uint64_t offset, unsigned width) {
  std::vector<std::string> rows;
  rows.reserve(a.row_keys().size());
  for (const auto& k : a.row_keys()) {
    const std::uint64_t v = parse_key(k);
    if (v > std::numeric_limits<std::uint64_t>::max() - offset) {
      throw Error(Errc::encoding, "row key " + k + " plus offset overflows");
    }
    rows.push_back(pad_key(v + offset, width));
  }

  std::vector<Entry> entries = a.entries();
  if (!std::is_sorted(rows.begin(), rows.end()) ||
      std::adjacent_find(rows.begin(), rows.end()) != rows.end()) {
    // Unpadded input keys ('9' < '10' fails) change order once padded.
    std::vector<std::uint32_t> order(rows.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t x, std::uint32_t y) { return rows[x] < rows[y]; });
    std::vector<std::uint32_t> rank(rows.size());
    std::vector<std::string> sorted;
    sorted.reserve(rows.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) {
      if (!sorted.empty() && sorted.back() == rows[order[i]]) {
        throw Error(Errc::encoding, "row keys collide after offset at " + rows[order[i]]);
      }
      rank[order[i]] = i;
      sorted.push_back(rows[order[i]]);
    }
    for (auto& e : entries) e.row = rank[e.row];
    std::sort(entries.begin(), entries.end(), entry_less);
    rows = std::move(sorted);
  }
  return AssocArray::from_sorted_parts(std::move(rows), a.col_keys(), std::move(entries),
                                       a.value_kind());
}

}  // namespace d4mbench
