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

#include <gtest/gtest.h>

#include "d4mbench/assoc.hpp"
#include "d4mbench/error.hpp"
#include "oracle/dense_assoc.hpp"

using namespace d4mbench;

namespace {

AssocArray make(std::vector<Triple> t, Collision c = Collision::keep_last) { return AssocArray::from_triples(t, c); }

std::vector<std::string> keys_of(const AssocArray& a) { return a.row_keys(); }

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no Error thrown";
  return Errc::io;
}

// Every invariant the canonical form promises.
void expect_well_formed(const AssocArray& a) {
  const auto& r = a.row_keys();
  const auto& c = a.col_keys();
  for (std::size_t i = 1; i < r.size(); ++i) EXPECT_LT(r[i - 1], r[i]);
  for (std::size_t i = 1; i < c.size(); ++i) EXPECT_LT(c[i - 1], c[i]);
  std::vector<char> row_used(r.size(), 0), col_used(c.size(), 0);
  for (std::size_t i = 0; i < a.entries().size(); ++i) {
    const auto& e = a.entries()[i];
    ASSERT_LT(e.row, r.size());
    ASSERT_LT(e.col, c.size());
    row_used[e.row] = col_used[e.col] = 1;
    EXPECT_EQ(e.value.kind(), a.value_kind());
    EXPECT_FALSE(e.value.is_numeric() && e.value.number() == 0.0);
    if (i > 0) {
      const auto& p = a.entries()[i - 1];
      EXPECT_TRUE(p.row < e.row || (p.row == e.row && p.col < e.col));
    }
  }
  for (char u : row_used) EXPECT_TRUE(u);
  for (char u : col_used) EXPECT_TRUE(u);
  if (a.empty()) EXPECT_EQ(a.value_kind(), ValueKind::numeric);
}

const AssocArray kPeople = make({{"alice", "bob", 47.0}, {"alice", "carl", 3.0}, {"bob", "carl", 47.0},
                                 {"carl", "alice", 1.0}});

}  // namespace

TEST(FromTriples, TextValue) {
  auto a = make({{"alice", "bob", "cited"}});
  EXPECT_EQ(a.get("alice", "bob"), Value("cited"));
  EXPECT_EQ(a.value_kind(), ValueKind::textual);
}

TEST(FromTriples, EmptyInput) {
  auto a = make({});
  EXPECT_TRUE(a.empty());
  EXPECT_TRUE(a.row_keys().empty());
  EXPECT_TRUE(a.col_keys().empty());
}

TEST(FromTriples, SumPolicy) {
  auto a = make({{"a", "x", 1.0}, {"a", "x", 2.0}}, Collision::sum);
  EXPECT_EQ(a.get("a", "x"), Value(3.0));
}

TEST(FromTriples, KeepLast) {
  auto a = make({{"a", "x", 1.0}, {"a", "x", 2.0}});
  EXPECT_EQ(a.get("a", "x"), Value(2.0));
}

TEST(FromTriples, Errors) {
  EXPECT_EQ(code_of([] { make({{"a", "x", 1.0}, {"b", "x", "t"}}); }), Errc::kind_mismatch);
  EXPECT_EQ(code_of([] { make({{"a", "x", "t"}}, Collision::sum); }), Errc::policy);
  EXPECT_EQ(code_of([] { make({{"", "x", 1.0}}); }), Errc::invalid_argument);
  EXPECT_THROW(Value(""), Error);
  EXPECT_THROW(Value(std::numeric_limits<double>::infinity()), Error);
}

TEST(FromTriples, ZeroIsNotStored) {
  auto a = make({{"a", "x", 0.0}, {"b", "y", 1.0}});
  EXPECT_EQ(a.nnz(), 1u);
  EXPECT_EQ(keys_of(a), std::vector<std::string>{"b"});
  expect_well_formed(a);
}

TEST(ToTriples, ExampleAndOrder) {
  auto a = make({{"alice", "bob", 47.0}});
  auto t = to_triples(a);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0], (Triple{"alice", "bob", 47.0}));
  EXPECT_TRUE(to_triples(make({})).empty());
  auto two = to_triples(make({{"b", "x", 1.0}, {"a", "y", 2.0}}));
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[0].row, "a");
  EXPECT_EQ(two[1].row, "b");
}

TEST(Queries, ByKeys) {
  std::vector<std::string> ab{"alice", "bob"};
  EXPECT_EQ(keys_of(rows_by_keys(kPeople, ab)), ab);
  EXPECT_TRUE(rows_by_keys(kPeople, std::vector<std::string>{}).empty());
  EXPECT_TRUE(rows_by_keys(kPeople, std::vector<std::string>{"zeke"}).empty());
}

TEST(Queries, ByPrefix) {
  auto a = make({{"albert", "x", 1.0}, {"alice", "x", 1.0}, {"bob", "x", 1.0}});
  EXPECT_EQ(keys_of(rows_by_prefix(a, "al")), (std::vector<std::string>{"albert", "alice"}));
  EXPECT_EQ(rows_by_prefix(a, ""), a);
  EXPECT_TRUE(rows_by_prefix(a, "zz").empty());
}

TEST(Queries, ByRange) {
  EXPECT_EQ(keys_of(rows_by_range(kPeople, "alice", "bob")), (std::vector<std::string>{"alice", "bob"}));
  EXPECT_EQ(keys_of(rows_by_range(kPeople, "bob", "bob")), std::vector<std::string>{"bob"});
  EXPECT_TRUE(rows_by_range(kPeople, "a", "aa").empty());
  EXPECT_EQ(code_of([] { rows_by_range(kPeople, "bob", "alice"); }), Errc::range);
}

TEST(Queries, ByPosition) {
  EXPECT_EQ(keys_of(rows_by_position(kPeople, 1, 2)), (std::vector<std::string>{"alice", "bob"}));
  auto one = make({{"r", "c", 1.0}});
  EXPECT_EQ(rows_by_position(one, 1, 1), one);
  EXPECT_TRUE(rows_by_position(kPeople, 5, 9).empty());
  EXPECT_EQ(code_of([] { rows_by_position(kPeople, 0, 1); }), Errc::index);
}

TEST(Queries, FilterValue) {
  auto f = filter_value(kPeople, Value(47.0));
  EXPECT_EQ(f.nnz(), 2u);
  EXPECT_EQ(f.col_keys(), (std::vector<std::string>{"bob", "carl"}));
  EXPECT_TRUE(filter_value(kPeople, Value(99.0)).empty());
  auto same = make({{"a", "x", 5.0}, {"b", "y", 5.0}});
  EXPECT_EQ(filter_value(same, Value(5.0)), same);
  EXPECT_TRUE(filter_value(kPeople, Value("47")).empty());
}

TEST(Algebra, AddSub) {
  EXPECT_EQ(add(kPeople, AssocArray{}), kPeople);
  EXPECT_EQ(add(make({{"a", "x", 2.0}}), make({{"a", "x", 3.0}})).get("a", "x"), Value(5.0));
  EXPECT_TRUE(sub(kPeople, kPeople).empty());
}

TEST(Algebra, AndOr) {
  auto aa = and_(kPeople, kPeople);
  EXPECT_EQ(aa.nnz(), kPeople.nnz());
  for (const auto& e : aa.entries()) EXPECT_EQ(e.value, Value(1.0));
  EXPECT_EQ(or_(kPeople, AssocArray{}).nnz(), kPeople.nnz());
  auto x = make({{"a", "x", 1.0}});
  auto y = make({{"b", "y", 1.0}});
  EXPECT_TRUE(and_(x, y).empty());
  EXPECT_EQ(or_(x, y).nnz(), 2u);
}

TEST(Algebra, Matmul) {
  auto a = make({{"a", "x", 1.0}, {"a", "y", 1.0}});
  auto b = make({{"x", "b", 1.0}, {"y", "b", 1.0}});
  EXPECT_EQ(matmul(a, b).get("a", "b"), Value(2.0));
  EXPECT_TRUE(matmul(a, AssocArray{}).empty());
}

TEST(Algebra, TextualOperandsAreProjected) {
  auto t = make({{"alice", "bob", "cited"}});
  EXPECT_EQ(numeric_projection(t).get("alice", "bob"), Value(1.0));
  EXPECT_EQ(numeric_projection(kPeople), kPeople);
  EXPECT_EQ(add(t, t).get("alice", "bob"), Value(2.0));
}

TEST(Algebra, Transpose) {
  auto a = make({{"alice", "bob", 1.0}});
  EXPECT_EQ(transpose(a).get("bob", "alice"), Value(1.0));
  EXPECT_TRUE(transpose(AssocArray{}).empty());
  EXPECT_EQ(transpose(transpose(kPeople)), kPeople);
}

TEST(Bfs, Neighbors) {
  auto g = make({{"alice", "bob", 1.0}, {"alice", "carl", 1.0}, {"bob", "carl", 1.0}});
  auto n = bfs_step(g, std::vector<std::string>{"alice"});
  EXPECT_EQ(n.row_keys(), std::vector<std::string>{std::string(kFrontierRow)});
  EXPECT_EQ(n.col_keys(), (std::vector<std::string>{"bob", "carl"}));
  EXPECT_TRUE(bfs_step(g, std::vector<std::string>{}).empty());
  auto both = bfs_step(g, std::vector<std::string>{"alice", "bob"});
  EXPECT_EQ(both.get(kFrontierRow, "carl"), Value(2.0));
}

TEST(RowOffset, Examples) {
  auto a = make({{"0", "c", 1.0}, {"1", "c", 1.0}});
  EXPECT_EQ(apply_row_offset(a, 131072, 7).row_keys(), (std::vector<std::string>{"0131072", "0131073"}));
  EXPECT_EQ(apply_row_offset(a, 0, 3).row_keys(), (std::vector<std::string>{"000", "001"}));
  EXPECT_EQ(code_of([] { apply_row_offset(make({{"x1", "c", 1.0}}), 0, 3); }), Errc::parse);
  EXPECT_EQ(code_of([] { apply_row_offset(make({{"99", "c", 1.0}}), 1, 2); }), Errc::encoding);
}

TEST(RowOffset, UnpaddedKeysReorder) {
  // "10" < "9" as strings; after padding 9 comes first.
  auto a = make({{"10", "c", 1.0}, {"9", "d", 2.0}});
  auto b = apply_row_offset(a, 0, 2);
  EXPECT_EQ(b.row_keys(), (std::vector<std::string>{"09", "10"}));
  EXPECT_EQ(b.get("09", "d"), Value(2.0));
  expect_well_formed(b);
}

// Randomized comparison against the brute-force model. The acceptance suite
// runs the full 1000-case version.
TEST(Oracle, RandomOperations) {
  oracle::Gen g(20260101);
  for (int i = 0; i < 200; ++i) {
    const bool text = g.below(4) == 0;
    const auto ta = g.triples(32, text);
    const auto tb = g.triples(32, false);
    const auto a = make(ta);
    const auto b = make(tb);
    const auto da = oracle::keep_last(ta);
    const auto db = oracle::keep_last(tb);
    expect_well_formed(a);
    ASSERT_EQ(to_triples(a), da.triples());
    ASSERT_EQ(to_triples(make(tb, Collision::sum)), oracle::summed(tb).triples());
    ASSERT_EQ(to_triples(add(a, b)), oracle::combine(da, db, 1).triples());
    ASSERT_EQ(to_triples(sub(a, b)), oracle::combine(da, db, -1).triples());
    ASSERT_EQ(to_triples(and_(a, b)), oracle::pattern_and(da, db).triples());
    ASSERT_EQ(to_triples(or_(a, b)), oracle::pattern_or(da, db).triples());
    ASSERT_EQ(to_triples(matmul(a, b)), oracle::matmul(da, db).triples());
    ASSERT_EQ(to_triples(transpose(a)), oracle::transpose(da).triples());
    const auto lo = g.key(), hi = g.key();
    if (lo <= hi) {
      ASSERT_EQ(to_triples(rows_by_range(a, lo, hi)),
                oracle::select_rows(da, [&](const std::string& r) { return lo <= r && r <= hi; }).triples());
    }
    const std::size_t s = 1 + g.below(8), e = s + g.below(8);
    ASSERT_EQ(to_triples(rows_by_position(a, s, e)), oracle::rows_by_position(da, s, e).triples());
  }
}

TEST(Oracle, MatmulDistributesOverAdd) {
  oracle::Gen g(7);
  for (int i = 0; i < 100; ++i) {
    // Integer-valued so both sides are exact.
    auto ints = [&] {
      auto t = g.triples(6, false, 20);
      for (auto& x : t) x.val = Value(static_cast<double>(1 + g.below(5)));
      return make(t);
    };
    auto a = ints(), b = ints(), c = ints();
    EXPECT_EQ(matmul(a, add(b, c)), add(matmul(a, b), matmul(a, c)));
  }
}
