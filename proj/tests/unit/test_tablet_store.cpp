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

#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "d4mbench/error.hpp"
#include "d4mbench/merge_iterator.hpp"
#include "d4mbench/tablet_store.hpp"

using namespace d4mbench;

namespace {

StoreConfig servers(std::uint32_t n) {
  StoreConfig c;
  c.n_servers = n;
  return c;
}

std::vector<std::string> split_keys(int n) {
  std::vector<std::string> k;
  for (int i = 1; i <= n; ++i) k.push_back("k" + std::to_string(100 + i));
  return k;
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no Error thrown";
  return Errc::io;
}

}  // namespace

TEST(Store, CreateTable) {
  TabletStore s(servers(2));
  auto t = s.create_table("Tgraph");
  EXPECT_EQ(s.tablet_count(t), 1u);
  EXPECT_EQ(s.tablets_per_server(t), (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(s.locate(t, "anything"), (TabletLocation{0, 0}));
  EXPECT_EQ(code_of([&] { s.create_table("Tgraph"); }), Errc::duplicate_table);
  EXPECT_EQ(s.find_table("Tgraph"), t);
  EXPECT_FALSE(s.find_table("nope"));
}

TEST(Store, Options) {
  TabletStore s(servers(1));
  auto t = s.create_table("T");
  s.set_option(t, "tserver.compaction.minor.concurrent.max", "5");
  EXPECT_EQ(s.config().max_concurrent_minor_compactions, 5u);
  s.set_option(t, "table.walog.enabled", "false");
  EXPECT_FALSE(s.config().walog_enabled);
  EXPECT_EQ(code_of([&] { s.set_option(t, "bogus.option", "1"); }), Errc::unknown_option);
  EXPECT_EQ(code_of([&] { s.set_option(t, "TSERVER.compaction.minor.concurrent.max", "5"); }), Errc::unknown_option);
  EXPECT_EQ(code_of([&] { s.set_option(t, "table.walog.enabled", "no"); }), Errc::invalid_argument);
  EXPECT_EQ(code_of([&] { s.set_option(TableId{7}, "table.walog.enabled", "true"); }), Errc::unknown_table);
}

TEST(Store, ConfigValidation) {
  StoreConfig c;
  c.walog_cost_factor = 0.9;
  EXPECT_THROW(TabletStore{c}, Error);
  c = StoreConfig{};
  c.n_servers = 0;
  EXPECT_THROW(TabletStore{c}, Error);
}

TEST(Splits, AllStartOnOneServer) {
  TabletStore s(servers(4));
  auto t = s.create_table("T");
  const auto keys = split_keys(7);
  s.add_splits(t, keys);
  EXPECT_EQ(s.tablet_count(t), 8u);
  EXPECT_EQ(s.tablets_per_server(t), (std::vector<std::size_t>{8, 0, 0, 0}));
  s.add_splits(t, std::vector<std::string>{});
  EXPECT_EQ(s.tablet_count(t), 8u);
  EXPECT_EQ(code_of([&] { s.add_splits(t, std::vector<std::string>{"b", "a"}); }), Errc::invalid_argument);
  EXPECT_EQ(code_of([&] { s.add_splits(t, std::vector<std::string>{"k101"}); }), Errc::invalid_argument);
}

TEST(Balancer, EightTabletsFourServers) {
  TabletStore s(servers(4));
  auto t = s.create_table("T");
  s.add_splits(t, split_keys(7));
  SimClock clock;
  EXPECT_DOUBLE_EQ(s.run_balancer_until_stable(t, clock), 6.0 / 50.0);
  EXPECT_DOUBLE_EQ(clock.now(), 0.12);
  EXPECT_EQ(s.tablets_per_server(t), (std::vector<std::size_t>{2, 2, 2, 2}));
  EXPECT_EQ(s.run_balancer_until_stable(t, clock), 0.0);
  EXPECT_EQ(s.snapshot_metrics(clock).total.splits_migrated, 6u);
}

TEST(Balancer, CountsDifferByAtMostOne) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto n = static_cast<std::uint32_t>(1 + rng() % 9);
    TabletStore s(servers(n));
    auto t = s.create_table("T");
    s.add_splits(t, split_keys(static_cast<int>(rng() % 60)));
    SimClock clock;
    const double elapsed = s.run_balancer_until_stable(t, clock);
    auto counts = s.tablets_per_server(t);
    auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
    EXPECT_LE(*hi - *lo, 1u);
    EXPECT_DOUBLE_EQ(elapsed, s.snapshot_metrics(clock).total.splits_migrated / 50.0);
  }
}

TEST(Locate, SplitKeysAreInclusiveStarts) {
  TabletStore s(servers(1));
  auto t = s.create_table("T");
  s.add_splits(t, std::vector<std::string>{"b", "d"});
  EXPECT_EQ(s.locate(t, "a").tablet, 0u);
  EXPECT_EQ(s.locate(t, "b").tablet, 1u);
  EXPECT_EQ(s.locate(t, "c").tablet, 1u);
  EXPECT_EQ(s.locate(t, "d").tablet, 2u);
  EXPECT_EQ(s.locate(t, "zzz").tablet, 2u);
}

TEST(Locate, AgreesWithLinearScan) {
  std::mt19937_64 rng(5);
  auto rand_key = [&] {
    std::string k(1 + rng() % 4, 'a');
    for (auto& c : k) c = static_cast<char>('a' + rng() % 5);
    return k;
  };
  TabletStore s(servers(3));
  auto t = s.create_table("T");
  std::set<std::string> ks;
  while (ks.size() < 40) ks.insert(rand_key());
  s.add_splits(t, std::vector<std::string>(ks.begin(), ks.end()));
  SimClock clock;
  s.run_balancer_until_stable(t, clock);
  const SplitTable st = s.get_split_locations(t);
  for (int i = 0; i < 2000; ++i) {
    const auto key = rand_key();
    std::size_t want = SIZE_MAX;
    for (std::size_t tab = 0; tab < st.tablet_count(); ++tab) {
      const auto hi = st.tablet_high(tab);
      if (st.tablet_low(tab) <= key && (!hi || key < *hi)) {
        ASSERT_EQ(want, SIZE_MAX) << "two tablets contain " << key;
        want = tab;
      }
    }
    ASSERT_NE(want, SIZE_MAX);
    EXPECT_EQ(s.locate(t, key), (TabletLocation{st.server_of(want), want}));
  }
}

TEST(SplitFile, RoundTrip) {
  TabletStore s(servers(4));
  auto t = s.create_table("T");
  EXPECT_TRUE(s.get_split_locations(t).boundaries.empty());
  s.add_splits(t, split_keys(7));
  SimClock clock;
  s.run_balancer_until_stable(t, clock);
  const SplitTable st = s.get_split_locations(t);
  EXPECT_EQ(st.boundaries.size(), 7u);
  std::stringstream ss;
  write_split_table(ss, st);
  EXPECT_EQ(ss.str().substr(0, 7), "k101\t0\n");
  EXPECT_EQ(read_split_table(ss), st);
  std::stringstream missing("a\t0\n");
  EXPECT_EQ(code_of([&] { read_split_table(missing); }), Errc::parse);
  std::stringstream unsorted("b\t0\na\t0\n#first_tablet\t0\n");
  EXPECT_EQ(code_of([&] { read_split_table(unsorted); }), Errc::parse);
  EXPECT_EQ(code_of([] { read_split_file("/nonexistent/split.txt"); }), Errc::io);
}

TEST(Writer, Buffering) {
  TabletStore s(servers(1));
  auto t = s.create_table("T");
  auto w = s.open_batch_writer(t);
  EXPECT_EQ(w.buffered_count(), 0u);
  w.put(Triple{"0000000000000000001", "0000000000000000002", 1.0});
  EXPECT_EQ(w.buffered_count(), 1u);
  EXPECT_EQ(w.buffered_bytes(), 19u + 19u + 1u + 3u);
  EXPECT_EQ(w.blocks_sent(), 0u);
  EXPECT_TRUE(s.scan_all(t).empty());
  w.close();
  EXPECT_EQ(w.blocks_sent(), 1u);
  EXPECT_EQ(s.scan_all(t).size(), 1u);
  EXPECT_EQ(code_of([&] { w.put(Triple{"a", "b", 1.0}); }), Errc::writer_closed);
  EXPECT_EQ(code_of([&] { w.close(); }), Errc::writer_closed);
  EXPECT_EQ(code_of([&] { s.open_batch_writer(TableId{3}); }), Errc::unknown_table);
}

TEST(Writer, EmptyCloseAndIndependentBuffers) {
  TabletStore s(servers(1));
  auto t = s.create_table("T");
  auto a = s.open_batch_writer(t);
  auto b = s.open_batch_writer(t);
  a.put(Triple{"r", "c", 1.0});
  EXPECT_EQ(b.buffered_count(), 0u);
  b.close();
  EXPECT_EQ(b.blocks_sent(), 0u);
  a.close();
}

TEST(Writer, BlocksAtThreshold) {
  StoreConfig c;
  c.batch_block_bytes = 100;
  TabletStore s(c);
  auto t = s.create_table("T");
  auto w = s.open_batch_writer(t);
  // 4 + 3 + 1 + 3 = 11 bytes each; the tenth reaches 110.
  for (int i = 0; i < 9; ++i) w.put(Triple{"row" + std::to_string(i), "col", 1.0});
  EXPECT_EQ(w.blocks_sent(), 0u);
  w.put(Triple{"row9", "col", 1.0});
  EXPECT_EQ(w.blocks_sent(), 1u);
  EXPECT_EQ(w.buffered_count(), 0u);
}

TEST(Writer, LastWriteWinsAndCountsBoth) {
  TabletStore s(servers(1));
  auto t = s.create_table("T");
  auto w = s.open_batch_writer(t);
  w.put(Triple{"r", "c", 1.0});
  w.put(Triple{"r", "c", 2.0});
  w.close();
  auto snap = s.snapshot_table(t);
  EXPECT_EQ(snap.tablets[0].inserts_accepted, 2u);
  ASSERT_EQ(snap.tablets[0].entries.size(), 1u);
  EXPECT_EQ(snap.tablets[0].entries[0].val, Value(2.0));
}

TEST(Writer, EveryTripleLandsInItsRange) {
  StoreConfig c;
  c.n_servers = 3;
  c.memtable_flush_threshold = 5000;
  TabletStore s(c);
  auto t = s.create_table("T");
  std::vector<std::string> keys;
  for (int i = 1; i < 30; ++i) keys.push_back(std::to_string(100000 + i * 30000));
  s.add_splits(t, keys);
  SimClock clock;
  s.run_balancer_until_stable(t, clock);
  std::mt19937_64 rng(9);
  auto w = s.open_batch_writer(t);
  std::vector<Triple> batch;
  for (int i = 0; i < 1000000; ++i) {
    batch.push_back(Triple{std::to_string(100000 + rng() % 900000), std::to_string(rng() % 10), 1.0});
    if (batch.size() == 10000) {
      w.put(batch);
      batch.clear();
    }
  }
  w.put(batch);
  w.close();
  std::uint64_t accepted = 0;
  for (const auto& tab : s.snapshot_table(t).tablets) {
    accepted += tab.inserts_accepted;
    for (const auto& e : tab.entries) {
      ASSERT_GE(e.row, tab.low);
      if (tab.high) ASSERT_LT(e.row, *tab.high);
    }
  }
  EXPECT_EQ(accepted, 1000000u);
  EXPECT_EQ(s.snapshot_metrics(w.clock()).total.inserts_accepted, 1000000u);
}

TEST(Compaction, WavesRespectCap) {
  StoreConfig c;
  c.memtable_flush_threshold = 1;
  TabletStore s(c);
  auto t = s.create_table("T");
  s.set_option(t, kOptionCompactionMax, "5");
  s.add_splits(t, std::vector<std::string>{"b", "c", "d", "e", "f"});
  for (std::size_t i = 0; i < 6; ++i) s.inject_entry_for_testing(t, i, Triple{std::string(1, 'a' + i), "x", 1.0});
  EXPECT_EQ(s.queued_compactions(0), 6u);
  const auto before = s.scan_all(t);
  SimClock clock;
  auto r = s.run_minor_compactions(0, clock);
  EXPECT_EQ(r.executed, 6u);
  EXPECT_EQ(r.waves, (std::vector<std::size_t>{5, 1}));
  EXPECT_EQ(s.queued_compactions(0), 0u);
  EXPECT_EQ(s.scan_all(t), before);
  EXPECT_EQ(s.snapshot_metrics(clock).total.entries_flushed, 6u);
}

TEST(Compaction, DefaultCapOneWave) {
  StoreConfig c;
  c.memtable_flush_threshold = 1;
  TabletStore s(c);
  auto t = s.create_table("T");
  s.add_splits(t, std::vector<std::string>{"b", "c", "d"});
  for (std::size_t i = 0; i < 4; ++i) s.inject_entry_for_testing(t, i, Triple{std::string(1, 'a' + i), "x", 1.0});
  SimClock clock;
  EXPECT_EQ(s.run_minor_compactions(0, clock).waves, std::vector<std::size_t>{4});
}

TEST(Compaction, ConcurrentCallersNeverExceedCap) {
  StoreConfig c;
  c.memtable_flush_threshold = 1;
  c.max_concurrent_minor_compactions = 3;
  TabletStore s(c);
  auto t = s.create_table("T");
  std::vector<std::string> keys;
  for (int i = 1; i < 40; ++i) keys.push_back("k" + std::to_string(100 + i));
  s.add_splits(t, keys);
  std::vector<std::thread> threads;
  for (int th = 0; th < 4; ++th) {
    threads.emplace_back([&, th] {
      SimClock clock;
      for (int round = 0; round < 50; ++round) {
        for (std::size_t i = th; i < 40; i += 4) {
          s.inject_entry_for_testing(t, i, Triple{"k" + std::to_string(100 + i), std::to_string(round), 1.0});
        }
        s.run_minor_compactions(0, clock);
      }
    });
  }
  for (auto& th : threads) th.join();
  SimClock clock;
  s.run_minor_compactions(0, clock);
  auto m = s.snapshot_metrics(clock);
  EXPECT_LE(m.servers[0].compactions_running_peak, 3u);
  EXPECT_GE(m.servers[0].compactions_running_peak, 1u);
  EXPECT_EQ(s.scan_all(t).size(), 40u * 50u);
}

// Random interleaving of puts, compactions and splits against a std::map.
TEST(Scan, MatchesShadowMap) {
  std::mt19937_64 rng(42);
  StoreConfig c;
  c.n_servers = 2;
  c.memtable_flush_threshold = 7;
  c.batch_block_bytes = 64;
  TabletStore s(c);
  auto t = s.create_table("T");
  std::map<std::pair<std::string, std::string>, Value> shadow;
  auto key = [&] { return std::string(1, static_cast<char>('a' + rng() % 26)) + std::to_string(rng() % 10); };
  std::set<std::string> splits;
  SimClock clock;
  for (int step = 0; step < 3000; ++step) {
    const auto op = rng() % 20;
    if (op < 16) {
      auto w = s.open_batch_writer(t);
      const int n = 1 + static_cast<int>(rng() % 8);
      for (int i = 0; i < n; ++i) {
        Triple e{key(), std::to_string(rng() % 4), Value(static_cast<double>(1 + rng() % 100))};
        shadow.insert_or_assign({e.row, e.col}, e.val);
        w.put(e);
      }
      w.close();
    } else if (op < 18) {
      s.run_minor_compactions(static_cast<std::uint32_t>(rng() % 2), clock);
    } else if (op == 18 && splits.size() < 30) {
      auto k = key();
      if (splits.insert(k).second) s.add_splits(t, std::vector<std::string>{k});
    } else {
      s.run_balancer_until_stable(t, clock);
    }
    if (step % 100 == 99) {
      std::string lo = key(), hi = key();
      if (hi < lo) std::swap(lo, hi);
      std::vector<Triple> want;
      for (const auto& [k, v] : shadow) {
        if (lo <= k.first && k.first < hi) want.push_back(Triple{k.first, k.second, v});
      }
      ASSERT_EQ(s.scan(t, lo, hi), want);
    }
  }
  std::vector<Triple> all;
  for (const auto& [k, v] : shadow) all.push_back(Triple{k.first, k.second, v});
  EXPECT_EQ(s.scan_all(t), all);
  EXPECT_TRUE(s.scan(t, "m", "m").empty());
  EXPECT_EQ(code_of([&] { s.scan(t, "b", "a"); }), Errc::range);
}

TEST(Scan, EmptyTable) {
  TabletStore s(servers(1));
  auto t = s.create_table("T");
  EXPECT_TRUE(s.scan_all(t).empty());
}

TEST(Metrics, ZeroBeforeInserts) {
  TabletStore s(servers(2));
  s.create_table("T");
  auto m = s.snapshot_metrics(SimClock(10));
  EXPECT_EQ(m.total, ServerMetrics{});
  EXPECT_TRUE(m.series.empty());
  EXPECT_EQ(m.windowed_rate, 0.0);
}

// One writer, one entry per block, fixed per-entry cost: inserts arrive at
// exactly 1 / (client + server) per simulated second.
TEST(Metrics, WindowedRateOfConstantLoad) {
  StoreConfig c;
  c.walog_enabled = false;
  c.client_entry_seconds = 0.008;
  c.server_entry_seconds = 0.002;
  c.batch_block_bytes = 1;
  TabletStore s(c);
  auto t = s.create_table("T");
  auto w = s.open_batch_writer(t);
  for (int i = 0; i < 4000; ++i) w.put(Triple{"r" + std::to_string(i), "c", 1.0});
  w.close();
  const double rate = 1.0 / (0.008 + 0.002);
  auto m = s.snapshot_metrics(w.clock());
  EXPECT_EQ(m.total.inserts_accepted, 4000u);
  EXPECT_EQ(m.series.back().cumulative_inserts, 4000u);
  EXPECT_NEAR(m.windowed_rate, rate, 0.05 * rate);
  for (std::size_t i = 1; i < m.series.size(); ++i) {
    EXPECT_LT(m.series[i - 1].timestamp, m.series[i].timestamp);
    EXPECT_LE(m.series[i - 1].cumulative_inserts, m.series[i].cumulative_inserts);
  }
}

TEST(Throughput, WindowedRateFunction) {
  std::vector<InsertEvent> ev;
  for (int i = 1; i <= 100; ++i) ev.push_back(InsertEvent{static_cast<double>(i), 10});
  auto series = cumulative_series(ev);
  EXPECT_EQ(cumulative_at(series, 0.5), 0u);
  EXPECT_EQ(cumulative_at(series, 50), 500u);
  EXPECT_DOUBLE_EQ(windowed_rate(series, 100, 30), 10.0);
  auto pts = resample(series, 10, 30);
  EXPECT_EQ(pts.size(), 11u);
  EXPECT_EQ(pts.back().cumulative_inserts, 1000u);
  EXPECT_DOUBLE_EQ(pts[1].windowed_rate, 100.0 / 30.0);
}

TEST(Wal, OnIsSlowerByTheCostFactor) {
  auto run = [](bool wal) {
    StoreConfig c;
    c.n_servers = 2;
    TabletStore s(c);
    auto t = s.create_table("T");
    s.set_option(t, kOptionWalogEnabled, wal ? "true" : "false");
    s.add_splits(t, std::vector<std::string>{"5"});
    SimClock clock;
    s.run_balancer_until_stable(t, clock);
    auto w = s.open_batch_writer(t);
    for (int i = 0; i < 50000; ++i) w.put(Triple{std::to_string(i), "c", 1.0});
    w.close();
    return w.clock().now();
  };
  const double on = run(true), off = run(false);
  EXPECT_GE(on, off);
  EXPECT_NEAR(on / off, 1.3, 0.13);
}

TEST(MergeIterator, NewestWins) {
  std::vector<Triple> old{{"a", "x", 1.0}, {"b", "x", 1.0}};
  std::vector<Triple> mid{{"a", "x", 2.0}, {"c", "x", 2.0}};
  std::vector<Triple> neu{{"b", "x", 3.0}};
  auto merged = merge_runs({old, mid, neu});
  std::vector<Triple> want{{"a", "x", 2.0}, {"b", "x", 3.0}, {"c", "x", 2.0}};
  EXPECT_EQ(merged, want);
  EXPECT_TRUE(merge_runs({}).empty());
}
