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
#include <memory>
#include <string>
#include <vector>

#include "d4mbench/graph500.hpp"
#include "d4mbench/split_table.hpp"
#include "d4mbench/tablet_store.hpp"
#include "d4mbench/throughput.hpp"

// Weak-scaling ingest benchmark. Each of N_p = n_server * n_ingest workers
// owns n_tablet tablets, each receiving one copy of a SCALE R-MAT graph with
// its rows shifted into the tablet's range:
//
//   N      = 2^scale           vertices per base graph
//   M      = edge_factor * N   inserts per tablet
//   N_row  = n_server * n_ingest * n_tablet * N
//   tablet t covers rows [t*N, (t+1)*N), keys zero-padded to digits(N_row - 1)

namespace d4mbench {

struct BenchmarkConfig {
  std::uint32_t n_server = 1;
  std::uint32_t n_ingest = 1;
  std::uint32_t n_tablet = 32;
  unsigned scale = 17;
  unsigned edge_factor = 8;
  std::uint64_t seed = 1;
  std::uint32_t compaction_cap = 5;
  bool walog_enabled = false;
  std::string table_name = "Tgraph";
  double run_seconds = 0.0;         // soft wall-clock budget per run, 0 = none
  double sample_interval_seconds = 1.0;
  bool regenerate_per_tablet = false;
  StoreConfig store;                // n_servers is taken from n_server

  std::uint64_t n_vertices() const noexcept { return std::uint64_t{1} << scale; }
  std::uint64_t n_edges() const noexcept { return edge_factor * n_vertices(); }
  std::uint64_t n_p() const noexcept { return std::uint64_t{n_server} * n_ingest; }
  std::uint64_t n_tablets_total() const noexcept { return n_p() * n_tablet; }
  std::uint64_t n_row() const noexcept { return n_tablets_total() * n_vertices(); }
  std::uint64_t planned_entries() const noexcept { return n_tablets_total() * n_edges(); }
  unsigned key_width() const noexcept;

  /// Store configuration actually used by a run (n_servers = n_server).
  StoreConfig effective_store() const;
  graph500::GeneratorConfig generator(std::uint64_t seed) const;

  /// Throws Errc::invalid_argument.
  void validate() const;

  friend bool operator==(const BenchmarkConfig&, const BenchmarkConfig&) = default;
};

struct WorkerIdentity {
  std::uint32_t pid = 0;
  std::uint32_t n_p = 1;
  std::uint32_t server = 0;
  std::string hostname;

  static WorkerIdentity make(std::uint32_t pid, const BenchmarkConfig& cfg);
};

std::string hostname_of(std::uint32_t server);

/// Planned tablet layout: boundary t-1 is pad(t*N), tablet t intended for
/// server t / (n_ingest * n_tablet).
SplitTable compute_global_splits(const BenchmarkConfig& cfg);

/// Tablets hosted on me.server in key order; local rank r = pid % n_ingest
/// takes every n_ingest-th one starting at r. Throws Errc::no_local_tablets.
std::vector<std::size_t> assign_local_splits(const WorkerIdentity& me, const SplitTable& splits,
                                             std::uint32_t n_ingest);

/// Seed of the base graph for worker `pid`, and for tablet `tablet` when the
/// graph is regenerated per tablet.
std::uint64_t worker_seed(const BenchmarkConfig& cfg, std::uint32_t pid);
std::uint64_t tablet_seed(const BenchmarkConfig& cfg, std::uint32_t pid, std::size_t tablet);

/// The triples written for one tablet, in insert order, duplicate edges
/// repeated (size == M).
std::vector<Triple> tablet_inserts(const graph500::EdgeList& edges, std::uint64_t row_offset,
                                   unsigned key_width);

struct SetupResult {
  TableId table;
  SplitTable splits;
  std::filesystem::path split_file;
  double balance_seconds = 0.0;
};

/// Steps 1-6 of the setup recipe on a fresh store. Failures are SetupError
/// carrying the step. The store is returned through `store`.
SetupResult setup_phase(const BenchmarkConfig& cfg, const std::filesystem::path& split_file,
                        std::unique_ptr<TabletStore>& store);
/// Steps 2-6 on an existing store.
SetupResult setup_phase(TabletStore& store, const BenchmarkConfig& cfg,
                        const std::filesystem::path& split_file);

struct WorkerReport {
  std::uint32_t pid = 0;
  std::uint32_t server = 0;
  std::vector<std::size_t> tablets;
  std::uint64_t entries_inserted = 0;
  double elapsed_seconds = 0.0;  // simulated
  double rate = 0.0;             // entries_inserted / elapsed_seconds
  double wall_seconds = 0.0;

  friend bool operator==(const WorkerReport&, const WorkerReport&) = default;
};

/// Execution steps 1-5 for one worker. Throws Errc::startup when the split
/// file is missing or does not match cfg.
WorkerReport execution_phase(TabletStore& store, TableId table, const WorkerIdentity& me,
                             const BenchmarkConfig& cfg, const std::filesystem::path& split_file);

struct IngestReport {
  std::vector<WorkerReport> workers;
  std::uint64_t total_entries = 0;
  double elapsed_seconds = 0.0;  // simulated, slowest worker
  double aggregate_rate = 0.0;
  double per_server_rate = 0.0;
  double per_worker_mean_rate = 0.0;
  double balance_seconds = 0.0;
  double wall_seconds = 0.0;
  std::vector<ThroughputSample> series;

  friend bool operator==(const IngestReport&, const IngestReport&) = default;
};

struct BenchmarkRun {
  IngestReport report;
  std::unique_ptr<TabletStore> store;
  TableId table;
  SplitTable splits;
};

/// Setup, then all N_p workers on their own threads. Throws
/// Errc::conservation if the store did not accept exactly planned_entries().
BenchmarkRun run_benchmark(const BenchmarkConfig& cfg, const std::filesystem::path& split_file);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;

  friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool passed() const noexcept;

  friend bool operator==(const VerificationReport&, const VerificationReport&) = default;
};

inline constexpr std::string_view kCheckInserts = "inserts_per_tablet";
inline constexpr std::string_view kCheckDistinctKeys = "distinct_keys";
inline constexpr std::string_view kCheckContainment = "range_containment";

/// (a) every tablet accepted exactly M inserts, (b) each tablet holds exactly
/// the distinct keys of its offset base graph, (c) every key lies in its
/// tablet's range.
VerificationReport verify_ingest(const TableSnapshot& table, const BenchmarkConfig& cfg);
VerificationReport verify_ingest(const TabletStore& store, TableId table, const BenchmarkConfig& cfg);

}  // namespace d4mbench
