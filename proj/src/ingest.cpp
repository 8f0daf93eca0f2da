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

#include "d4mbench/ingest.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <limits>
#include <map>
#include <thread>

#include "d4mbench/assoc.hpp"
#include "d4mbench/error.hpp"
#include "d4mbench/keys.hpp"
#include "d4mbench/rng.hpp"

namespace d4mbench {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Base graph as an associative array plus the multiplicity of each of its
// entries in the raw edge list (same order as to_triples).
struct BaseGraph {
  AssocArray assoc;
  std::vector<std::uint32_t> multiplicity;
};

BaseGraph make_base(const graph500::EdgeList& edges, unsigned width) {
  BaseGraph base;
  base.assoc = graph500::edges_to_assoc(edges, width);
  std::vector<graph500::Edge> sorted = edges.edges;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    base.multiplicity.push_back(static_cast<std::uint32_t>(j - i));
    i = j;
  }
  if (base.multiplicity.size() != base.assoc.nnz()) {
    throw Error(Errc::invalid_argument, "edge multiplicities do not line up with the associative array");
  }
  return base;
}

std::vector<Triple> offset_inserts(const BaseGraph& base, std::uint64_t offset, unsigned width) {
  std::vector<Triple> unique = to_triples(apply_row_offset(base.assoc, offset, width));
  std::vector<Triple> out;
  std::size_t total = 0;
  for (auto m : base.multiplicity) total += m;
  out.reserve(total);
  for (std::size_t i = 0; i < unique.size(); ++i) {
    for (std::uint32_t k = 0; k < base.multiplicity[i]; ++k) out.push_back(unique[i]);
  }
  return out;
}

graph500::EdgeList generate_for(const BenchmarkConfig& cfg, std::uint32_t pid, std::size_t tablet) {
  const std::uint64_t seed = cfg.regenerate_per_tablet ? tablet_seed(cfg, pid, tablet) : worker_seed(cfg, pid);
  return graph500::generate(cfg.generator(seed));
}

}  // namespace

unsigned BenchmarkConfig::key_width() const noexcept { return decimal_digits(n_row() - 1); }

StoreConfig BenchmarkConfig::effective_store() const {
  StoreConfig s = store;
  s.n_servers = n_server;
  return s;
}

graph500::GeneratorConfig BenchmarkConfig::generator(std::uint64_t s) const {
  graph500::GeneratorConfig g;
  g.scale = scale;
  g.edge_factor = edge_factor;
  g.seed = s;
  return g;
}

void BenchmarkConfig::validate() const {
  auto bad = [](const std::string& what) { throw Error(Errc::invalid_argument, what); };
  if (n_server == 0) bad("n_server must be positive");
  if (n_ingest == 0) bad("n_ingest must be positive");
  if (n_tablet == 0) bad("n_tablet must be positive");
  if (compaction_cap == 0) bad("compaction_cap must be positive");
  if (table_name.empty()) bad("table_name must be non-empty");
  if (!(run_seconds >= 0)) bad("run_seconds must be >= 0");
  if (!(sample_interval_seconds > 0)) bad("sample_interval_seconds must be positive");
  generator(seed).validate();
  // N_row has to fit in 64 bits.
  const long double rows = static_cast<long double>(n_server) * n_ingest * n_tablet *
                           static_cast<long double>(n_vertices());
  if (rows > static_cast<long double>(std::numeric_limits<std::uint64_t>::max())) bad("N_row overflows 64 bits");
  if (n_p() > std::numeric_limits<std::uint32_t>::max()) bad("too many workers");
  effective_store().validate();
}

std::string hostname_of(std::uint32_t server) { return "tserver" + std::to_string(server); }

WorkerIdentity WorkerIdentity::make(std::uint32_t pid, const BenchmarkConfig& cfg) {
  if (pid >= cfg.n_p()) throw Error(Errc::invalid_argument, "pid " + std::to_string(pid) + " >= N_p");
  const std::uint32_t server = pid / cfg.n_ingest;
  return WorkerIdentity{pid, static_cast<std::uint32_t>(cfg.n_p()), server, hostname_of(server)};
}

SplitTable compute_global_splits(const BenchmarkConfig& cfg) {
  const std::uint64_t n = cfg.n_vertices();
  const std::uint64_t total = cfg.n_tablets_total();
  const std::uint64_t per_server = std::uint64_t{cfg.n_ingest} * cfg.n_tablet;
  const unsigned width = cfg.key_width();
  SplitTable out;
  out.first_tablet_server = 0;
  out.boundaries.reserve(total - 1);
  for (std::uint64_t t = 1; t < total; ++t) {
    out.boundaries.push_back(SplitPoint{pad_key(t * n, width), static_cast<std::uint32_t>(t / per_server)});
  }
  return out;
}

std::vector<std::size_t> assign_local_splits(const WorkerIdentity& me, const SplitTable& splits,
                                             std::uint32_t n_ingest) {
  if (n_ingest == 0) throw Error(Errc::invalid_argument, "n_ingest must be positive");
  const std::uint32_t rank = me.pid % n_ingest;
  std::vector<std::size_t> out;
  std::size_t local = 0;
  for (std::size_t t = 0; t < splits.tablet_count(); ++t) {
    if (splits.server_of(t) != me.server) continue;
    if (local % n_ingest == rank) out.push_back(t);
    ++local;
  }
  if (local == 0) throw Error(Errc::no_local_tablets, me.hostname + " hosts no tablets");
  return out;
}

std::uint64_t worker_seed(const BenchmarkConfig& cfg, std::uint32_t pid) {
  return derive_seed(cfg.seed, pid);
}

std::uint64_t tablet_seed(const BenchmarkConfig& cfg, std::uint32_t pid, std::size_t tablet) {
  return derive_seed(worker_seed(cfg, pid), std::uint64_t{1} + tablet);
}

std::vector<Triple> tablet_inserts(const graph500::EdgeList& edges, std::uint64_t row_offset,
                                   unsigned key_width) {
  return offset_inserts(make_base(edges, key_width), row_offset, key_width);
}

SetupResult setup_phase(const BenchmarkConfig& cfg, const std::filesystem::path& split_file,
                        std::unique_ptr<TabletStore>& store) {
  try {
    cfg.validate();
    store = std::make_unique<TabletStore>(cfg.effective_store());
  } catch (const SetupError&) {
    throw;
  } catch (const std::exception& e) {
    throw SetupError(1, e.what());
  }
  return setup_phase(*store, cfg, split_file);
}

SetupResult setup_phase(TabletStore& store, const BenchmarkConfig& cfg, const std::filesystem::path& split_file) {
  int step = 1;
  try {
    cfg.validate();
    if (store.n_servers() != cfg.n_server) {
      throw Error(Errc::invalid_argument, "store has " + std::to_string(store.n_servers()) +
                                              " servers, config wants " + std::to_string(cfg.n_server));
    }
    step = 2;
    store.set_option(kOptionCompactionMax, std::to_string(cfg.compaction_cap));
    step = 3;
    SetupResult out;
    out.table = store.create_table(cfg.table_name);
    step = 4;
    store.set_option(out.table, kOptionWalogEnabled, cfg.walog_enabled ? "true" : "false");
    step = 5;
    const SplitTable planned = compute_global_splits(cfg);
    std::vector<std::string> keys;
    keys.reserve(planned.boundaries.size());
    for (const auto& b : planned.boundaries) keys.push_back(b.key);
    store.add_splits(out.table, keys);
    SimClock clock;
    out.balance_seconds = store.run_balancer_until_stable(out.table, clock);
    step = 6;
    out.splits = store.get_split_locations(out.table);
    write_split_file(split_file, out.splits);
    out.split_file = split_file;
    return out;
  } catch (const SetupError&) {
    throw;
  } catch (const std::exception& e) {
    throw SetupError(step, e.what());
  }
}

WorkerReport execution_phase(TabletStore& store, TableId table, const WorkerIdentity& me,
                             const BenchmarkConfig& cfg, const std::filesystem::path& split_file) {
  const auto t0 = std::chrono::steady_clock::now();
  // 1. split file
  SplitTable splits;
  try {
    splits = read_split_file(split_file);
  } catch (const Error& e) {
    throw Error(Errc::startup, std::string("worker ") + std::to_string(me.pid) + ": " + e.what());
  }
  const SplitTable planned = compute_global_splits(cfg);
  bool stale = splits.boundaries.size() != planned.boundaries.size() || splits.first_tablet_server >= cfg.n_server;
  for (std::size_t i = 0; !stale && i < splits.boundaries.size(); ++i) {
    stale = splits.boundaries[i].key != planned.boundaries[i].key || splits.boundaries[i].server >= cfg.n_server;
  }
  if (stale) throw Error(Errc::startup, "split file " + split_file.string() + " does not match the configuration");

  // 2. local tablets
  WorkerReport report;
  report.pid = me.pid;
  report.server = me.server;
  report.tablets = assign_local_splits(me, splits, cfg.n_ingest);

  // 3-5. generate, offset, insert
  const unsigned width = cfg.key_width();
  const std::uint64_t n = cfg.n_vertices();
  BatchWriter writer = store.open_batch_writer(table, 0.0);
  std::optional<BaseGraph> shared;
  for (std::size_t t : report.tablets) {
    std::optional<BaseGraph> own;
    const BaseGraph* base;
    if (cfg.regenerate_per_tablet) {
      own = make_base(generate_for(cfg, me.pid, t), width);
      base = &*own;
    } else {
      if (!shared) shared = make_base(generate_for(cfg, me.pid, t), width);
      base = &*shared;
    }
    const std::vector<Triple> inserts = offset_inserts(*base, t * n, width);
    writer.put(inserts);
    report.entries_inserted += inserts.size();
  }
  writer.close();
  report.elapsed_seconds = writer.clock().now();
  report.rate = report.elapsed_seconds > 0 ? static_cast<double>(report.entries_inserted) / report.elapsed_seconds : 0.0;
  report.wall_seconds = seconds_since(t0);
  return report;
}

BenchmarkRun run_benchmark(const BenchmarkConfig& cfg, const std::filesystem::path& split_file) {
  const auto t0 = std::chrono::steady_clock::now();
  BenchmarkRun run;
  SetupResult setup = setup_phase(cfg, split_file, run.store);
  run.table = setup.table;
  run.splits = setup.splits;

  const auto n_p = static_cast<std::uint32_t>(cfg.n_p());
  std::vector<WorkerReport> reports(n_p);
  std::vector<std::exception_ptr> errors(n_p);
  std::vector<std::thread> threads;
  threads.reserve(n_p);
  try {
    for (std::uint32_t pid = 0; pid < n_p; ++pid) {
      threads.emplace_back([&, pid] {
        try {
          reports[pid] = execution_phase(*run.store, run.table, WorkerIdentity::make(pid, cfg), cfg, split_file);
        } catch (...) {
          errors[pid] = std::current_exception();
        }
      });
    }
  } catch (const std::exception& e) {
    for (auto& th : threads) th.join();
    throw SetupError(7, e.what());
  }
  for (auto& th : threads) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  IngestReport& r = run.report;
  r.workers = std::move(reports);
  r.balance_seconds = setup.balance_seconds;
  double rate_sum = 0.0;
  for (const auto& w : r.workers) {
    r.total_entries += w.entries_inserted;
    r.elapsed_seconds = std::max(r.elapsed_seconds, w.elapsed_seconds);
    rate_sum += w.rate;
  }
  r.aggregate_rate = r.elapsed_seconds > 0 ? static_cast<double>(r.total_entries) / r.elapsed_seconds : 0.0;
  r.per_server_rate = r.aggregate_rate / cfg.n_server;
  r.per_worker_mean_rate = rate_sum / static_cast<double>(n_p);

  const StoreMetrics m = run.store->snapshot_metrics(SimClock(r.elapsed_seconds));
  r.series = m.series;
  if (m.total.inserts_accepted != cfg.planned_entries() || r.total_entries != cfg.planned_entries()) {
    throw Error(Errc::conservation, "store accepted " + std::to_string(m.total.inserts_accepted) +
                                        " inserts, workers sent " + std::to_string(r.total_entries) +
                                        ", planned " + std::to_string(cfg.planned_entries()));
  }
  r.wall_seconds = seconds_since(t0);
  return run;
}

bool VerificationReport::passed() const noexcept {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

VerificationReport verify_ingest(const TableSnapshot& table, const BenchmarkConfig& cfg) {
  CheckResult inserts{std::string(kCheckInserts), true, ""};
  CheckResult distinct{std::string(kCheckDistinctKeys), true, ""};
  CheckResult contained{std::string(kCheckContainment), true, ""};
  auto fail = [](CheckResult& c, const std::string& why) {
    if (c.passed) c.detail = why;  // keep the first reason
    c.passed = false;
  };

  const std::uint64_t m = cfg.n_edges();
  const std::uint64_t n = cfg.n_vertices();
  const unsigned width = cfg.key_width();

  if (table.tablets.size() != cfg.n_tablets_total()) {
    const std::string why = "table has " + std::to_string(table.tablets.size()) + " tablets, expected " +
                            std::to_string(cfg.n_tablets_total());
    fail(inserts, why);
    fail(distinct, why);
  }

  // (c) containment
  for (const auto& tab : table.tablets) {
    for (const auto& e : tab.entries) {
      if (e.row < tab.low || (tab.high && e.row >= *tab.high)) {
        fail(contained, "row " + e.row + " outside tablet " + std::to_string(tab.id));
        break;
      }
    }
  }

  if (table.tablets.size() == cfg.n_tablets_total()) {
    // (a) insert counts
    for (const auto& tab : table.tablets) {
      if (tab.inserts_accepted != m) {
        fail(inserts, "tablet " + std::to_string(tab.id) + " accepted " + std::to_string(tab.inserts_accepted) +
                          ", expected " + std::to_string(m));
      }
    }

    // (b) distinct keys: recompute who owned each tablet from the placement.
    SplitTable layout;
    layout.first_tablet_server = table.tablets.front().server;
    for (std::size_t i = 1; i < table.tablets.size(); ++i) {
      layout.boundaries.push_back(SplitPoint{table.tablets[i].low, table.tablets[i].server});
    }
    std::vector<std::int64_t> owner(table.tablets.size(), -1);
    for (std::uint32_t pid = 0; pid < cfg.n_p(); ++pid) {
      const WorkerIdentity me = WorkerIdentity::make(pid, cfg);
      if (me.server >= cfg.n_server) continue;
      try {
        for (auto t : assign_local_splits(me, layout, cfg.n_ingest)) owner[t] = pid;
      } catch (const Error&) {
        // a server without tablets shows up below as unowned tablets
      }
    }
    std::map<std::uint32_t, BaseGraph> bases;
    for (std::size_t t = 0; t < table.tablets.size(); ++t) {
      const auto& tab = table.tablets[t];
      if (owner[t] < 0) {
        fail(distinct, "tablet " + std::to_string(t) + " has no owning worker");
        continue;
      }
      const auto pid = static_cast<std::uint32_t>(owner[t]);
      const BaseGraph* base;
      std::optional<BaseGraph> own;
      if (cfg.regenerate_per_tablet) {
        own = make_base(generate_for(cfg, pid, t), width);
        base = &*own;
      } else {
        auto it = bases.find(pid);
        if (it == bases.end()) it = bases.emplace(pid, make_base(generate_for(cfg, pid, t), width)).first;
        base = &it->second;
      }
      const std::vector<Triple> expected = to_triples(apply_row_offset(base->assoc, t * n, width));
      bool same = expected.size() == tab.entries.size();
      for (std::size_t i = 0; same && i < expected.size(); ++i) {
        same = expected[i].row == tab.entries[i].row && expected[i].col == tab.entries[i].col;
      }
      if (!same) {
        fail(distinct, "tablet " + std::to_string(t) + " holds " + std::to_string(tab.entries.size()) +
                           " distinct keys, expected " + std::to_string(expected.size()));
      }
    }
  }

  VerificationReport out;
  out.checks = {inserts, distinct, contained};
  return out;
}

VerificationReport verify_ingest(const TabletStore& store, TableId table, const BenchmarkConfig& cfg) {
  return verify_ingest(store.snapshot_table(table), cfg);
}

}  // namespace d4mbench
