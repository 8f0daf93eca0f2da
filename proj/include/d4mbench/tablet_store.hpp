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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "d4mbench/split_table.hpp"
#include "d4mbench/throughput.hpp"
#include "d4mbench/value.hpp"

// In-process simulation of a range-partitioned sorted key-value store with
// tablets, splits, a rate-limited balancer, batched writers, bounded minor
// compactions and a toggleable write-ahead log.
//
// "Servers" are shards inside one process. Data operations are real and
// thread-safe; timing is simulated:
//
//   block service time = f * (n * client_entry_seconds)          client side
//                      + f * (n_s * server_entry_seconds)        per server s
//   f = walog_cost_factor when the WAL is on, 1 otherwise
//
// Server work is reserved on a per-server capacity timeline (fixed-width
// buckets, each holding at most one bucket-width of work), so writers
// sharing a server slow down once its capacity is exhausted. A writer's
// clock advances to the latest server completion of each block it sends.

namespace d4mbench {

struct StoreConfig {
  std::uint32_t n_servers = 1;
  double balancer_rate = 50.0;  // tablet migrations per simulated second
  std::uint32_t max_concurrent_minor_compactions = 4;
  bool walog_enabled = true;
  double walog_cost_factor = 1.3;
  std::size_t memtable_flush_threshold = 100000;  // entries per tablet
  std::size_t batch_block_bytes = 500000;
  double averaging_window_seconds = 30.0;

  // Simulated cost model.
  double client_entry_seconds = 8e-6;  // 100k entries/s per writer when uncontended
  double server_entry_seconds = 2e-6;  // 500k entries/s per server
  double flush_entry_seconds = 1e-7;
  double timeline_bucket_seconds = 1e-3;

  void validate() const;

  friend bool operator==(const StoreConfig&, const StoreConfig&) = default;
};

inline constexpr std::string_view kOptionCompactionMax = "tserver.compaction.minor.concurrent.max";
inline constexpr std::string_view kOptionWalogEnabled = "table.walog.enabled";

struct TableId {
  std::uint32_t index = 0;
  friend bool operator==(const TableId&, const TableId&) = default;
};

struct TabletLocation {
  std::uint32_t server = 0;
  std::size_t tablet = 0;  // position in key order
  friend bool operator==(const TabletLocation&, const TabletLocation&) = default;
};

struct ServerMetrics {
  std::uint64_t inserts_accepted = 0;
  std::uint64_t entries_flushed = 0;
  std::uint64_t compactions_run = 0;
  std::uint64_t compactions_queued_peak = 0;
  std::uint64_t compactions_running_peak = 0;
  std::uint64_t splits_migrated = 0;

  friend bool operator==(const ServerMetrics&, const ServerMetrics&) = default;
};

struct StoreMetrics {
  double timestamp = 0.0;
  std::vector<ServerMetrics> servers;
  ServerMetrics total;
  std::vector<ThroughputSample> series;  // cumulative inserts up to timestamp
  double window_seconds = 0.0;
  double windowed_rate = 0.0;
};

struct CompactionResult {
  std::size_t executed = 0;
  std::vector<std::size_t> waves;  // compactions per wave, each <= the cap
  double seconds = 0.0;
};

struct TabletSnapshot {
  std::size_t id = 0;
  std::string low;                  // inclusive, empty for the first tablet
  std::optional<std::string> high;  // exclusive, nullopt for the last tablet
  std::uint32_t server = 0;
  std::uint64_t inserts_accepted = 0;
  std::vector<Triple> entries;      // merged view, sorted by (row, col)

  friend bool operator==(const TabletSnapshot&, const TabletSnapshot&) = default;
};

struct TableSnapshot {
  std::string name;
  std::vector<TabletSnapshot> tablets;

  friend bool operator==(const TableSnapshot&, const TableSnapshot&) = default;
};

class BatchWriter;

class TabletStore {
 public:
  explicit TabletStore(StoreConfig config);
  ~TabletStore();
  TabletStore(const TabletStore&) = delete;
  TabletStore& operator=(const TabletStore&) = delete;

  /// Current configuration including options changed through set_option.
  StoreConfig config() const;
  std::uint32_t n_servers() const noexcept;

  /// New table with one unbounded tablet on server 0.
  TableId create_table(const std::string& name);
  std::optional<TableId> find_table(std::string_view name) const;
  std::string table_name(TableId table) const;

  /// Accepts exactly kOptionCompactionMax (positive integer) and
  /// kOptionWalogEnabled ("true"/"false").
  void set_option(TableId table, std::string_view key, std::string_view value);
  /// Store-wide form, usable before any table exists.
  void set_option(std::string_view key, std::string_view value);

  /// Splits at strictly increasing keys. New tablets stay on the server of
  /// the tablet they were cut from.
  void add_splits(TableId table, std::span<const std::string> keys);

  /// Migrates tablets toward a contiguous, count-balanced layout (tablet t of
  /// T goes to server floor(t * S / T)) at balancer_rate migrations per
  /// simulated second. A table whose per-server counts already differ by at
  /// most one is left alone. Returns the simulated seconds spent and advances
  /// `clock` by them.
  double run_balancer_until_stable(TableId table, SimClock& clock);

  SplitTable get_split_locations(TableId table) const;
  TabletLocation locate(TableId table, std::string_view row) const;
  std::size_t tablet_count(TableId table) const;
  std::vector<std::size_t> tablets_per_server(TableId table) const;

  /// Writer whose simulated clock starts at `start_time`.
  BatchWriter open_batch_writer(TableId table, double start_time = 0.0);

  /// Flushes queued memtables of `server` in waves of at most the current cap.
  CompactionResult run_minor_compactions(std::uint32_t server, SimClock& clock);
  std::size_t queued_compactions(std::uint32_t server) const;

  /// Newest value per key with lo <= row < hi, sorted by (row, col).
  std::vector<Triple> scan(TableId table, std::string_view lo, std::string_view hi) const;
  std::vector<Triple> scan_all(TableId table) const;

  StoreMetrics snapshot_metrics(const SimClock& clock) const;
  TableSnapshot snapshot_table(TableId table) const;

  /// Writes straight into a tablet's memtable, bypassing routing. Test hook.
  void inject_entry_for_testing(TableId table, std::size_t tablet, Triple entry);

 private:
  friend class BatchWriter;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Client-side buffer that ships triples to the store in fixed-size blocks.
class BatchWriter {
 public:
  BatchWriter(BatchWriter&&) noexcept;
  BatchWriter& operator=(BatchWriter&&) noexcept;
  ~BatchWriter();

  void put(std::span<const Triple> triples);
  void put(const Triple& triple);
  /// Sends whatever is buffered. Further puts or closes throw Errc::writer_closed.
  void close();

  bool is_open() const noexcept { return open_; }
  std::size_t buffered_bytes() const noexcept { return buffered_bytes_; }
  std::size_t buffered_count() const noexcept { return buffer_.size(); }
  std::size_t block_bytes() const noexcept { return block_bytes_; }
  std::uint64_t blocks_sent() const noexcept { return blocks_sent_; }
  std::uint64_t entries_sent() const noexcept { return entries_sent_; }
  const SimClock& clock() const noexcept { return clock_; }

 private:
  friend class TabletStore;
  BatchWriter(TabletStore& store, TableId table, double start_time, std::size_t block_bytes);
  void send_block();

  TabletStore* store_;
  TableId table_;
  std::vector<Triple> buffer_;
  std::size_t buffered_bytes_ = 0;
  std::size_t block_bytes_;
  bool open_ = true;
  std::uint64_t blocks_sent_ = 0;
  std::uint64_t entries_sent_ = 0;
  SimClock clock_;
};

}  // namespace d4mbench
