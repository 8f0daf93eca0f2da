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

#include "d4mbench/tablet_store.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <condition_variable>
#include <deque>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <utility>

#include "d4mbench/error.hpp"
#include "d4mbench/merge_iterator.hpp"

namespace d4mbench {

void StoreConfig::validate() const {
  auto bad = [](const std::string& what) { throw Error(Errc::invalid_argument, what); };
  auto positive = [](double x) { return std::isfinite(x) && x > 0; };
  if (n_servers == 0) bad("n_servers must be positive");
  if (!positive(balancer_rate)) bad("balancer_rate must be positive");
  if (max_concurrent_minor_compactions == 0) bad("max_concurrent_minor_compactions must be positive");
  if (!std::isfinite(walog_cost_factor) || walog_cost_factor < 1.0) bad("walog_cost_factor must be >= 1");
  if (memtable_flush_threshold == 0) bad("memtable_flush_threshold must be positive");
  if (batch_block_bytes == 0) bad("batch_block_bytes must be positive");
  if (!positive(averaging_window_seconds)) bad("averaging_window_seconds must be positive");
  for (double c : {client_entry_seconds, server_entry_seconds, flush_entry_seconds}) {
    if (!std::isfinite(c) || c < 0) bad("per-entry costs must be finite and non-negative");
  }
  if (!positive(timeline_bucket_seconds)) bad("timeline_bucket_seconds must be positive");
}

namespace {

using Key = std::pair<std::string, std::string>;

struct Tablet {
  std::string low;
  std::optional<std::string> high;
  std::uint32_t server = 0;
  std::mutex mu;
  std::map<Key, Value> memtable;
  std::vector<std::vector<Triple>> runs;  // oldest first
  std::uint64_t inserts_accepted = 0;
  bool queued = false;

  bool contains(std::string_view row) const {
    return low <= row && (!high || row < *high);
  }
};

struct Table {
  std::string name;
  mutable std::shared_mutex mu;
  std::vector<std::unique_ptr<Tablet>> tablets;  // key order

  std::size_t index_of(std::string_view row) const {
    auto it = std::upper_bound(tablets.begin(), tablets.end(), row,
                               [](std::string_view r, const std::unique_ptr<Tablet>& t) { return r < t->low; });
    return static_cast<std::size_t>(it - tablets.begin()) - 1;
  }
};

// Fluid capacity timeline: bucket k covers [k*width, (k+1)*width) and can
// absorb at most `width` seconds of work.
class ServerTimeline {
 public:
  explicit ServerTimeline(double width) : width_(width) {}

  double reserve(double start, double work) {
    if (work <= 0) return start;
    auto k = static_cast<std::size_t>(std::floor(start / width_));
    double remaining = work;
    for (;; ++k) {
      if (k >= used_.size()) used_.resize(std::max(k + 1, used_.size() * 2), 0.0);
      const double bucket_start = static_cast<double>(k) * width_;
      const double t = std::max(start, bucket_start);
      const double room = std::min(width_ - used_[k], bucket_start + width_ - t);
      if (room <= 0) continue;
      const double take = std::min(room, remaining);
      used_[k] += take;
      remaining -= take;
      if (remaining <= 1e-15) return std::max(start + work, bucket_start + used_[k]);
    }
  }

 private:
  double width_;
  std::vector<double> used_;
};

struct Pending {
  Table* table;
  Tablet* tablet;
};

struct Server {
  explicit Server(double bucket) : timeline(bucket) {}

  mutable std::mutex mu;
  std::condition_variable cv;
  std::size_t running = 0;
  std::deque<Pending> queue;
  ServerMetrics metrics;
  ServerTimeline timeline;
};

std::vector<Triple> freeze(const std::map<Key, Value>& memtable) {
  std::vector<Triple> out;
  out.reserve(memtable.size());
  for (const auto& [k, v] : memtable) out.push_back(Triple{k.first, k.second, v});
  return out;
}

}  // namespace

struct TabletStore::Impl {
  explicit Impl(StoreConfig c) : config(std::move(c)) {
    for (std::uint32_t s = 0; s < config.n_servers; ++s) {
      servers.push_back(std::make_unique<Server>(config.timeline_bucket_seconds));
    }
  }

  mutable std::mutex config_mu;
  StoreConfig config;

  mutable std::shared_mutex tables_mu;
  std::vector<std::unique_ptr<Table>> tables;

  std::vector<std::unique_ptr<Server>> servers;

  mutable std::mutex events_mu;
  std::vector<InsertEvent> events;

  StoreConfig current_config() const {
    std::lock_guard lock(config_mu);
    return config;
  }

  Table& table(TableId id) const {
    std::shared_lock lock(tables_mu);
    if (id.index >= tables.size()) throw Error(Errc::unknown_table, "no table with id " + std::to_string(id.index));
    return *tables[id.index];
  }

  void enqueue(Table& t, Tablet& tablet) {
    // caller holds tablet.mu
    if (tablet.queued) return;
    tablet.queued = true;
    Server& s = *servers[tablet.server];
    std::lock_guard lock(s.mu);
    s.queue.push_back(Pending{&t, &tablet});
    s.metrics.compactions_queued_peak =
        std::max<std::uint64_t>(s.metrics.compactions_queued_peak, s.queue.size());
  }

  std::vector<Triple> scan_range(const Table& t, std::string_view lo,
                                 std::optional<std::string_view> hi) const {
    std::shared_lock lock(t.mu);
    std::vector<Triple> out;
    std::size_t first = t.index_of(lo);
    for (std::size_t i = first; i < t.tablets.size(); ++i) {
      Tablet& tablet = *t.tablets[i];
      if (hi && tablet.low >= *hi) break;
      std::lock_guard tl(tablet.mu);
      std::vector<Triple> mem = freeze(tablet.memtable);
      std::vector<std::span<const Triple>> runs(tablet.runs.begin(), tablet.runs.end());
      runs.emplace_back(mem);
      for (MergingIterator it(std::move(runs)); it.valid(); it.next()) {
        const Triple& e = it.current();
        if (e.row < lo) continue;
        if (hi && e.row >= *hi) break;
        out.push_back(e);
      }
    }
    return out;
  }
};

TabletStore::TabletStore(StoreConfig config) {
  config.validate();
  impl_ = std::make_unique<Impl>(std::move(config));
}

TabletStore::~TabletStore() = default;

StoreConfig TabletStore::config() const { return impl_->current_config(); }

std::uint32_t TabletStore::n_servers() const noexcept {
  return static_cast<std::uint32_t>(impl_->servers.size());
}

TableId TabletStore::create_table(const std::string& name) {
  if (name.empty()) throw Error(Errc::invalid_argument, "table name must be non-empty");
  std::unique_lock lock(impl_->tables_mu);
  for (const auto& t : impl_->tables) {
    if (t->name == name) throw Error(Errc::duplicate_table, "table already exists: " + name);
  }
  auto t = std::make_unique<Table>();
  t->name = name;
  t->tablets.push_back(std::make_unique<Tablet>());
  impl_->tables.push_back(std::move(t));
  return TableId{static_cast<std::uint32_t>(impl_->tables.size() - 1)};
}

std::optional<TableId> TabletStore::find_table(std::string_view name) const {
  std::shared_lock lock(impl_->tables_mu);
  for (std::size_t i = 0; i < impl_->tables.size(); ++i) {
    if (impl_->tables[i]->name == name) return TableId{static_cast<std::uint32_t>(i)};
  }
  return std::nullopt;
}

std::string TabletStore::table_name(TableId table) const { return impl_->table(table).name; }

void TabletStore::set_option(TableId table, std::string_view key, std::string_view value) {
  impl_->table(table);
  set_option(key, value);
}

void TabletStore::set_option(std::string_view key, std::string_view value) {
  if (key == kOptionCompactionMax) {
    std::uint32_t cap = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), cap);
    if (ec != std::errc() || ptr != value.data() + value.size() || cap == 0) {
      throw Error(Errc::invalid_argument, std::string(key) + " needs a positive integer, got '" +
                                              std::string(value) + "'");
    }
    {
      std::lock_guard lock(impl_->config_mu);
      impl_->config.max_concurrent_minor_compactions = cap;
    }
    for (auto& s : impl_->servers) {
      std::lock_guard lock(s->mu);
      s->cv.notify_all();
    }
  } else if (key == kOptionWalogEnabled) {
    bool on;
    if (value == "true") {
      on = true;
    } else if (value == "false") {
      on = false;
    } else {
      throw Error(Errc::invalid_argument, std::string(key) + " must be true or false");
    }
    std::lock_guard lock(impl_->config_mu);
    impl_->config.walog_enabled = on;
  } else {
    throw Error(Errc::unknown_option, "unknown option: " + std::string(key));
  }
}

void TabletStore::add_splits(TableId table, std::span<const std::string> keys) {
  Table& t = impl_->table(table);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (keys[i].empty()) throw Error(Errc::invalid_argument, "split key must be non-empty");
    if (i > 0 && !(keys[i - 1] < keys[i])) {
      throw Error(Errc::invalid_argument, "split keys must be strictly increasing");
    }
  }
  std::unique_lock lock(t.mu);
  for (const auto& k : keys) {
    const std::size_t i = t.index_of(k);
    if (t.tablets[i]->low == k) throw Error(Errc::invalid_argument, "split already exists: " + k);
  }
  std::vector<std::unique_ptr<Tablet>> out;
  out.reserve(t.tablets.size() + keys.size());
  std::size_t next = 0;
  for (auto& tablet : t.tablets) {
    Tablet* cur = tablet.get();
    out.push_back(std::move(tablet));
    while (next < keys.size() && cur->contains(keys[next])) {
      const std::string& k = keys[next++];
      auto piece = std::make_unique<Tablet>();
      piece->low = k;
      piece->high = cur->high;
      piece->server = cur->server;
      cur->high = k;
      std::lock_guard tl(cur->mu);
      auto cut = cur->memtable.lower_bound(Key{k, std::string()});
      piece->memtable.insert(std::make_move_iterator(cut), std::make_move_iterator(cur->memtable.end()));
      cur->memtable.erase(cut, cur->memtable.end());
      for (auto& run : cur->runs) {
        auto at = std::lower_bound(run.begin(), run.end(), k,
                                   [](const Triple& e, const std::string& key) { return e.row < key; });
        if (at == run.end()) continue;
        piece->runs.emplace_back(std::make_move_iterator(at), std::make_move_iterator(run.end()));
        run.erase(at, run.end());
      }
      cur = piece.get();
      out.push_back(std::move(piece));
    }
  }
  t.tablets = std::move(out);
}

double TabletStore::run_balancer_until_stable(TableId table, SimClock& clock) {
  Table& t = impl_->table(table);
  const auto n = n_servers();
  const double rate = config().balancer_rate;

  std::vector<std::pair<Tablet*, std::uint32_t>> moves;
  {
    std::shared_lock lock(t.mu);
    std::vector<std::size_t> counts(n, 0);
    for (const auto& tablet : t.tablets) ++counts[tablet->server];
    const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
    if (*hi - *lo <= 1) return 0.0;
    const std::size_t total = t.tablets.size();
    for (std::size_t i = 0; i < total; ++i) {
      const auto target = static_cast<std::uint32_t>(i * n / total);
      if (t.tablets[i]->server != target) moves.emplace_back(t.tablets[i].get(), target);
    }
  }
  for (auto [tablet, target] : moves) {
    std::unique_lock lock(t.mu);
    std::lock_guard tl(tablet->mu);
    const std::uint32_t from = tablet->server;
    if (tablet->queued) {
      Server& src = *impl_->servers[from];
      std::lock_guard sl(src.mu);
      auto it = std::find_if(src.queue.begin(), src.queue.end(),
                             [&](const Pending& p) { return p.tablet == tablet; });
      if (it != src.queue.end()) {
        src.queue.erase(it);
        Server& dst = *impl_->servers[target];
        std::lock_guard dl(dst.mu);
        dst.queue.push_back(Pending{&t, tablet});
        dst.metrics.compactions_queued_peak =
            std::max<std::uint64_t>(dst.metrics.compactions_queued_peak, dst.queue.size());
      }
    }
    tablet->server = target;
    Server& dst = *impl_->servers[target];
    std::lock_guard dl(dst.mu);
    ++dst.metrics.splits_migrated;
  }
  const double elapsed = static_cast<double>(moves.size()) / rate;
  clock.advance(elapsed);
  return elapsed;
}

SplitTable TabletStore::get_split_locations(TableId table) const {
  const Table& t = impl_->table(table);
  std::shared_lock lock(t.mu);
  SplitTable out;
  out.first_tablet_server = t.tablets.front()->server;
  for (std::size_t i = 1; i < t.tablets.size(); ++i) {
    out.boundaries.push_back(SplitPoint{t.tablets[i]->low, t.tablets[i]->server});
  }
  return out;
}

TabletLocation TabletStore::locate(TableId table, std::string_view row) const {
  const Table& t = impl_->table(table);
  std::shared_lock lock(t.mu);
  const std::size_t i = t.index_of(row);
  return TabletLocation{t.tablets[i]->server, i};
}

std::size_t TabletStore::tablet_count(TableId table) const {
  const Table& t = impl_->table(table);
  std::shared_lock lock(t.mu);
  return t.tablets.size();
}

std::vector<std::size_t> TabletStore::tablets_per_server(TableId table) const {
  const Table& t = impl_->table(table);
  std::shared_lock lock(t.mu);
  std::vector<std::size_t> out(n_servers(), 0);
  for (const auto& tablet : t.tablets) ++out[tablet->server];
  return out;
}

BatchWriter TabletStore::open_batch_writer(TableId table, double start_time) {
  impl_->table(table);
  return BatchWriter(*this, table, start_time, config().batch_block_bytes);
}

CompactionResult TabletStore::run_minor_compactions(std::uint32_t server, SimClock& clock) {
  if (server >= n_servers()) throw Error(Errc::index, "no server " + std::to_string(server));
  Server& s = *impl_->servers[server];
  const double flush_cost = config().flush_entry_seconds;
  CompactionResult result;
  for (;;) {
    std::vector<Pending> wave;
    {
      std::unique_lock lock(s.mu);
      if (s.queue.empty()) break;
      const std::size_t cap = config().max_concurrent_minor_compactions;
      const std::size_t k = std::min(cap, s.queue.size());
      wave.assign(s.queue.begin(), s.queue.begin() + static_cast<std::ptrdiff_t>(k));
      s.queue.erase(s.queue.begin(), s.queue.begin() + static_cast<std::ptrdiff_t>(k));
      s.cv.wait(lock, [&] {
        return s.running + k <= config().max_concurrent_minor_compactions || s.running == 0;
      });
      s.running += k;
      s.metrics.compactions_running_peak =
          std::max<std::uint64_t>(s.metrics.compactions_running_peak, s.running);
    }
    std::size_t largest = 0;
    std::uint64_t flushed = 0;
    for (const Pending& p : wave) {
      std::shared_lock tl(p.table->mu);
      std::lock_guard lock(p.tablet->mu);
      p.tablet->queued = false;
      if (p.tablet->memtable.empty()) continue;
      largest = std::max(largest, p.tablet->memtable.size());
      flushed += p.tablet->memtable.size();
      p.tablet->runs.push_back(freeze(p.tablet->memtable));
      p.tablet->memtable.clear();
    }
    {
      std::lock_guard lock(s.mu);
      s.running -= wave.size();
      s.metrics.compactions_run += wave.size();
      s.metrics.entries_flushed += flushed;
      s.cv.notify_all();
    }
    const double dt = static_cast<double>(largest) * flush_cost;
    clock.advance(dt);
    result.seconds += dt;
    result.executed += wave.size();
    result.waves.push_back(wave.size());
  }
  return result;
}

std::size_t TabletStore::queued_compactions(std::uint32_t server) const {
  if (server >= n_servers()) throw Error(Errc::index, "no server " + std::to_string(server));
  std::lock_guard lock(impl_->servers[server]->mu);
  return impl_->servers[server]->queue.size();
}

std::vector<Triple> TabletStore::scan(TableId table, std::string_view lo, std::string_view hi) const {
  if (hi < lo) throw Error(Errc::range, "scan range has lo > hi");
  return impl_->scan_range(impl_->table(table), lo, hi);
}

std::vector<Triple> TabletStore::scan_all(TableId table) const {
  return impl_->scan_range(impl_->table(table), std::string_view(), std::nullopt);
}

StoreMetrics TabletStore::snapshot_metrics(const SimClock& clock) const {
  StoreMetrics m;
  m.timestamp = clock.now();
  m.window_seconds = config().averaging_window_seconds;
  for (const auto& s : impl_->servers) {
    std::lock_guard lock(s->mu);
    m.servers.push_back(s->metrics);
  }
  for (const auto& s : m.servers) {
    m.total.inserts_accepted += s.inserts_accepted;
    m.total.entries_flushed += s.entries_flushed;
    m.total.compactions_run += s.compactions_run;
    m.total.splits_migrated += s.splits_migrated;
    m.total.compactions_queued_peak = std::max(m.total.compactions_queued_peak, s.compactions_queued_peak);
    m.total.compactions_running_peak = std::max(m.total.compactions_running_peak, s.compactions_running_peak);
  }
  std::vector<InsertEvent> events;
  {
    std::lock_guard lock(impl_->events_mu);
    for (const auto& e : impl_->events) {
      if (e.timestamp <= m.timestamp) events.push_back(e);
    }
  }
  m.series = cumulative_series(std::move(events));
  m.windowed_rate = windowed_rate(m.series, m.timestamp, m.window_seconds);
  return m;
}

TableSnapshot TabletStore::snapshot_table(TableId table) const {
  const Table& t = impl_->table(table);
  std::shared_lock lock(t.mu);
  TableSnapshot out;
  out.name = t.name;
  for (std::size_t i = 0; i < t.tablets.size(); ++i) {
    Tablet& tablet = *t.tablets[i];
    std::lock_guard tl(tablet.mu);
    TabletSnapshot snap;
    snap.id = i;
    snap.low = tablet.low;
    snap.high = tablet.high;
    snap.server = tablet.server;
    snap.inserts_accepted = tablet.inserts_accepted;
    std::vector<Triple> mem = freeze(tablet.memtable);
    std::vector<std::span<const Triple>> runs(tablet.runs.begin(), tablet.runs.end());
    runs.emplace_back(mem);
    snap.entries = merge_runs(std::move(runs));
    out.tablets.push_back(std::move(snap));
  }
  return out;
}

void TabletStore::inject_entry_for_testing(TableId table, std::size_t tablet, Triple entry) {
  Table& t = impl_->table(table);
  const auto threshold = config().memtable_flush_threshold;
  std::shared_lock lock(t.mu);
  if (tablet >= t.tablets.size()) throw Error(Errc::index, "no tablet " + std::to_string(tablet));
  Tablet& target = *t.tablets[tablet];
  std::lock_guard tl(target.mu);
  target.memtable.insert_or_assign(Key{std::move(entry.row), std::move(entry.col)}, std::move(entry.val));
  if (target.memtable.size() >= threshold) impl_->enqueue(t, target);
}

// BatchWriter

BatchWriter::BatchWriter(TabletStore& store, TableId table, double start_time, std::size_t block_bytes)
    : store_(&store), table_(table), block_bytes_(block_bytes), clock_(start_time) {}

BatchWriter::BatchWriter(BatchWriter&& other) noexcept
    : store_(other.store_),
      table_(other.table_),
      buffer_(std::move(other.buffer_)),
      buffered_bytes_(other.buffered_bytes_),
      block_bytes_(other.block_bytes_),
      open_(other.open_),
      blocks_sent_(other.blocks_sent_),
      entries_sent_(other.entries_sent_),
      clock_(other.clock_) {
  other.open_ = false;
  other.buffer_.clear();
  other.buffered_bytes_ = 0;
}

BatchWriter& BatchWriter::operator=(BatchWriter&& other) noexcept {
  if (this != &other) {
    if (open_) {
      try {
        close();
      } catch (...) {
      }
    }
    store_ = other.store_;
    table_ = other.table_;
    buffer_ = std::move(other.buffer_);
    buffered_bytes_ = other.buffered_bytes_;
    block_bytes_ = other.block_bytes_;
    open_ = other.open_;
    blocks_sent_ = other.blocks_sent_;
    entries_sent_ = other.entries_sent_;
    clock_ = other.clock_;
    other.open_ = false;
    other.buffer_.clear();
    other.buffered_bytes_ = 0;
  }
  return *this;
}

BatchWriter::~BatchWriter() {
  if (!open_) return;
  try {
    close();
  } catch (...) {
    // nothing sensible to do from a destructor
  }
}

void BatchWriter::put(const Triple& triple) {
  if (!open_) throw Error(Errc::writer_closed, "put on a closed batch writer");
  buffered_bytes_ += serialized_size(triple.row, triple.col, triple.val.to_string());
  buffer_.push_back(triple);
  if (buffered_bytes_ >= block_bytes_) send_block();
}

void BatchWriter::put(std::span<const Triple> triples) {
  for (const auto& t : triples) put(t);
}

void BatchWriter::close() {
  if (!open_) throw Error(Errc::writer_closed, "batch writer already closed");
  open_ = false;
  if (!buffer_.empty()) send_block();
}

void BatchWriter::send_block() {
  auto& impl = *store_->impl_;
  Table& t = impl.table(table_);
  const StoreConfig cfg = impl.current_config();
  const double f = cfg.walog_enabled ? cfg.walog_cost_factor : 1.0;
  const std::size_t n = buffer_.size();

  std::vector<std::uint64_t> per_server(impl.servers.size(), 0);
  {
    std::shared_lock lock(t.mu);
    // Group by tablet so each tablet lock is taken once per block.
    std::vector<std::pair<std::size_t, std::size_t>> order;  // (tablet, buffer index)
    order.reserve(n);
    for (std::size_t i = 0; i < n; ++i) order.emplace_back(t.index_of(buffer_[i].row), i);
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    for (std::size_t a = 0; a < order.size();) {
      std::size_t b = a;
      Tablet& tablet = *t.tablets[order[a].first];
      std::lock_guard tl(tablet.mu);
      for (; b < order.size() && order[b].first == order[a].first; ++b) {
        Triple& e = buffer_[order[b].second];
        tablet.memtable.insert_or_assign(Key{std::move(e.row), std::move(e.col)}, std::move(e.val));
      }
      const std::uint64_t count = b - a;
      tablet.inserts_accepted += count;
      per_server[tablet.server] += count;
      {
        Server& s = *impl.servers[tablet.server];
        std::lock_guard sl(s.mu);
        s.metrics.inserts_accepted += count;
      }
      if (tablet.memtable.size() >= cfg.memtable_flush_threshold) impl.enqueue(t, tablet);
      a = b;
    }
  }

  // Simulated service time.
  const double start = clock_.now() + f * static_cast<double>(n) * cfg.client_entry_seconds;
  double finish = start;
  for (std::size_t s = 0; s < per_server.size(); ++s) {
    if (per_server[s] == 0) continue;
    Server& srv = *impl.servers[s];
    std::lock_guard sl(srv.mu);
    finish = std::max(finish, srv.timeline.reserve(
                                  start, f * static_cast<double>(per_server[s]) * cfg.server_entry_seconds));
  }
  clock_.advance_to(finish);

  for (std::uint32_t s = 0; s < per_server.size(); ++s) {
    if (per_server[s] > 0 && store_->queued_compactions(s) > 0) store_->run_minor_compactions(s, clock_);
  }

  {
    std::lock_guard lock(impl.events_mu);
    impl.events.push_back(InsertEvent{clock_.now(), n});
  }
  buffer_.clear();
  buffered_bytes_ = 0;
  ++blocks_sent_;
  entries_sent_ += n;
}

}  // namespace d4mbench
