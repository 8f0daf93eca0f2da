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

#include "d4mbench/report.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "d4mbench/error.hpp"
#include "d4mbench/keys.hpp"
#include "json.hpp"

namespace d4mbench {

using nlohmann::json;

namespace {

// Visits every flat config key with a reference to its field.
template <class Cfg, class F>
void for_each_field(Cfg& c, F&& f) {
  f("n_server", c.n_server);
  f("n_ingest", c.n_ingest);
  f("n_tablet", c.n_tablet);
  f("scale", c.scale);
  f("edge_factor", c.edge_factor);
  f("seed", c.seed);
  f("compaction_cap", c.compaction_cap);
  f("walog_enabled", c.walog_enabled);
  f("table_name", c.table_name);
  f("run_seconds", c.run_seconds);
  f("sample_interval_seconds", c.sample_interval_seconds);
  f("regenerate_per_tablet", c.regenerate_per_tablet);
  f("balancer_rate", c.store.balancer_rate);
  f("max_concurrent_minor_compactions", c.store.max_concurrent_minor_compactions);
  f("walog_cost_factor", c.store.walog_cost_factor);
  f("memtable_flush_threshold", c.store.memtable_flush_threshold);
  f("batch_block_bytes", c.store.batch_block_bytes);
  f("averaging_window_seconds", c.store.averaging_window_seconds);
  f("client_entry_seconds", c.store.client_entry_seconds);
  f("server_entry_seconds", c.store.server_entry_seconds);
  f("flush_entry_seconds", c.store.flush_entry_seconds);
  f("timeline_bucket_seconds", c.store.timeline_bucket_seconds);
}

[[noreturn]] void parse_fail(const std::string& what) { throw Error(Errc::parse, what); }

template <class T>
void read_field(const json& j, const std::string& key, T& out) {
  if constexpr (std::is_same_v<T, bool>) {
    if (!j.is_boolean()) parse_fail(key + " must be a boolean");
    out = j.get<bool>();
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!j.is_string()) parse_fail(key + " must be a string");
    out = j.get<std::string>();
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!j.is_number()) parse_fail(key + " must be a number");
    out = j.get<T>();
  } else {
    if (!j.is_number_unsigned()) parse_fail(key + " must be a non-negative integer");
    const auto v = j.get<std::uint64_t>();
    if (v > std::numeric_limits<T>::max()) parse_fail(key + " is out of range");
    out = static_cast<T>(v);
  }
}

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    parse_fail(std::string(what) + ": " + e.what());
  }
}

json config_json(const BenchmarkConfig& cfg) {
  json j = json::object();
  for_each_field(cfg, [&](const char* key, const auto& field) { j[key] = field; });
  return j;
}

BenchmarkConfig config_from(const json& j, BenchmarkConfig cfg) {
  if (!j.is_object()) parse_fail("config must be a JSON object");
  std::size_t known = 0;
  for_each_field(cfg, [&](const char* key, auto& field) {
    auto it = j.find(key);
    if (it == j.end()) return;
    ++known;
    read_field(*it, key, field);
  });
  if (known != j.size()) {
    for (const auto& [key, _] : j.items()) {
      bool found = false;
      for_each_field(cfg, [&](const char* k, auto&) { found = found || key == k; });
      if (!found) parse_fail("unknown config key: " + key);
    }
  }
  return cfg;
}

template <class T>
T get_as(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) parse_fail(std::string("missing key: ") + key);
  T out{};
  read_field(*it, key, out);
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double csv_double(const std::string& cell, std::size_t lineno) {
  auto v = parse_number(cell);
  if (!v) parse_fail("csv line " + std::to_string(lineno) + ": bad number '" + cell + "'");
  return *v;
}

std::uint64_t csv_uint(const std::string& cell, std::size_t lineno) {
  try {
    return parse_key(cell);
  } catch (const Error&) {
    parse_fail("csv line " + std::to_string(lineno) + ": bad integer '" + cell + "'");
  }
}

std::vector<std::vector<std::string>> read_csv(std::istream& in, std::string_view header, std::size_t columns) {
  std::string line;
  if (!std::getline(in, line) || line != header) parse_fail("csv header must be '" + std::string(header) + "'");
  std::vector<std::vector<std::string>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != columns) parse_fail("csv line " + std::to_string(lineno) + ": expected " +
                                            std::to_string(columns) + " columns");
    rows.push_back(std::move(cells));
  }
  return rows;
}

constexpr std::string_view kThroughputHeader = "elapsed_seconds,cumulative_inserts,windowed_rate";
constexpr std::string_view kScalingHeader = "n_server,n_ingest,n_p,aggregate_rate,per_worker_rate";
constexpr std::string_view kDumpMagic = "#d4mbench-dump\t1";

}  // namespace

std::string config_to_json(const BenchmarkConfig& cfg) { return config_json(cfg).dump(2) + "\n"; }

BenchmarkConfig config_from_json(std::string_view text, BenchmarkConfig base) {
  return config_from(parse_json(text, "config"), std::move(base));
}

BenchmarkConfig read_config_file(const std::filesystem::path& path, BenchmarkConfig base) {
  return config_from_json(read_text_file(path), std::move(base));
}

std::string manifest_to_json(const RunManifest& m) {
  json j;
  j["config"] = config_json(m.config);
  j["version"] = m.version;
  j["start_timestamp"] = m.start_timestamp;
  j["seed"] = m.seed;
  j["outputs"] = m.outputs;
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(std::string_view text) {
  const json j = parse_json(text, "manifest");
  if (!j.is_object()) parse_fail("manifest must be a JSON object");
  RunManifest m;
  auto cfg = j.find("config");
  if (cfg == j.end()) parse_fail("manifest has no config");
  m.config = config_from(*cfg, BenchmarkConfig{});
  m.version = get_as<std::string>(j, "version");
  m.start_timestamp = get_as<std::string>(j, "start_timestamp");
  m.seed = get_as<std::uint64_t>(j, "seed");
  if (auto o = j.find("outputs"); o != j.end()) {
    if (!o->is_object()) parse_fail("outputs must be an object");
    for (const auto& [k, v] : o->items()) {
      if (!v.is_string()) parse_fail("output paths must be strings");
      m.outputs[k] = v.get<std::string>();
    }
  }
  return m;
}

std::string utc_timestamp_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string report_to_json(const IngestReport& r, const VerificationReport& v) {
  json workers = json::array();
  for (const auto& w : r.workers) {
    workers.push_back({{"pid", w.pid},
                       {"server", w.server},
                       {"tablets", w.tablets},
                       {"entries_inserted", w.entries_inserted},
                       {"elapsed_seconds", w.elapsed_seconds},
                       {"rate", w.rate},
                       {"wall_seconds", w.wall_seconds}});
  }
  json series = json::array();
  for (const auto& s : r.series) series.push_back(json::array({s.timestamp, s.cumulative_inserts}));
  json checks = json::array();
  for (const auto& c : v.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  json j;
  j["workers"] = std::move(workers);
  j["total_entries"] = r.total_entries;
  j["elapsed_seconds"] = r.elapsed_seconds;
  j["aggregate_rate"] = r.aggregate_rate;
  j["per_server_rate"] = r.per_server_rate;
  j["per_worker_mean_rate"] = r.per_worker_mean_rate;
  j["balance_seconds"] = r.balance_seconds;
  j["wall_seconds"] = r.wall_seconds;
  j["series"] = std::move(series);
  j["verification"] = {{"passed", v.passed()}, {"checks", std::move(checks)}};
  return j.dump(2) + "\n";
}

void report_from_json(std::string_view text, IngestReport& r, VerificationReport& v) {
  const json j = parse_json(text, "report");
  if (!j.is_object()) parse_fail("report must be a JSON object");
  r = IngestReport{};
  v = VerificationReport{};
  auto workers = j.find("workers");
  if (workers == j.end() || !workers->is_array()) parse_fail("report needs a workers array");
  for (const auto& wj : *workers) {
    WorkerReport w;
    w.pid = get_as<std::uint32_t>(wj, "pid");
    w.server = get_as<std::uint32_t>(wj, "server");
    auto tablets = wj.find("tablets");
    if (tablets == wj.end() || !tablets->is_array()) parse_fail("worker needs a tablets array");
    for (const auto& t : *tablets) {
      std::size_t id = 0;
      read_field(t, "tablet", id);
      w.tablets.push_back(id);
    }
    w.entries_inserted = get_as<std::uint64_t>(wj, "entries_inserted");
    w.elapsed_seconds = get_as<double>(wj, "elapsed_seconds");
    w.rate = get_as<double>(wj, "rate");
    w.wall_seconds = get_as<double>(wj, "wall_seconds");
    r.workers.push_back(std::move(w));
  }
  r.total_entries = get_as<std::uint64_t>(j, "total_entries");
  r.elapsed_seconds = get_as<double>(j, "elapsed_seconds");
  r.aggregate_rate = get_as<double>(j, "aggregate_rate");
  r.per_server_rate = get_as<double>(j, "per_server_rate");
  r.per_worker_mean_rate = get_as<double>(j, "per_worker_mean_rate");
  r.balance_seconds = get_as<double>(j, "balance_seconds");
  r.wall_seconds = get_as<double>(j, "wall_seconds");
  auto series = j.find("series");
  if (series == j.end() || !series->is_array()) parse_fail("report needs a series array");
  for (const auto& s : *series) {
    if (!s.is_array() || s.size() != 2) parse_fail("series points are [timestamp, cumulative]");
    ThroughputSample p;
    read_field(s[0], "timestamp", p.timestamp);
    read_field(s[1], "cumulative_inserts", p.cumulative_inserts);
    r.series.push_back(p);
  }
  auto ver = j.find("verification");
  if (ver == j.end() || !ver->is_object()) parse_fail("report needs a verification object");
  auto checks = ver->find("checks");
  if (checks == ver->end() || !checks->is_array()) parse_fail("verification needs a checks array");
  for (const auto& c : *checks) {
    v.checks.push_back(CheckResult{get_as<std::string>(c, "name"), get_as<bool>(c, "passed"),
                                   get_as<std::string>(c, "detail")});
  }
}

void write_throughput_csv(std::ostream& out, std::span<const RatePoint> points) {
  out << kThroughputHeader << '\n';
  for (const auto& p : points) {
    out << format_number(p.elapsed_seconds) << ',' << p.cumulative_inserts << ',' << format_number(p.windowed_rate)
        << '\n';
  }
}

std::vector<RatePoint> read_throughput_csv(std::istream& in) {
  std::vector<RatePoint> out;
  std::size_t lineno = 1;
  for (const auto& cells : read_csv(in, kThroughputHeader, 3)) {
    ++lineno;
    out.push_back(RatePoint{csv_double(cells[0], lineno), csv_uint(cells[1], lineno), csv_double(cells[2], lineno)});
  }
  return out;
}

void write_scaling_csv(std::ostream& out, std::span<const ScalingRow> rows) {
  out << kScalingHeader << '\n';
  for (const auto& r : rows) {
    out << r.n_server << ',' << r.n_ingest << ',' << r.n_p << ',' << format_number(r.aggregate_rate) << ','
        << format_number(r.per_worker_rate) << '\n';
  }
}

std::vector<ScalingRow> read_scaling_csv(std::istream& in) {
  std::vector<ScalingRow> out;
  std::size_t lineno = 1;
  for (const auto& c : read_csv(in, kScalingHeader, 5)) {
    ++lineno;
    const auto s = csv_uint(c[0], lineno);
    const auto i = csv_uint(c[1], lineno);
    if (s > std::numeric_limits<std::uint32_t>::max() || i > std::numeric_limits<std::uint32_t>::max()) {
      parse_fail("csv line " + std::to_string(lineno) + ": value out of range");
    }
    out.push_back(ScalingRow{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(i), csv_uint(c[2], lineno),
                             csv_double(c[3], lineno), csv_double(c[4], lineno)});
  }
  return out;
}

ScalingRow scaling_row(const BenchmarkConfig& cfg, const IngestReport& report) {
  return ScalingRow{cfg.n_server, cfg.n_ingest, cfg.n_p(), report.aggregate_rate, report.per_worker_mean_rate};
}

ScalingSummary summarize_sweep(std::span<const ScalingRow> rows, std::span<const IngestReport> reports) {
  if (rows.size() != reports.size()) throw Error(Errc::invalid_argument, "one report per scaling row expected");
  ScalingSummary s;
  if (rows.empty()) return s;
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return std::pair(rows[x].n_server, rows[x].n_ingest) < std::pair(rows[y].n_server, rows[y].n_ingest);
  });
  const auto base = *std::min_element(order.begin(), order.end(),
                                      [&](std::size_t x, std::size_t y) { return rows[x].n_p < rows[y].n_p; });
  s.baseline_rate = rows[base].per_worker_rate;
  s.min_worker_rate = std::numeric_limits<double>::infinity();
  s.max_worker_rate = 0.0;
  s.linear = s.baseline_rate > 0;
  for (const auto& r : reports) {
    for (const auto& w : r.workers) {
      s.min_worker_rate = std::min(s.min_worker_rate, w.rate);
      s.max_worker_rate = std::max(s.max_worker_rate, w.rate);
      if (std::abs(w.rate - s.baseline_rate) > kLinearTolerance * s.baseline_rate) s.linear = false;
    }
  }
  if (!std::isfinite(s.min_worker_rate)) s.min_worker_rate = 0.0;
  s.dispersion = s.min_worker_rate > 0 ? s.max_worker_rate / s.min_worker_rate : 0.0;

  // Monotone in N_p: every run with more workers beats every run with fewer.
  s.aggregate_monotone = true;
  for (std::size_t x = 0; x < rows.size(); ++x) {
    for (std::size_t y = 0; y < rows.size(); ++y) {
      if (rows[x].n_p < rows[y].n_p && !(rows[x].aggregate_rate < rows[y].aggregate_rate)) {
        s.aggregate_monotone = false;
      }
    }
  }
  return s;
}

std::string summary_to_json(const ScalingSummary& s) {
  json j;
  j["baseline_rate"] = s.baseline_rate;
  j["min_worker_rate"] = s.min_worker_rate;
  j["max_worker_rate"] = s.max_worker_rate;
  j["dispersion"] = s.dispersion;
  j["tolerance"] = kLinearTolerance;
  j["linear"] = s.linear;
  j["aggregate_monotone"] = s.aggregate_monotone;
  return j.dump(2) + "\n";
}

void write_store_dump(const std::filesystem::path& path, const BenchmarkConfig& cfg, const TableSnapshot& table) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io, "cannot write " + path.string());
  out << kDumpMagic << '\n';
  out << "#config\t" << config_json(cfg).dump() << '\n';
  out << "#table\t" << json(table.name).dump() << '\n';
  for (const auto& t : table.tablets) {
    json h = {{"id", t.id},
              {"low", t.low},
              {"high", t.high ? json(*t.high) : json(nullptr)},
              {"server", t.server},
              {"inserts_accepted", t.inserts_accepted},
              {"entries", t.entries.size()}};
    out << "#tablet\t" << h.dump() << '\n';
    for (const auto& e : t.entries) out << e.row << '\t' << e.col << '\t' << e.val.to_string() << '\n';
  }
  if (!out) throw Error(Errc::io, "failed writing " + path.string());
}

void read_store_dump(const std::filesystem::path& path, BenchmarkConfig& cfg, TableSnapshot& table) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open store dump " + path.string());
  std::string line;
  std::size_t lineno = 0;
  auto next = [&](const char* what) {
    if (!std::getline(in, line)) parse_fail(std::string("store dump ends before ") + what);
    ++lineno;
  };
  auto tagged = [&](std::string_view tag) {
    if (!line.starts_with(tag) || line.size() <= tag.size() || line[tag.size()] != '\t') {
      parse_fail("store dump line " + std::to_string(lineno) + ": expected " + std::string(tag));
    }
    return parse_json(std::string_view(line).substr(tag.size() + 1), "store dump");
  };
  next("header");
  if (line != kDumpMagic) parse_fail("not a store dump: " + path.string());
  next("config");
  cfg = config_from(tagged("#config"), BenchmarkConfig{});
  next("table");
  const json name = tagged("#table");
  if (!name.is_string()) parse_fail("table name must be a string");
  table = TableSnapshot{};
  table.name = name.get<std::string>();
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const json h = tagged("#tablet");
    TabletSnapshot t;
    t.id = get_as<std::size_t>(h, "id");
    t.low = get_as<std::string>(h, "low");
    if (auto hi = h.find("high"); hi != h.end() && !hi->is_null()) {
      if (!hi->is_string()) parse_fail("tablet high must be a string or null");
      t.high = hi->get<std::string>();
    }
    t.server = get_as<std::uint32_t>(h, "server");
    t.inserts_accepted = get_as<std::uint64_t>(h, "inserts_accepted");
    const auto n = get_as<std::size_t>(h, "entries");
    t.entries.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      next("all tablet entries");
      const auto a = line.find('\t');
      const auto b = a == std::string::npos ? a : line.find('\t', a + 1);
      if (b == std::string::npos || a == 0 || b == a + 1 || b + 1 == line.size()) {
        parse_fail("store dump line " + std::to_string(lineno) + ": expected row<TAB>col<TAB>value");
      }
      t.entries.push_back(Triple{line.substr(0, a), line.substr(a + 1, b - a - 1), Value::parse(line.substr(b + 1))});
    }
    table.tablets.push_back(std::move(t));
  }
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(Errc::io, "failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace d4mbench
