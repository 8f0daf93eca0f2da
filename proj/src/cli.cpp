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

#include "d4mbench/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <unistd.h>

#include "CLI11.hpp"
#include "d4mbench/error.hpp"
#include "d4mbench/keys.hpp"
#include "d4mbench/report.hpp"

namespace d4mbench {

namespace fs = std::filesystem;

namespace {

// Verification failed in a way the caller should see as exit 1.
struct VerifyFailure {
  std::string message;
};

struct CommonFlags {
  std::string config_file;
  std::string manifest_file;
  unsigned scale = 0;
  std::uint64_t seed = 0;
  std::uint32_t servers = 0;
  std::uint32_t ingest = 0;
  std::uint32_t tablets = 0;
  std::string walog;
  double balancer_rate = 0;
  double window = 0;
  double sample_interval = 0;
  bool regenerate = false;

  void add_to(CLI::App& app) {
    app.add_option("--config", config_file, "JSON config file (flat keys)");
    app.add_option("--manifest", manifest_file, "rerun the config recorded in a manifest.json");
    app.add_option("--scale", scale, "generator SCALE");
    app.add_option("--seed", seed, "base random seed");
    app.add_option("--servers", servers, "N_server");
    app.add_option("--ingest", ingest, "ingest workers per server");
    app.add_option("--tablets", tablets, "tablets per ingest worker");
    app.add_option("--walog", walog, "write-ahead log")->check(CLI::IsMember({"on", "off"}));
    app.add_option("--balancer-rate", balancer_rate, "tablet migrations per simulated second");
    app.add_option("--window", window, "averaging window, simulated seconds");
    app.add_option("--sample-interval", sample_interval, "throughput CSV sample spacing, simulated seconds");
    app.add_flag("--regenerate-per-tablet", regenerate, "new graph for every tablet");
  }

  BenchmarkConfig resolve(const CLI::App& app) const {
    BenchmarkConfig cfg;
    if (!manifest_file.empty()) cfg = manifest_from_json(read_text_file(manifest_file)).config;
    if (!config_file.empty()) cfg = read_config_file(config_file, cfg);
    if (app.count("--scale")) cfg.scale = scale;
    if (app.count("--seed")) cfg.seed = seed;
    if (app.count("--servers")) cfg.n_server = servers;
    if (app.count("--ingest")) cfg.n_ingest = ingest;
    if (app.count("--tablets")) cfg.n_tablet = tablets;
    if (app.count("--walog")) cfg.walog_enabled = walog == "on";
    if (app.count("--balancer-rate")) cfg.store.balancer_rate = balancer_rate;
    if (app.count("--window")) cfg.store.averaging_window_seconds = window;
    if (app.count("--sample-interval")) cfg.sample_interval_seconds = sample_interval;
    if (app.count("--regenerate-per-tablet")) cfg.regenerate_per_tablet = regenerate;
    cfg.validate();
    return cfg;
  }
};

void print_checks(std::ostream& out, const VerificationReport& v) {
  for (const auto& c : v.checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) out << ": " << c.detail;
    out << '\n';
  }
}

std::string first_failure(const VerificationReport& v) {
  for (const auto& c : v.checks) {
    if (!c.passed) return c.name + (c.detail.empty() ? "" : ": " + c.detail);
  }
  return "no checks ran";
}

int cmd_generate(unsigned scale, std::uint64_t seed, const std::string& out_path, std::ostream& out) {
  graph500::GeneratorConfig g;
  g.scale = scale;
  g.seed = seed;
  g.validate();
  const auto edges = graph500::generate(g);
  std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(Errc::io, "cannot write " + out_path);
  graph500::write_edge_list(file, edges);
  if (!file) throw Error(Errc::io, "failed writing " + out_path);
  out << "N " << edges.n_vertices << "\nM " << edges.edges.size() << '\n';
  return kExitOk;
}

int cmd_bench(const BenchmarkConfig& cfg, const fs::path& dir, bool dump, std::ostream& out) {
  fs::create_directories(dir);
  RunManifest manifest;
  manifest.config = cfg;
  manifest.start_timestamp = utc_timestamp_now();
  manifest.seed = cfg.seed;
  manifest.outputs = {{"report", "report.json"}, {"throughput", "throughput.csv"}, {"splits", "splits.txt"}};
  if (dump) manifest.outputs["store_dump"] = "store.dump";
  write_text_file(dir / "manifest.json", manifest_to_json(manifest));

  BenchmarkRun run = run_benchmark(cfg, dir / "splits.txt");
  const VerificationReport v = verify_ingest(*run.store, run.table, cfg);
  write_text_file(dir / "report.json", report_to_json(run.report, v));
  {
    std::ofstream csv(dir / "throughput.csv", std::ios::binary | std::ios::trunc);
    if (!csv) throw Error(Errc::io, "cannot write throughput.csv");
    const auto points = resample(run.report.series, cfg.sample_interval_seconds, cfg.store.averaging_window_seconds);
    write_throughput_csv(csv, points);
  }
  if (dump) write_store_dump(dir / "store.dump", cfg, run.store->snapshot_table(run.table));

  const auto& r = run.report;
  out << "inserts " << r.total_entries << '\n'
      << "elapsed_seconds " << format_number(r.elapsed_seconds) << '\n'
      << "aggregate_rate " << format_number(r.aggregate_rate) << '\n'
      << "per_worker_mean_rate " << format_number(r.per_worker_mean_rate) << '\n';
  if (cfg.run_seconds > 0 && r.wall_seconds > cfg.run_seconds) {
    out << "warning: took " << format_number(r.wall_seconds) << " s, over the run_seconds budget\n";
  }
  print_checks(out, v);
  if (!v.passed()) throw VerifyFailure{"verification failed: " + first_failure(v)};
  return kExitOk;
}

int cmd_sweep(const BenchmarkConfig& base, const std::string& pairs_text, const fs::path& dir, std::ostream& out) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  std::stringstream ss(pairs_text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto x = item.find('x');
    if (x == std::string::npos) throw Error(Errc::invalid_argument, "pair '" + item + "' is not SERVERSxINGEST");
    const auto s = parse_key(item.substr(0, x));
    const auto i = parse_key(item.substr(x + 1));
    if (s == 0 || i == 0 || s > UINT32_MAX || i > UINT32_MAX) {
      throw Error(Errc::invalid_argument, "pair '" + item + "' out of range");
    }
    pairs.emplace_back(static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(i));
  }
  if (pairs.empty()) throw Error(Errc::invalid_argument, "sweep needs at least one SERVERSxINGEST pair");
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  fs::create_directories(dir);
  std::vector<ScalingRow> rows;
  std::vector<IngestReport> reports;
  for (auto [s, i] : pairs) {
    BenchmarkConfig cfg = base;
    cfg.n_server = s;
    cfg.n_ingest = i;
    cfg.validate();
    BenchmarkRun run = run_benchmark(cfg, dir / "splits.txt");
    const VerificationReport v = verify_ingest(*run.store, run.table, cfg);
    if (!v.passed()) {
      throw VerifyFailure{"sweep aborted at " + std::to_string(s) + "x" + std::to_string(i) + ": " + first_failure(v)};
    }
    if (cfg.run_seconds > 0 && run.report.wall_seconds > cfg.run_seconds) {
      out << "warning: " << s << "x" << i << " took " << format_number(run.report.wall_seconds)
          << " s, over the run_seconds budget\n";
    }
    rows.push_back(scaling_row(cfg, run.report));
    reports.push_back(std::move(run.report));
  }
  const ScalingSummary summary = summarize_sweep(rows, reports);
  {
    std::ofstream csv(dir / "scaling.csv", std::ios::binary | std::ios::trunc);
    if (!csv) throw Error(Errc::io, "cannot write scaling.csv");
    write_scaling_csv(csv, rows);
  }
  write_text_file(dir / "scaling_summary.json", summary_to_json(summary));
  write_scaling_csv(out, rows);
  out << "dispersion " << format_number(summary.dispersion) << '\n'
      << "linear=" << (summary.linear ? "true" : "false") << '\n'
      << "aggregate_monotone=" << (summary.aggregate_monotone ? "true" : "false") << '\n';
  return kExitOk;
}

int cmd_verify(const CommonFlags& flags, const CLI::App& app, const std::string& dump_path, std::ostream& out) {
  BenchmarkConfig cfg;
  VerificationReport v;
  if (!dump_path.empty()) {
    TableSnapshot table;
    read_store_dump(dump_path, cfg, table);
    v = verify_ingest(table, cfg);
  } else {
    cfg = flags.resolve(app);
    const fs::path tmp = fs::temp_directory_path() / ("d4mbench-verify-" + std::to_string(::getpid()) + ".splits");
    BenchmarkRun run = run_benchmark(cfg, tmp);
    std::error_code ec;
    fs::remove(tmp, ec);
    v = verify_ingest(*run.store, run.table, cfg);
  }
  print_checks(out, v);

  const DegreeCheck d = check_degree_slope(graph500::generate(cfg.generator(worker_seed(cfg, 0))), cfg.scale);
  bool ok = v.passed();
  if (d.skipped) {
    out << "SKIP degree_slope: skipped (scale too small)\n";
  } else {
    out << (d.passed ? "PASS " : "FAIL ") << "degree_slope: " << d.detail << '\n';
    ok = ok && d.passed;
  }
  if (!ok) throw VerifyFailure{"verification failed"};
  return kExitOk;
}

}  // namespace

DegreeCheck check_degree_slope(const graph500::EdgeList& edges, unsigned scale) {
  DegreeCheck d;
  if (scale < kSlopeMinScale) {
    d.skipped = true;
    d.detail = "skipped (scale too small)";
    return d;
  }
  d.slope = graph500::degree_distribution(edges).fitted_slope;
  d.passed = d.slope >= kSlopeBandLow && d.slope <= kSlopeBandHigh;
  d.detail = "slope " + format_number(d.slope) + ", band [" + format_number(kSlopeBandLow) + ", " +
             format_number(kSlopeBandHigh) + "]";
  return d;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weak-scaling ingest benchmark on a simulated tablet store", "d4mbench"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "write an R-MAT edge list");
  unsigned gen_scale = 17;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  gen->add_option("--scale", gen_scale, "SCALE (N = 2^SCALE)");
  gen->add_option("--seed", gen_seed, "random seed");
  gen->add_option("--out", gen_out, "edge-list file")->required();

  auto* bench = app.add_subcommand("bench", "run the ingest benchmark once");
  CommonFlags bench_flags;
  bench_flags.add_to(*bench);
  std::string bench_out = "d4mbench-out";
  bool bench_dump = false;
  bench->add_option("--out", bench_out, "output directory");
  bench->add_flag("--dump", bench_dump, "also write store.dump for offline verify");

  auto* sweep = app.add_subcommand("sweep", "run a scaling sweep");
  CommonFlags sweep_flags;
  sweep_flags.add_to(*sweep);
  std::string sweep_out = "d4mbench-sweep";
  std::string sweep_pairs;
  sweep->add_option("--out", sweep_out, "output directory");
  sweep->add_option("--pairs", sweep_pairs, "comma-separated SERVERSxINGEST, e.g. 1x1,1x2,2x2")->required();

  auto* verify = app.add_subcommand("verify", "check a store dump, or rerun a config and check it");
  CommonFlags verify_flags;
  verify_flags.add_to(*verify);
  std::string verify_dump;
  verify->add_option("--dump", verify_dump, "store.dump written by bench --dump");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) return cmd_generate(gen_scale, gen_seed, gen_out, out);
    if (*bench) return cmd_bench(bench_flags.resolve(*bench), bench_out, bench_dump, out);
    if (*sweep) return cmd_sweep(sweep_flags.resolve(*sweep), sweep_pairs, sweep_out, out);
    if (*verify) return cmd_verify(verify_flags, *verify, verify_dump, out);
  } catch (const VerifyFailure& f) {
    err << f.message << '\n';
    return kExitVerifyFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == Errc::conservation ? kExitVerifyFailed : kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, out, err);
}

}  // namespace d4mbench
