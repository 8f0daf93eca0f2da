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

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "d4mbench/ingest.hpp"

// JSON and CSV artifacts. Config files and manifests use flat keys named
// after the BenchmarkConfig / StoreConfig fields.

namespace d4mbench {

inline constexpr std::string_view kVersion = "0.1.0";

std::string config_to_json(const BenchmarkConfig& cfg);
/// Missing keys keep their defaults; unknown keys and wrong types throw Errc::parse.
BenchmarkConfig config_from_json(std::string_view text, BenchmarkConfig base = {});
BenchmarkConfig read_config_file(const std::filesystem::path& path, BenchmarkConfig base = {});

struct RunManifest {
  BenchmarkConfig config;
  std::string version{kVersion};
  std::string start_timestamp;  // UTC, ISO 8601
  std::uint64_t seed = 0;
  std::map<std::string, std::string> outputs;

  friend bool operator==(const RunManifest&, const RunManifest&) = default;
};

std::string manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(std::string_view text);

std::string utc_timestamp_now();

std::string report_to_json(const IngestReport& report, const VerificationReport& verification);
void report_from_json(std::string_view text, IngestReport& report, VerificationReport& verification);

void write_throughput_csv(std::ostream& out, std::span<const RatePoint> points);
std::vector<RatePoint> read_throughput_csv(std::istream& in);

struct ScalingRow {
  std::uint32_t n_server = 0;
  std::uint32_t n_ingest = 0;
  std::uint64_t n_p = 0;
  double aggregate_rate = 0.0;
  double per_worker_rate = 0.0;  // mean over workers

  friend bool operator==(const ScalingRow&, const ScalingRow&) = default;
};

void write_scaling_csv(std::ostream& out, std::span<const ScalingRow> rows);
std::vector<ScalingRow> read_scaling_csv(std::istream& in);

ScalingRow scaling_row(const BenchmarkConfig& cfg, const IngestReport& report);

inline constexpr double kLinearTolerance = 0.30;

struct ScalingSummary {
  double baseline_rate = 0.0;    // mean worker rate of the smallest N_p run
  double min_worker_rate = 0.0;  // over every worker of every run
  double max_worker_rate = 0.0;
  double dispersion = 0.0;       // max / min
  bool linear = false;           // every worker within +-kLinearTolerance of baseline
  bool aggregate_monotone = false;
};

/// Rows get sorted by (n_server, n_ingest) alongside their reports.
ScalingSummary summarize_sweep(std::span<const ScalingRow> rows, std::span<const IngestReport> reports);
std::string summary_to_json(const ScalingSummary& s);

// Store dump: config and every tablet of the benchmark table, enough to rerun
// verify_ingest offline.
void write_store_dump(const std::filesystem::path& path, const BenchmarkConfig& cfg, const TableSnapshot& table);
void read_store_dump(const std::filesystem::path& path, BenchmarkConfig& cfg, TableSnapshot& table);

void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace d4mbench
