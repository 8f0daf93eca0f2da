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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "d4mbench/assoc.hpp"
#include "d4mbench/cli.hpp"
#include "d4mbench/error.hpp"
#include "d4mbench/graph500.hpp"
#include "d4mbench/ingest.hpp"
#include "d4mbench/report.hpp"
#include "d4mbench/tablet_store.hpp"

namespace py = pybind11;
using namespace d4mbench;

namespace {

using PyTriple = std::tuple<std::string, std::string, py::object>;

Value to_value(const py::handle& h) {
  if (py::isinstance<py::str>(h)) return Value(h.cast<std::string>());
  if (py::isinstance<py::bool_>(h)) throw Error(Errc::invalid_argument, "bool is not a cell value");
  return Value(h.cast<double>());
}

py::object from_value(const Value& v) {
  if (v.is_numeric()) return py::float_(v.number());
  return py::str(v.text());
}

std::vector<Triple> to_triples_vec(const std::vector<PyTriple>& in) {
  std::vector<Triple> out;
  out.reserve(in.size());
  for (const auto& [r, c, v] : in) out.push_back(Triple{r, c, to_value(v)});
  return out;
}

py::list from_triples_vec(const std::vector<Triple>& in) {
  py::list out;
  for (const auto& t : in) out.append(py::make_tuple(t.row, t.col, from_value(t.val)));
  return out;
}

py::dict report_dict(const IngestReport& r, const VerificationReport& v) {
  py::dict d;
  py::list workers;
  for (const auto& w : r.workers) {
    py::dict wd;
    wd["pid"] = w.pid;
    wd["server"] = w.server;
    wd["tablets"] = w.tablets;
    wd["entries_inserted"] = w.entries_inserted;
    wd["elapsed_seconds"] = w.elapsed_seconds;
    wd["rate"] = w.rate;
    workers.append(wd);
  }
  d["workers"] = workers;
  d["total_entries"] = r.total_entries;
  d["elapsed_seconds"] = r.elapsed_seconds;
  d["aggregate_rate"] = r.aggregate_rate;
  d["per_server_rate"] = r.per_server_rate;
  d["per_worker_mean_rate"] = r.per_worker_mean_rate;
  d["balance_seconds"] = r.balance_seconds;
  py::dict checks;
  for (const auto& c : v.checks) checks[py::str(c.name)] = c.passed;
  d["checks"] = checks;
  d["verified"] = v.passed();
  return d;
}

}  // namespace

PYBIND11_MODULE(_d4mbench, m) {
  m.doc() = "Simulated tablet-store ingest benchmark";

  // Leaked on purpose: the type must outlive module teardown.
  static PyObject* error_type = PyErr_NewException("d4mbench._d4mbench.D4mError", PyExc_RuntimeError, nullptr);
  m.add_object("D4mError", py::handle(error_type));
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
      exc.attr("code") = std::string(errc_name(e.code()));
      PyErr_SetObject(error_type, exc.ptr());
    }
  });

  // associative arrays
  py::class_<AssocArray>(m, "AssocArray")
      .def(py::init<>())
      .def_static(
          "from_triples",
          [](const std::vector<PyTriple>& t, const std::string& collision) {
            Collision c;
            if (collision == "keep_last") {
              c = Collision::keep_last;
            } else if (collision == "sum") {
              c = Collision::sum;
            } else {
              throw Error(Errc::invalid_argument, "collision must be 'keep_last' or 'sum'");
            }
            return AssocArray::from_triples(to_triples_vec(t), c);
          },
          py::arg("triples"), py::arg("collision") = "keep_last")
      .def("to_triples", [](const AssocArray& a) { return from_triples_vec(to_triples(a)); })
      .def_property_readonly("row_keys", &AssocArray::row_keys)
      .def_property_readonly("col_keys", &AssocArray::col_keys)
      .def_property_readonly("nnz", &AssocArray::nnz)
      .def("get",
           [](const AssocArray& a, const std::string& r, const std::string& c) -> py::object {
             auto v = a.get(r, c);
             return v ? from_value(*v) : py::none();
           })
      .def("transpose", [](const AssocArray& a) { return transpose(a); })
      .def("rows_by_range", [](const AssocArray& a, const std::string& lo, const std::string& hi) {
        return rows_by_range(a, lo, hi);
      })
      .def("rows_by_prefix", [](const AssocArray& a, const std::string& p) { return rows_by_prefix(a, p); })
      .def("__add__", [](const AssocArray& a, const AssocArray& b) { return a + b; })
      .def("__sub__", [](const AssocArray& a, const AssocArray& b) { return a - b; })
      .def("__and__", [](const AssocArray& a, const AssocArray& b) { return a & b; })
      .def("__or__", [](const AssocArray& a, const AssocArray& b) { return a | b; })
      .def("__matmul__", [](const AssocArray& a, const AssocArray& b) { return a * b; })
      .def("__eq__", [](const AssocArray& a, const AssocArray& b) { return a == b; })
      .def("__len__", &AssocArray::nnz);

  m.def("apply_row_offset", &apply_row_offset, py::arg("a"), py::arg("offset"), py::arg("width"));

  // generator
  m.def(
      "generate",
      [](unsigned scale, std::uint64_t seed, unsigned edge_factor) {
        graph500::GeneratorConfig g;
        g.scale = scale;
        g.seed = seed;
        g.edge_factor = edge_factor;
        g.validate();
        auto e = graph500::generate(g);
        std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
        edges.reserve(e.edges.size());
        for (const auto& x : e.edges) edges.emplace_back(x.start, x.end);
        return py::make_tuple(e.n_vertices, edges);
      },
      py::arg("scale"), py::arg("seed") = 1, py::arg("edge_factor") = 8,
      "Returns (n_vertices, [(start, end), ...]).");
  m.def(
      "degree_slope",
      [](std::uint64_t n, const std::vector<std::pair<std::uint64_t, std::uint64_t>>& edges) {
        graph500::EdgeList e;
        e.n_vertices = n;
        for (auto [s, t] : edges) e.edges.push_back(graph500::Edge{s, t});
        return graph500::degree_distribution(e).fitted_slope;
      },
      py::arg("n_vertices"), py::arg("edges"));
  m.def("fit_power_law_slope", &graph500::fit_power_law_slope, py::arg("histogram"));

  // store
  py::class_<StoreConfig>(m, "StoreConfig")
      .def(py::init<>())
      .def_readwrite("n_servers", &StoreConfig::n_servers)
      .def_readwrite("balancer_rate", &StoreConfig::balancer_rate)
      .def_readwrite("max_concurrent_minor_compactions", &StoreConfig::max_concurrent_minor_compactions)
      .def_readwrite("walog_enabled", &StoreConfig::walog_enabled)
      .def_readwrite("walog_cost_factor", &StoreConfig::walog_cost_factor)
      .def_readwrite("memtable_flush_threshold", &StoreConfig::memtable_flush_threshold)
      .def_readwrite("batch_block_bytes", &StoreConfig::batch_block_bytes)
      .def_readwrite("averaging_window_seconds", &StoreConfig::averaging_window_seconds);

  py::class_<TableId>(m, "TableId").def_readonly("index", &TableId::index);

  py::class_<TabletStore>(m, "TabletStore")
      .def(py::init<StoreConfig>(), py::arg("config") = StoreConfig{})
      .def("create_table", &TabletStore::create_table)
      .def("set_option", py::overload_cast<TableId, std::string_view, std::string_view>(&TabletStore::set_option))
      .def("add_splits", [](TabletStore& s, TableId t, const std::vector<std::string>& keys) { s.add_splits(t, keys); })
      .def("run_balancer_until_stable",
           [](TabletStore& s, TableId t) {
             SimClock clock;
             return s.run_balancer_until_stable(t, clock);
           })
      .def("locate",
           [](const TabletStore& s, TableId t, const std::string& row) {
             auto loc = s.locate(t, row);
             return py::make_tuple(loc.server, loc.tablet);
           })
      .def("tablets_per_server", &TabletStore::tablets_per_server)
      .def("split_locations",
           [](const TabletStore& s, TableId t) {
             auto st = s.get_split_locations(t);
             std::vector<std::pair<std::string, std::uint32_t>> b;
             for (const auto& p : st.boundaries) b.emplace_back(p.key, p.server);
             return py::make_tuple(b, st.first_tablet_server);
           })
      .def(
          "write",
          [](TabletStore& s, TableId t, const std::vector<PyTriple>& triples) {
            auto w = s.open_batch_writer(t);
            w.put(to_triples_vec(triples));
            w.close();
            return w.clock().now();
          },
          "Writes through one batch writer and returns its simulated elapsed seconds.")
      .def("scan",
           [](const TabletStore& s, TableId t, const std::string& lo, const std::string& hi) {
             return from_triples_vec(s.scan(t, lo, hi));
           })
      .def("scan_all", [](const TabletStore& s, TableId t) { return from_triples_vec(s.scan_all(t)); })
      .def("inserts_accepted",
           [](const TabletStore& s) { return s.snapshot_metrics(SimClock(0)).total.inserts_accepted; });

  // benchmark
  py::class_<BenchmarkConfig>(m, "BenchmarkConfig")
      .def(py::init<>())
      .def_readwrite("n_server", &BenchmarkConfig::n_server)
      .def_readwrite("n_ingest", &BenchmarkConfig::n_ingest)
      .def_readwrite("n_tablet", &BenchmarkConfig::n_tablet)
      .def_readwrite("scale", &BenchmarkConfig::scale)
      .def_readwrite("seed", &BenchmarkConfig::seed)
      .def_readwrite("walog_enabled", &BenchmarkConfig::walog_enabled)
      .def_readwrite("compaction_cap", &BenchmarkConfig::compaction_cap)
      .def_readwrite("regenerate_per_tablet", &BenchmarkConfig::regenerate_per_tablet)
      .def_readwrite("store", &BenchmarkConfig::store)
      .def_property_readonly("n_row", &BenchmarkConfig::n_row)
      .def_property_readonly("n_p", &BenchmarkConfig::n_p)
      .def_property_readonly("planned_entries", &BenchmarkConfig::planned_entries)
      .def("to_json", &config_to_json)
      .def_static("from_json", [](const std::string& s) { return config_from_json(s); });

  m.def(
      "compute_global_splits",
      [](const BenchmarkConfig& cfg) {
        auto st = compute_global_splits(cfg);
        std::vector<std::pair<std::string, std::uint32_t>> b;
        for (const auto& p : st.boundaries) b.emplace_back(p.key, p.server);
        return py::make_tuple(b, st.first_tablet_server);
      },
      py::arg("config"));
  m.def(
      "run_benchmark",
      [](const BenchmarkConfig& cfg, const std::filesystem::path& split_file) {
        BenchmarkRun run;
        {
          py::gil_scoped_release release;
          run = run_benchmark(cfg, split_file);
        }
        return report_dict(run.report, verify_ingest(*run.store, run.table, cfg));
      },
      py::arg("config"), py::arg("split_file"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = run_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Returns (exit_code, stdout, stderr).");
  m.attr("__version__") = std::string(kVersion);
}
