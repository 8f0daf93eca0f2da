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

#include "d4mbench/graph500.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

#include "d4mbench/error.hpp"
#include "d4mbench/keys.hpp"
#include "d4mbench/rng.hpp"

namespace d4mbench::graph500 {

void GeneratorConfig::validate() const {
  if (scale < 1 || scale > kMaxScale) {
    throw Error(Errc::invalid_argument,
                "scale must be in [1, " + std::to_string(kMaxScale) + "], got " +
                    std::to_string(scale));
  }
  if (edge_factor < 1) throw Error(Errc::invalid_argument, "edge factor must be positive");
  const double p[] = {probs.a, probs.b, probs.c, probs.d};
  for (double x : p) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw Error(Errc::invalid_argument, "R-MAT probabilities must be non-negative");
    }
  }
  if (std::abs(probs.a + probs.b + probs.c + probs.d - 1.0) > 1e-12) {
    throw Error(Errc::invalid_argument, "R-MAT probabilities must sum to 1");
  }
  if (!keep_self_edges && probs.a + probs.d >= 1.0) {
    // Only diagonal quadrants can be drawn, so redrawing self-loops never ends.
    throw Error(Errc::invalid_argument, "self-edge redraw needs b + c > 0");
  }
}

namespace {

Edge draw_edge(SplitMix64& rng, unsigned scale, const RmatProbabilities& p) {
  const double ab = p.a + p.b;
  const double abc = ab + p.c;
  std::uint64_t start = 0;
  std::uint64_t end = 0;
  for (unsigned level = 0; level < scale; ++level) {
    const double u = rng.next_unit();
    const std::uint64_t row_bit = u >= ab ? 1 : 0;
    const std::uint64_t col_bit = (u >= p.a && u < ab) || u >= abc ? 1 : 0;
    start = (start << 1) | row_bit;
    end = (end << 1) | col_bit;
  }
  return Edge{start, end};
}

}  // namespace

EdgeList generate(const GeneratorConfig& cfg) {
  cfg.validate();
  EdgeList out;
  out.n_vertices = cfg.n_vertices();
  out.edges.reserve(cfg.n_edges());

  SplitMix64 rng(derive_seed(cfg.seed, 0));
  for (std::uint64_t k = 0; k < cfg.n_edges(); ++k) {
    Edge e = draw_edge(rng, cfg.scale, cfg.probs);
    while (!cfg.keep_self_edges && e.start == e.end) e = draw_edge(rng, cfg.scale, cfg.probs);
    out.edges.push_back(e);
  }

  if (cfg.permute_vertices) {
    std::vector<std::uint64_t> perm(out.n_vertices);
    std::iota(perm.begin(), perm.end(), std::uint64_t{0});
    SplitMix64 prng(derive_seed(cfg.seed, 1));
    for (std::uint64_t i = out.n_vertices - 1; i > 0; --i) {
      std::swap(perm[i], perm[prng.next_below(i + 1)]);
    }
    for (auto& e : out.edges) {
      e.start = perm[e.start];
      e.end = perm[e.end];
    }
  }
  return out;
}

std::vector<std::uint64_t> vertex_degrees(const EdgeList& e) {
  std::vector<std::uint64_t> deg(e.n_vertices, 0);
  for (const auto& edge : e.edges) {
    ++deg[edge.start];
    ++deg[edge.end];
  }
  return deg;
}

DegreeHistogram degree_histogram(const EdgeList& e) {
  DegreeHistogram h;
  for (auto d : vertex_degrees(e)) {
    if (d > 0) ++h[d];
  }
  return h;
}

double fit_power_law_slope(const DegreeHistogram& histogram) {
  std::size_t n = 0;
  double sx = 0.0;
  double sy = 0.0;
  for (const auto& [degree, count] : histogram) {
    if (degree == 0 || count == 0) continue;
    sx += std::log(static_cast<double>(degree));
    sy += std::log(static_cast<double>(count));
    ++n;
  }
  if (n < 2) throw Error(Errc::fit_undefined, "need at least two distinct degrees");
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  for (const auto& [degree, count] : histogram) {
    if (degree == 0 || count == 0) continue;
    const double dx = std::log(static_cast<double>(degree)) - mx;
    sxy += dx * (std::log(static_cast<double>(count)) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

DegreeStats degree_distribution(const EdgeList& e) {
  DegreeStats stats;
  stats.histogram = degree_histogram(e);
  stats.fitted_slope = fit_power_law_slope(stats.histogram);
  return stats;
}

AssocArray edges_to_assoc(const EdgeList& e, unsigned key_width) {
  const std::uint64_t max_id = e.n_vertices == 0 ? 0 : e.n_vertices - 1;
  if (decimal_digits(max_id) > key_width) {
    throw Error(Errc::encoding, "key width " + std::to_string(key_width) + " cannot hold vertex " +
                                    std::to_string(max_id));
  }
  std::vector<Edge> edges = e.edges;
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<std::uint64_t> col_ids;
  col_ids.reserve(edges.size());
  for (const auto& edge : edges) col_ids.push_back(edge.end);
  std::sort(col_ids.begin(), col_ids.end());
  col_ids.erase(std::unique(col_ids.begin(), col_ids.end()), col_ids.end());

  // Zero padding makes numeric order and key order agree, so the sorted edge
  // list is already in canonical (row, col) order.
  std::vector<std::string> rows;
  std::vector<std::string> cols;
  cols.reserve(col_ids.size());
  for (auto c : col_ids) cols.push_back(pad_key(c, key_width));

  std::vector<AssocArray::Entry> entries;
  entries.reserve(edges.size());
  std::uint64_t last_start = 0;
  for (const auto& edge : edges) {
    if (rows.empty() || edge.start != last_start) {
      rows.push_back(pad_key(edge.start, key_width));
      last_start = edge.start;
    }
    const auto col = std::lower_bound(col_ids.begin(), col_ids.end(), edge.end) - col_ids.begin();
    entries.push_back(AssocArray::Entry{static_cast<std::uint32_t>(rows.size() - 1),
                                        static_cast<std::uint32_t>(col), Value(1.0)});
  }
  return AssocArray::from_sorted_parts(std::move(rows), std::move(cols), std::move(entries),
                                       ValueKind::numeric);
}

void write_edge_list(std::ostream& out, const EdgeList& e) {
  out << e.n_vertices << ' ' << e.edges.size() << '\n';
  std::string buf;
  buf.reserve(1 << 16);
  char tmp[24];
  for (const auto& edge : e.edges) {
    buf.append(tmp, std::to_chars(tmp, tmp + sizeof(tmp), edge.start).ptr);
    buf.push_back(' ');
    buf.append(tmp, std::to_chars(tmp, tmp + sizeof(tmp), edge.end).ptr);
    buf.push_back('\n');
    if (buf.size() > (1 << 16) - 64) {
      out << buf;
      buf.clear();
    }
  }
  out << buf;
}

EdgeList read_edge_list(std::istream& in) {
  EdgeList e;
  std::uint64_t m = 0;
  if (!(in >> e.n_vertices >> m)) throw Error(Errc::parse, "edge list header must be `N M`");
  e.edges.reserve(m);
  for (std::uint64_t k = 0; k < m; ++k) {
    Edge edge{};
    if (!(in >> edge.start >> edge.end)) {
      throw Error(Errc::parse, "edge list ended after " + std::to_string(k) + " of " +
                                   std::to_string(m) + " edges");
    }
    if (edge.start >= e.n_vertices || edge.end >= e.n_vertices) {
      throw Error(Errc::parse, "edge " + std::to_string(k) + " has a vertex id >= N");
    }
    e.edges.push_back(edge);
  }
  return e;
}

}  // namespace d4mbench::graph500
