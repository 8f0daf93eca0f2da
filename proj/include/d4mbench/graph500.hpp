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
#include <iosfwd>
#include <map>
#include <vector>

#include "d4mbench/assoc.hpp"

namespace d4mbench::graph500 {

/// R-MAT quadrant probabilities: a top-left, b top-right, c bottom-left, d bottom-right.
struct RmatProbabilities {
  double a = 0.57;
  double b = 0.19;
  double c = 0.19;
  double d = 0.05;
};

struct GeneratorConfig {
  unsigned scale = 17;
  unsigned edge_factor = 8;
  RmatProbabilities probs;
  std::uint64_t seed = 1;
  bool permute_vertices = true;
  bool keep_self_edges = true;

  std::uint64_t n_vertices() const noexcept { return std::uint64_t{1} << scale; }
  std::uint64_t n_edges() const noexcept { return edge_factor * n_vertices(); }

  /// Throws Errc::invalid_argument on a bad scale, edge factor, or probability vector.
  void validate() const;
};

/// Largest SCALE accepted; keeps N·edge_factor comfortably inside 64 bits.
inline constexpr unsigned kMaxScale = 40;

struct Edge {
  std::uint64_t start;
  std::uint64_t end;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct EdgeList {
  std::uint64_t n_vertices = 0;
  std::vector<Edge> edges;

  friend bool operator==(const EdgeList&, const EdgeList&) = default;
};

/// Draws edge_factor·2^scale edges, each by `scale` recursive quadrant
/// choices. Self-loops are redrawn unless keep_self_edges; with
/// permute_vertices every id is relabelled by a seed-derived permutation.
/// Stream 0 of the seed drives edges, stream 1 the permutation.
EdgeList generate(const GeneratorConfig& cfg);

using DegreeHistogram = std::map<std::uint64_t, std::uint64_t>;

struct DegreeStats {
  DegreeHistogram histogram;  // total degree -> vertex count, degree 0 omitted
  double fitted_slope = 0.0;
};

/// Total (in + out) degree histogram; a self-loop adds 2 to its vertex.
DegreeHistogram degree_histogram(const EdgeList& e);

/// Least-squares slope of log(count) against log(degree) over the histogram.
/// Throws Errc::fit_undefined with fewer than two distinct degrees.
double fit_power_law_slope(const DegreeHistogram& histogram);

DegreeStats degree_distribution(const EdgeList& e);

/// Per-vertex total degree, indexed by vertex id.
std::vector<std::uint64_t> vertex_degrees(const EdgeList& e);

/// Numeric adjacency array A(pad(i), pad(j)) = 1; duplicate edges collapse.
AssocArray edges_to_assoc(const EdgeList& e, unsigned key_width);

/// Edge-list file: header `N M`, then `start end` per line.
void write_edge_list(std::ostream& out, const EdgeList& e);
EdgeList read_edge_list(std::istream& in);

}  // namespace d4mbench::graph500
