// Copyright 2026 the dclearn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dcl {

// Undirected multigraph on nodes 0..S-1. adjacency(u, v) is the number of
// parallel links between u and v; adjacency(u, u) is the number of self-loops
// at u, each counted once in the degree. The matrix must stay symmetric with
// nonnegative entries.
struct Graph {
  Eigen::MatrixXi adjacency;

  int size() const { return static_cast<int>(adjacency.rows()); }

  // Link count at `node`: off-diagonal row entries plus self-loops once each.
  int degree(int node) const;
  int max_degree() const;

  // Sum of all degrees. Equals the number of directed transmission slots a
  // gossip iteration uses (each parallel link gives one slot per direction,
  // each self-loop gives one slot).
  long total_degree() const;

  // True when every node can reach every other through links with positive
  // multiplicity. Self-loops do not connect anything.
  bool is_connected() const;

  // Throws ErrorCode::invalid_argument on a non-square, asymmetric, or
  // negative adjacency.
  void validate() const;
};

// Cycle 0-1-...-S-1-0. Requires size >= 3.
Graph make_ring(int size);

// All-to-all links, no loops. Requires size >= 2.
Graph make_complete(int size);

// 3-regular graph used as a cheap expander: a ring plus, for every node x
// with a multiplicative inverse x' != x modulo S, one chord x-x' per
// unordered pair. Nodes with no inverse or with x' == x get a self-loop so
// the degree stays 3 everywhere. A chord that coincides with a ring link
// doubles that link's multiplicity; pass collapse_multi_edges to cap link
// multiplicity at one instead (those nodes then have degree 2).
// Requires size >= 3.
Graph make_inverse_expander(int size, bool collapse_multi_edges = false);

// Uniform-ish random simple d-regular connected graph via stub matching:
// shuffle d copies of every node id, pair them up, and reject the attempt on
// any loop, duplicate link, or disconnected result. Requires 1 <= degree <
// size and size * degree even; throws ErrorCode::construction_failed when
// max_attempts rejections are exhausted (some parameter combinations, such
// as size 4 with degree 1, can never succeed).
Graph make_random_regular(int size, int degree, std::uint64_t seed,
                          int max_attempts = 200);

// Moves node i to position permutation[i]. permutation must be a bijection
// on 0..S-1.
Graph relabel(const Graph& graph, const std::vector<int>& permutation);

// Vertex expansion constant: min over node sets U with 1 <= |U| <= S/2 of
// (links leaving U) / |U|, counting multiplicity; self-loops never leave.
// Exhaustive over subsets, so the graph must have size <= 20
// (ErrorCode::size_limit otherwise).
double expansion_constant(const Graph& graph);

// Lower bound on the spectral gap of a gossip matrix with step epsilon on a
// graph with the given expansion constant and maximum degree.
double expansion_gap_bound(double epsilon, double alpha, int max_degree);

// Text round-trip: "nodes S" then one "u v multiplicity" line per unordered
// link (u <= v), '#' comments and blank lines allowed.
std::string to_edge_list(const Graph& graph);
Graph from_edge_list(const std::string& text);

// Symmetric doubly-stochastic averaging matrix W = I - epsilon * (D - A),
// i.e. W(u,v) = epsilon * adjacency(u,v) off the diagonal and
// W(u,u) = 1 - epsilon * (degree without self-loops). Self-loops cancel out
// of D - A, so they only influence the default step size through the
// maximum degree.
struct TransitionMatrix {
  Eigen::MatrixXd dense;
  double epsilon = 0.0;

  // Compressed rows (column-ascending) for fast repeated application.
  std::vector<int> row_start;
  std::vector<int> cols;
  std::vector<double> weights;

  int size() const { return static_cast<int>(dense.rows()); }
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
};

// Builds the averaging matrix for a connected graph. epsilon <= 0 selects
// the default 1 / (max_degree + 1). Every diagonal entry must stay
// nonnegative, so explicit steps above 1 / max(degree without loops) are
// rejected.
TransitionMatrix make_transition(const Graph& graph, double epsilon = 0.0);

struct SpectralInfo {
  // All eigenvalues in descending order; empty when the iterative path was
  // used instead of a dense solve.
  Eigen::VectorXd eigenvalues;
  // Largest magnitude among non-principal eigenvalues.
  double second_magnitude = 0.0;
  // 1 - second_magnitude; the per-iteration geometric decay of disagreement.
  double gap = 0.0;
};

// Dense symmetric eigensolve up to dense_limit nodes, deflated power
// iteration beyond that. Validates that the spectrum lies in [-1, 1] and
// that the principal eigenvalue 1 is simple.
SpectralInfo analyze_spectrum(const TransitionMatrix& transition,
                              int dense_limit = 2000);

}  // namespace dcl
