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

#include <vector>

#include <Eigen/Dense>

#include "dclearn/graph.hpp"

namespace dcl {

// Deviation of a gossip state from the average it is contracting to,
// normalized by the invariant total: sqrt(S) * ||x - (sum/S) * 1|| / |sum|.
// When the total is negligible against the initial norm (|sum| <=
// 1e-12 * initial_norm) the normalization is dropped and the plain deviation
// norm ||x - (sum/S) * 1|| is returned instead.
double consensus_error(const Eigen::VectorXd& x, double initial_sum,
                       double initial_norm);

struct ConsensusOptions {
  double tolerance = 1e-6;
  long max_iterations = 1000000;
  bool record_trace = true;
};

struct ConsensusRun {
  Eigen::VectorXd values;   // state at exit; every entry estimates the mean
  double initial_sum = 0.0;
  double initial_mean = 0.0;
  long iterations = 0;
  bool converged = false;
  double final_error = 0.0;    // consensus_error at exit
  double max_deviation = 0.0;  // max_i |values[i] - initial_mean| at exit
  std::vector<double> error_trace;  // consensus_error after 0..iterations steps
};

// Repeated averaging x <- W x. The total sum is invariant, so every node
// contracts to the mean of the start vector and the sum is recoverable as
// size * value at any node. Iteration stops once the normalized deviation is
// within tolerance AND every node is within tolerance * |mean| of the mean
// (just the deviation norm when the total is negligible); a state whose
// node-level deviations are already at the floating-point floor of the input
// scale also counts as converged. Runs out of budget without converging
// return converged = false rather than throwing.
ConsensusRun run_consensus(const TransitionMatrix& transition,
                           const Eigen::VectorXd& start,
                           const ConsensusOptions& options = {});

// First iteration count t at which consensus_error drops to delta or below,
// or -1 if that does not happen within max_iterations.
long iterations_to_error(const TransitionMatrix& transition,
                         const Eigen::VectorXd& start, double delta,
                         long max_iterations = 1000000);

// Iteration count sufficient for the normalized deviation to reach delta on
// a graph whose averaging matrix has the given spectral gap:
// ceil(ln(sqrt(size)/delta) / |ln(1 - gap)|), at least 1. A gap of 1 (or
// more) collapses in a single step.
long estimate_iterations(int size, double delta, double spectral_gap);

// Directed scalar transmissions one averaging iteration costs: the total
// degree of the graph (parallel links count per direction, self-loops once).
long messages_per_iteration(const Graph& graph);

}  // namespace dcl
