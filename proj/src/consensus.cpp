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

#include "dclearn/consensus.hpp"

#include <cmath>
#include <limits>

#include "dclearn/error.hpp"

namespace dcl {

namespace {

// Threshold below which the total is treated as zero and error handling
// switches to absolute deviations.
bool negligible_sum(double initial_sum, double initial_norm) {
  return std::abs(initial_sum) <= 1e-12 * initial_norm;
}

}  // namespace

double consensus_error(const Eigen::VectorXd& x, double initial_sum,
                       double initial_norm) {
  require(x.size() > 0, ErrorCode::invalid_argument, "empty state");
  const double n = static_cast<double>(x.size());
  // Deviation form of sqrt(S * ||x||^2 - sum^2) / |sum|: the two agree
  // exactly whenever the state keeps the invariant total, and this form
  // stays accurate once the deviations are many orders below the mean.
  const double deviation = (x.array() - initial_sum / n).matrix().norm();
  if (negligible_sum(initial_sum, initial_norm)) return deviation;
  return std::sqrt(n) * deviation / std::abs(initial_sum);
}

ConsensusRun run_consensus(const TransitionMatrix& transition,
                           const Eigen::VectorXd& start,
                           const ConsensusOptions& options) {
  require(start.size() == transition.size(), ErrorCode::invalid_argument,
          "start vector size does not match transition matrix");
  require(options.tolerance > 0.0, ErrorCode::invalid_argument,
          "tolerance must be positive");
  require(options.max_iterations >= 0, ErrorCode::invalid_argument,
          "max_iterations must be nonnegative");

  const int n = transition.size();
  ConsensusRun run;
  run.initial_sum = start.sum();
  run.initial_mean = run.initial_sum / n;
  const double initial_norm = start.norm();
  const bool absolute = negligible_sum(run.initial_sum, initial_norm);
  // Deviations can never shrink below the rounding floor of the input scale;
  // hitting it counts as converged no matter how tight the tolerance is.
  const double deviation_floor =
      64.0 * std::numeric_limits<double>::epsilon() *
      start.cwiseAbs().maxCoeff();

  run.values = start;
  auto measure = [&] {
    run.final_error = consensus_error(run.values, run.initial_sum, initial_norm);
    run.max_deviation =
        (run.values.array() - run.initial_mean).abs().maxCoeff();
    if (options.record_trace) run.error_trace.push_back(run.final_error);
    if (run.max_deviation <= deviation_floor) return true;
    if (run.final_error > options.tolerance) return false;
    if (absolute) return true;
    return run.max_deviation <=
           options.tolerance * std::abs(run.initial_mean);
  };

  run.converged = measure();
  while (!run.converged && run.iterations < options.max_iterations) {
    run.values = transition.apply(run.values);
    ++run.iterations;
    run.converged = measure();
  }
  return run;
}

long iterations_to_error(const TransitionMatrix& transition,
                         const Eigen::VectorXd& start, double delta,
                         long max_iterations) {
  require(delta > 0.0, ErrorCode::invalid_argument, "delta must be positive");
  require(start.size() == transition.size(), ErrorCode::invalid_argument,
          "start vector size does not match transition matrix");
  const double initial_sum = start.sum();
  const double initial_norm = start.norm();
  Eigen::VectorXd x = start;
  for (long t = 0; t <= max_iterations; ++t) {
    if (consensus_error(x, initial_sum, initial_norm) <= delta) return t;
    x = transition.apply(x);
  }
  return -1;
}

long estimate_iterations(int size, double delta, double spectral_gap) {
  require(size >= 1, ErrorCode::invalid_argument, "size must be positive");
  require(delta > 0.0, ErrorCode::invalid_argument, "delta must be positive");
  require(spectral_gap > 0.0, ErrorCode::invalid_argument,
          "spectral gap must be positive");
  if (spectral_gap >= 1.0) return 1;
  const double work = std::log(std::sqrt(static_cast<double>(size)) / delta);
  const double rate = -std::log1p(-spectral_gap);
  const long t = static_cast<long>(std::ceil(work / rate));
  return std::max(t, 1L);
}

long messages_per_iteration(const Graph& graph) {
  graph.validate();
  return graph.total_degree();
}

}  // namespace dcl
