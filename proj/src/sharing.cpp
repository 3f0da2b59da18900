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

#include "dclearn/sharing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dclearn/consensus.hpp"
#include "dclearn/error.hpp"
#include "dclearn/rng.hpp"
#include "internal.hpp"

namespace dcl {

namespace {

ConsensusOptions gossip_options(const AggregationOptions& options) {
  ConsensusOptions gossip;
  gossip.tolerance = options.tolerance;
  gossip.max_iterations = options.max_iterations;
  gossip.record_trace = false;
  return gossip;
}

[[noreturn]] void round_failed(const char* what, int round, long budget) {
  fail(ErrorCode::aggregation,
       std::string(what) + " round " + std::to_string(round) +
           " did not settle within " + std::to_string(budget) + " iterations");
}

AggregationRun aggregate_consensus(const Graph& graph,
                                   const Eigen::VectorXd& values,
                                   const AggregationOptions& options) {
  const auto transition = make_transition(graph, options.epsilon);
  const auto run = run_consensus(transition, values, gossip_options(options));
  if (!run.converged) round_failed("gossip", 0, options.max_iterations);
  AggregationRun out;
  out.value = graph.size() * run.values[0];
  out.rounds = 1;
  out.total_iterations = run.iterations;
  out.scalar_messages = run.iterations * graph.total_degree();
  return out;
}

AggregationRun aggregate_shamir(const Graph& graph,
                                const Eigen::VectorXd& values,
                                std::uint64_t seed,
                                const AggregationOptions& options) {
  const int n = graph.size();
  require(n <= 64, ErrorCode::size_limit,
          "share reconstruction is limited to 64 agents, got " +
              std::to_string(n));
  double range = options.coefficient_range;
  if (range < 0.0) {
    range = 10.0 * values.cwiseAbs().maxCoeff();
    if (range == 0.0) range = 1.0;
  }

  // shares(a, l) is agent a's evaluation at point l + 1.
  Eigen::MatrixXd shares(n, n);
  for (int a = 0; a < n; ++a) {
    auto engine = make_engine(
        seed, internal::kShareSalt + static_cast<std::uint64_t>(a));
    const auto row = make_shares(values[a], n, range, engine);
    for (int l = 0; l < n; ++l) shares(a, l) = row[l];
  }

  const auto transition = make_transition(graph, options.epsilon);
  const auto gossip = gossip_options(options);

  // Every evaluation round must stop at the same iteration count for the
  // reconstruction to cancel truncation errors, so first find the slowest
  // round's requirement.
  long shared_iterations = 0;
  for (int l = 0; l < n; ++l) {
    const auto run = run_consensus(transition, shares.col(l), gossip);
    if (!run.converged) round_failed("share", l, options.max_iterations);
    shared_iterations = std::max(shared_iterations, run.iterations);
  }

  const auto weights = reconstruction_weights(n);
  AggregationRun out;
  for (int l = 0; l < n; ++l) {
    Eigen::VectorXd x = shares.col(l);
    for (long t = 0; t < shared_iterations; ++t) x = transition.apply(x);
    out.value += weights[l] * n * x[0];
  }
  out.rounds = n;
  out.total_iterations = shared_iterations * n;
  out.scalar_messages = out.total_iterations * graph.total_degree();
  return out;
}

AggregationRun aggregate_chunked(const Graph& graph,
                                 const Eigen::VectorXd& values,
                                 std::uint64_t seed,
                                 const AggregationOptions& options) {
  const int n = graph.size();
  require(options.num_chunks >= 1, ErrorCode::invalid_argument,
          "num_chunks must be at least 1");

  const Eigen::MatrixXd chunks = internal::chunk_matrix(
      values, options.num_chunks, options.chunk_range, seed);

  // The network itself never changes; each round only re-seats the agents,
  // so one transition matrix serves every round.
  const auto transition = make_transition(graph, options.epsilon);
  const auto gossip = gossip_options(options);

  AggregationRun out;
  for (int c = 0; c < options.num_chunks; ++c) {
    const auto seats =
        internal::round_seating(n, seed, c, options.permute);
    Eigen::VectorXd start(n);
    for (int a = 0; a < n; ++a) start[seats[a]] = chunks(a, c);
    const auto run = run_consensus(transition, start, gossip);
    if (!run.converged) round_failed("chunk", c, options.max_iterations);
    out.value += n * run.values[seats[0]];
    out.total_iterations += run.iterations;
  }
  out.rounds = options.num_chunks;
  out.scalar_messages = out.total_iterations * graph.total_degree();
  return out;
}

}  // namespace

std::vector<double> reconstruction_weights(int size) {
  require(size >= 1, ErrorCode::invalid_argument, "size must be positive");
  require(size <= 64, ErrorCode::size_limit,
          "share reconstruction is limited to 64 agents, got " +
              std::to_string(size));
  std::vector<double> weights(size);
  for (int l = 1; l <= size; ++l) {
    const double log_choose = std::lgamma(size + 1.0) - std::lgamma(l + 1.0) -
                              std::lgamma(size - l + 1.0);
    const double magnitude = std::exp(log_choose);
    weights[l - 1] = (l % 2 == 1) ? magnitude : -magnitude;
  }
  return weights;
}

std::vector<double> share_coefficients(int size, double range,
                                       std::mt19937_64& engine) {
  require(size >= 1, ErrorCode::invalid_argument, "size must be positive");
  require(range >= 0.0, ErrorCode::invalid_argument,
          "coefficient range must be nonnegative");
  std::uniform_real_distribution<double> uni(-range, range);
  std::vector<double> coefficients(size - 1);
  double scale = 1.0;
  for (int i = 1; i < size; ++i) {
    scale /= size;
    coefficients[i - 1] = uni(engine) * scale;
  }
  return coefficients;
}

std::vector<double> make_shares(double value, int size, double range,
                                std::mt19937_64& engine) {
  const auto coefficients = share_coefficients(size, range, engine);
  std::vector<double> shares(size);
  for (int point = 1; point <= size; ++point) {
    double acc = 0.0;
    for (int i = size - 2; i >= 0; --i) acc = acc * point + coefficients[i];
    shares[point - 1] = acc * point + value;
  }
  return shares;
}

std::vector<double> make_chunks(double value, int count, double range,
                                std::mt19937_64& engine) {
  require(count >= 1, ErrorCode::invalid_argument, "count must be positive");
  require(range >= 0.0, ErrorCode::invalid_argument,
          "chunk range must be nonnegative");
  std::uniform_real_distribution<double> uni(-range, range);
  std::vector<double> chunks(count);
  double partial = 0.0;
  for (int c = 0; c + 1 < count; ++c) {
    chunks[c] = uni(engine);
    partial += chunks[c];
  }
  chunks[count - 1] = value - partial;
  return chunks;
}

AggregationRun aggregate(const Graph& graph, AggregationMethod method,
                         const Eigen::VectorXd& values, std::uint64_t seed,
                         const AggregationOptions& options) {
  graph.validate();
  require(values.size() == graph.size(), ErrorCode::invalid_argument,
          "one value per agent required");
  switch (method) {
    case AggregationMethod::direct: {
      AggregationRun out;
      out.value = values.sum();
      return out;
    }
    case AggregationMethod::consensus:
      return aggregate_consensus(graph, values, options);
    case AggregationMethod::shamir:
      return aggregate_shamir(graph, values, seed, options);
    case AggregationMethod::chunked:
      return aggregate_chunked(graph, values, seed, options);
  }
  fail(ErrorCode::invalid_argument, "unknown aggregation method");
}

}  // namespace dcl
