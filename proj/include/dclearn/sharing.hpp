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
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "dclearn/graph.hpp"

namespace dcl {

// Weights recovering a polynomial's value at 0 from its values at 1..size:
// w_l = (-1)^(l-1) * binomial(size, l). They sum to 1 and kill every pure
// power n^i for 1 <= i < size. Their magnitudes grow like 2^size, which is
// why totals recovered through them lose roughly size bits of precision;
// sizes above 64 are refused (ErrorCode::size_limit).
std::vector<double> reconstruction_weights(int size);

// Random masking coefficients c_1..c_{size-1}, with c_i uniform on
// [-range, range] scaled by size^-i. The decay keeps evaluations at 1..size
// all on the order of range, so reconstruction stays numerically viable.
std::vector<double> share_coefficients(int size, double range,
                                       std::mt19937_64& engine);

// Evaluations at n = 1..size of the polynomial with constant term `value`
// and masking coefficients drawn as above. Any proper subset of the shares
// leaves the value undetermined; all of them recover it through
// reconstruction_weights.
std::vector<double> make_shares(double value, int size, double range,
                                std::mt19937_64& engine);

// Additive split of `value` into `count` pieces: the first count-1 are
// uniform on [-range, range] and the last is exactly value minus their
// running floating-point sum, so re-adding in order reproduces the value up
// to rounding of the re-summation itself.
std::vector<double> make_chunks(double value, int count, double range,
                                std::mt19937_64& engine);

enum class AggregationMethod {
  direct = 0,     // exact sum, no network
  consensus = 1,  // one gossip round on the raw values
  shamir = 2,     // polynomial shares, one gossip round per evaluation point
  chunked = 3,    // additive chunks, one gossip round per chunk
};

struct AggregationOptions {
  double epsilon = 0.0;        // gossip step; <= 0 picks the graph default
  double tolerance = 1e-6;     // per-round gossip tolerance
  long max_iterations = 1000000;
  int num_chunks = 3;          // chunked only
  // Masking scale for shares; negative picks 10 * max |value| (at least 1),
  // zero disables masking entirely.
  double coefficient_range = -1.0;
  // Chunk scale; negative picks 10 * max(1, |value|) per agent, zero makes
  // every chunk but the last vanish.
  double chunk_range = -1.0;
  bool permute = true;  // chunked only: relabel the graph every round
};

struct AggregationRun {
  double value = 0.0;          // recovered total as seen by agent 0
  int rounds = 0;              // gossip rounds executed
  long total_iterations = 0;   // summed gossip iterations over all rounds
  long scalar_messages = 0;    // total_iterations * total degree
};

// Computes the total of one scalar per agent over the graph.
//
// shamir runs every evaluation round to the same iteration count (the
// largest any single round needs): combined through the reconstruction
// weights, the truncation error of the shared count collapses to that of a
// single gossip round on the raw values, instead of being amplified by the
// 2^size weight magnitudes.
//
// chunked relabels the graph with a fresh seeded permutation each round (when
// permute is set) so that an observer's neighborhood changes from chunk to
// chunk.
//
// A round that exhausts max_iterations raises ErrorCode::aggregation.
AggregationRun aggregate(const Graph& graph, AggregationMethod method,
                         const Eigen::VectorXd& values, std::uint64_t seed,
                         const AggregationOptions& options = {});

}  // namespace dcl
