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

// Shared derivations for the chunked protocol. Both the plain aggregation
// path and the logging simulator must draw identical chunks and identical
// per-round seatings from a given seed, so the salts and the derivation
// order live here.

#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "dclearn/rng.hpp"
#include "dclearn/sharing.hpp"

namespace dcl::internal {

constexpr std::uint64_t kShareSalt = 0x73686172651aULL;
constexpr std::uint64_t kChunkSalt = 0x6368756e6b33ULL;
constexpr std::uint64_t kSeatSalt = 0x7065726d7574ULL;

// chunks(a, c) is agent a's additive piece for round c. A negative range
// selects 10 * max(1, |value|) per agent.
inline Eigen::MatrixXd chunk_matrix(const Eigen::VectorXd& values,
                                    int num_chunks, double chunk_range,
                                    std::uint64_t seed) {
  const int n = static_cast<int>(values.size());
  Eigen::MatrixXd chunks(n, num_chunks);
  for (int a = 0; a < n; ++a) {
    double range = chunk_range;
    if (range < 0.0) range = 10.0 * std::max(1.0, std::abs(values[a]));
    auto engine = make_engine(seed, kChunkSalt + static_cast<std::uint64_t>(a));
    const auto row = make_chunks(values[a], num_chunks, range, engine);
    for (int c = 0; c < num_chunks; ++c) chunks(a, c) = row[c];
  }
  return chunks;
}

// Seating for one round: seats[a] is the network position agent a occupies.
inline std::vector<int> round_seating(int n, std::uint64_t seed, int round,
                                      bool permute) {
  std::vector<int> seats(n);
  std::iota(seats.begin(), seats.end(), 0);
  if (permute) {
    auto engine =
        make_engine(seed, kSeatSalt + static_cast<std::uint64_t>(round));
    std::shuffle(seats.begin(), seats.end(), engine);
  }
  return seats;
}

}  // namespace dcl::internal
