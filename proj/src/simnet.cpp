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

#include "dclearn/simnet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dclearn/consensus.hpp"
#include "dclearn/error.hpp"
#include "dclearn/rng.hpp"
#include "internal.hpp"

namespace dcl {

namespace {

constexpr std::uint64_t kCollusionSalt = 0x636f6c6cULL;
constexpr std::uint64_t kEavesSalt = 0x65617665ULL;

double clamp01(double p) { return std::min(1.0, std::max(0.0, p)); }

BreachEstimate finish_estimate(long hits, long trials) {
  BreachEstimate est;
  est.trials = trials;
  est.hits = hits;
  est.probability = static_cast<double>(hits) / static_cast<double>(trials);
  const double se = std::sqrt(est.probability * (1.0 - est.probability) /
                              static_cast<double>(trials));
  est.ci_low = clamp01(est.probability - 1.96 * se);
  est.ci_high = clamp01(est.probability + 1.96 * se);
  return est;
}

// Moves a uniform k-subset of the pool's elements to pool[0..k). Leaves the
// pool a permutation of its original elements, which is a valid (unbiased)
// starting state for the next call.
void draw_front(std::vector<long>& pool, long k, std::mt19937_64& engine) {
  const long m = static_cast<long>(pool.size());
  for (long i = 0; i < k; ++i) {
    std::uniform_int_distribution<long> pick(i, m - 1);
    std::swap(pool[i], pool[pick(engine)]);
  }
}

}  // namespace

BreachEstimate estimate_breach_collusion(int size, int degree,
                                         int num_colluders, int num_chunks,
                                         long trials, std::uint64_t seed) {
  require(size >= 2, ErrorCode::invalid_argument,
          "size must be at least 2, got " + std::to_string(size));
  require(degree >= 1 && degree <= size - 1, ErrorCode::invalid_argument,
          "degree must be in [1, size - 1], got " + std::to_string(degree));
  require(num_colluders >= 0 && num_colluders <= size - 1,
          ErrorCode::invalid_argument,
          "num_colluders must be in [0, size - 1], got " +
              std::to_string(num_colluders));
  require(num_chunks >= 1, ErrorCode::invalid_argument,
          "num_chunks must be at least 1, got " + std::to_string(num_chunks));
  require(trials >= 1, ErrorCode::invalid_argument,
          "trials must be at least 1, got " + std::to_string(trials));

  auto engine = make_engine(seed, kCollusionSalt);
  // The victim is a fixed agent; the other size - 1 agents are exchangeable,
  // so they are represented as plain indices.
  std::vector<long> colluder_pool(size - 1);
  std::vector<long> neighbor_pool(size - 1);
  std::iota(colluder_pool.begin(), colluder_pool.end(), 0);
  std::iota(neighbor_pool.begin(), neighbor_pool.end(), 0);
  std::vector<char> is_colluder(size - 1, 0);

  long hits = 0;
  for (long trial = 0; trial < trials; ++trial) {
    draw_front(colluder_pool, num_colluders, engine);
    for (int i = 0; i < num_colluders; ++i) is_colluder[colluder_pool[i]] = 1;

    bool all_rounds_hit = true;
    for (int round = 0; round < num_chunks && all_rounds_hit; ++round) {
      draw_front(neighbor_pool, degree, engine);
      bool round_hit = false;
      for (int i = 0; i < degree && !round_hit; ++i)
        round_hit = is_colluder[neighbor_pool[i]] != 0;
      all_rounds_hit = round_hit;
    }
    if (all_rounds_hit) ++hits;

    for (int i = 0; i < num_colluders; ++i) is_colluder[colluder_pool[i]] = 0;
  }
  return finish_estimate(hits, trials);
}

BreachEstimate estimate_breach_eavesdrop(long total_slots, int degree,
                                         long num_tapped, int num_chunks,
                                         long trials, std::uint64_t seed) {
  require(total_slots >= 1, ErrorCode::invalid_argument,
          "total_slots must be positive, got " + std::to_string(total_slots));
  require(degree >= 1 && degree <= total_slots, ErrorCode::invalid_argument,
          "degree must be in [1, total_slots], got " + std::to_string(degree));
  require(num_tapped >= 0 && num_tapped <= total_slots,
          ErrorCode::invalid_argument,
          "num_tapped must be in [0, total_slots], got " +
              std::to_string(num_tapped));
  require(num_chunks >= 1, ErrorCode::invalid_argument,
          "num_chunks must be at least 1, got " + std::to_string(num_chunks));
  require(trials >= 1, ErrorCode::invalid_argument,
          "trials must be at least 1, got " + std::to_string(trials));

  auto engine = make_engine(seed, kEavesSalt);
  std::vector<long> tap_pool(total_slots);
  std::vector<long> slot_pool(total_slots);
  std::iota(tap_pool.begin(), tap_pool.end(), 0);
  std::iota(slot_pool.begin(), slot_pool.end(), 0);
  std::vector<char> is_tapped(total_slots, 0);

  long hits = 0;
  for (long trial = 0; trial < trials; ++trial) {
    draw_front(tap_pool, num_tapped, engine);
    for (long i = 0; i < num_tapped; ++i) is_tapped[tap_pool[i]] = 1;

    bool all_rounds_hit = true;
    for (int round = 0; round < num_chunks && all_rounds_hit; ++round) {
      draw_front(slot_pool, degree, engine);
      bool round_hit = false;
      for (int i = 0; i < degree && !round_hit; ++i)
        round_hit = is_tapped[slot_pool[i]] != 0;
      all_rounds_hit = round_hit;
    }
    if (all_rounds_hit) ++hits;

    for (long i = 0; i < num_tapped; ++i) is_tapped[tap_pool[i]] = 0;
  }
  return finish_estimate(hits, trials);
}

std::vector<std::pair<int, int>> directed_slots(const Graph& graph) {
  graph.validate();
  const int n = graph.size();
  std::vector<std::pair<int, int>> slots;
  slots.reserve(static_cast<std::size_t>(graph.total_degree()));
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      for (int copy = 0; copy < graph.adjacency(u, v); ++copy)
        slots.emplace_back(u, v);
  return slots;
}

ProtocolRun run_protocol(const Graph& graph, const Eigen::VectorXd& values,
                         std::uint64_t seed, const ProtocolOptions& options) {
  graph.validate();
  const int n = graph.size();
  require(values.size() == n, ErrorCode::invalid_argument,
          "one value per agent required");
  require(options.num_chunks >= 1, ErrorCode::invalid_argument,
          "num_chunks must be at least 1");

  const Eigen::MatrixXd chunks = internal::chunk_matrix(
      values, options.num_chunks, options.chunk_range, seed);
  const auto transition = make_transition(graph, options.epsilon);
  const auto slots = directed_slots(graph);

  ConsensusOptions gossip;
  gossip.tolerance = options.tolerance;
  gossip.max_iterations = options.max_iterations;
  gossip.record_trace = false;

  ProtocolRun out;
  out.rounds = options.num_chunks;
  out.seats.reserve(options.num_chunks);
  out.round_iterations.reserve(options.num_chunks);
  for (int c = 0; c < options.num_chunks; ++c) {
    const auto seats = internal::round_seating(n, seed, c, options.permute);
    Eigen::VectorXd start(n);
    for (int a = 0; a < n; ++a) start[seats[a]] = chunks(a, c);
    const auto run = run_consensus(transition, start, gossip);
    if (!run.converged)
      fail(ErrorCode::aggregation,
           "chunk round " + std::to_string(c) + " did not settle within " +
               std::to_string(options.max_iterations) + " iterations");

    if (options.record_log) {
      std::vector<int> agent_at(n);
      for (int a = 0; a < n; ++a) agent_at[seats[a]] = a;
      // Replays the exact iteration sequence to log the state each slot
      // carried; the replay ends at the values run_consensus returned.
      Eigen::VectorXd x = start;
      for (long t = 0; t < run.iterations; ++t) {
        for (const auto& [pu, pv] : slots)
          out.log.push_back({c, t, agent_at[pu], agent_at[pv], x[pu]});
        x = transition.apply(x);
      }
    }

    out.value += n * run.values[seats[0]];
    out.total_iterations += run.iterations;
    out.round_iterations.push_back(run.iterations);
    out.seats.push_back(seats);
  }
  out.scalar_messages = out.total_iterations * graph.total_degree();
  return out;
}

bool breached_by_collusion(const ProtocolRun& run, int victim,
                           const std::vector<int>& colluders) {
  require(run.rounds >= 1 &&
              run.seats.size() == static_cast<std::size_t>(run.rounds),
          ErrorCode::invalid_argument, "run holds no recorded rounds");
  const int n = static_cast<int>(run.seats.front().size());
  require(victim >= 0 && victim < n, ErrorCode::invalid_argument,
          "victim id out of range");
  require(run.total_iterations == 0 || !run.log.empty(),
          ErrorCode::invalid_argument,
          "collusion check needs the run's message log");

  std::vector<char> is_colluder(n, 0);
  for (int colluder : colluders) {
    require(colluder >= 0 && colluder < n, ErrorCode::invalid_argument,
            "colluder id out of range");
    require(colluder != victim, ErrorCode::invalid_argument,
            "the victim cannot collude against itself");
    is_colluder[colluder] = 1;
  }

  std::vector<char> round_hit(run.rounds, 0);
  for (const auto& record : run.log)
    if (record.iteration == 0 && record.from == victim &&
        is_colluder[record.to])
      round_hit[record.round] = 1;
  return std::all_of(round_hit.begin(), round_hit.end(),
                     [](char hit) { return hit != 0; });
}

bool breached_by_eavesdrop(const ProtocolRun& run, const Graph& graph,
                           int victim, const std::vector<long>& tapped_slots) {
  graph.validate();
  const int n = graph.size();
  require(run.rounds >= 1 &&
              run.seats.size() == static_cast<std::size_t>(run.rounds) &&
              run.round_iterations.size() ==
                  static_cast<std::size_t>(run.rounds),
          ErrorCode::invalid_argument, "run holds no recorded rounds");
  require(static_cast<int>(run.seats.front().size()) == n,
          ErrorCode::invalid_argument,
          "run and graph disagree on the number of agents");
  require(victim >= 0 && victim < n, ErrorCode::invalid_argument,
          "victim id out of range");

  const auto slots = directed_slots(graph);
  const long total = static_cast<long>(slots.size());
  std::vector<char> sender_tapped(n, 0);
  for (long k : tapped_slots) {
    require(k >= 0 && k < total, ErrorCode::invalid_argument,
            "tapped slot index out of range");
    sender_tapped[slots[static_cast<std::size_t>(k)].first] = 1;
  }

  for (int c = 0; c < run.rounds; ++c) {
    // A round with no iterations never put the chunk on a wire.
    if (run.round_iterations[c] < 1) return false;
    if (!sender_tapped[run.seats[c][victim]]) return false;
  }
  return true;
}

}  // namespace dcl
