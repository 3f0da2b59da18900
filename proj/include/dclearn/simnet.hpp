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
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dclearn/graph.hpp"

namespace dcl {

// Monte-Carlo estimate of a breach probability, with a normal-approximation
// 95% confidence interval clamped to [0, 1].
struct BreachEstimate {
  double probability = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  long trials = 0;
  long hits = 0;
};

// Simulates the chance model behind collusion_breach_exact: per trial the
// num_colluders adversaries are a fixed subset of the size - 1 other agents,
// and each of the num_chunks rounds redraws the victim's `degree` neighbors
// uniformly among those size - 1 agents. A trial is a hit when every round's
// neighborhood contains at least one colluder.
BreachEstimate estimate_breach_collusion(int size, int degree,
                                         int num_colluders, int num_chunks,
                                         long trials, std::uint64_t seed);

// Simulates the chance model behind eavesdrop_breach_exact: per trial the
// num_tapped wire taps are a fixed subset of the total_slots directed
// transmission slots, and each round redraws the victim's `degree` outgoing
// slots uniformly. A trial is a hit when every round has a tapped slot.
BreachEstimate estimate_breach_eavesdrop(long total_slots, int degree,
                                         long num_tapped, int num_chunks,
                                         long trials, std::uint64_t seed);

// One scalar handed from one agent to another during the protocol.
// `from` and `to` are agent ids (not seats); iteration counts from 0 within
// the round, and the iteration-0 payload of a round is the sender's raw
// chunk for that round.
struct MessageRecord {
  int round = 0;
  long iteration = 0;
  int from = 0;
  int to = 0;
  double payload = 0.0;
};

struct ProtocolOptions {
  int num_chunks = 3;
  // 0 picks 1 / (max_degree + 1).
  double epsilon = 0.0;
  double tolerance = 1e-6;
  long max_iterations = 1000000;
  // Negative picks 10 * max(1, |value|) per agent; zero disables masking.
  double chunk_range = -1.0;
  // Re-seat the agents with a fresh random assignment each round.
  bool permute = true;
  // Keep the full message log (turn off for large runs).
  bool record_log = true;
};

// A full run of chunked aggregation with every transmission accounted for.
// seats[round][agent] is the network position the agent occupied; the log,
// when recorded, holds one entry per scalar sent, grouped by round, then
// iteration, then the slot order of directed_slots.
struct ProtocolRun {
  double value = 0.0;
  int rounds = 0;
  long total_iterations = 0;
  long scalar_messages = 0;
  std::vector<long> round_iterations;
  std::vector<std::vector<int>> seats;
  std::vector<MessageRecord> log;
};

// Canonical enumeration of the directed transmission slots of a graph:
// ascending (u, v) over all ordered pairs, one slot per unit of link
// multiplicity, and loop links once per unit at (u, u). The list's length
// equals graph.total_degree().
std::vector<std::pair<int, int>> directed_slots(const Graph& graph);

// Runs chunked aggregation on the graph and records who sent what to whom.
// Chunks and seatings are derived exactly as in aggregate() with
// AggregationMethod::chunked, so the recovered value matches it bit for bit
// for equal options.
ProtocolRun run_protocol(const Graph& graph, const Eigen::VectorXd& values,
                         std::uint64_t seed,
                         const ProtocolOptions& options = {});

// Whether the colluders, pooling everything they received, captured the
// victim's raw chunk in every round (i.e. some colluder was a first-hop
// recipient of the victim each round). Requires the run's message log.
bool breached_by_collusion(const ProtocolRun& run, int victim,
                           const std::vector<int>& colluders);

// Whether taps on the given slots of the fixed physical network (indices
// into directed_slots(graph)) captured the victim's raw chunk in every
// round. Works from the seatings alone; the log may be absent.
bool breached_by_eavesdrop(const ProtocolRun& run, const Graph& graph,
                           int victim, const std::vector<long>& tapped_slots);

}  // namespace dcl
