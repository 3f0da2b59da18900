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
#include <vector>

#include <Eigen/Dense>

namespace dcl {

// Ground-truth generator for multi-agent mixture experiments: every agent
// draws from the same shared Gaussian components but with its own mixing
// weights, so the tasks are related yet not identical.
struct SynthOptions {
  int num_agents = 3;
  int num_components = 2;
  int dim = 2;
  int samples_per_agent = 200;
  // Agent a's weight for component (a mod num_components) is boosted by
  // this factor: weight ∝ 1 + skew * [k == a mod K]. Zero makes all agents
  // draw identically.
  double skew = 1.0;
  // Minimum pairwise distance between component means.
  double separation = 4.0;
  // Probability that an off-diagonal precision entry is nonzero.
  double precision_density = 0.4;
  std::uint64_t seed = 0;
};

struct SynthData {
  // One samples_per_agent x dim matrix per agent.
  std::vector<Eigen::MatrixXd> agent_data;
  // num_agents x num_components mixing weights, rows summing to one.
  Eigen::MatrixXd weights;
  // num_components x dim component means.
  Eigen::MatrixXd means;
  // One dim x dim symmetric positive-definite precision per component.
  std::vector<Eigen::MatrixXd> precisions;
  // labels[a][i] is the component that generated agent_data[a].row(i).
  std::vector<std::vector<int>> labels;
};

SynthData make_synthetic(const SynthOptions& options = {});

}  // namespace dcl
