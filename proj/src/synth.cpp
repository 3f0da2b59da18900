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

#include "dclearn/synth.hpp"

#include <cmath>
#include <random>
#include <string>

#include <Eigen/Cholesky>

#include "dclearn/error.hpp"
#include "dclearn/rng.hpp"

namespace dcl {

namespace {

constexpr std::uint64_t kSynthSalt = 0x73796e7468ULL;

Eigen::MatrixXd place_means(int num_components, int dim, double separation,
                            std::mt19937_64& engine) {
  const double radius = (separation + 1.0) * num_components;
  std::uniform_real_distribution<double> uni(-radius, radius);
  Eigen::MatrixXd means(num_components, dim);
  for (int k = 0; k < num_components; ++k) {
    bool placed = false;
    for (int attempt = 0; attempt < 10000 && !placed; ++attempt) {
      Eigen::RowVectorXd candidate(dim);
      for (int j = 0; j < dim; ++j) candidate[j] = uni(engine);
      placed = true;
      for (int other = 0; other < k && placed; ++other)
        placed = (candidate - means.row(other)).norm() >= separation;
      if (placed) means.row(k) = candidate;
    }
    require(placed, ErrorCode::construction_failed,
            "could not place component means at pairwise distance " +
                std::to_string(separation));
  }
  return means;
}

Eigen::MatrixXd sparse_spd_precision(int dim, double density,
                                     std::mt19937_64& engine) {
  std::bernoulli_distribution coin(density);
  std::uniform_real_distribution<double> magnitude(0.15, 0.45);
  std::bernoulli_distribution sign(0.5);
  std::uniform_real_distribution<double> diag_extra(0.0, 0.5);
  Eigen::MatrixXd precision = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j)
      if (coin(engine)) {
        const double value = magnitude(engine) * (sign(engine) ? 1.0 : -1.0);
        precision(i, j) = value;
        precision(j, i) = value;
      }
  // Strict diagonal dominance with a positive diagonal keeps the matrix
  // positive definite no matter which off-diagonals were drawn.
  for (int i = 0; i < dim; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < dim; ++j)
      if (j != i) row_sum += std::abs(precision(i, j));
    precision(i, i) = 0.5 + diag_extra(engine) + row_sum;
  }
  return precision;
}

}  // namespace

SynthData make_synthetic(const SynthOptions& options) {
  require(options.num_agents >= 1, ErrorCode::invalid_argument,
          "num_agents must be positive");
  require(options.num_components >= 1, ErrorCode::invalid_argument,
          "num_components must be positive");
  require(options.dim >= 1, ErrorCode::invalid_argument,
          "dim must be positive");
  require(options.samples_per_agent >= 1, ErrorCode::invalid_argument,
          "samples_per_agent must be positive");
  require(options.skew >= 0.0, ErrorCode::invalid_argument,
          "skew must be nonnegative");
  require(options.separation >= 0.0, ErrorCode::invalid_argument,
          "separation must be nonnegative");
  require(options.precision_density >= 0.0 && options.precision_density <= 1.0,
          ErrorCode::invalid_argument,
          "precision_density must be in [0, 1]");

  const int num_agents = options.num_agents;
  const int num_components = options.num_components;
  const int dim = options.dim;
  auto engine = make_engine(options.seed, kSynthSalt);

  SynthData data;
  data.means =
      place_means(num_components, dim, options.separation, engine);
  data.precisions.reserve(num_components);
  std::vector<Eigen::LLT<Eigen::MatrixXd>> roots;
  roots.reserve(num_components);
  for (int k = 0; k < num_components; ++k) {
    data.precisions.push_back(
        sparse_spd_precision(dim, options.precision_density, engine));
    roots.emplace_back(data.precisions.back());
  }

  data.weights.resize(num_agents, num_components);
  for (int a = 0; a < num_agents; ++a) {
    for (int k = 0; k < num_components; ++k)
      data.weights(a, k) =
          1.0 + options.skew * (k == a % num_components ? 1.0 : 0.0);
    data.weights.row(a) /= data.weights.row(a).sum();
  }

  std::normal_distribution<double> normal(0.0, 1.0);
  data.agent_data.reserve(num_agents);
  data.labels.resize(num_agents);
  for (int a = 0; a < num_agents; ++a) {
    // Copy the row out: matrix rows are strided in memory, and the
    // distribution needs a contiguous range.
    const Eigen::VectorXd agent_weights = data.weights.row(a).transpose();
    std::discrete_distribution<int> pick(
        agent_weights.data(), agent_weights.data() + num_components);
    Eigen::MatrixXd samples(options.samples_per_agent, dim);
    data.labels[a].resize(options.samples_per_agent);
    for (int i = 0; i < options.samples_per_agent; ++i) {
      const int k = pick(engine);
      data.labels[a][i] = k;
      Eigen::VectorXd z(dim);
      for (int j = 0; j < dim; ++j) z[j] = normal(engine);
      // With precision L L^T, solving L^T x = z gives x with covariance
      // (L L^T)^{-1}, i.e. a draw from the component.
      samples.row(i) =
          data.means.row(k) + roots[k].matrixU().solve(z).transpose();
    }
    data.agent_data.push_back(std::move(samples));
  }
  return data;
}

}  // namespace dcl
