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

#include "dclearn/graph.hpp"
#include "dclearn/sharing.hpp"

namespace dcl {

// L1-penalized sparse precision estimation (graphical lasso, block
// coordinate descent): minimizes -log det(P) + tr(C P) + penalty * |P|_1
// over symmetric positive-definite P, with the diagonal penalized as well.
// With penalty zero this computes the plain inverse of C.
Eigen::MatrixXd graphical_lasso(const Eigen::MatrixXd& covariance,
                                double penalty, double tol = 1e-8,
                                long max_sweeps = 10000);

// Log density of each data row under the Gaussian with the given mean and
// precision (inverse covariance).
Eigen::VectorXd gaussian_log_density(const Eigen::MatrixXd& data,
                                     const Eigen::VectorXd& mean,
                                     const Eigen::MatrixXd& precision);

// Posterior component memberships: one row per data row, one column per
// component, rows summing to one. Computed in log space for stability.
Eigen::MatrixXd responsibilities(
    const Eigen::MatrixXd& data, const Eigen::VectorXd& weights,
    const Eigen::MatrixXd& means,
    const std::vector<Eigen::MatrixXd>& precisions);

// Weighted zeroth, first and second moments of one agent's data under a
// responsibility matrix; everything a fitting round shares with the network.
struct ComponentStats {
  double count = 0.0;
  Eigen::VectorXd moment1;
  Eigen::MatrixXd moment2;
};

std::vector<ComponentStats> local_statistics(const Eigen::MatrixXd& data,
                                             const Eigen::MatrixXd& resp);

// A multi-task Gaussian mixture: component means and precisions are shared
// by everyone, while each agent keeps its own mixing weights.
struct MixtureModel {
  // num_agents x num_components, rows summing to one.
  Eigen::MatrixXd weights;
  // num_components x dim.
  Eigen::MatrixXd means;
  // num_components entries of dim x dim.
  std::vector<Eigen::MatrixXd> precisions;

  int num_agents() const { return static_cast<int>(weights.rows()); }
  int num_components() const { return static_cast<int>(means.rows()); }
  int dim() const { return static_cast<int>(means.cols()); }
};

// Deterministic shared starting point: component means are seeded by
// distance-weighted sampling over the pooled rows followed by a hard
// assignment, mixing weights start uniform, and precisions start as a
// scaled identity matched to the pooled spread. Every caller with the same
// data and seed gets the identical model.
MixtureModel initial_model(const std::vector<Eigen::MatrixXd>& data,
                           int num_components, std::uint64_t seed);

// The penalized objective the fit maximizes: total data log likelihood plus
// the mean-shrinkage, sparsity and weight-smoothing terms. Exposed so runs
// can be audited round by round.
double mixture_objective(const std::vector<Eigen::MatrixXd>& data,
                         const MixtureModel& model, double mean_shrinkage,
                         double sparsity, double weight_smoothing);

struct FitOptions {
  int num_components = 2;
  // Dirichlet-style smoothing added to each component count when updating
  // an agent's mixing weights.
  double weight_smoothing = 1.0;
  // Strength of the zero-mean shrinkage on component means.
  double mean_shrinkage = 1e-3;
  // L1 penalty weight on the precisions (scaled by 1/N_k per component).
  double sparsity = 0.1;
  // Relative objective change that counts as converged; zero runs exactly
  // max_rounds and reports convergence.
  double tolerance = 1e-6;
  int max_rounds = 200;
  double glasso_tol = 1e-8;
  // How the per-round sufficient statistics are summed across the graph.
  AggregationMethod aggregation = AggregationMethod::direct;
  AggregationOptions aggregation_options{};
  // Use the additive second-moment form C/N + mu mu^T as the sparse
  // precision input (kept to reproduce older runs) instead of the centered
  // form C/N - ((N + mean_shrinkage)/N) mu mu^T.
  bool legacy_covariance = false;
  std::uint64_t seed = 0;
};

struct FitResult {
  MixtureModel model;
  // Objective value after each completed round.
  std::vector<double> objective_trace;
  int rounds = 0;
  bool converged = false;
};

// Joint fitting across all agents on the communication graph: each round
// runs a local membership update, sums the sufficient statistics with the
// chosen aggregation method (one aggregation per scalar statistic), and
// rebuilds the shared means and precisions from the sums. Raises
// ErrorCode::stalled if the objective falls by more than a rounding slack,
// and ErrorCode::aggregation if a network round cannot settle.
FitResult fit_mixture(const Graph& graph,
                      const std::vector<Eigen::MatrixXd>& data,
                      const FitOptions& options);

// Plain numeric CSV, one matrix row per line. Blank lines and lines whose
// first nonblank character is '#' are skipped on read; errors carry the
// 1-based line number. Written values round-trip exactly.
Eigen::MatrixXd read_csv_matrix(const std::string& path);
void write_csv_matrix(const std::string& path, const Eigen::MatrixXd& matrix);

}  // namespace dcl
