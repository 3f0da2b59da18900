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

#include "dclearn/learning.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Cholesky>

#include "dclearn/error.hpp"
#include "dclearn/rng.hpp"

namespace dcl {

namespace {

constexpr std::uint64_t kInitSalt = 0x696e6974ULL;

double soft_threshold(double value, double amount) {
  if (value > amount) return value - amount;
  if (value < -amount) return value + amount;
  return 0.0;
}

}  // namespace

Eigen::MatrixXd graphical_lasso(const Eigen::MatrixXd& covariance,
                                double penalty, double tol, long max_sweeps) {
  const int m = static_cast<int>(covariance.rows());
  require(m >= 1 && covariance.cols() == m, ErrorCode::invalid_argument,
          "covariance must be a square matrix");
  require(penalty >= 0.0, ErrorCode::invalid_argument,
          "penalty must be nonnegative");
  require(tol > 0.0, ErrorCode::invalid_argument, "tol must be positive");
  require(max_sweeps >= 1, ErrorCode::invalid_argument,
          "max_sweeps must be positive");

  Eigen::MatrixXd S = 0.5 * (covariance + covariance.transpose());
  const double scale = std::max(1.0, S.cwiseAbs().maxCoeff());
  require((covariance - covariance.transpose()).cwiseAbs().maxCoeff() <=
              1e-8 * scale,
          ErrorCode::invalid_argument, "covariance must be symmetric");
  for (int j = 0; j < m; ++j)
    require(S(j, j) + penalty > 0.0, ErrorCode::numeric,
            "covariance diagonal plus penalty must be positive");

  if (m == 1) {
    Eigen::MatrixXd precision(1, 1);
    precision(0, 0) = 1.0 / (S(0, 0) + penalty);
    return precision;
  }

  Eigen::MatrixXd W = S + penalty * Eigen::MatrixXd::Identity(m, m);
  // B.col(j) holds the regression coefficients of column j's subproblem;
  // its diagonal stays zero so full-row dot products skip entry j for free.
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m, m);

  bool settled = false;
  for (long sweep = 0; sweep < max_sweeps && !settled; ++sweep) {
    double max_change = 0.0;
    for (int j = 0; j < m; ++j) {
      for (int pass = 0; pass < 10000; ++pass) {
        double coord_change = 0.0;
        for (int l = 0; l < m; ++l) {
          if (l == j) continue;
          const double partial =
              W.row(l).dot(B.col(j)) - W(l, l) * B(l, j);
          const double updated =
              soft_threshold(S(l, j) - partial, penalty) / W(l, l);
          coord_change =
              std::max(coord_change, std::abs(updated - B(l, j)));
          B(l, j) = updated;
        }
        if (coord_change <= tol * scale) break;
      }
      for (int l = 0; l < m; ++l) {
        if (l == j) continue;
        const double updated = W.row(l).dot(B.col(j));
        max_change = std::max(max_change, std::abs(updated - W(l, j)));
        W(l, j) = updated;
        W(j, l) = updated;
      }
    }
    settled = max_change <= tol * scale;
  }
  require(settled, ErrorCode::no_convergence,
          "sparse precision estimation did not settle within " +
              std::to_string(max_sweeps) + " sweeps");

  Eigen::MatrixXd precision(m, m);
  for (int j = 0; j < m; ++j) {
    const double denom = W(j, j) - W.col(j).dot(B.col(j));
    require(denom > 0.0, ErrorCode::numeric,
            "sparse precision estimation lost positive definiteness");
    precision(j, j) = 1.0 / denom;
    for (int l = 0; l < m; ++l)
      if (l != j) precision(l, j) = -B(l, j) * precision(j, j);
  }
  return 0.5 * (precision + precision.transpose());
}

Eigen::VectorXd gaussian_log_density(const Eigen::MatrixXd& data,
                                     const Eigen::VectorXd& mean,
                                     const Eigen::MatrixXd& precision) {
  const int m = static_cast<int>(mean.size());
  require(m >= 1, ErrorCode::invalid_argument, "mean must be nonempty");
  require(data.cols() == m, ErrorCode::invalid_argument,
          "data and mean dimensions disagree");
  require(precision.rows() == m && precision.cols() == m,
          ErrorCode::invalid_argument, "precision must be dim x dim");

  Eigen::LLT<Eigen::MatrixXd> llt(precision);
  require(llt.info() == Eigen::Success, ErrorCode::numeric,
          "precision matrix is not positive definite");
  double half_log_det = 0.0;
  for (int j = 0; j < m; ++j)
    half_log_det += std::log(llt.matrixL()(j, j));
  const double base =
      -0.5 * m * std::log(2.0 * M_PI) + half_log_det;

  Eigen::VectorXd out(data.rows());
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    const Eigen::VectorXd centered = data.row(i).transpose() - mean;
    out[i] = base - 0.5 * (llt.matrixU() * centered).squaredNorm();
  }
  return out;
}

Eigen::MatrixXd responsibilities(
    const Eigen::MatrixXd& data, const Eigen::VectorXd& weights,
    const Eigen::MatrixXd& means,
    const std::vector<Eigen::MatrixXd>& precisions) {
  const int num_components = static_cast<int>(weights.size());
  require(num_components >= 1, ErrorCode::invalid_argument,
          "at least one component required");
  require(means.rows() == num_components &&
              static_cast<int>(precisions.size()) == num_components,
          ErrorCode::invalid_argument,
          "weights, means and precisions disagree on the component count");
  require((weights.array() >= 0.0).all() && weights.sum() > 0.0,
          ErrorCode::invalid_argument,
          "weights must be nonnegative and not all zero");

  Eigen::MatrixXd log_post(data.rows(), num_components);
  for (int k = 0; k < num_components; ++k)
    log_post.col(k) =
        gaussian_log_density(data, means.row(k).transpose(), precisions[k])
            .array() +
        std::log(weights[k]);

  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    const double top = log_post.row(i).maxCoeff();
    Eigen::ArrayXd shifted = (log_post.row(i).array() - top).exp();
    log_post.row(i) = shifted / shifted.sum();
  }
  return log_post;
}

std::vector<ComponentStats> local_statistics(const Eigen::MatrixXd& data,
                                             const Eigen::MatrixXd& resp) {
  require(data.rows() == resp.rows(), ErrorCode::invalid_argument,
          "data and responsibilities disagree on the sample count");
  const int num_components = static_cast<int>(resp.cols());
  std::vector<ComponentStats> stats(num_components);
  for (int k = 0; k < num_components; ++k) {
    stats[k].count = resp.col(k).sum();
    stats[k].moment1 = data.transpose() * resp.col(k);
    stats[k].moment2 =
        data.transpose() * resp.col(k).asDiagonal() * data;
  }
  return stats;
}

namespace {

Eigen::MatrixXd pool_rows(const std::vector<Eigen::MatrixXd>& data) {
  Eigen::Index total = 0;
  for (const auto& block : data) total += block.rows();
  Eigen::MatrixXd pooled(total, data.front().cols());
  Eigen::Index at = 0;
  for (const auto& block : data) {
    pooled.middleRows(at, block.rows()) = block;
    at += block.rows();
  }
  return pooled;
}

double pooled_covariance_trace(const Eigen::MatrixXd& pooled) {
  const Eigen::RowVectorXd center = pooled.colwise().mean();
  return (pooled.rowwise() - center).squaredNorm() /
         static_cast<double>(pooled.rows());
}

void check_data(const std::vector<Eigen::MatrixXd>& data) {
  require(!data.empty(), ErrorCode::invalid_argument,
          "at least one agent's data required");
  const Eigen::Index dim = data.front().cols();
  require(dim >= 1, ErrorCode::invalid_argument,
          "data must have at least one column");
  for (const auto& block : data) {
    require(block.cols() == dim, ErrorCode::invalid_argument,
            "all agents must share the same data dimension");
    require(block.rows() >= 1, ErrorCode::invalid_argument,
            "every agent needs at least one sample");
  }
}

}  // namespace

MixtureModel initial_model(const std::vector<Eigen::MatrixXd>& data,
                           int num_components, std::uint64_t seed) {
  check_data(data);
  require(num_components >= 1, ErrorCode::invalid_argument,
          "num_components must be positive");

  const Eigen::MatrixXd pooled = pool_rows(data);
  const Eigen::Index total = pooled.rows();
  const int dim = static_cast<int>(pooled.cols());
  auto engine = make_engine(seed, kInitSalt);

  // Distance-weighted center seeding over the pooled rows.
  Eigen::MatrixXd centers(num_components, dim);
  std::uniform_int_distribution<Eigen::Index> any_row(0, total - 1);
  centers.row(0) = pooled.row(any_row(engine));
  Eigen::VectorXd dist2 =
      (pooled.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int k = 1; k < num_components; ++k) {
    if (dist2.sum() > 0.0) {
      std::discrete_distribution<Eigen::Index> pick(
          dist2.data(), dist2.data() + total);
      centers.row(k) = pooled.row(pick(engine));
    } else {
      centers.row(k) = pooled.row(any_row(engine));
    }
    dist2 = dist2.cwiseMin(
        (pooled.rowwise() - centers.row(k)).rowwise().squaredNorm());
  }

  // Hard assignment to the nearest center (lowest index on ties).
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(num_components);
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(num_components, dim);
  for (Eigen::Index i = 0; i < total; ++i) {
    int best = 0;
    double best_dist =
        (pooled.row(i) - centers.row(0)).squaredNorm();
    for (int k = 1; k < num_components; ++k) {
      const double d = (pooled.row(i) - centers.row(k)).squaredNorm();
      if (d < best_dist) {
        best = k;
        best_dist = d;
      }
    }
    counts[best] += 1.0;
    sums.row(best) += pooled.row(i);
  }

  MixtureModel model;
  model.means.resize(num_components, dim);
  for (int k = 0; k < num_components; ++k)
    model.means.row(k) =
        counts[k] > 0.0 ? (sums.row(k) / counts[k]).eval() : centers.row(k);

  model.weights = Eigen::MatrixXd::Constant(
      static_cast<Eigen::Index>(data.size()), num_components,
      1.0 / num_components);

  const double spread =
      std::max(pooled_covariance_trace(pooled), 1e-12);
  model.precisions.assign(
      num_components,
      (dim / spread) * Eigen::MatrixXd::Identity(dim, dim));
  return model;
}

double mixture_objective(const std::vector<Eigen::MatrixXd>& data,
                         const MixtureModel& model, double mean_shrinkage,
                         double sparsity, double weight_smoothing) {
  check_data(data);
  const int num_components = model.num_components();
  require(model.num_agents() == static_cast<int>(data.size()),
          ErrorCode::invalid_argument,
          "model and data disagree on the agent count");

  double objective = 0.0;
  for (std::size_t a = 0; a < data.size(); ++a) {
    Eigen::MatrixXd log_joint(data[a].rows(), num_components);
    for (int k = 0; k < num_components; ++k)
      log_joint.col(k) =
          gaussian_log_density(data[a], model.means.row(k).transpose(),
                               model.precisions[k])
              .array() +
          std::log(model.weights(a, k));
    for (Eigen::Index i = 0; i < log_joint.rows(); ++i) {
      const double top = log_joint.row(i).maxCoeff();
      objective +=
          top + std::log((log_joint.row(i).array() - top).exp().sum());
    }
    if (weight_smoothing > 0.0)
      for (int k = 0; k < num_components; ++k)
        objective += weight_smoothing * std::log(model.weights(a, k));
  }
  for (int k = 0; k < num_components; ++k) {
    const Eigen::RowVectorXd mu = model.means.row(k);
    objective -= 0.5 * mean_shrinkage *
                 (mu * model.precisions[k] * mu.transpose())(0, 0);
    objective -= 0.5 * sparsity * model.precisions[k].cwiseAbs().sum();
  }
  return objective;
}

namespace {

// Sums one scalar statistic over all agents with the configured method.
double aggregate_stat(const Graph& graph, const FitOptions& options,
                      const Eigen::VectorXd& values, int round, long elem) {
  const std::uint64_t stat_seed = mix_seed(
      mix_seed(options.seed, 1000 + static_cast<std::uint64_t>(round)),
      static_cast<std::uint64_t>(elem));
  return aggregate(graph, options.aggregation, values, stat_seed,
                   options.aggregation_options)
      .value;
}

}  // namespace

FitResult fit_mixture(const Graph& graph,
                      const std::vector<Eigen::MatrixXd>& data,
                      const FitOptions& options) {
  graph.validate();
  const int num_agents = graph.size();
  require(static_cast<int>(data.size()) == num_agents,
          ErrorCode::invalid_argument, "one data matrix per agent required");
  check_data(data);
  const int num_components = options.num_components;
  const int dim = static_cast<int>(data.front().cols());
  require(num_components >= 1, ErrorCode::invalid_argument,
          "num_components must be positive");
  require(options.weight_smoothing >= 0.0, ErrorCode::invalid_argument,
          "weight_smoothing must be nonnegative");
  require(options.mean_shrinkage >= 0.0, ErrorCode::invalid_argument,
          "mean_shrinkage must be nonnegative");
  require(options.sparsity >= 0.0, ErrorCode::invalid_argument,
          "sparsity must be nonnegative");
  require(options.tolerance >= 0.0, ErrorCode::invalid_argument,
          "tolerance must be nonnegative");
  require(options.max_rounds >= 1, ErrorCode::invalid_argument,
          "max_rounds must be positive");
  require(options.glasso_tol > 0.0, ErrorCode::invalid_argument,
          "glasso_tol must be positive");

  MixtureModel model = initial_model(data, num_components, options.seed);
  const Eigen::MatrixXd pooled = pool_rows(data);
  const double spread = std::max(pooled_covariance_trace(pooled), 1e-12);

  FitResult out;
  double previous = -std::numeric_limits<double>::infinity();
  for (int round = 1; round <= options.max_rounds; ++round) {
    // Membership update and local moments.
    std::vector<std::vector<ComponentStats>> stats(data.size());
    for (int a = 0; a < num_agents; ++a) {
      const Eigen::MatrixXd resp =
          responsibilities(data[a], model.weights.row(a).transpose(),
                           model.means, model.precisions);
      stats[a] = local_statistics(data[a], resp);
    }

    // Mixing weights stay local to each agent.
    for (int a = 0; a < num_agents; ++a) {
      const double rows = static_cast<double>(data[a].rows());
      for (int k = 0; k < num_components; ++k)
        model.weights(a, k) =
            (stats[a][k].count + options.weight_smoothing) /
            (rows + num_components * options.weight_smoothing);
    }

    // Network sums of the moments, one aggregation per scalar.
    long elem = 0;
    Eigen::VectorXd slice(num_agents);
    std::vector<double> counts(num_components);
    std::vector<Eigen::VectorXd> moment1(num_components);
    std::vector<Eigen::MatrixXd> moment2(num_components);
    for (int k = 0; k < num_components; ++k) {
      for (int a = 0; a < num_agents; ++a) slice[a] = stats[a][k].count;
      counts[k] = aggregate_stat(graph, options, slice, round, elem++);
      moment1[k].resize(dim);
      for (int j = 0; j < dim; ++j) {
        for (int a = 0; a < num_agents; ++a)
          slice[a] = stats[a][k].moment1[j];
        moment1[k][j] = aggregate_stat(graph, options, slice, round, elem++);
      }
      moment2[k].resize(dim, dim);
      for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j) {
          for (int a = 0; a < num_agents; ++a)
            slice[a] = stats[a][k].moment2(i, j);
          const double sum =
              aggregate_stat(graph, options, slice, round, elem++);
          moment2[k](i, j) = sum;
          moment2[k](j, i) = sum;
        }
    }

    // Shared parameter rebuild.
    bool reseeded = false;
    for (int k = 0; k < num_components; ++k) {
      if (counts[k] < 1e-8) {
        // The component lost all its mass: restart it at the sample the
        // current means explain worst, with a broad spherical precision.
        Eigen::Index farthest = 0;
        double farthest_dist = -1.0;
        for (Eigen::Index i = 0; i < pooled.rows(); ++i) {
          double nearest = std::numeric_limits<double>::infinity();
          for (int other = 0; other < num_components; ++other)
            nearest = std::min(
                nearest,
                (pooled.row(i) - model.means.row(other)).squaredNorm());
          if (nearest > farthest_dist) {
            farthest_dist = nearest;
            farthest = i;
          }
        }
        model.means.row(k) = pooled.row(farthest);
        model.precisions[k] =
            (dim / spread) * Eigen::MatrixXd::Identity(dim, dim);
        reseeded = true;
        continue;
      }
      model.means.row(k) =
          moment1[k].transpose() / (options.mean_shrinkage + counts[k]);
      const Eigen::RowVectorXd mu = model.means.row(k);
      Eigen::MatrixXd second = moment2[k] / counts[k];
      if (options.legacy_covariance) {
        second += mu.transpose() * mu;
      } else {
        second -= ((counts[k] + options.mean_shrinkage) / counts[k]) *
                  (mu.transpose() * mu);
      }
      model.precisions[k] = graphical_lasso(
          second, options.sparsity / counts[k], options.glasso_tol);
    }

    const double objective =
        mixture_objective(data, model, options.mean_shrinkage,
                          options.sparsity, options.weight_smoothing);
    out.objective_trace.push_back(objective);
    out.rounds = round;

    if (!reseeded && round >= 2 &&
        objective < previous - 1e-6 * std::max(1.0, std::abs(previous)))
      fail(ErrorCode::stalled,
           "objective fell from " + std::to_string(previous) + " to " +
               std::to_string(objective) + " at round " +
               std::to_string(round));

    const bool settled =
        options.tolerance > 0.0 && round >= 2 &&
        std::abs(objective - previous) <=
            options.tolerance * std::max(1.0, std::abs(objective));
    previous = objective;
    if (settled) {
      out.converged = true;
      break;
    }
  }
  if (options.tolerance == 0.0) out.converged = true;
  out.model = std::move(model);
  return out;
}

Eigen::MatrixXd read_csv_matrix(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::io, path + ": cannot open for reading");

  auto trim = [](std::string text) {
    const auto first = text.find_first_not_of(" \t");
    if (first == std::string::npos) return std::string();
    const auto last = text.find_last_not_of(" \t");
    return text.substr(first, last - first + 1);
  };

  std::vector<std::vector<double>> rows;
  std::string line;
  long line_number = 0;
  Eigen::Index width = -1;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#') continue;

    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = body.find(',', start);
      const std::string cell =
          trim(body.substr(start, comma == std::string::npos
                                      ? std::string::npos
                                      : comma - start));
      std::size_t used = 0;
      double value = 0.0;
      bool ok = !cell.empty();
      if (ok) {
        try {
          value = std::stod(cell, &used);
        } catch (const std::exception&) {
          ok = false;
        }
      }
      require(ok && used == cell.size(), ErrorCode::io,
              path + " line " + std::to_string(line_number) +
                  ": cannot parse '" + cell + "' as a number");
      row.push_back(value);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (width < 0) width = static_cast<Eigen::Index>(row.size());
    require(static_cast<Eigen::Index>(row.size()) == width, ErrorCode::io,
            path + " line " + std::to_string(line_number) + ": expected " +
                std::to_string(width) + " fields, got " +
                std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  require(!rows.empty(), ErrorCode::io, path + ": no data rows");

  Eigen::MatrixXd matrix(static_cast<Eigen::Index>(rows.size()), width);
  for (Eigen::Index i = 0; i < matrix.rows(); ++i)
    for (Eigen::Index j = 0; j < width; ++j)
      matrix(i, j) = rows[static_cast<std::size_t>(i)]
                         [static_cast<std::size_t>(j)];
  return matrix;
}

void write_csv_matrix(const std::string& path,
                      const Eigen::MatrixXd& matrix) {
  std::ofstream out(path);
  require(out.good(), ErrorCode::io, path + ": cannot open for writing");
  char buffer[64];
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      std::snprintf(buffer, sizeof(buffer), "%.17g", matrix(i, j));
      if (j > 0) out << ',';
      out << buffer;
    }
    out << '\n';
  }
  require(out.good(), ErrorCode::io, path + ": write failed");
}

}  // namespace dcl
