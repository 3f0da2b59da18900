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

#include "dclearn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "dclearn/error.hpp"
#include "dclearn/rng.hpp"

namespace dcl {

namespace {

void check_node(const Graph& g, int node) {
  require(node >= 0 && node < g.size(), ErrorCode::invalid_argument,
          "node index " + std::to_string(node) + " out of range for graph of size " +
              std::to_string(g.size()));
}

}  // namespace

int Graph::degree(int node) const {
  check_node(*this, node);
  // Row sum with the diagonal counted once gives off-diagonal links plus one
  // per self-loop.
  return adjacency.row(node).sum();
}

int Graph::max_degree() const {
  require(size() > 0, ErrorCode::invalid_argument, "empty graph has no degrees");
  int best = 0;
  for (int s = 0; s < size(); ++s) best = std::max(best, degree(s));
  return best;
}

long Graph::total_degree() const {
  long total = 0;
  for (int s = 0; s < size(); ++s) total += degree(s);
  return total;
}

bool Graph::is_connected() const {
  const int n = size();
  if (n == 0) return false;
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v = 0; v < n; ++v) {
      if (v != u && adjacency(u, v) > 0 && !seen[v]) {
        seen[v] = 1;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  return reached == n;
}

void Graph::validate() const {
  require(adjacency.rows() == adjacency.cols(), ErrorCode::invalid_argument,
          "adjacency matrix must be square");
  require(adjacency.rows() >= 1, ErrorCode::invalid_argument,
          "graph must have at least one node");
  for (int u = 0; u < size(); ++u) {
    for (int v = 0; v < size(); ++v) {
      require(adjacency(u, v) >= 0, ErrorCode::invalid_argument,
              "adjacency entries must be nonnegative");
      require(adjacency(u, v) == adjacency(v, u), ErrorCode::invalid_argument,
              "adjacency matrix must be symmetric");
    }
  }
}

Graph make_ring(int size) {
  require(size >= 3, ErrorCode::invalid_argument,
          "ring needs at least 3 nodes, got " + std::to_string(size));
  Graph g;
  g.adjacency = Eigen::MatrixXi::Zero(size, size);
  for (int s = 0; s < size; ++s) {
    const int next = (s + 1) % size;
    g.adjacency(s, next) = 1;
    g.adjacency(next, s) = 1;
  }
  return g;
}

Graph make_complete(int size) {
  require(size >= 2, ErrorCode::invalid_argument,
          "complete graph needs at least 2 nodes, got " + std::to_string(size));
  Graph g;
  g.adjacency = Eigen::MatrixXi::Ones(size, size);
  g.adjacency.diagonal().setZero();
  return g;
}

Graph make_inverse_expander(int size, bool collapse_multi_edges) {
  require(size >= 3, ErrorCode::invalid_argument,
          "expander needs at least 3 nodes, got " + std::to_string(size));
  Graph g = make_ring(size);
  for (int x = 0; x < size; ++x) {
    // Modular inverse by scan; the sizes this builder targets are small
    // enough that S^2 steps are negligible.
    int inverse = -1;
    for (int y = 0; y < size; ++y) {
      if (static_cast<long>(x) * y % size == 1) {
        inverse = y;
        break;
      }
    }
    if (inverse == -1 || inverse == x) {
      // No inverse (x = 0 or gcd(x, S) > 1) or self-inverse: a self-loop
      // keeps the degree at 3.
      g.adjacency(x, x) += 1;
    } else if (x < inverse) {
      // One chord per unordered pair; it may double a ring link.
      g.adjacency(x, inverse) += 1;
      g.adjacency(inverse, x) += 1;
    }
  }
  if (collapse_multi_edges) {
    for (int u = 0; u < size; ++u) {
      for (int v = 0; v < size; ++v) {
        if (u != v && g.adjacency(u, v) > 1) g.adjacency(u, v) = 1;
      }
    }
  }
  return g;
}

Graph make_random_regular(int size, int degree, std::uint64_t seed,
                          int max_attempts) {
  require(size >= 2, ErrorCode::invalid_argument,
          "random regular graph needs at least 2 nodes");
  require(degree >= 1 && degree < size, ErrorCode::invalid_argument,
          "degree must be in [1, size - 1], got " + std::to_string(degree));
  require(static_cast<long>(size) * degree % 2 == 0, ErrorCode::invalid_argument,
          "size * degree must be even");
  require(max_attempts >= 1, ErrorCode::invalid_argument,
          "max_attempts must be positive");

  std::vector<int> stubs;
  stubs.reserve(static_cast<std::size_t>(size) * degree);
  for (int s = 0; s < size; ++s)
    for (int copy = 0; copy < degree; ++copy) stubs.push_back(s);

  auto engine = make_engine(seed, 0x67726170ULL);
  Graph g;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::shuffle(stubs.begin(), stubs.end(), engine);
    g.adjacency = Eigen::MatrixXi::Zero(size, size);
    bool ok = true;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      const int u = stubs[i];
      const int v = stubs[i + 1];
      if (u == v || g.adjacency(u, v) != 0) {
        ok = false;
        break;
      }
      g.adjacency(u, v) = 1;
      g.adjacency(v, u) = 1;
    }
    if (ok && g.is_connected()) return g;
  }
  fail(ErrorCode::construction_failed,
       "no simple connected " + std::to_string(degree) + "-regular graph on " +
           std::to_string(size) + " nodes found in " +
           std::to_string(max_attempts) + " attempts");
}

Graph relabel(const Graph& graph, const std::vector<int>& permutation) {
  graph.validate();
  const int n = graph.size();
  require(static_cast<int>(permutation.size()) == n, ErrorCode::invalid_argument,
          "permutation size does not match graph size");
  std::vector<char> hit(n, 0);
  for (int p : permutation) {
    require(p >= 0 && p < n && !hit[p], ErrorCode::invalid_argument,
            "relabeling is not a permutation of 0..size-1");
    hit[p] = 1;
  }
  Graph out;
  out.adjacency = Eigen::MatrixXi::Zero(n, n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      out.adjacency(permutation[u], permutation[v]) = graph.adjacency(u, v);
  return out;
}

double expansion_constant(const Graph& graph) {
  graph.validate();
  const int n = graph.size();
  require(n <= 20, ErrorCode::size_limit,
          "exhaustive expansion constant is limited to 20 nodes, got " +
              std::to_string(n));
  require(n >= 2, ErrorCode::invalid_argument,
          "expansion constant needs at least 2 nodes");

  double best = std::numeric_limits<double>::infinity();
  const unsigned full = 1u << n;
  for (unsigned mask = 1; mask < full - 1; ++mask) {
    const int members = __builtin_popcount(mask);
    if (2 * members > n) continue;
    long cut = 0;
    for (int u = 0; u < n; ++u) {
      if (!(mask >> u & 1u)) continue;
      for (int v = 0; v < n; ++v) {
        if (v != u && !(mask >> v & 1u)) cut += graph.adjacency(u, v);
      }
    }
    best = std::min(best, static_cast<double>(cut) / members);
  }
  return best;
}

double expansion_gap_bound(double epsilon, double alpha, int max_degree) {
  require(epsilon > 0.0, ErrorCode::invalid_argument, "epsilon must be positive");
  require(alpha >= 0.0, ErrorCode::invalid_argument, "alpha must be nonnegative");
  require(max_degree >= 1, ErrorCode::invalid_argument,
          "max_degree must be positive");
  return epsilon * alpha * alpha / (2.0 * max_degree);
}

std::string to_edge_list(const Graph& graph) {
  graph.validate();
  std::ostringstream out;
  out << "nodes " << graph.size() << "\n";
  for (int u = 0; u < graph.size(); ++u) {
    for (int v = u; v < graph.size(); ++v) {
      if (graph.adjacency(u, v) > 0)
        out << u << " " << v << " " << graph.adjacency(u, v) << "\n";
    }
  }
  return out.str();
}

Graph from_edge_list(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_number = 0;
  int size = -1;
  Graph g;
  auto parse_error = [&](const std::string& what) {
    fail(ErrorCode::io, "edge list line " + std::to_string(line_number) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_number;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream fields(line);
    if (size < 0) {
      std::string keyword;
      fields >> keyword >> size;
      if (fields.fail() || keyword != "nodes" || size < 1)
        parse_error("expected header 'nodes <count>'");
      g.adjacency = Eigen::MatrixXi::Zero(size, size);
      continue;
    }
    int u = -1, v = -1;
    long multiplicity = 0;
    fields >> u >> v >> multiplicity;
    if (fields.fail()) parse_error("expected 'u v multiplicity'");
    std::string trailing;
    if (fields >> trailing) parse_error("unexpected trailing field '" + trailing + "'");
    if (u < 0 || u >= size || v < 0 || v >= size)
      parse_error("node index out of range");
    if (u > v) parse_error("links must be listed with u <= v");
    if (multiplicity < 1) parse_error("multiplicity must be positive");
    if (g.adjacency(u, v) != 0) parse_error("duplicate link");
    g.adjacency(u, v) = static_cast<int>(multiplicity);
    g.adjacency(v, u) = static_cast<int>(multiplicity);
  }
  if (size < 0) fail(ErrorCode::io, "edge list has no 'nodes <count>' header");
  g.validate();
  return g;
}

Eigen::VectorXd TransitionMatrix::apply(const Eigen::VectorXd& x) const {
  require(x.size() == size(), ErrorCode::invalid_argument,
          "state size does not match transition matrix");
  Eigen::VectorXd out(size());
  for (int row = 0; row < size(); ++row) {
    double acc = 0.0;
    for (int k = row_start[row]; k < row_start[row + 1]; ++k)
      acc += weights[k] * x[cols[k]];
    out[row] = acc;
  }
  return out;
}

TransitionMatrix make_transition(const Graph& graph, double epsilon) {
  graph.validate();
  require(graph.is_connected(), ErrorCode::invalid_argument,
          "averaging requires a connected graph");
  const int n = graph.size();

  if (epsilon <= 0.0) epsilon = 1.0 / (graph.max_degree() + 1);

  // The diagonal only sees links to other nodes; self-loops cancel.
  int max_out = 0;
  for (int s = 0; s < n; ++s) {
    int out_links = 0;
    for (int v = 0; v < n; ++v)
      if (v != s) out_links += graph.adjacency(s, v);
    max_out = std::max(max_out, out_links);
  }
  require(epsilon * max_out <= 1.0 + 1e-12, ErrorCode::invalid_argument,
          "step size " + std::to_string(epsilon) +
              " produces a negative diagonal at degree " + std::to_string(max_out));

  TransitionMatrix t;
  t.epsilon = epsilon;
  t.dense = Eigen::MatrixXd::Zero(n, n);
  for (int u = 0; u < n; ++u) {
    double off = 0.0;
    for (int v = 0; v < n; ++v) {
      if (v == u) continue;
      const double w = epsilon * graph.adjacency(u, v);
      t.dense(u, v) = w;
      off += w;
    }
    t.dense(u, u) = std::max(0.0, 1.0 - off);
  }

  t.row_start.assign(n + 1, 0);
  for (int u = 0; u < n; ++u) {
    t.row_start[u] = static_cast<int>(t.cols.size());
    for (int v = 0; v < n; ++v) {
      if (t.dense(u, v) != 0.0) {
        t.cols.push_back(v);
        t.weights.push_back(t.dense(u, v));
      }
    }
  }
  t.row_start[n] = static_cast<int>(t.cols.size());
  return t;
}

namespace {

// Top eigenvalue, restricted to the space orthogonal to the flat vector, of
// (W + I)/2 (negate = false) or of (I - W)/2 (negate = true). Both maps have
// their spectrum in [0, 1], so plain power iteration with a deterministic
// seeded start converges to the top; the restriction drops the principal
// eigenvector of W, which is exactly flat.
double deflated_power_top(const TransitionMatrix& t, bool negate) {
  const int n = t.size();
  const double sign = negate ? -1.0 : 1.0;
  auto shifted = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return 0.5 * (sign * t.apply(x) + x);
  };
  auto deflate = [](Eigen::VectorXd& x) { x.array() -= x.mean(); };

  auto engine = make_engine(0x706f7765ULL, static_cast<std::uint64_t>(negate));
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = uni(engine);
  deflate(v);
  require(v.norm() > 0, ErrorCode::numeric, "degenerate power iteration start");
  v /= v.norm();

  double estimate = 0.0;
  for (long iter = 0; iter < 200000; ++iter) {
    Eigen::VectorXd next = shifted(v);
    deflate(next);
    const double next_norm = next.norm();
    if (next_norm <= 1e-300) return 0.0;  // non-principal spectrum collapsed
    next /= next_norm;
    const double new_estimate = next.dot(shifted(next));
    v = next;
    if (iter > 10 && std::abs(new_estimate - estimate) <=
                         1e-10 * std::max(1.0, std::abs(new_estimate))) {
      return new_estimate;
    }
    estimate = new_estimate;
  }
  return estimate;
}

}  // namespace

SpectralInfo analyze_spectrum(const TransitionMatrix& transition, int dense_limit) {
  const int n = transition.size();
  require(n >= 2, ErrorCode::invalid_argument,
          "spectrum analysis needs at least 2 nodes");
  SpectralInfo info;
  if (n <= dense_limit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(transition.dense);
    require(solver.info() == Eigen::Success, ErrorCode::numeric,
            "dense eigensolve failed");
    info.eigenvalues = solver.eigenvalues().reverse();
    require(info.eigenvalues[0] <= 1.0 + 1e-9 &&
                info.eigenvalues[n - 1] >= -1.0 - 1e-9,
            ErrorCode::numeric, "averaging spectrum escaped [-1, 1]");
    require(info.eigenvalues[0] - info.eigenvalues[1] > 1e-12, ErrorCode::numeric,
            "principal eigenvalue is not simple; graph may be disconnected");
    info.second_magnitude =
        std::max(std::abs(info.eigenvalues[1]), std::abs(info.eigenvalues[n - 1]));
  } else {
    // mu_top is the top eigenvalue of (W+I)/2 off the flat vector, so
    // 2*mu_top - 1 is the largest non-principal eigenvalue of W. mu_bot does
    // the same for (I-W)/2 and the most negative eigenvalue.
    const double mu_top = deflated_power_top(transition, false);
    const double mu_bot = deflated_power_top(transition, true);
    const double high = 2.0 * mu_top - 1.0;
    const double low = 1.0 - 2.0 * mu_bot;
    require(high <= 1.0 + 1e-9 && low >= -1.0 - 1e-9, ErrorCode::numeric,
            "averaging spectrum escaped [-1, 1]");
    require(high < 1.0 - 1e-12, ErrorCode::numeric,
            "principal eigenvalue is not simple; graph may be disconnected");
    info.second_magnitude = std::max(std::abs(high), std::abs(low));
  }
  info.second_magnitude = std::min(info.second_magnitude, 1.0);
  info.gap = 1.0 - info.second_magnitude;
  return info;
}

}  // namespace dcl
