#include <cmath>
#include <random>

#include "doctest.h"
#include "dclearn/consensus.hpp"
#include "dclearn/graph.hpp"
#include "dclearn/rng.hpp"
#include "test_util.hpp"

using dcl::ConsensusOptions;
using dcl::ErrorCode;
using dcltest::thrown_code;

namespace {

Eigen::VectorXd seeded_state(int n, std::uint64_t seed, double low, double high) {
  auto engine = dcl::make_engine(seed);
  std::uniform_real_distribution<double> uni(low, high);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = uni(engine);
  return x;
}

}  // namespace

TEST_CASE("deviation of a unit impulse is sqrt(size - 1)") {
  for (int s : {4, 9, 25}) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(s);
    x[0] = 1.0;
    CHECK(dcl::consensus_error(x, x.sum(), x.norm()) ==
          doctest::Approx(std::sqrt(s - 1.0)).epsilon(1e-12));
  }
}

TEST_CASE("normalized deviation agrees with its expanded form early on") {
  const auto t = dcl::make_transition(dcl::make_ring(9));
  Eigen::VectorXd x = seeded_state(9, 11, 0.5, 1.5);
  const double sum = x.sum();
  const double norm = x.norm();
  for (int step = 0; step < 12; ++step) {
    // The textbook expression sqrt(S ||x||^2 - sum^2) / |sum| cancels
    // catastrophically near convergence; computed in extended precision it
    // must agree with the deviation form while deviations are still large.
    const long double s = static_cast<long double>(x.size());
    long double sq = 0.0L;
    for (int i = 0; i < x.size(); ++i)
      sq += static_cast<long double>(x[i]) * x[i];
    const long double radicand =
        s * sq - static_cast<long double>(sum) * sum;
    const double expanded =
        static_cast<double>(sqrtl(std::max(radicand, 0.0L))) / std::abs(sum);
    CHECK(dcl::consensus_error(x, sum, norm) ==
          doctest::Approx(expanded).epsilon(1e-10));
    x = t.apply(x);
  }
}

TEST_CASE("averaging on a ring reaches the mean at every node") {
  const auto t = dcl::make_transition(dcl::make_ring(7));
  const Eigen::VectorXd x0 = seeded_state(7, 3, 0.5, 1.5);
  ConsensusOptions opts;
  opts.tolerance = 1e-8;
  const auto run = dcl::run_consensus(t, x0, opts);
  REQUIRE(run.converged);
  CHECK(run.iterations > 0);
  CHECK(run.error_trace.size() == static_cast<std::size_t>(run.iterations) + 1);
  const double mean = x0.mean();
  for (int i = 0; i < 7; ++i)
    CHECK(run.values[i] == doctest::Approx(mean).epsilon(1e-8));
  // The total is conserved through every step.
  CHECK(run.values.sum() == doctest::Approx(x0.sum()).epsilon(1e-13));
  // Contraction: the recorded deviation never grows.
  for (std::size_t i = 1; i < run.error_trace.size(); ++i)
    CHECK(run.error_trace[i] <= run.error_trace[i - 1] + 1e-15);
}

TEST_CASE("complete graph averages in exactly one step") {
  const auto t = dcl::make_transition(dcl::make_complete(11));
  const Eigen::VectorXd x0 = seeded_state(11, 5, -1.0, 2.0);
  const auto run = dcl::run_consensus(t, x0, {});
  CHECK(run.converged);
  CHECK(run.iterations == 1);
  CHECK(run.values[3] == doctest::Approx(x0.mean()).epsilon(1e-12));
}

TEST_CASE("already-uniform input converges without iterating") {
  const auto t = dcl::make_transition(dcl::make_ring(5));
  const auto run = dcl::run_consensus(t, Eigen::VectorXd::Constant(5, 2.5), {});
  CHECK(run.converged);
  CHECK(run.iterations == 0);
}

TEST_CASE("zero-total input falls back to absolute deviations") {
  const auto t = dcl::make_transition(dcl::make_ring(5));
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(5);
  x0[0] = 1.0;
  x0[1] = -1.0;
  ConsensusOptions opts;
  opts.tolerance = 1e-9;
  const auto run = dcl::run_consensus(t, x0, opts);
  REQUIRE(run.converged);
  CHECK(run.values.cwiseAbs().maxCoeff() <= 1e-9);
  CHECK(run.iterations > 1);
}

TEST_CASE("iteration budget of zero reports no convergence") {
  const auto t = dcl::make_transition(dcl::make_ring(6));
  Eigen::VectorXd x0 = seeded_state(6, 9, 0.5, 1.5);
  ConsensusOptions opts;
  opts.max_iterations = 0;
  opts.tolerance = 1e-9;
  const auto run = dcl::run_consensus(t, x0, opts);
  CHECK(!run.converged);
  CHECK(run.iterations == 0);
  CHECK(run.values == x0);
}

TEST_CASE("iteration predictions from the spectral gap") {
  CHECK(dcl::estimate_iterations(100, 1e-3, 0.5) == 14);
  CHECK(dcl::estimate_iterations(7, 1e-3, 0.02) == 391);
  CHECK(dcl::estimate_iterations(100, 1e-3, 1.0) == 1);
  CHECK(dcl::estimate_iterations(100, 1e-3, 2.0) == 1);
  CHECK(dcl::estimate_iterations(4, 10.0, 0.5) == 1);  // never below one step
  CHECK(thrown_code([] { dcl::estimate_iterations(4, 1e-3, 0.0); }) ==
        ErrorCode::invalid_argument);
  CHECK(thrown_code([] { dcl::estimate_iterations(4, 0.0, 0.5); }) ==
        ErrorCode::invalid_argument);
  CHECK(thrown_code([] { dcl::estimate_iterations(0, 1e-3, 0.5); }) ==
        ErrorCode::invalid_argument);
}

TEST_CASE("measured iteration counts track the spectral prediction") {
  for (int s : {13, 19}) {
    for (int variant : {0, 1}) {
      const dcl::Graph g =
          variant == 0 ? dcl::make_ring(s) : dcl::make_inverse_expander(s);
      const auto t = dcl::make_transition(g);
      const auto info = dcl::analyze_spectrum(t);
      const long predicted = dcl::estimate_iterations(s, 1e-3, info.gap);
      const Eigen::VectorXd x0 = seeded_state(s, 21 + s + variant, 0.0, 1.0);
      const long measured = dcl::iterations_to_error(t, x0, 1e-3);
      REQUIRE(measured >= 0);
      CHECK(measured <= 3 * predicted);
      CHECK(measured >= predicted / 20);
    }
  }
}

TEST_CASE("chord graph outpaces the ring at matched size") {
  const int s = 31;
  const Eigen::VectorXd x0 = seeded_state(s, 2, 0.0, 1.0);
  const long ring_t =
      dcl::iterations_to_error(dcl::make_transition(dcl::make_ring(s)), x0, 1e-3);
  const long chord_t = dcl::iterations_to_error(
      dcl::make_transition(dcl::make_inverse_expander(s)), x0, 1e-3);
  REQUIRE(ring_t > 0);
  REQUIRE(chord_t > 0);
  CHECK(chord_t < ring_t);
}

TEST_CASE("first-crossing iteration count respects its budget") {
  const auto t = dcl::make_transition(dcl::make_ring(9));
  const Eigen::VectorXd x0 = seeded_state(9, 4, 0.5, 1.5);
  CHECK(dcl::iterations_to_error(t, x0, 1e3) == 0);  // already satisfied
  CHECK(dcl::iterations_to_error(t, x0, 1e-9, 2) == -1);
}

TEST_CASE("per-iteration message cost equals the total degree") {
  CHECK(dcl::messages_per_iteration(dcl::make_ring(8)) == 16);
  CHECK(dcl::messages_per_iteration(dcl::make_inverse_expander(5)) == 15);
  CHECK(dcl::messages_per_iteration(dcl::make_complete(5)) == 20);
}
