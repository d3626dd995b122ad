// Randomized checks of invariants that hold for every input.

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "tact/analytic.hpp"
#include "tact/exact.hpp"
#include "tact/linearized.hpp"
#include "tact/optimize.hpp"

using namespace tact;

namespace {

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

}  // namespace

TEST_CASE("property: substitution consistency of the squeezing formulas") {
  std::mt19937_64 rng(101);
  for (int k = 0; k < 1000; ++k) {
    const double j = log_uniform(rng, 1e-4, 1.0), n = std::round(log_uniform(rng, 10, 1e5));
    const double p = log_uniform(rng, 1e-4, 1.0), gamma = log_uniform(rng, 1e-4, 1.0);
    const double t = log_uniform(rng, 1e-2, 1e2);
    const double a = analytic::xi2_min(j, n, p, gamma, t).xi2;
    const double b = analytic::xi2_min_dimensionless(j * n * p / (4 * gamma), 4 * gamma * t, p).xi2;
    if (a != b) CHECK(std::abs(a - b) / std::max(std::abs(a), std::abs(b)) <= 1e-12);
  }
}

TEST_CASE("property: threshold dichotomy follows the sign of g'(0)") {
  std::mt19937_64 rng(102);
  std::uniform_real_distribution<double> u(0.05, 6.0);
  for (int k = 0; k < 200; ++k) {
    const double alpha = u(rng);
    const auto out = optimize::optimal_theta(SqueezeRatio::finite(alpha), 1.0);
    CHECK(out.search.at_boundary == (alpha - 1.0 <= 0.0));
    if (alpha > 1.0) {
      CHECK(out.search.value > 0.0);
      CHECK(out.xi2 < 1.0);
    }
  }
}

TEST_CASE("property: above threshold some Theta beats the unsqueezed state") {
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> u(1.0001, 30.0);
  for (int k = 0; k < 100; ++k) {
    const double alpha = u(rng);
    // Small Theta: g(Theta) ~ Theta (alpha - 1) > 0.
    const double theta = 0.5 * std::log(alpha) / alpha;
    CHECK(analytic::xi2_min_dimensionless(alpha, theta, 0.6).xi2 < 1.0 / 0.6);
  }
}

TEST_CASE("property: optimal U matches the closed form") {
  for (double alpha : {5.0, 10.0, 50.0, 200.0}) {
    const double x = alpha / std::numbers::e;
    CHECK(std::abs(optimize::optimal_u(alpha).argmax - (x - 1.0) / x) <= 1e-6);
  }
}

TEST_CASE("property: Bogoliubov flow conserves det(cov)") {
  std::mt19937_64 rng(104);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    linearized::GaussianState s = linearized::vacuum(2.0 * u(rng), 10.0);
    const double r = 1.5 * u(rng), phi = 3.0 * u(rng);
    Eigen::Matrix2d rot;
    rot << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
    s.cov = rot * Eigen::Vector2d(0.5 * std::exp(-2 * r), 0.5 * std::exp(2 * r)).asDiagonal() * rot.transpose();
    const double det0 = s.cov.determinant();
    const auto out = linearized::bogoliubov_propagate(s, 3.0 * u(rng));
    CHECK(std::abs(out.cov.determinant() - det0) <= 1e-10 * std::max(1.0, out.cov.norm()));
    CHECK(linearized::is_physical(out));
  }
}

TEST_CASE("property: pure squeezed vacuum has min * max variance = 1/4") {
  for (double kt : {0.0, 0.1, 0.7, 2.0}) {
    const auto out = linearized::bogoliubov_propagate(linearized::vacuum(1.0, 1.0), kt);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(out.cov);
    CHECK(es.eigenvalues()(0) * es.eigenvalues()(1) == doctest::Approx(0.25).epsilon(1e-12));
  }
}

TEST_CASE("property: the growing-mode mean stays zero") {
  std::mt19937_64 rng(105);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    ProtocolParams p;
    p.n_spins = 10 + static_cast<int>(1000 * u(rng));
    p.polarization = 0.1 + 0.9 * u(rng);
    p.j_coupling = 1e-3 + 0.01 * u(rng);
    p.gamma = u(rng);
    p.t_squeeze = u(rng);
    p.b_field = 2.0 * u(rng);
    CHECK(std::abs(linearized::displaced_mode_means(p, 3.0 * u(rng)).v_plus) == 0.0);
  }
}

TEST_CASE("property: superoperators annihilate the trace and keep Hermiticity") {
  std::mt19937_64 rng(106);
  for (int n = 1; n <= 4; ++n) {
    const exact::ComplexMatrix rho = oracle::random_density(n, rng);
    for (const auto& l : {exact::Superoperator::squeeze(n, 0.7), exact::Superoperator::depolarize(n, 0.3),
                          exact::Superoperator::field(n, 1.3)}) {
      const exact::ComplexMatrix out = l.apply(rho);
      CHECK(std::abs(out.trace()) <= 1e-10);
      CHECK((out - out.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("property: evolution keeps the channel invariants") {
  std::mt19937_64 rng(107);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 12; ++k) {
    const int n = 1 + k % 4;
    const exact::Superoperator gens[] = {exact::Superoperator::squeeze(n, u(rng)),
                                         exact::Superoperator::depolarize(n, 0.5 * u(rng)),
                                         exact::Superoperator::field(n, u(rng))};
    exact::EvolveStats stats;
    exact::evolve(exact::build_initial_state(n, 0.2 + 0.8 * u(rng)), gens, 2.0 * u(rng), {}, &stats);
    const auto& inv = stats.final_invariants;
    CHECK(inv.trace_deviation <= 1e-9);
    CHECK(inv.hermiticity_residual <= 1e-10);
    CHECK(inv.min_eigenvalue >= -1e-8);
  }
}

TEST_CASE("property: depolarizing decay of every site") {
  std::mt19937_64 rng(108);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 15; ++k) {
    const int n = 1 + k % 5;
    const double gamma = 0.6 * u(rng), t = 3.0 * u(rng), p = 0.1 + 0.9 * u(rng);
    const exact::Superoperator gens[] = {exact::Superoperator::depolarize(n, gamma)};
    const auto rho = exact::evolve(exact::build_initial_state(n, p), gens, t);
    for (int i = 0; i < n; ++i) {
      CHECK(std::abs(exact::site_polarization(rho, i) - p * std::exp(-4 * gamma * t)) <= 1e-6);
    }
  }
}

TEST_CASE("property: field and depolarizer commute for random parameters") {
  std::mt19937_64 rng(109);
  std::uniform_real_distribution<double> u(0.05, 1.5);
  exact::StepControl control;
  control.tolerance = 1e-10;
  for (int k = 0; k < 5; ++k) {
    const auto rho = exact::build_initial_state(3, 0.3 + 0.5 * u(rng));
    const exact::Superoperator a[] = {exact::Superoperator::depolarize(3, u(rng))};
    const exact::Superoperator b[] = {exact::Superoperator::field(3, u(rng))};
    CHECK(exact::split_error(rho, a, b, u(rng), control) <= 10 * control.tolerance);
  }
}

TEST_CASE("property: unitary evolution keeps every eigenvalue") {
  const int n = 3;
  const auto rho0 = exact::build_initial_state(n, 0.6);
  const exact::Superoperator gens[] = {exact::Superoperator::squeeze(n, 0.9), exact::Superoperator::field(n, 0.4)};
  const auto rho = exact::evolve(rho0, gens, 2.0);
  Eigen::SelfAdjointEigenSolver<exact::ComplexMatrix> a(rho0.entries(), Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<exact::ComplexMatrix> b(0.5 * (rho.entries() + rho.entries().adjoint()),
                                                        Eigen::EigenvaluesOnly);
  CHECK((a.eigenvalues() - b.eigenvalues()).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("property: squeezing parameters are invariant under rotation about the mean spin") {
  const int n = 4;
  const exact::Superoperator gens[] = {exact::Superoperator::squeeze(n, 0.15),
                                       exact::Superoperator::depolarize(n, 0.02)};
  const auto rho = exact::evolve(exact::build_initial_state(n, 0.9), gens, 1.0);
  const auto base = exact::squeezing_report(rho);
  std::mt19937_64 rng(110);
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  for (int k = 0; k < 10; ++k) {
    const exact::ComplexMatrix rot = oracle::random_unitary_phase(n, u(rng));
    const exact::DensityMatrix turned(n, rot * rho.entries() * rot.adjoint());
    const auto r = exact::squeezing_report(turned);
    CHECK(std::abs(r.kitagawa_ueda - base.kitagawa_ueda) <= 1e-8);
    CHECK(std::abs(r.wineland - base.wineland) <= 1e-8);
  }
}

TEST_CASE("property: improvement factor increases above alpha = e") {
  std::mt19937_64 rng(111);
  std::uniform_real_distribution<double> u(std::numbers::e, 100.0);
  for (int k = 0; k < 300; ++k) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    if (a < b) CHECK(analytic::improvement_factor(a) < analytic::improvement_factor(b));
  }
}

TEST_CASE("property: optimizers are bit-for-bit deterministic") {
  const auto a = optimize::optimal_split_full(0.05, 100, 0.9, 0.2, 5.0);
  const auto b = optimize::optimal_split_full(0.05, 100, 0.9, 0.2, 5.0);
  CHECK(a.t_squeeze == b.t_squeeze);
  CHECK(a.t_signal == b.t_signal);
  CHECK(a.value == b.value);
}
