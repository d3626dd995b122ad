#include "tact/linearized.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tact/errors.hpp"

namespace tact::linearized {

GaussianState vacuum(double kappa, double n_p_eff) {
  GaussianState state;
  state.kappa = kappa;
  state.n_p_eff = n_p_eff;
  return state;
}

double effective_polarization(double polarization, double gamma, double t_squeeze, std::optional<double> t_signal) {
  const double decay_time = t_squeeze + t_signal.value_or(0.0);
  return polarization * std::exp(-4.0 * gamma * decay_time);
}

double bogoliubov_rate(const ProtocolParams& params, ProtocolMode mode, CouplingNormalization normalization) {
  const double p_eff = derive_dimensionless(params, mode).p_eff;
  return 4.0 * pauli_coupling_factor(normalization) * params.j_coupling * params.n_spins * p_eff;
}

GaussianState initial_state(const ProtocolParams& params, ProtocolMode mode, CouplingNormalization normalization) {
  const double p_eff = derive_dimensionless(params, mode).p_eff;
  return vacuum(bogoliubov_rate(params, mode, normalization), params.n_spins * p_eff);
}

Eigen::Matrix2d flow_map(double kappa, double duration) {
  const double c = std::cosh(kappa * duration);
  const double s = std::sinh(kappa * duration);
  Eigen::Matrix2d m;
  m << c, s, s, c;
  return m;
}

GaussianState bogoliubov_propagate(const GaussianState& state, double duration) {
  if (!std::isfinite(duration) || duration < 0.0) throw DomainError("propagation duration must be finite and >= 0");
  const Eigen::Matrix2d m = flow_map(state.kappa, duration);
  GaussianState out = state;
  out.mean = m * state.mean;
  out.cov = m * state.cov * m.transpose();
  out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
  return out;
}

bool is_physical(const GaussianState& state, double tolerance) {
  const Eigen::Matrix2d& c = state.cov;
  if (!c.allFinite() || std::abs(c(0, 1) - c(1, 0)) > tolerance) return false;
  if (c(0, 0) <= 0.0 || c(1, 1) <= 0.0) return false;
  // det rounds with an error proportional to the squared variances
  const double scale = std::max(1.0, 0.25 * c.trace() * c.trace());
  return c.determinant() >= 0.25 - tolerance * scale;
}

QuadratureExtremum min_variance_direction(const GaussianState& state) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(state.cov);
  const Eigen::Vector2d values = solver.eigenvalues();
  QuadratureExtremum out;
  out.variance = values(0);
  if (values(1) - values(0) <= 1e-12 * std::max(1.0, std::abs(values(1)))) {
    out.isotropic = true;
    return out;
  }
  const Eigen::Vector2d v = solver.eigenvectors().col(0);
  double angle = std::atan2(v.y(), v.x());
  if (angle < 0.0) angle += std::numbers::pi;
  if (angle >= std::numbers::pi) angle -= std::numbers::pi;
  out.angle = angle;
  return out;
}

double spin_variance_from_quadrature(double quadrature_variance, double n_p_eff) {
  return 2.0 * n_p_eff * quadrature_variance;
}

double quadrature_variance_from_spin(double spin_variance, double n_p_eff) {
  return spin_variance / (2.0 * n_p_eff);
}

DisplacedModeMeans displaced_mode_means(const ProtocolParams& params, double duration) {
  if (params.j_coupling == 0.0) {
    throw DegenerateError("field shift B / (2 J sqrt(N P)) diverges at J = 0; use the free-precession limit");
  }
  const double p_eff = derive_dimensionless(params, ProtocolMode::squeeze_only).p_eff;
  const double n_p = params.n_spins * p_eff;
  const double amplitude =
      -std::expm1(params.j_coupling * n_p * duration) * params.b_field / (params.j_coupling * std::sqrt(n_p));
  return {std::complex<double>(amplitude, amplitude), std::complex<double>(0.0, 0.0)};
}

SignalValue signal(const ProtocolParams& params, double duration) {
  const double p_eff = derive_dimensionless(params, ProtocolMode::squeeze_only).p_eff;
  const double n_p = params.n_spins * p_eff;
  if (params.j_coupling == 0.0) return {params.b_field * n_p * duration, true};
  // -expm1 keeps the small-kappa t regime accurate.
  return {-params.b_field / params.j_coupling * std::expm1(-params.j_coupling * n_p * duration), false};
}

}  // namespace tact::linearized
