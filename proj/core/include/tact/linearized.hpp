#pragma once

// Holstein-Primakoff linearized Gaussian engine.
//
// The collective spin near full polarization is mapped to one bosonic mode b with
// quadratures X = (b + b^dagger)/sqrt(2), Y = (b - b^dagger)/(i sqrt(2)). The
// linearized squeezing Hamiltonian (kappa/2)(b^dagger^2 + b^2) gives
//
//   db/dt = i kappa b^dagger,   db^dagger/dt = -i kappa b
//   =>  dX/dt = kappa Y,  dY/dt = kappa X.
//
// X + Y grows as e^{+kappa t} and X - Y contracts as e^{-kappa t}. In terms of the
// printed eigenmodes v_plus = (b - i b^dagger)/sqrt(2) is proportional to X - Y and
// therefore *contracts*, v_minus = (b + i b^dagger)/sqrt(2) is proportional to X + Y
// and expands. This code names modes by their Lyapunov sign only.
//
// Spin <-> boson conversion: Var(S_perp) = 2 N P_eff Var(quadrature), with S in Pauli
// units (coherent state Var(S_perp) = N, vacuum quadrature variance 1/2).

#include <Eigen/Dense>

#include <complex>
#include <optional>

#include "tact/params.hpp"

namespace tact::linearized {

struct GaussianState {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();          // (<X>, <Y>)
  Eigen::Matrix2d cov = 0.5 * Eigen::Matrix2d::Identity();  // symmetrized quadrature covariance
  double kappa = 0.0;                                       // Bogoliubov rate
  double n_p_eff = 0.0;                                     // N P_eff
};

GaussianState vacuum(double kappa, double n_p_eff);

// P exp(-4 Gamma T), or P exp(-4 Gamma (T + t)) when a signal duration is given.
double effective_polarization(double polarization, double gamma, double t_squeeze,
                              std::optional<double> t_signal = std::nullopt);

// kappa = J N P_eff for spin_half coupling, 4 J N P_eff for pauli.
double bogoliubov_rate(const ProtocolParams& params, ProtocolMode mode,
                       CouplingNormalization normalization = CouplingNormalization::spin_half);

// Vacuum state carrying kappa and N P_eff for the given protocol.
GaussianState initial_state(const ProtocolParams& params, ProtocolMode mode,
                            CouplingNormalization normalization = CouplingNormalization::spin_half);

// Symplectic 2x2 flow map [[cosh, sinh], [sinh, cosh]](kappa t).
Eigen::Matrix2d flow_map(double kappa, double duration);

GaussianState bogoliubov_propagate(const GaussianState& state, double duration);

// Uncertainty bound det(cov) >= 1/4 and symmetry / positivity checks.
bool is_physical(const GaussianState& state, double tolerance = 1e-9);

struct QuadratureExtremum {
  double angle = 0.0;     // eigenvector angle in the (X, Y) plane, in [0, pi)
  double variance = 0.0;  // smaller covariance eigenvalue
  bool isotropic = false;
};

QuadratureExtremum min_variance_direction(const GaussianState& state);

double spin_variance_from_quadrature(double quadrature_variance, double n_p_eff);
double quadrature_variance_from_spin(double spin_variance, double n_p_eff);

struct DisplacedModeMeans {
  std::complex<double> v_minus;
  std::complex<double> v_plus;
};

// Means of the field-displaced eigenmodes after a signal duration t, as printed:
//   <v_minus(t)> = [1 - exp(J N P_eff t)] B / (J sqrt(N P_eff)) (1 + i),  <v_plus(t)> = 0
// with P_eff = P exp(-4 Gamma T). Throws DegenerateError at J = 0 (the shift diverges).
DisplacedModeMeans displaced_mode_means(const ProtocolParams& params, double duration);

struct SignalValue {
  double value = 0.0;
  bool degenerate = false;  // J = 0: free-precession limit B N P_eff t
};

// (B / J) [1 - exp(-J N P_eff t)], P_eff = P exp(-4 Gamma T).
SignalValue signal(const ProtocolParams& params, double duration);

}  // namespace tact::linearized
