#pragma once

// Deterministic maximizers for the protocol optima: golden-section search,
// optionally preceded by a coarse grid scan for objectives that may be multimodal.

#include <functional>
#include <string>

#include "tact/errors.hpp"
#include "tact/params.hpp"

namespace tact::optimize {

class NonFiniteObjective : public NumericalError {
 public:
  NonFiniteObjective(const std::string& what, double abscissa) : NumericalError(what), abscissa_(abscissa) {}
  double abscissa() const noexcept { return abscissa_; }

 private:
  double abscissa_;
};

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
};

struct OptimizationOutcome {
  double argmax = 0.0;
  double value = 0.0;
  bool at_boundary = false;  // argmax within tol of either end of the search interval
  int iterations = 0;        // golden-section iterations
  Bracket bracket;           // search interval
};

struct ScalarSearchOptions {
  double tol = 1e-10;     // final golden bracket width
  int grid_points = 512;  // < 2 disables the pre-scan (objective assumed unimodal)
};

// Plateaus and ties resolve to the smallest argmax. Throws NonFiniteObjective when
// the objective returns NaN or an infinity.
OptimizationOutcome maximize_scalar(const std::function<double(double)>& objective, double lo, double hi,
                                    const ScalarSearchOptions& options = {});

inline constexpr double kDefaultThetaHi = 10.0;
inline constexpr double kDefaultUHi = 1.0 - 1e-9;

struct ThetaOptimum {
  OptimizationOutcome search;   // argmax is Theta*, value is g(Theta*) = Theta*[alpha e^-Theta* - 1]
  double xi2 = 0.0;             // P^-1 exp(-g(Theta*))
  double stationarity_residual = 0.0;  // alpha e^-Theta (1 - Theta) - 1 at Theta* (interior only)
};

// Maximizes g(Theta) = Theta [alpha exp(-Theta) - 1] on [0, theta_hi]. Throws
// DomainError for an infinite alpha (noiseless case has no interior optimum).
ThetaOptimum optimal_theta(const SqueezeRatio& alpha, double polarization, double theta_hi = kDefaultThetaHi);

// Maximizes h(U) = (1 - U) exp(alpha U / e) on [0, u_hi].
OptimizationOutcome optimal_u(double alpha, double u_hi = kDefaultUHi);

struct SplitOptimum {
  double t_squeeze = 0.0;       // T*
  double t_signal = 0.0;        // t*
  double value = 0.0;           // signal to noise at (T*, t*)
  double squeeze_fraction = 0.0;  // T* / (T* + t*)
  double decay_product = 0.0;   // 4 Gamma (T* + t*), close to 1 when alpha >> 1
  bool at_boundary = false;     // T* = 0 or T* + t* at the budget
  int iterations = 0;
};

struct SplitSearchOptions {
  int grid_points = 256;  // per axis
  double tol = 1e-10;     // relative to the budget on the shot-length axis
};

// Maximizes the squeeze-then-measure signal to noise over T, t >= 0 with T + t <= tau_budget.
SplitOptimum optimal_split_full(double j_coupling, double n_spins, double polarization, double gamma,
                                double tau_budget, const SplitSearchOptions& options = {});

}  // namespace tact::optimize
