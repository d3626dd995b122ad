#include "tact/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "tact/analytic.hpp"

namespace tact::optimize {

namespace {

constexpr double kInvPhi = 0.6180339887498948482;  // (sqrt(5) - 1) / 2

double checked(const std::function<double(double)>& f, double x) {
  const double v = f(x);
  if (!std::isfinite(v)) {
    throw NonFiniteObjective("objective is not finite at x = " + std::to_string(x), x);
  }
  return v;
}

struct GoldenResult {
  double x;
  double value;
  int iterations;
};

// Golden-section maximization on [a, b] down to a bracket of width tol.
GoldenResult golden(const std::function<double(double)>& f, double a, double b, double tol) {
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = checked(f, c);
  double fd = checked(f, d);
  int iterations = 0;
  while (b - a > tol && iterations < 400) {
    // On ties keep the left part so plateaus resolve toward the smaller abscissa.
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = checked(f, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = checked(f, d);
    }
    ++iterations;
  }
  const double x = 0.5 * (a + b);
  return {x, checked(f, x), iterations};
}

}  // namespace

OptimizationOutcome maximize_scalar(const std::function<double(double)>& objective, double lo, double hi,
                                    const ScalarSearchOptions& options) {
  if (!(lo < hi)) throw DomainError("maximize_scalar needs lo < hi");
  if (!(options.tol > 0.0)) throw DomainError("maximize_scalar needs tol > 0");

  OptimizationOutcome out;
  out.bracket = {lo, hi};

  double best_x = lo;
  double best_value = checked(objective, lo);
  double refine_lo = lo;
  double refine_hi = hi;
  if (options.grid_points >= 2) {
    const int n = options.grid_points;
    int best_index = 0;
    for (int i = 1; i < n; ++i) {
      const double x = i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1);
      const double v = checked(objective, x);
      if (v > best_value) {
        best_value = v;
        best_x = x;
        best_index = i;
      }
    }
    refine_lo = best_index == 0 ? lo : lo + (hi - lo) * (best_index - 1) / (n - 1);
    refine_hi = best_index == n - 1 ? hi : lo + (hi - lo) * (best_index + 1) / (n - 1);
  } else {
    const double v_hi = checked(objective, hi);
    if (v_hi > best_value) {
      best_value = v_hi;
      best_x = hi;
    }
  }

  const GoldenResult refined = golden(objective, refine_lo, refine_hi, options.tol);
  out.iterations = refined.iterations;
  if (refined.value > best_value) {
    best_value = refined.value;
    best_x = refined.x;
  }
  out.argmax = best_x;
  out.value = best_value;
  out.at_boundary = best_x - lo <= options.tol || hi - best_x <= options.tol;
  return out;
}

ThetaOptimum optimal_theta(const SqueezeRatio& alpha_ratio, double polarization, double theta_hi) {
  if (alpha_ratio.is_infinite()) {
    throw DomainError("alpha is infinite (Gamma = 0): squeezing improves without bound, no interior Theta optimum");
  }
  const double alpha = alpha_ratio.value();
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("optimal_theta needs finite alpha > 0");
  const auto g = [alpha](double theta) { return theta * (alpha * std::exp(-theta) - 1.0); };

  ThetaOptimum out;
  out.search = maximize_scalar(g, 0.0, theta_hi);
  if (!out.search.at_boundary) {
    // Golden section resolves the argmax only to ~sqrt(eps) relative, because g is flat at
    // its peak. A few Newton steps on the stationarity condition alpha e^-Theta (1 - Theta) = 1
    // finish the job; they are kept only if they stay next to the golden answer.
    const auto residual = [alpha](double theta) { return alpha * std::exp(-theta) * (1.0 - theta) - 1.0; };
    double theta = out.search.argmax;
    for (int step = 0; step < 3; ++step) {
      const double slope = alpha * std::exp(-theta) * (theta - 2.0);
      if (slope == 0.0) break;
      theta -= residual(theta) / slope;
    }
    if (std::abs(theta - out.search.argmax) <= 1e-6 && g(theta) >= out.search.value - 1e-12 * std::abs(out.search.value)) {
      out.search.argmax = theta;
      out.search.value = std::max(out.search.value, g(theta));
    }
    out.stationarity_residual = residual(out.search.argmax);
  }
  out.xi2 = std::exp(-out.search.value) / polarization;
  return out;
}

OptimizationOutcome optimal_u(double alpha, double u_hi) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("optimal_u needs finite alpha > 0");
  const double x = alpha / std::numbers::e;
  const auto h = [x](double u) { return (1.0 - u) * std::exp(x * u); };
  return maximize_scalar(h, 0.0, u_hi);
}

SplitOptimum optimal_split_full(double j_coupling, double n_spins, double polarization, double gamma,
                                double tau_budget, const SplitSearchOptions& options) {
  if (!(tau_budget > 0.0) || !std::isfinite(tau_budget)) throw DomainError("budget tau must be finite and > 0");
  if (options.grid_points < 3) throw DomainError("split search needs at least 3 grid points per axis");

  // Parametrize the simplex by shot length s = T + t in (0, tau] and squeeze fraction u = T / s.
  const auto snr = [&](double s, double u) {
    return analytic::snr_squeeze_then_measure(j_coupling, n_spins, polarization, gamma, u * s, (1.0 - u) * s)
        .snr_per_root_time;
  };
  // In u the objective is (1 - u) exp(c u) up to positive factors: log-concave, so
  // golden section on the whole unit interval is safe.
  const ScalarSearchOptions inner_options{options.tol, 0};
  int inner_iterations = 0;
  const auto best_over_u = [&](double s) {
    const OptimizationOutcome inner =
        maximize_scalar([&](double u) { return snr(s, u); }, 0.0, 1.0, inner_options);
    inner_iterations += inner.iterations;
    return inner;
  };

  const int n = options.grid_points;
  const auto s_at = [&](int i) { return i == n - 1 ? tau_budget : tau_budget * i / (n - 1); };
  const auto u_at = [&](int j) { return j == n - 1 ? 1.0 : static_cast<double>(j) / (n - 1); };

  int best_i = 1;
  double best_s = s_at(1);
  double best_u = 0.0;
  double best_value = snr(best_s, 0.0);
  for (int i = 1; i < n; ++i) {  // s = 0 is outside the domain
    const double s = s_at(i);
    for (int j = 0; j < n; ++j) {
      const double v = snr(s, u_at(j));
      if (v > best_value) {
        best_value = v;
        best_s = s;
        best_u = u_at(j);
        best_i = i;
      }
    }
  }

  const double s_lo = s_at(std::max(best_i - 1, 1)) * (best_i == 1 ? 0.5 : 1.0);
  const double s_hi = s_at(std::min(best_i + 1, n - 1));
  const OptimizationOutcome outer = maximize_scalar([&](double s) { return best_over_u(s).value; }, s_lo, s_hi,
                                                    ScalarSearchOptions{options.tol * tau_budget, 0});
  if (outer.value > best_value) {
    const OptimizationOutcome inner = best_over_u(outer.argmax);
    best_value = inner.value;
    best_s = outer.argmax;
    best_u = inner.argmax;
  }

  SplitOptimum out;
  out.t_squeeze = best_u * best_s;
  out.t_signal = (1.0 - best_u) * best_s;
  out.value = best_value;
  out.squeeze_fraction = best_u;
  out.decay_product = 4.0 * gamma * best_s;
  out.at_boundary = best_u <= options.tol || tau_budget - best_s <= options.tol * tau_budget;
  out.iterations = outer.iterations + inner_iterations;
  return out;
}

}  // namespace tact::optimize
