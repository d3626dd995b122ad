#include "tact/analytic.hpp"

#include <cmath>
#include <numbers>

#include "tact/errors.hpp"

namespace tact::analytic {

namespace {

constexpr double kInvE = 1.0 / std::numbers::e;

}  // namespace

Regime classify(double alpha) {
  if (alpha <= 1.0) return Regime::sub_threshold;
  if (alpha >= kStrongRegimeAlpha) return Regime::strong;
  return Regime::squeezing;
}

Regime classify_unbounded() { return Regime::strong; }

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::sub_threshold:
      return "sub_threshold";
    case Regime::squeezing:
      return "squeezing";
    case Regime::strong:
      return "strong";
  }
  return "unknown";
}

std::string_view to_string(Protocol protocol) {
  switch (protocol) {
    case Protocol::while_measuring:
      return "while_measuring";
    case Protocol::squeeze_then_measure:
      return "squeeze_then_measure";
    case Protocol::unsqueezed:
      return "unsqueezed";
  }
  return "unknown";
}

SqueezeFormulaResult xi2_min(double j_coupling, double n_spins, double polarization, double gamma,
                             double t_squeeze) {
  const double decay = std::exp(-4.0 * gamma * t_squeeze);
  const double jnp = j_coupling * n_spins * polarization;
  SqueezeFormulaResult out;
  out.xi2 = std::exp(-jnp * decay * t_squeeze) / (polarization * decay);
  out.exponent_arg = jnp * decay * t_squeeze - 4.0 * gamma * t_squeeze;
  out.regime = gamma == 0.0 ? classify_unbounded() : classify(jnp / (4.0 * gamma));
  return out;
}

SqueezeFormulaResult xi2_min_dimensionless(double alpha, double theta, double polarization) {
  SqueezeFormulaResult out;
  out.exponent_arg = theta * (alpha * std::exp(-theta) - 1.0);
  out.xi2 = std::exp(-out.exponent_arg) / polarization;
  out.regime = classify(alpha);
  return out;
}

double xi2_strong_squeezing(double alpha, double polarization) {
  if (!(alpha > 1.0)) throw DomainError("strong-squeezing asymptotic needs alpha > 1");
  return std::exp(-(alpha * kInvE - 1.0)) / polarization;
}

SnrResult snr_squeeze_while_measure(double j_coupling, double n_spins, double polarization, double gamma,
                                    double t_squeeze) {
  if (!(j_coupling > 0.0)) throw DomainError("squeeze-while-measure signal to noise needs J > 0");
  if (!(t_squeeze > 0.0)) throw DomainError("squeeze-while-measure signal to noise needs T > 0");
  const double decay = std::exp(-4.0 * gamma * t_squeeze);
  const double jnpt = j_coupling * n_spins * polarization * t_squeeze;
  const double prefactor = std::numbers::sqrt2 / (j_coupling * std::sqrt(t_squeeze * n_spins));
  const double numerator = -std::expm1(-jnpt * decay);
  const double denominator = std::exp(-(jnpt - 1.0) * decay);
  return {prefactor * numerator / denominator, Protocol::while_measuring, 4.0 * gamma * t_squeeze};
}

SnrResult snr_squeeze_then_measure(double j_coupling, double n_spins, double polarization, double gamma,
                                   double t_squeeze, double t_signal) {
  if (t_squeeze < 0.0 || t_signal < 0.0) throw DomainError("durations must be non-negative");
  const double shot = t_squeeze + t_signal;
  if (!(shot > 0.0)) throw DomainError("squeeze-then-measure signal to noise needs T + t > 0");
  const double p_eff = polarization * std::exp(-4.0 * gamma * shot);
  const double gain = std::exp(j_coupling * n_spins * p_eff * t_squeeze);  // 1 / exp(-J N P_eff T)
  SnrResult out;
  out.snr_per_root_time = t_signal * std::sqrt(n_spins) / std::sqrt(shot) * p_eff * gain;
  out.protocol = t_squeeze == 0.0 ? Protocol::unsqueezed : Protocol::squeeze_then_measure;
  out.u_split = 4.0 * gamma * t_squeeze;
  return out;
}

double snr_unit_decay_slice(double alpha, double n_spins, double gamma, double polarization, double u) {
  return std::sqrt(n_spins) / std::sqrt(4.0 * gamma) * polarization * kInvE * std::exp(alpha * kInvE * u) * (1.0 - u);
}

SnrResult snr_optimum_strong(double alpha, double n_spins, double gamma, double polarization) {
  const double x = alpha * kInvE;
  if (!(x > 1.0)) throw DomainError("no interior optimum: needs alpha / e > 1");
  if (!(gamma > 0.0)) throw DomainError("closed-form optimum needs Gamma > 0");
  SnrResult out;
  out.snr_per_root_time = std::sqrt(n_spins) / std::sqrt(4.0 * gamma) * polarization / alpha * std::exp(x - 1.0);
  out.protocol = Protocol::squeeze_then_measure;
  out.u_split = (x - 1.0) / x;
  return out;
}

double improvement_factor(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("improvement factor needs finite alpha > 0");
  return std::exp(alpha * kInvE) / alpha;
}

}  // namespace tact::analytic
