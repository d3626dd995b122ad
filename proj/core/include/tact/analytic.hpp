#pragma once

// Closed-form squeezing and signal-to-noise expressions for two-axis
// counter-twisting under depolarization, evaluated exactly as written.
//
// Notation: alpha = J N P / (4 Gamma), Theta = 4 Gamma T, U = 4 Gamma T read as
// the squeeze fraction of a shot with 4 Gamma (T + t) = 1.

#include <string_view>

namespace tact::analytic {

enum class Regime {
  sub_threshold,  // alpha <= 1: squeezing never beats the unsqueezed state
  squeezing,      // 1 < alpha < 10
  strong,         // alpha >= 10 (label only; never used to branch the math)
};

inline constexpr double kStrongRegimeAlpha = 10.0;

Regime classify(double alpha);
// Gamma = 0 has unbounded alpha.
Regime classify_unbounded();
std::string_view to_string(Regime regime);

struct SqueezeFormulaResult {
  double xi2 = 0.0;           // P^-1 exp(-exponent_arg)
  double exponent_arg = 0.0;  // Theta [alpha e^-Theta - 1]
  Regime regime = Regime::sub_threshold;
};

// xi2 = exp(-J N P e^{-4 Gamma T} T) / (P e^{-4 Gamma T}).
SqueezeFormulaResult xi2_min(double j_coupling, double n_spins, double polarization, double gamma,
                             double t_squeeze);

// xi2 = P^-1 exp(-Theta [alpha exp(-Theta) - 1]).
SqueezeFormulaResult xi2_min_dimensionless(double alpha, double theta, double polarization);

// Theta = 1 slice: P^-1 exp(-[alpha / e - 1]). Throws DomainError for alpha <= 1.
double xi2_strong_squeezing(double alpha, double polarization);

enum class Protocol { while_measuring, squeeze_then_measure, unsqueezed };
std::string_view to_string(Protocol protocol);

struct SnrResult {
  double snr_per_root_time = 0.0;  // (1 / sqrt(tau)) dS/dB
  Protocol protocol = Protocol::while_measuring;
  double u_split = 0.0;  // 4 Gamma T (squeeze_then_measure only)
};

// sqrt(2) / (J sqrt(T N)) * [1 - exp(-J N P e^{-4 Gamma T} T)] / exp(-[J N P T - 1] e^{-4 Gamma T}).
// Requires J > 0 and T > 0.
SnrResult snr_squeeze_while_measure(double j_coupling, double n_spins, double polarization, double gamma,
                                    double t_squeeze);

// t sqrt(N) / sqrt(T + t) * P e^{-4 Gamma (T + t)} / exp(-J N P e^{-4 Gamma (T + t)} T).
// T = 0 is the unsqueezed baseline sqrt(t N) P e^{-4 Gamma t}.
SnrResult snr_squeeze_then_measure(double j_coupling, double n_spins, double polarization, double gamma,
                                   double t_squeeze, double t_signal);

// sqrt(N) / sqrt(4 Gamma) * P e^{-1} exp(alpha e^{-1} U) (1 - U): the squeeze-then-measure
// signal to noise restricted to 4 Gamma (T + t) = 1.
double snr_unit_decay_slice(double alpha, double n_spins, double gamma, double polarization, double u);

// Closed-form maximum of the unit-decay slice, at U_max = (alpha/e - 1)/(alpha/e):
// sqrt(N) / sqrt(4 Gamma) * P alpha^-1 / exp(-[alpha/e - 1]). Throws DomainError when alpha/e <= 1.
SnrResult snr_optimum_strong(double alpha, double n_spins, double gamma, double polarization);

// exp(alpha / e) / alpha.
double improvement_factor(double alpha);

}  // namespace tact::analytic
