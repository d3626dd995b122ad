#include "tact/params.hpp"

#include <cmath>
#include <cstdio>

#include "tact/errors.hpp"

namespace tact {

double SqueezeRatio::value() const {
  if (infinite_) throw DomainError("squeeze ratio alpha is infinite (Gamma = 0); use the noiseless path");
  return value_;
}

std::string SqueezeRatio::to_string() const {
  if (infinite_) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", value_);
  return buf;
}

DimensionlessGroups derive_dimensionless(const ProtocolParams& params, ProtocolMode mode) {
  DimensionlessGroups out;
  out.theta = 4.0 * params.gamma * params.t_squeeze;
  out.u = out.theta;
  if (params.gamma == 0.0) {
    out.alpha = SqueezeRatio::infinite();
  } else {
    out.alpha = SqueezeRatio::finite(params.j_coupling * params.n_spins * params.polarization /
                                     (4.0 * params.gamma));
  }
  double decay_time = params.t_squeeze;
  if (mode == ProtocolMode::squeeze_then_measure) decay_time += params.t_signal;
  out.p_eff = params.polarization * std::exp(-4.0 * params.gamma * decay_time);
  return out;
}

namespace {

void check_rate(std::vector<Violation>& out, double v, const char* code, const char* name) {
  if (!std::isfinite(v) || v < 0.0) {
    out.push_back({code, std::string(name) + " must be finite and non-negative"});
  }
}

}  // namespace

std::vector<Violation> validate(const ProtocolParams& params) {
  std::vector<Violation> out;
  if (params.n_spins < 1) out.push_back({"N_POSITIVE", "n_spins must be at least 1"});
  if (!(params.polarization > 0.0 && params.polarization <= 1.0)) {
    out.push_back({"P_OUT_OF_RANGE", "polarization must lie in (0, 1]"});
  }
  check_rate(out, params.j_coupling, "J_INVALID", "j_coupling");
  check_rate(out, params.gamma, "GAMMA_INVALID", "gamma");
  check_rate(out, params.b_field, "B_INVALID", "b_field");
  check_rate(out, params.t_squeeze, "T_SQUEEZE_INVALID", "t_squeeze");
  check_rate(out, params.t_signal, "T_SIGNAL_INVALID", "t_signal");
  if (!std::isfinite(params.tau_total) || params.tau_total <= 0.0) {
    out.push_back({"TAU_POSITIVE", "tau_total must be finite and positive"});
  }
  return out;
}

std::string_view to_string(ProtocolMode mode) {
  switch (mode) {
    case ProtocolMode::squeeze_only:
      return "squeeze_only";
    case ProtocolMode::squeeze_then_measure:
      return "squeeze_then_measure";
  }
  return "unknown";
}

double pauli_coupling_factor(CouplingNormalization normalization) {
  return normalization == CouplingNormalization::pauli ? 1.0 : 0.25;
}

std::string_view to_string(CouplingNormalization normalization) {
  return normalization == CouplingNormalization::pauli ? "pauli" : "spin_half";
}

}  // namespace tact
