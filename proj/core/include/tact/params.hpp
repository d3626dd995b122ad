#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace tact {

// Physical inputs of a squeezing / metrology protocol. Rates and times share
// one arbitrary but consistent unit system.
struct ProtocolParams {
  int n_spins = 1;
  double polarization = 1.0;  // per-spin <sigma_z>, in (0, 1]
  double j_coupling = 0.0;    // squeezing rate J
  double gamma = 0.0;         // depolarization rate
  double b_field = 0.0;       // signal strength B
  double t_squeeze = 0.0;     // squeezing duration T
  double t_signal = 0.0;      // signal acquisition duration t
  double tau_total = 1.0;     // total measurement budget
};

// Ratio J N P / (4 Gamma). At Gamma = 0 the ratio is unbounded; that case is
// carried as a tag instead of a floating-point infinity so it serializes
// unambiguously and callers must branch on it explicitly.
class SqueezeRatio {
 public:
  static SqueezeRatio finite(double value) { return SqueezeRatio(false, value); }
  static SqueezeRatio infinite() { return SqueezeRatio(true, 0.0); }

  bool is_infinite() const noexcept { return infinite_; }
  // Throws DomainError when infinite.
  double value() const;
  // "inf" or the number with 15 significant digits.
  std::string to_string() const;

  friend bool operator==(const SqueezeRatio&, const SqueezeRatio&) = default;

 private:
  SqueezeRatio(bool infinite, double value) : infinite_(infinite), value_(value) {}
  bool infinite_;
  double value_;
};

enum class ProtocolMode {
  squeeze_only,          // effective polarization decays over T
  squeeze_then_measure,  // ... over T + t
};

struct DimensionlessGroups {
  double theta = 0.0;  // 4 Gamma T
  SqueezeRatio alpha = SqueezeRatio::infinite();
  double u = 0.0;      // 4 Gamma T, read as the squeeze fraction when 4 Gamma (T + t) = 1
  double p_eff = 1.0;  // P exp(-4 Gamma T) or P exp(-4 Gamma (T + t))
};

DimensionlessGroups derive_dimensionless(const ProtocolParams& params, ProtocolMode mode);

struct Violation {
  std::string code;  // stable, machine readable, e.g. "P_OUT_OF_RANGE"
  std::string message;
};

// Reports every violated invariant; empty result means the parameters are valid.
std::vector<Violation> validate(const ProtocolParams& params);

std::string_view to_string(ProtocolMode mode);

// How J multiplies the pair operators of the two-axis counter-twisting Hamiltonian.
//
//   spin_half: H = J sum_{i != j} (s_x^i s_x^j - s_y^i s_y^j) with s = sigma / 2.
//              Linearizes to (J N P / 2)(b^2 + b^dagger^2), i.e. Bogoliubov rate J N P,
//              the rate every closed form in `analytic` is written in.
//   pauli:     H = J sum_{i != j} (sigma_x^i sigma_x^j - sigma_y^i sigma_y^j), the Pauli
//              form as usually printed. Four times stronger: rate 4 J N P.
enum class CouplingNormalization { spin_half, pauli };

// Factor multiplying J sum (sigma sigma - sigma sigma): 1/4 or 1.
double pauli_coupling_factor(CouplingNormalization normalization);

std::string_view to_string(CouplingNormalization normalization);

}  // namespace tact
