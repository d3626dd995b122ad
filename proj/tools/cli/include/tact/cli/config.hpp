#pragma once

// Run configuration: `key = value` lines grouped under `[section]` headers,
// `#` or `;` starting a comment. Unknown sections and keys are errors. See
// docs/config.md for the schema.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tact/exact.hpp"
#include "tact/params.hpp"

namespace tact::cli {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, std::string field, const std::string& message);
  int line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  int line_;
  std::string field_;
};

enum class Spacing { linear, log };

struct SweepAxis {
  std::string name;  // a ProtocolParams field, or the derived "alpha" / "theta"
  Spacing spacing = Spacing::linear;
  double lo = 0.0;
  double hi = 0.0;
  int count = 1;

  double value(int k) const;
};

enum class Engine { analytic, linearized, exact, all };

struct VerifyConfig {
  double alpha = 5.0;
  double gamma = 0.25;  // with 4 Gamma T = 1 this fixes T = 1
  double polarization = 1.0;
  int n_min = 2;
  int n_max = 8;
  double tolerance = 1e-8;
  double slope_threshold = -0.5;
};

struct RunConfig {
  ProtocolParams params;
  std::vector<SweepAxis> axes;
  Engine engine = Engine::analytic;
  exact::StepControl step_control;
  int n_cap = exact::kDefaultMaxSpins;
  CouplingNormalization coupling = CouplingNormalization::spin_half;
  bool factorization = false;  // add the factorization_error column to exact rows
  std::string output_path;  // empty: stdout
  int workers = 1;
  bool timing = true;
  VerifyConfig verify;
  std::uint64_t source_hash = 0;  // FNV-1a of the config text
};

// Names accepted as sweep axes.
const std::vector<std::string>& axis_names();

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

std::uint64_t fnv1a64(const std::string& text);

// One grid point per element, row-major over the axes (first axis slowest).
// With no axes the grid is the single base point.
std::vector<ProtocolParams> expand_grid(const RunConfig& config);

// Applies one axis value to a parameter set. Derived axes: alpha sets
// J = 4 Gamma alpha / (N P); theta sets T = theta / (4 Gamma).
void apply_axis(ProtocolParams& params, const std::string& name, double value);

}  // namespace tact::cli
