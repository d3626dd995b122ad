#include "tact/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace tact::cli {

ConfigError::ConfigError(int line, std::string field, const std::string& message)
    : std::runtime_error("config line " + std::to_string(line) + (field.empty() ? "" : " [" + field + "]") + ": " +
                         message),
      line_(line),
      field_(std::move(field)) {}

double SweepAxis::value(int k) const {
  if (count == 1) return lo;
  const double f = static_cast<double>(k) / (count - 1);
  if (spacing == Spacing::log) return k == count - 1 ? hi : lo * std::pow(hi / lo, f);
  return k == count - 1 ? hi : lo + (hi - lo) * f;
}

const std::vector<std::string>& axis_names() {
  static const std::vector<std::string> names = {"n_spins",   "polarization", "j_coupling", "gamma", "b_field",
                                                 "t_squeeze", "t_signal",     "tau_total",  "alpha", "theta"};
  return names;
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string strip_comment(const std::string& s) {
  const auto pos = s.find_first_of("#;");
  return pos == std::string::npos ? s : s.substr(0, pos);
}

double parse_double(const std::string& text, int line, const std::string& field) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ConfigError(line, field, "expected a finite number, got '" + text + "'");
  }
  return v;
}

int parse_int(const std::string& text, int line, const std::string& field) {
  int v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError(line, field, "expected an integer, got '" + text + "'");
  return v;
}

bool parse_bool(const std::string& text, int line, const std::string& field) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(line, field, "expected true or false, got '" + text + "'");
}

SweepAxis parse_axis(const std::string& text, int line) {
  std::istringstream in(text);
  std::vector<std::string> parts;
  for (std::string p; in >> p;) parts.push_back(p);
  if (parts.size() != 5) {
    throw ConfigError(line, "sweep.axis", "expected '<name> <linear|log> <lo> <hi> <count>'");
  }
  SweepAxis axis;
  axis.name = parts[0];
  const auto& names = axis_names();
  if (std::find(names.begin(), names.end(), axis.name) == names.end()) {
    throw ConfigError(line, "sweep.axis", "unknown parameter '" + axis.name + "'");
  }
  if (parts[1] == "linear") {
    axis.spacing = Spacing::linear;
  } else if (parts[1] == "log") {
    axis.spacing = Spacing::log;
  } else {
    throw ConfigError(line, "sweep.axis", "spacing must be linear or log, got '" + parts[1] + "'");
  }
  axis.lo = parse_double(parts[2], line, "sweep.axis");
  axis.hi = parse_double(parts[3], line, "sweep.axis");
  axis.count = parse_int(parts[4], line, "sweep.axis");
  if (axis.count < 1) throw ConfigError(line, "sweep.axis", "count must be at least 1");
  if (axis.spacing == Spacing::log && !(axis.lo > 0.0 && axis.hi > 0.0)) {
    throw ConfigError(line, "sweep.axis", "log spacing needs lo > 0 and hi > 0");
  }
  return axis;
}

}  // namespace

void apply_axis(ProtocolParams& p, const std::string& name, double value) {
  if (name == "n_spins") {
    p.n_spins = static_cast<int>(std::lround(value));
  } else if (name == "polarization") {
    p.polarization = value;
  } else if (name == "j_coupling") {
    p.j_coupling = value;
  } else if (name == "gamma") {
    p.gamma = value;
  } else if (name == "b_field") {
    p.b_field = value;
  } else if (name == "t_squeeze") {
    p.t_squeeze = value;
  } else if (name == "t_signal") {
    p.t_signal = value;
  } else if (name == "tau_total") {
    p.tau_total = value;
  } else if (name == "alpha") {
    p.j_coupling = 4.0 * p.gamma * value / (p.n_spins * p.polarization);
  } else if (name == "theta") {
    p.t_squeeze = p.gamma > 0.0 ? value / (4.0 * p.gamma) : 0.0;
  } else {
    throw std::invalid_argument("unknown axis " + name);
  }
}

RunConfig parse_config(const std::string& text) {
  RunConfig config;
  config.source_hash = fnv1a64(text);

  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  std::optional<std::pair<double, int>> derived_alpha;  // value, line
  std::optional<std::pair<double, int>> derived_theta;
  std::map<std::string, int> seen;

  while (std::getline(in, raw)) {
    ++line;
    const std::string content = trim(strip_comment(raw));
    if (content.empty()) continue;
    if (content.front() == '[') {
      if (content.back() != ']') throw ConfigError(line, "", "unterminated section header");
      section = trim(content.substr(1, content.size() - 2));
      static const char* known[] = {"params", "sweep", "engine", "output", "verify"};
      if (std::find(std::begin(known), std::end(known), section) == std::end(known)) {
        throw ConfigError(line, section, "unknown section");
      }
      continue;
    }
    const auto eq = content.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "", "expected 'key = value'");
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    if (section.empty()) throw ConfigError(line, key, "key outside of any [section]");
    const std::string field = section + "." + key;
    if (value.empty()) throw ConfigError(line, field, "missing value");
    if (key != "axis") {
      if (auto it = seen.find(field); it != seen.end()) {
        throw ConfigError(line, field, "duplicate key (first set on line " + std::to_string(it->second) + ")");
      }
      seen.emplace(field, line);
    }

    ProtocolParams& p = config.params;
    if (section == "params") {
      if (key == "n_spins") {
        p.n_spins = parse_int(value, line, field);
      } else if (key == "polarization") {
        p.polarization = parse_double(value, line, field);
      } else if (key == "j_coupling") {
        p.j_coupling = parse_double(value, line, field);
      } else if (key == "gamma") {
        p.gamma = parse_double(value, line, field);
      } else if (key == "b_field") {
        p.b_field = parse_double(value, line, field);
      } else if (key == "t_squeeze") {
        p.t_squeeze = parse_double(value, line, field);
      } else if (key == "t_signal") {
        p.t_signal = parse_double(value, line, field);
      } else if (key == "tau_total") {
        p.tau_total = parse_double(value, line, field);
      } else if (key == "alpha") {
        derived_alpha = {parse_double(value, line, field), line};
      } else if (key == "theta") {
        derived_theta = {parse_double(value, line, field), line};
      } else {
        throw ConfigError(line, field, "unknown key");
      }
    } else if (section == "sweep") {
      if (key != "axis") throw ConfigError(line, field, "unknown key (only 'axis' is allowed)");
      config.axes.push_back(parse_axis(value, line));
    } else if (section == "engine") {
      if (key == "kind") {
        if (value == "analytic") {
          config.engine = Engine::analytic;
        } else if (value == "linearized") {
          config.engine = Engine::linearized;
        } else if (value == "exact") {
          config.engine = Engine::exact;
        } else if (value == "all") {
          config.engine = Engine::all;
        } else {
          throw ConfigError(line, field, "expected analytic, linearized, exact or all");
        }
      } else if (key == "tolerance") {
        config.step_control.tolerance = parse_double(value, line, field);
        if (!(config.step_control.tolerance > 0.0)) throw ConfigError(line, field, "must be positive");
      } else if (key == "n_max") {
        config.n_cap = parse_int(value, line, field);
        if (config.n_cap < 1 || config.n_cap > 14) throw ConfigError(line, field, "must lie in [1, 14]");
      } else if (key == "factorization") {
        config.factorization = parse_bool(value, line, field);
      } else if (key == "coupling") {
        if (value == "spin_half") {
          config.coupling = CouplingNormalization::spin_half;
        } else if (value == "pauli") {
          config.coupling = CouplingNormalization::pauli;
        } else {
          throw ConfigError(line, field, "expected spin_half or pauli");
        }
      } else {
        throw ConfigError(line, field, "unknown key");
      }
    } else if (section == "output") {
      if (key == "path") {
        config.output_path = value;
      } else if (key == "workers") {
        config.workers = parse_int(value, line, field);
        if (config.workers < 1) throw ConfigError(line, field, "must be at least 1");
      } else if (key == "timing") {
        config.timing = parse_bool(value, line, field);
      } else {
        throw ConfigError(line, field, "unknown key");
      }
    } else if (section == "verify") {
      VerifyConfig& v = config.verify;
      if (key == "alpha") {
        v.alpha = parse_double(value, line, field);
      } else if (key == "gamma") {
        v.gamma = parse_double(value, line, field);
        if (!(v.gamma > 0.0)) throw ConfigError(line, field, "must be positive");
      } else if (key == "polarization") {
        v.polarization = parse_double(value, line, field);
      } else if (key == "n_min") {
        v.n_min = parse_int(value, line, field);
      } else if (key == "n_max") {
        v.n_max = parse_int(value, line, field);
      } else if (key == "tolerance") {
        v.tolerance = parse_double(value, line, field);
        if (!(v.tolerance > 0.0)) throw ConfigError(line, field, "must be positive");
      } else if (key == "slope_threshold") {
        v.slope_threshold = parse_double(value, line, field);
      } else {
        throw ConfigError(line, field, "unknown key");
      }
    }
  }

  if (derived_alpha) apply_axis(config.params, "alpha", derived_alpha->first);
  if (derived_theta) apply_axis(config.params, "theta", derived_theta->first);
  if (config.verify.n_min < 1 || config.verify.n_max < config.verify.n_min) {
    throw ConfigError(line, "verify.n_min", "need 1 <= n_min <= n_max");
  }
  if (derived_alpha && !(config.params.gamma > 0.0)) {
    throw ConfigError(derived_alpha->second, "params.alpha", "alpha needs gamma > 0 to fix j_coupling");
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, "", "cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::vector<ProtocolParams> expand_grid(const RunConfig& config) {
  std::size_t total = 1;
  for (const auto& axis : config.axes) total *= static_cast<std::size_t>(axis.count);
  std::vector<ProtocolParams> grid;
  grid.reserve(total);
  std::vector<int> index(config.axes.size(), 0);
  for (std::size_t k = 0; k < total; ++k) {
    // Row-major: the last axis varies fastest.
    std::size_t rem = k;
    for (std::size_t a = config.axes.size(); a-- > 0;) {
      index[a] = static_cast<int>(rem % config.axes[a].count);
      rem /= config.axes[a].count;
    }
    ProtocolParams p = config.params;
    for (int pass = 0; pass < 3; ++pass) {
      // physical axes, then alpha (needs N, P, Gamma), then theta (needs Gamma)
      for (std::size_t a = 0; a < config.axes.size(); ++a) {
        const auto& name = config.axes[a].name;
        const int axis_pass = name == "alpha" ? 1 : name == "theta" ? 2 : 0;
        if (axis_pass == pass) apply_axis(p, name, config.axes[a].value(index[a]));
      }
    }
    grid.push_back(p);
  }
  return grid;
}

}  // namespace tact::cli
