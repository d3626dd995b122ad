#include "tact/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <exception>

#include "tact/analytic.hpp"
#include "tact/cli/csv.hpp"
#include "tact/errors.hpp"
#include "tact/exact.hpp"
#include "tact/linearized.hpp"
#include "tact/optimize.hpp"

namespace tact::cli {

namespace {

enum class Group { analytic, optimize, linearized, exact };

const std::vector<std::string> kInputColumns = {"n_spins",   "polarization", "j_coupling", "gamma",
                                                "b_field",   "t_squeeze",    "t_signal",   "tau_total"};
const std::vector<std::string> kDerivedColumns = {"theta", "alpha", "u", "p_eff", "p_eff_shot"};

std::vector<std::string> group_columns(Group group, const RunConfig& config) {
  switch (group) {
    case Group::analytic:
      return {"regime", "xi2", "snr_while_measuring", "snr_squeeze_then_measure"};
    case Group::optimize:
      return {"theta_opt", "xi2_opt", "theta_at_boundary", "u_opt", "snr_u_opt", "u_at_boundary", "improvement"};
    case Group::linearized:
      return {"kappa", "squeezed_quadrature_variance", "squeezed_spin_variance", "xi2_linearized", "signal"};
    case Group::exact: {
      std::vector<std::string> cols = {"sz_mean",         "xi2_kitagawa_ueda",    "xi2_wineland",
                                       "trace_residual",  "hermiticity_residual", "min_eigenvalue",
                                       "integrator_steps"};
      if (config.factorization) cols.push_back("factorization_error");
      return cols;
    }
  }
  return {};
}

std::vector<Group> groups_for(Command command, Engine engine) {
  switch (command) {
    case Command::analytic:
      return {Group::analytic};
    case Command::optimize:
      return {Group::optimize};
    case Command::linearized:
      return {Group::linearized};
    case Command::exact:
      return {Group::exact};
    case Command::sweep:
      switch (engine) {
        case Engine::analytic:
          return {Group::analytic, Group::optimize};
        case Engine::linearized:
          return {Group::linearized};
        case Engine::exact:
          return {Group::exact};
        case Engine::all:
          return {Group::analytic, Group::optimize, Group::linearized, Group::exact};
      }
      break;
    case Command::verify:
      break;
  }
  return {};
}

bool uses_exact(Command command, Engine engine) {
  for (Group g : groups_for(command, engine)) {
    if (g == Group::exact) return true;
  }
  return false;
}

// Cells are filled by name so each group stays readable.
class RowBuilder {
 public:
  explicit RowBuilder(std::vector<std::string> names) : names_(std::move(names)), cells_(names_.size()) {}

  void set(const std::string& name, const std::string& value) {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == name) {
        cells_[i] = value;
        return;
      }
    }
  }
  void set(const std::string& name, double value) { set(name, format_number(value)); }
  void note(const std::string& column, const std::string& reason) {
    if (!status_.empty()) status_ += ';';
    status_ += column + ":" + reason;
  }
  void violation(const std::string& code) {
    if (!status_.empty()) status_ += ';';
    status_ += code;
  }

  // Runs fn; tact errors become a status note on `column` instead of aborting the row.
  template <class Fn>
  void guarded(const std::string& column, Fn&& fn) {
    try {
      fn();
    } catch (const DegenerateError&) {
      note(column, "degenerate");
    } catch (const DomainError&) {
      note(column, "domain");
    } catch (const IntegrationError&) {
      note(column, "integration");
    } catch (const NumericalError&) {
      note(column, "numerical");
    }
  }

  Row finish() {
    set("status", status_.empty() ? std::string("ok") : status_);
    return std::move(cells_);
  }

 private:
  std::vector<std::string> names_;
  Row cells_;
  std::string status_;
};

void fill_inputs(RowBuilder& row, const ProtocolParams& p) {
  row.set("n_spins", format_count(p.n_spins));
  row.set("polarization", p.polarization);
  row.set("j_coupling", p.j_coupling);
  row.set("gamma", p.gamma);
  row.set("b_field", p.b_field);
  row.set("t_squeeze", p.t_squeeze);
  row.set("t_signal", p.t_signal);
  row.set("tau_total", p.tau_total);
  const DimensionlessGroups squeeze = derive_dimensionless(p, ProtocolMode::squeeze_only);
  const DimensionlessGroups shot = derive_dimensionless(p, ProtocolMode::squeeze_then_measure);
  row.set("theta", squeeze.theta);
  row.set("alpha", squeeze.alpha.to_string());
  row.set("u", squeeze.u);
  row.set("p_eff", squeeze.p_eff);
  row.set("p_eff_shot", shot.p_eff);
}

void fill_analytic(RowBuilder& row, const ProtocolParams& p) {
  const double n = p.n_spins;
  row.guarded("xi2", [&] {
    const auto r = analytic::xi2_min(p.j_coupling, n, p.polarization, p.gamma, p.t_squeeze);
    row.set("regime", std::string(analytic::to_string(r.regime)));
    row.set("xi2", r.xi2);
  });
  row.guarded("snr_while_measuring", [&] {
    row.set("snr_while_measuring",
            analytic::snr_squeeze_while_measure(p.j_coupling, n, p.polarization, p.gamma, p.t_squeeze)
                .snr_per_root_time);
  });
  row.guarded("snr_squeeze_then_measure", [&] {
    row.set("snr_squeeze_then_measure",
            analytic::snr_squeeze_then_measure(p.j_coupling, n, p.polarization, p.gamma, p.t_squeeze, p.t_signal)
                .snr_per_root_time);
  });
}

void fill_optimize(RowBuilder& row, const ProtocolParams& p) {
  const SqueezeRatio alpha = derive_dimensionless(p, ProtocolMode::squeeze_only).alpha;
  row.guarded("theta_opt", [&] {
    const auto best = optimize::optimal_theta(alpha, p.polarization);
    row.set("theta_opt", best.search.argmax);
    row.set("xi2_opt", best.xi2);
    row.set("theta_at_boundary", best.search.at_boundary ? "true" : "false");
  });
  row.guarded("u_opt", [&] {
    const double a = alpha.value();
    const auto best = optimize::optimal_u(a);
    row.set("u_opt", best.argmax);
    row.set("snr_u_opt", analytic::snr_unit_decay_slice(a, p.n_spins, p.gamma, p.polarization, best.argmax));
    row.set("u_at_boundary", best.at_boundary ? "true" : "false");
    // best.value is the gain over the unsqueezed U = 0 slice, whose value is 1.
    row.set("improvement", best.value);
  });
}

void fill_linearized(RowBuilder& row, const ProtocolParams& p, const RunConfig& config) {
  row.guarded("kappa", [&] {
    const auto start = linearized::initial_state(p, ProtocolMode::squeeze_only, config.coupling);
    const auto end = linearized::bogoliubov_propagate(start, p.t_squeeze);
    const auto extremum = linearized::min_variance_direction(end);
    row.set("kappa", start.kappa);
    row.set("squeezed_quadrature_variance", extremum.variance);
    row.set("squeezed_spin_variance", linearized::spin_variance_from_quadrature(extremum.variance, start.n_p_eff));
    row.set("xi2_linearized", extremum.variance / 0.5);
  });
  row.guarded("signal", [&] {
    const auto s = linearized::signal(p, p.t_signal);
    row.set("signal", s.value);
    if (s.degenerate) row.note("signal", "free_precession");
  });
}

void fill_exact(RowBuilder& row, const ProtocolParams& p, const RunConfig& config) {
  row.guarded("sz_mean", [&] {
    const auto rho0 = exact::build_initial_state(p.n_spins, p.polarization, config.n_cap);
    std::vector<exact::Superoperator> gens;
    if (p.j_coupling != 0.0) gens.push_back(exact::Superoperator::squeeze(p.n_spins, p.j_coupling, config.coupling));
    if (p.gamma != 0.0) gens.push_back(exact::Superoperator::depolarize(p.n_spins, p.gamma));
    if (p.b_field != 0.0) gens.push_back(exact::Superoperator::field(p.n_spins, p.b_field));
    exact::EvolveStats stats;
    const auto rho = exact::evolve(rho0, gens, p.t_squeeze, config.step_control, &stats);
    double sz = 0.0;
    for (int i = 0; i < p.n_spins; ++i) sz += exact::site_polarization(rho, i);
    const auto inv = rho.invariants();
    row.set("sz_mean", sz / p.n_spins);
    row.set("trace_residual", inv.trace_deviation);
    row.set("hermiticity_residual", inv.hermiticity_residual);
    row.set("min_eigenvalue", inv.min_eigenvalue);
    row.set("integrator_steps", format_count(stats.accepted_steps));
    row.guarded("xi2_kitagawa_ueda", [&] {
      const auto report = exact::squeezing_report(rho);
      row.set("xi2_kitagawa_ueda", report.kitagawa_ueda);
      row.set("xi2_wineland", report.wineland);
    });
  });
  if (config.factorization) {
    row.guarded("factorization_error", [&] {
      row.set("factorization_error",
              exact::factorization_error(p.n_spins, p.j_coupling, p.gamma, p.t_squeeze, p.polarization,
                                         config.step_control, config.coupling));
    });
  }
}

std::vector<std::string> verify_columns() {
  return {"n_spins",  "alpha", "gamma", "polarization", "j_coupling", "t_squeeze", "factorization_error",
          "commutator_norm", "status"};
}

std::vector<std::string> with_timing(std::vector<std::string> cols, bool timing) {
  if (timing) cols.push_back("wall_time_s");
  return cols;
}

struct VerifyPoint {
  int n = 0;
  std::optional<double> factorization;
  std::optional<double> commutator;
};

int run_verify(const RunRequest& request, std::ostream& out, std::ostream& err) {
  const RunConfig& config = request.config;
  const VerifyConfig& v = config.verify;
  try {
    exact::check_spin_cap(v.n_max, config.n_cap);
  } catch (const ResourceError& e) {
    err << "tact verify: " << e.what() << '\n';
    return kExitRuntime;
  }
  const double t_squeeze = 1.0 / (4.0 * v.gamma);
  exact::StepControl control = config.step_control;
  control.tolerance = v.tolerance;

  const auto names = with_timing(verify_columns(), config.timing);
  const std::size_t count = static_cast<std::size_t>(v.n_max - v.n_min + 1);
  std::vector<VerifyPoint> points(count);

  const RowTask task = [&](std::size_t index) {
    const auto started = std::chrono::steady_clock::now();
    const int n = v.n_min + static_cast<int>(index);
    const double j = 4.0 * v.gamma * v.alpha / (n * v.polarization);
    RowBuilder row(names);
    VerifyPoint& point = points[index];  // each task owns its slot
    point.n = n;
    row.set("n_spins", format_count(n));
    row.set("alpha", v.alpha);
    row.set("gamma", v.gamma);
    row.set("polarization", v.polarization);
    row.set("j_coupling", j);
    row.set("t_squeeze", t_squeeze);
    row.guarded("factorization_error", [&] {
      const double e = exact::factorization_error(n, j, v.gamma, t_squeeze, v.polarization, control, config.coupling);
      point.factorization = e;
      row.set("factorization_error", e);
    });
    row.guarded("commutator_norm", [&] {
      const auto c = exact::commutator_action_norm(n, j, v.gamma, v.polarization, config.coupling);
      row.set("commutator_norm", c.value);
      if (c.degenerate) {
        row.note("commutator_norm", "degenerate");
      } else {
        point.commutator = c.value;
      }
    });
    if (config.timing) {
      row.set("wall_time_s",
              std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count());
    }
    return row.finish();
  };

  CsvMetadata meta{"verify", config.source_hash, request.has_config};
  write_preamble(out, meta);
  write_row(out, names);
  const SweepOutcome outcome =
      run_sweep(count, task, config.workers, [&](std::size_t, const Row& row) { write_row(out, row); });
  if (!outcome.complete) {
    out << "# INCOMPLETE\n";
    err << "tact verify: N = " << v.n_min + static_cast<int>(outcome.failed_index) << " failed: " << outcome.failure
        << '\n';
    return kExitRuntime;
  }

  std::vector<std::pair<double, double>> fact_fit;
  std::vector<std::pair<double, double>> comm_fit;
  bool all_ran = true;
  bool decreasing = true;
  std::optional<double> previous;
  for (const auto& point : points) {
    if (!point.factorization) {
      all_ran = false;
      continue;
    }
    if (*point.factorization > 0.0) {
      // Degenerate rows (error exactly 0, e.g. J = 0) stay out of the fit.
      fact_fit.emplace_back(point.n, *point.factorization);
      if (previous && !(*point.factorization < *previous)) decreasing = false;
      previous = point.factorization;
    }
    if (point.commutator && *point.commutator > 0.0) comm_fit.emplace_back(point.n, *point.commutator);
  }
  const bool fit_ok = fact_fit.size() >= 2;
  const double fact_slope = fit_ok ? loglog_slope(fact_fit) : std::nan("");
  const double comm_slope = comm_fit.size() >= 2 ? loglog_slope(comm_fit) : std::nan("");
  const bool pass = all_ran && fit_ok && decreasing && fact_slope <= v.slope_threshold;

  const auto slope_text = [](double s) { return std::isnan(s) ? std::string("undefined") : format_number(s); };
  std::string summary = std::string("summary: ") + (pass ? "PASS" : "FAIL") +
                        " factorization_slope=" + slope_text(fact_slope) +
                        " threshold=" + format_number(v.slope_threshold) +
                        " decreasing=" + (decreasing ? "true" : "false") +
                        " fitted_rows=" + std::to_string(fact_fit.size()) + " alpha=" + format_number(v.alpha) +
                        " gamma=" + format_number(v.gamma) + " T=" + format_number(t_squeeze) +
                        " P=" + format_number(v.polarization);
  out << "# factorization_slope: " << slope_text(fact_slope) << '\n';
  out << "# commutator_slope: " << slope_text(comm_slope) << '\n';
  out << "# " << summary << '\n';
  err << summary << '\n';
  return kExitOk;
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  if (name == "analytic") return Command::analytic;
  if (name == "linearized") return Command::linearized;
  if (name == "exact") return Command::exact;
  if (name == "optimize") return Command::optimize;
  if (name == "verify") return Command::verify;
  if (name == "sweep") return Command::sweep;
  return std::nullopt;
}

std::string_view to_string(Command command) {
  switch (command) {
    case Command::analytic:
      return "analytic";
    case Command::linearized:
      return "linearized";
    case Command::exact:
      return "exact";
    case Command::optimize:
      return "optimize";
    case Command::verify:
      return "verify";
    case Command::sweep:
      return "sweep";
  }
  return "unknown";
}

std::vector<std::string> columns(Command command, const RunConfig& config) {
  if (command == Command::verify) return with_timing(verify_columns(), config.timing);
  std::vector<std::string> cols = kInputColumns;
  cols.insert(cols.end(), kDerivedColumns.begin(), kDerivedColumns.end());
  for (Group g : groups_for(command, config.engine)) {
    const auto extra = group_columns(g, config);
    cols.insert(cols.end(), extra.begin(), extra.end());
  }
  cols.push_back("status");
  return with_timing(cols, config.timing);
}

Row grid_row(Command command, const RunConfig& config, const ProtocolParams& params) {
  RowBuilder row(columns(command, config));
  fill_inputs(row, params);
  const auto violations = validate(params);
  if (!violations.empty()) {
    for (const auto& v : violations) row.violation(v.code);
    return row.finish();
  }
  for (Group g : groups_for(command, config.engine)) {
    switch (g) {
      case Group::analytic:
        fill_analytic(row, params);
        break;
      case Group::optimize:
        fill_optimize(row, params);
        break;
      case Group::linearized:
        fill_linearized(row, params, config);
        break;
      case Group::exact:
        fill_exact(row, params, config);
        break;
    }
  }
  return row.finish();
}

double loglog_slope(const std::vector<std::pair<double, double>>& points) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : points) {
    const double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(points.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

int run_command(const RunRequest& request, std::ostream& out, std::ostream& err) {
  if (request.command == Command::verify) return run_verify(request, out, err);

  const RunConfig& config = request.config;
  const std::vector<ProtocolParams> grid = expand_grid(config);
  if (uses_exact(request.command, config.engine)) {
    for (const auto& p : grid) {
      try {
        exact::check_spin_cap(p.n_spins, config.n_cap);
      } catch (const ResourceError& e) {
        err << "tact " << to_string(request.command) << ": " << e.what() << '\n';
        return kExitRuntime;
      }
    }
  }

  const auto names = columns(request.command, config);
  const RowTask task = [&](std::size_t index) {
    const auto started = std::chrono::steady_clock::now();
    Row row = grid_row(request.command, config, grid[index]);
    if (config.timing) {
      row.back() = format_number(std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count());
    }
    return row;
  };

  CsvMetadata meta{std::string(to_string(request.command)), config.source_hash, request.has_config};
  write_preamble(out, meta);
  write_row(out, names);
  const SweepOutcome outcome =
      run_sweep(grid.size(), task, config.workers, [&](std::size_t, const Row& row) { write_row(out, row); });
  out.flush();
  if (!outcome.complete) {
    out << "# INCOMPLETE\n";
    out.flush();
    err << "tact " << to_string(request.command) << ": grid point " << outcome.failed_index
        << " failed: " << outcome.failure << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace tact::cli
