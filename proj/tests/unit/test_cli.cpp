#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "doctest.h"
#include "tact/cli/commands.hpp"
#include "tact/cli/config.hpp"
#include "tact/cli/csv.hpp"
#include "tact/cli/sweep.hpp"

using namespace tact;
using namespace tact::cli;

namespace {

struct Csv {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t col(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw std::runtime_error("no column " + name);
  }
  double num(std::size_t row, const std::string& name) const { return std::stod(rows[row][col(name)]); }
  const std::string& cell(std::size_t row, const std::string& name) const { return rows[row][col(name)]; }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

Csv parse_csv(const std::string& text) {
  Csv csv;
  std::stringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.rfind('#', 0) == 0) {
      csv.comments.push_back(line);
    } else if (csv.header.empty()) {
      csv.header = split(line);
    } else {
      csv.rows.push_back(split(line));
    }
  }
  return csv;
}

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(Command command, const std::string& config_text, int workers = 1) {
  RunRequest request;
  request.command = command;
  request.config = parse_config(config_text);
  request.config.workers = workers;
  request.config.timing = false;
  request.has_config = true;
  std::ostringstream out, err;
  const int code = run_command(request, out, err);
  return {code, out.str(), err.str()};
}

int ConfigErrorLine(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("config: full schema") {
  const auto cfg = parse_config(
      "# comment\n"
      "[params]\n"
      "n_spins = 40   ; trailing comment\n"
      "polarization = 0.9\n"
      "gamma = 0.1\n"
      "alpha = 5\n"
      "t_signal = 0.5\n"
      "tau_total = 3\n"
      "[sweep]\n"
      "axis = theta linear 0 2 5\n"
      "axis = gamma log 0.01 1 3\n"
      "[engine]\n"
      "kind = exact\n"
      "tolerance = 1e-9\n"
      "n_max = 8\n"
      "coupling = pauli\n"
      "factorization = true\n"
      "[output]\n"
      "path = out.csv\n"
      "workers = 3\n"
      "timing = false\n"
      "[verify]\n"
      "alpha = 4\n"
      "n_min = 3\n"
      "n_max = 5\n");
  CHECK(cfg.params.n_spins == 40);
  CHECK(cfg.params.j_coupling == doctest::Approx(4 * 0.1 * 5 / (40 * 0.9)));
  CHECK(cfg.axes.size() == 2);
  CHECK(cfg.axes[1].spacing == Spacing::log);
  CHECK(cfg.engine == Engine::exact);
  CHECK(cfg.step_control.tolerance == 1e-9);
  CHECK(cfg.n_cap == 8);
  CHECK(cfg.coupling == CouplingNormalization::pauli);
  CHECK(cfg.factorization);
  CHECK(cfg.output_path == "out.csv");
  CHECK(cfg.workers == 3);
  CHECK_FALSE(cfg.timing);
  CHECK(cfg.verify.alpha == 4.0);
  CHECK(cfg.verify.n_max == 5);
  CHECK(cfg.source_hash == fnv1a64("# comment\n[params]\nn_spins = 40   ; trailing comment\npolarization = 0.9\n"
                                   "gamma = 0.1\nalpha = 5\nt_signal = 0.5\ntau_total = 3\n[sweep]\n"
                                   "axis = theta linear 0 2 5\naxis = gamma log 0.01 1 3\n[engine]\nkind = exact\n"
                                   "tolerance = 1e-9\nn_max = 8\ncoupling = pauli\nfactorization = true\n"
                                   "[output]\npath = out.csv\nworkers = 3\ntiming = false\n[verify]\nalpha = 4\n"
                                   "n_min = 3\nn_max = 5\n"));
}

TEST_CASE("config: errors carry line and field") {
  try {
    parse_config("[params]\nn_spins = 4\npolarisation = 0.5\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 3);
    CHECK(e.field() == "params.polarisation");
  }
  CHECK(ConfigErrorLine("[nope]\n") == 1);
  CHECK(ConfigErrorLine("n_spins = 3\n") == 1);
  CHECK(ConfigErrorLine("[params]\nn_spins = three\n") == 2);
  CHECK(ConfigErrorLine("[params]\ngamma = 0.1x\n") == 2);
  CHECK(ConfigErrorLine("[params]\ngamma\n") == 2);
  CHECK(ConfigErrorLine("[params]\ngamma =\n") == 2);
  CHECK(ConfigErrorLine("[params]\ngamma = 1\ngamma = 2\n") == 3);
  CHECK(ConfigErrorLine("[sweep]\naxis = gamma linear 0 1 0\n") == 2);
  CHECK(ConfigErrorLine("[sweep]\naxis = gama linear 0 1 3\n") == 2);
  CHECK(ConfigErrorLine("[sweep]\naxis = gamma log 0 1 3\n") == 2);
  CHECK(ConfigErrorLine("[sweep]\naxis = gamma cubic 0 1 3\n") == 2);
  CHECK(ConfigErrorLine("[sweep]\naxis = gamma 0 1 3\n") == 2);
  CHECK(ConfigErrorLine("[engine]\nkind = quantum\n") == 2);
  CHECK(ConfigErrorLine("[output]\nworkers = 0\n") == 2);
  CHECK(ConfigErrorLine("[output]\ntiming = maybe\n") == 2);
  CHECK(ConfigErrorLine("[params\n") == 1);
  CHECK_THROWS_AS(load_config("/nonexistent/tact.ini"), ConfigError);
}

TEST_CASE("sweep axis values") {
  SweepAxis lin{"gamma", Spacing::linear, 0.0, 1.0, 5};
  CHECK(lin.value(0) == 0.0);
  CHECK(lin.value(2) == 0.5);
  CHECK(lin.value(4) == 1.0);
  SweepAxis lg{"gamma", Spacing::log, 0.01, 1.0, 3};
  CHECK(lg.value(1) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(lg.value(2) == 1.0);
  SweepAxis one{"gamma", Spacing::linear, 0.3, 0.9, 1};
  CHECK(one.value(0) == 0.3);
}

TEST_CASE("grid expansion is row-major") {
  const auto cfg = parse_config("[sweep]\naxis = gamma linear 1 10 10\naxis = t_squeeze linear 1 10 10\n");
  const auto grid = expand_grid(cfg);
  REQUIRE(grid.size() == 100);
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      CHECK(grid[10 * i + j].gamma == 1.0 + i);
      CHECK(grid[10 * i + j].t_squeeze == 1.0 + j);
    }
  }
  CHECK(expand_grid(parse_config("")).size() == 1);
}

TEST_CASE("derived axes see the physical axes of the same point") {
  const auto cfg = parse_config("[params]\npolarization = 0.5\n[sweep]\naxis = alpha linear 2 2 1\n"
                                "axis = theta linear 1 1 1\naxis = n_spins linear 10 20 2\naxis = gamma linear 0.5 0.5 1\n");
  const auto grid = expand_grid(cfg);
  REQUIRE(grid.size() == 2);
  CHECK(grid[1].n_spins == 20);
  CHECK(grid[1].j_coupling == doctest::Approx(4 * 0.5 * 2 / (20 * 0.5)));
  CHECK(grid[1].t_squeeze == doctest::Approx(0.5));
}

TEST_CASE("CSV formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333333");
  CHECK(format_number(1e-20) == "1e-20");
  CHECK(escape_cell("a,b") == "\"a,b\"");
  CHECK(escape_cell("q\"") == "\"q\"\"\"");
  CHECK(escape_cell("ok") == "ok");
}

TEST_CASE("run_sweep writes in index order for any worker count") {
  const auto task = [](std::size_t i) { return Row{std::to_string(i * i)}; };
  for (int workers : {1, 2, 8}) {
    std::vector<std::size_t> seen;
    const auto outcome = run_sweep(50, task, workers, [&](std::size_t i, const Row& r) {
      CHECK(r[0] == std::to_string(i * i));
      seen.push_back(i);
    });
    CHECK(outcome.complete);
    CHECK(outcome.rows_written == 50);
    for (std::size_t i = 0; i < seen.size(); ++i) CHECK(seen[i] == i);
  }
}

TEST_CASE("run_sweep stops at a failing task and keeps the prefix") {
  const auto task = [](std::size_t i) -> Row {
    if (i == 7) throw std::runtime_error("boom");
    return Row{std::to_string(i)};
  };
  for (int workers : {1, 4}) {
    std::vector<std::size_t> seen;
    const auto outcome = run_sweep(40, task, workers, [&](std::size_t i, const Row&) { seen.push_back(i); });
    CHECK_FALSE(outcome.complete);
    CHECK(outcome.failed_index == 7);
    CHECK(outcome.failure == "boom");
    CHECK(outcome.rows_written == 7);
    CHECK(seen.size() == 7);
  }
}

TEST_CASE("run_sweep on an empty grid") {
  int calls = 0;
  const auto outcome = run_sweep(0, [](std::size_t) { return Row{}; }, 4, [&](std::size_t, const Row&) { ++calls; });
  CHECK(outcome.complete);
  CHECK(calls == 0);
}

TEST_CASE("analytic: no squeezing time gives 1/P") {
  const auto r = run(Command::analytic, "[params]\nn_spins = 10\npolarization = 0.8\nj_coupling = 0.1\ngamma = 0.1\n");
  CHECK(r.code == 0);
  const auto csv = parse_csv(r.out);
  REQUIRE(csv.rows.size() == 1);
  CHECK(csv.num(0, "xi2") == doctest::Approx(1.25));
  CHECK(csv.cell(0, "status") == "snr_while_measuring:domain;snr_squeeze_then_measure:domain");
}

TEST_CASE("analytic: regime flips at alpha = 1") {
  const auto r = run(Command::analytic,
                     "[params]\nn_spins = 100\ngamma = 0.25\nt_squeeze = 1\nt_signal = 1\n"
                     "[sweep]\naxis = alpha linear 0.5 2 7\n");
  const auto csv = parse_csv(r.out);
  REQUIRE(csv.rows.size() == 7);
  for (std::size_t i = 0; i < 7; ++i) {
    const double alpha = csv.num(i, "alpha");
    CHECK(csv.cell(i, "regime") == (alpha <= 1.0 ? "sub_threshold" : "squeezing"));
  }
  CHECK(csv.cell(2, "regime") == "sub_threshold");
  CHECK(csv.cell(3, "regime") == "squeezing");
}

TEST_CASE("analytic: 100-point log sweep keeps grid order and echoes inputs") {
  const auto r = run(Command::analytic,
                     "[params]\nn_spins = 50\nj_coupling = 0.02\nt_squeeze = 0.5\nt_signal = 0.25\nb_field = 0.1\n"
                     "[sweep]\naxis = gamma log 0.001 10 100\n",
                     4);
  const auto csv = parse_csv(r.out);
  REQUIRE(csv.rows.size() == 100);
  const auto cfg = parse_config("[sweep]\naxis = gamma log 0.001 10 100\n");
  for (std::size_t i = 0; i < 100; ++i) {
    CHECK(csv.num(i, "gamma") == doctest::Approx(cfg.axes[0].value(static_cast<int>(i))).epsilon(1e-14));
    CHECK(csv.num(i, "n_spins") == 50);
    CHECK(csv.num(i, "j_coupling") == 0.02);
    CHECK(csv.num(i, "t_squeeze") == 0.5);
    CHECK(csv.num(i, "t_signal") == 0.25);
    CHECK(csv.num(i, "b_field") == 0.1);
    CHECK(csv.num(i, "tau_total") == 1);
    if (i) CHECK(csv.num(i, "gamma") > csv.num(i - 1, "gamma"));
  }
}

TEST_CASE("invalid parameters are reported per row") {
  const auto r = run(Command::analytic, "[params]\npolarization = 0.5\n[sweep]\naxis = polarization linear 0.5 1.5 2\n");
  CHECK(r.code == 0);
  const auto csv = parse_csv(r.out);
  CHECK(csv.cell(0, "status") != "P_OUT_OF_RANGE");
  CHECK(csv.cell(1, "status") == "P_OUT_OF_RANGE");
  CHECK(csv.cell(1, "xi2").empty());
}

TEST_CASE("metadata and the timing column") {
  const std::string text = "[params]\nn_spins = 10\n";
  const auto r = run(Command::analytic, text);
  const auto csv = parse_csv(r.out);
  REQUIRE(csv.comments.size() == 3);
  CHECK(csv.comments[0].rfind("# tact ", 0) == 0);
  CHECK(csv.comments[1] == "# command: analytic");
  CHECK(csv.comments[2].find("fnv1a64:") != std::string::npos);
  CHECK(csv.header.back() == "status");

  RunRequest timed;
  timed.config = parse_config(text);
  std::ostringstream out, err;
  run_command(timed, out, err);
  const auto t = parse_csv(out.str());
  CHECK(t.header.back() == "wall_time_s");
  CHECK(std::stod(t.rows[0].back()) >= 0.0);
  CHECK(t.comments[2] == "# config_hash: none (built-in defaults)");
}

TEST_CASE("same config gives identical bytes") {
  const std::string text = "[params]\nn_spins = 3\ngamma = 0.2\n[sweep]\naxis = alpha log 0.5 20 10\n"
                           "axis = theta linear 0 2 10\n[engine]\nkind = all\n";
  const auto a = run(Command::sweep, text, 1);
  const auto b = run(Command::sweep, text, 8);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(parse_csv(a.out).rows.size() == 100);
}

TEST_CASE("exact: single-spin depolarizing decay") {
  const auto r = run(Command::exact, "[params]\nn_spins = 1\ngamma = 0.1\nt_squeeze = 1\n");
  CHECK(r.code == 0);
  const auto csv = parse_csv(r.out);
  CHECK(csv.num(0, "sz_mean") == doctest::Approx(0.670320).epsilon(1e-6));
  CHECK(csv.num(0, "trace_residual") <= 1e-9);
}

TEST_CASE("exact: short noiseless TACT squeezes") {
  const auto r = run(Command::exact,
                     "[params]\nn_spins = 4\nj_coupling = 0.05\n[sweep]\naxis = t_squeeze linear 0.5 2 4\n");
  const auto csv = parse_csv(r.out);
  REQUIRE(csv.rows.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(csv.num(i, "xi2_kitagawa_ueda") < 1.0);
    CHECK(csv.num(i, "trace_residual") <= 1e-9);
    CHECK(csv.num(i, "hermiticity_residual") <= 1e-10);
    CHECK(csv.num(i, "min_eigenvalue") >= -1e-8);
  }
}

TEST_CASE("exact: optional factorization column") {
  const auto r = run(Command::exact, "[params]\nn_spins = 2\nj_coupling = 0.5\ngamma = 0.25\nt_squeeze = 1\n"
                                     "[engine]\nfactorization = true\n");
  const auto csv = parse_csv(r.out);
  CHECK(csv.num(0, "factorization_error") > 0.0);
}

TEST_CASE("exact: spin cap exceeded") {
  const auto r = run(Command::exact, "[params]\nn_spins = 9\n[engine]\nn_max = 8\n");
  CHECK(r.code == 1);
  CHECK(r.err.find("MiB") != std::string::npos);
  CHECK(r.out.empty());
}

TEST_CASE("optimize: below threshold and at alpha = 10") {
  const auto r = run(Command::optimize, "[params]\nn_spins = 100\ngamma = 0.25\n[sweep]\naxis = alpha linear 0.9 10 2\n");
  const auto csv = parse_csv(r.out);
  REQUIRE(csv.rows.size() == 2);
  CHECK(csv.num(0, "theta_opt") == 0.0);
  CHECK(csv.cell(0, "theta_at_boundary") == "true");
  CHECK(csv.num(0, "improvement") <= 1.0);
  CHECK(csv.num(1, "improvement") == doctest::Approx(3.95986256446276).epsilon(1e-9));
  CHECK(csv.num(1, "u_opt") == doctest::Approx(0.728171817154095).epsilon(1e-6));
}

TEST_CASE("optimize: improvement increases with alpha above e") {
  const auto r = run(Command::optimize, "[params]\nn_spins = 100\ngamma = 0.25\n[sweep]\naxis = alpha log 2.8 300 25\n");
  const auto csv = parse_csv(r.out);
  for (std::size_t i = 1; i < csv.rows.size(); ++i) CHECK(csv.num(i, "improvement") > csv.num(i - 1, "improvement"));
}

TEST_CASE("optimize: noiseless rows report a domain status") {
  const auto r = run(Command::optimize, "[params]\nn_spins = 10\nj_coupling = 0.1\n");
  CHECK(r.code == 0);
  CHECK(parse_csv(r.out).cell(0, "status") == "theta_opt:domain;u_opt:domain");
}

TEST_CASE("linearized rows") {
  const auto r = run(Command::linearized, "[params]\nn_spins = 100\nj_coupling = 0.01\nt_squeeze = 1\n"
                                          "b_field = 0.2\nt_signal = 1\n");
  const auto csv = parse_csv(r.out);
  CHECK(csv.num(0, "kappa") == doctest::Approx(1.0));
  CHECK(csv.num(0, "squeezed_quadrature_variance") == doctest::Approx(0.5 * std::exp(-2.0)));
  CHECK(csv.num(0, "xi2_linearized") == doctest::Approx(std::exp(-2.0)));
  CHECK(csv.num(0, "signal") == doctest::Approx(0.2 / 0.01 * (1 - std::exp(-1.0))));
}

TEST_CASE("verify: degenerate J = 0 row and provenance echo") {
  const auto r = run(Command::verify, "[verify]\nalpha = 0\nn_min = 2\nn_max = 3\n");
  CHECK(r.code == 0);
  const auto csv = parse_csv(r.out);
  REQUIRE(csv.rows.size() == 2);
  CHECK(csv.num(0, "factorization_error") == 0.0);
  CHECK(csv.cell(0, "status") == "commutator_norm:degenerate");
  const std::string& summary = csv.comments.back();
  CHECK(summary.find("FAIL") != std::string::npos);
  CHECK(summary.find("fitted_rows=0") != std::string::npos);
  CHECK(summary.find("alpha=0") != std::string::npos);
  CHECK(summary.find("gamma=0.25") != std::string::npos);
  CHECK(summary.find("T=1") != std::string::npos);
}

TEST_CASE("verify: per-N rows and fitted slopes") {
  const auto r = run(Command::verify, "[verify]\nalpha = 5\nn_min = 2\nn_max = 4\n", 2);
  const auto csv = parse_csv(r.out);
  REQUIRE(csv.rows.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(csv.num(i, "n_spins") == 2 + i);
    CHECK(csv.num(i, "factorization_error") > 0.0);
    CHECK(csv.num(i, "commutator_norm") > 0.0);
  }
  // Commutator norm falls as N grows.
  CHECK(csv.num(2, "commutator_norm") < csv.num(0, "commutator_norm"));
  bool has_slope = false;
  for (const auto& c : csv.comments) has_slope = has_slope || c.rfind("# factorization_slope: ", 0) == 0;
  CHECK(has_slope);
}

TEST_CASE("verify: N range above the cap") {
  const auto r = run(Command::verify, "[verify]\nn_max = 12\n");
  CHECK(r.code == 1);
}

TEST_CASE("loglog slope") {
  CHECK(loglog_slope({{1, 1}, {2, 0.5}, {4, 0.25}}) == doctest::Approx(-1.0));
  CHECK(loglog_slope({{2, 8}, {3, 27}}) == doctest::Approx(3.0));
}

TEST_CASE("command names") {
  CHECK(parse_command("sweep") == Command::sweep);
  CHECK_FALSE(parse_command("plot").has_value());
  CHECK(to_string(Command::verify) == "verify");
}

#ifdef TACT_CLI_PATH
namespace {
int exit_status(const std::string& args) {
  const std::string cmd = std::string("\"") + TACT_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}
}  // namespace

TEST_CASE("tact binary exit codes") {
  const auto dir = std::filesystem::temp_directory_path() / "tact_cli_test";
  std::filesystem::create_directories(dir);
  const auto good = dir / "good.ini", bad = dir / "bad.ini", big = dir / "big.ini", out = dir / "out.csv";
  std::ofstream(good) << "[params]\nn_spins = 2\ngamma = 0.1\nt_squeeze = 0.5\n";
  std::ofstream(bad) << "[params]\nspins = 2\n";
  std::ofstream(big) << "[params]\nn_spins = 11\n";
  CHECK(exit_status("analytic --config \"" + good.string() + "\" --out \"" + out.string() + "\"") == 0);
  CHECK(std::filesystem::file_size(out) > 0);
  CHECK(exit_status("exact --config \"" + good.string() + "\" --workers 2 --no-timing") == 0);
  CHECK(exit_status("analytic --config \"" + bad.string() + "\"") == 2);
  CHECK(exit_status("exact --config \"" + big.string() + "\"") == 1);
  CHECK(exit_status("plot") == 2);
  CHECK(exit_status("analytic --out /nonexistent/dir/x.csv") == 2);
  std::filesystem::remove_all(dir);
}
#endif
