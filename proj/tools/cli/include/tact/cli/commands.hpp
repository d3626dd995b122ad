#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tact/cli/config.hpp"
#include "tact/cli/sweep.hpp"

namespace tact::cli {

enum ExitCode : int { kExitOk = 0, kExitRuntime = 1, kExitConfig = 2 };

enum class Command { analytic, linearized, exact, optimize, verify, sweep };

std::optional<Command> parse_command(std::string_view name);
std::string_view to_string(Command command);

// Column names for a grid command; `sweep` picks its groups from the engine.
std::vector<std::string> columns(Command command, const RunConfig& config);

// Builds one grid row (without wall time) for a grid command.
Row grid_row(Command command, const RunConfig& config, const ProtocolParams& params);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<std::pair<double, double>>& points);

struct RunRequest {
  Command command = Command::analytic;
  RunConfig config;
  bool has_config = false;
};

// Writes the CSV to `out` and diagnostics to `err`; returns the process exit code.
int run_command(const RunRequest& request, std::ostream& out, std::ostream& err);

}  // namespace tact::cli
