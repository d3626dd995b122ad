#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "tact/cli/commands.hpp"
#include "tact/cli/config.hpp"

using namespace tact::cli;

int main(int argc, char** argv) {
  CLI::App app{"Two-axis counter-twisting squeezing toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::optional<int> workers;
  bool no_timing = false;
  app.add_option("--config", config_path, "Run configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "Output CSV path (default: [output] path, else stdout)");
  app.add_option("--workers", workers, "Concurrent grid tasks")->check(CLI::PositiveNumber);
  app.add_flag("--no-timing", no_timing, "Omit the wall_time_s column");

  const char* help[] = {
      "analytic", "Closed-form squeezing and signal to noise per grid point",
      "linearized", "Gaussian Bogoliubov engine per grid point",
      "exact", "Dense master-equation oracle per grid point",
      "optimize", "Optimal squeezing duration and protocol split per grid point",
      "verify", "Factorization error and commutator scaling over N",
      "sweep", "Grid sweep with the engine chosen in [engine] kind",
  };
  for (int i = 0; i < 12; i += 2) app.add_subcommand(help[i], help[i + 1])->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  RunRequest request;
  request.command = *parse_command(app.get_subcommands().front()->get_name());
  try {
    if (!config_path.empty()) {
      request.config = load_config(config_path);
      request.has_config = true;
    }
  } catch (const ConfigError& e) {
    std::cerr << config_path << ": " << e.what() << '\n';
    return kExitConfig;
  }
  if (workers) request.config.workers = *workers;
  if (no_timing) request.config.timing = false;
  if (!out_path.empty()) request.config.output_path = out_path;

  try {
    if (request.config.output_path.empty()) return run_command(request, std::cout, std::cerr);
    std::ofstream file(request.config.output_path, std::ios::binary | std::ios::trunc);
    if (!file) {
      std::cerr << "cannot write output file '" << request.config.output_path << "'\n";
      return kExitConfig;
    }
    const int code = run_command(request, file, std::cerr);
    file.close();
    if (!file) {
      std::cerr << "error writing '" << request.config.output_path << "'\n";
      return kExitRuntime;
    }
    return code;
  } catch (const std::exception& e) {
    std::cerr << "tact: " << e.what() << '\n';
    return kExitRuntime;
  }
}
