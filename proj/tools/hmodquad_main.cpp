#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"

namespace cli = hmodquad::cli;

int main(int argc, char** argv) {
  CLI::App app{"Design checks and closed-loop simulation for docked modular multirotors"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::optional<double> duration;
  std::optional<double> dt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "structure config (YAML)")
        ->required()
        ->check(CLI::ExistingFile);
  };

  auto* check = app.add_subcommand("check", "balance, rank and F-frame report");
  add_common(check);

  auto* ellipsoid = app.add_subcommand("ellipsoid", "actuation ellipsoid axes and xz polygon");
  add_common(ellipsoid);
  ellipsoid->add_option("--out", out_path, "write the xz polygon as CSV");

  auto* simulate = app.add_subcommand("simulate", "run the closed loop and write a CSV log");
  add_common(simulate);
  simulate->add_option("--out", out_path, "CSV log path");
  simulate->add_option("--duration", duration, "simulated seconds (overrides sim.duration_s)")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--dt", dt, "integration step in seconds (overrides sim.dt_s)")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitValidation;
  }

  cli::StructureConfig config;
  try {
    config = cli::load_config(config_path);
    if (duration) config.sim.duration_s = *duration;
    if (dt) config.sim.dt_s = *dt;
    if (!(config.sim.duration_s >= config.sim.dt_s)) {
      throw cli::ConfigError("duration must be at least dt");
    }
  } catch (const hmodquad::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitValidation;
  }

  std::ofstream out_file;
  if (!out_path.empty()) {
    out_file.open(out_path);
    if (!out_file) {
      std::cerr << "error: cannot write '" << out_path << "'\n";
      return cli::kExitRuntime;
    }
  }
  std::ostream* csv = out_path.empty() ? nullptr : &out_file;

  try {
    if (*check) return cli::run_check(config, std::cout);
    if (*ellipsoid) return cli::run_ellipsoid(config, std::cout, csv);
    const int code = cli::run_simulate(config, std::cout, csv);
    if (code != cli::kExitOk) std::cerr << "simulation aborted\n";
    return code;
  } catch (const hmodquad::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kExitRuntime;
  }
}
