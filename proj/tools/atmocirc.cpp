// atmocirc: run, inspect and verify moist Boussinesq channel simulations.

#include <CLI11.hpp>

#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "atmocirc/config.hpp"
#include "atmocirc/run.hpp"

namespace {

struct Options {
  std::string config;
  std::string out;
};

std::optional<atmocirc::RunConfig> load(const std::string& path) {
  try {
    return atmocirc::load_config(path);
  } catch (const atmocirc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return std::nullopt;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moist Boussinesq channel solver"};
  app.require_subcommand(1);
  Options opt;

  auto* nondim = app.add_subcommand("nondim", "Print the dimensionless groups of a config");
  nondim->add_option("--config", opt.config, "Config file")->required()->check(CLI::ExistingFile);

  auto* run = app.add_subcommand("run", "Integrate a config and write snapshots and diagnostics");
  run->add_option("--config", opt.config, "Config file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", opt.out, "Output directory (overrides [output] dir)");

  auto* mms = app.add_subcommand("verify-mms", "Manufactured-solution convergence ladders");
  mms->add_option("--config", opt.config,
                  "Config whose parameters, numerics and Coriolis sign replace the defaults")
      ->check(CLI::ExistingFile);

  auto* check = app.add_subcommand("check-trajectory",
                                   "Recompute diagnostics over the snapshots of a finished run");
  check->add_option("--config", opt.config, "Config file; its [output] dir is checked")
      ->check(CLI::ExistingFile);
  check->add_option("--out", opt.out, "Output directory to check");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*nondim) {
      auto c = load(opt.config);
      if (!c) return atmocirc::exit_code::config_error;
      return atmocirc::print_nondimensional(*c, std::cout);
    }
    if (*run) {
      auto c = load(opt.config);
      if (!c) return atmocirc::exit_code::config_error;
      const std::string dir = opt.out.empty() ? c->output_dir : opt.out;
      return atmocirc::run(*c, dir, std::cerr);
    }
    if (*mms) {
      atmocirc::MmsOptions options;
      if (!opt.config.empty()) {
        auto c = load(opt.config);
        if (!c) return atmocirc::exit_code::config_error;
        options.params = c->params();
        options.operators = c->numerics;
        options.sign = c->coriolis_sign;
      }
      return atmocirc::verify_mms_report(options, std::cout);
    }
    if (*check) {
      std::string dir = opt.out;
      if (dir.empty()) {
        if (opt.config.empty()) {
          std::cerr << "check-trajectory needs --out or --config\n";
          return atmocirc::exit_code::config_error;
        }
        auto c = load(opt.config);
        if (!c) return atmocirc::exit_code::config_error;
        dir = c->output_dir;
      }
      return atmocirc::check_trajectory(dir, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return atmocirc::exit_code::config_error;
  }
  return atmocirc::exit_code::ok;
}
