// Command-line front end for the experiments.
//
//   sdeproj run <config> [--out DIR] [--seeds a,b,c] [--jobs N]
//   sdeproj validate <config>
//
// SDEPROJ_OUTPUT_DIR sets the output directory when neither --out nor the
// config's output_dir is given.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "sdeproj/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Projected SDE experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string seeds;
  int jobs = 1;

  auto* run_cmd = app.add_subcommand("run", "Run an experiment and write CSV files");
  run_cmd->add_option("config", config_path, "Config file")->required();
  run_cmd->add_option("--out", out_dir, "Output directory");
  run_cmd->add_option("--seeds", seeds, "Seed list overriding the config, e.g. 0,1,5-9");
  run_cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* validate_cmd = app.add_subcommand("validate", "Check a config without running it");
  validate_cmd->add_option("config", config_path, "Config file")->required();

  CLI11_PARSE(app, argc, argv);

  sdeproj::ExperimentConfig config;
  try {
    config = sdeproj::load_config(config_path);
    if (!seeds.empty()) config.seeds = sdeproj::parse_seed_list(seeds);
  } catch (const sdeproj::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  if (validate_cmd->parsed()) {
    const auto diagnostics = sdeproj::validate(config);
    for (const auto& d : diagnostics) std::cout << d << "\n";
    if (diagnostics.empty()) std::cout << "ok\n";
    return diagnostics.empty() ? 0 : 2;
  }

  sdeproj::RunOptions options;
  options.jobs = jobs;
  options.log = &std::cerr;
  if (!out_dir.empty()) {
    options.output_dir = out_dir;
  } else if (!config.output_dir.empty()) {
    options.output_dir = config.output_dir;
  } else if (const char* env = std::getenv("SDEPROJ_OUTPUT_DIR"); env && *env) {
    options.output_dir = env;
  }

  const auto outcome = sdeproj::run(config, options);
  for (const auto& f : outcome.files) std::cout << f.string() << "\n";
  if (!outcome.message.empty()) (outcome.exit_code ? std::cerr : std::cout) << outcome.message << "\n";
  return outcome.exit_code;
}
