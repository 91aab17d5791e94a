#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "sbci/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Contribution-index incentive mechanism simulator"};
  app.require_subcommand(1);

  sbci::cli::Options options;
  std::string config_path, sweep_path, example_name;

  auto* run = app.add_subcommand("run", "Run one experiment from a config file");
  run->add_option("config", config_path, "key=value config file")->required();
  run->add_option("--out", options.out_dir, "output directory");
  auto* run_seed = run->add_option("--seed", "override the config's seed");
  auto* run_epoch =
      run->add_option("--epoch-size", "override the config's epoch size");

  auto* sweep = app.add_subcommand("sweep", "Run a grid of experiments");
  sweep->add_option("spec", sweep_path, "sweep spec file")->required();
  sweep->add_option("--out", options.out_dir, "output directory");
  sweep->add_option("--jobs", options.jobs, "parallel cells (default: cores)");

  auto* verify =
      app.add_subcommand("verify", "Check a built-in worked example");
  verify->add_option("name", example_name, "fig1-epoch0 or fig1-epoch1")
      ->required();

  CLI11_PARSE(app, argc, argv);

  if (run_seed->count()) options.seed = run_seed->as<std::uint64_t>();
  if (run_epoch->count()) options.epoch_size = run_epoch->as<std::uint64_t>();

  if (app.got_subcommand(run))
    return sbci::cli::cmd_run(config_path, options, std::cout, std::cerr);
  if (app.got_subcommand(sweep))
    return sbci::cli::cmd_sweep(sweep_path, options, std::cout, std::cerr);
  return sbci::cli::cmd_verify(example_name, std::cout, std::cerr);
}
