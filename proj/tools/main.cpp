#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mrcl/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"mrcl - resilient multi-robot cooperative localization simulator"};
  app.require_subcommand(1);

  mrcl::cli::RunOptions run_options;
  CLI::App* run = app.add_subcommand("run", "run one scenario and export records");
  run->add_option("--config", run_options.config, "scenario config file")->required();
  run->add_option("--out", run_options.out_dir, "output directory (default $MRCL_OUT_DIR)");
  run->add_option("--set", run_options.overrides, "config overrides, key=value");

  mrcl::cli::SweepOptions sweep_options;
  CLI::App* sweep = app.add_subcommand("sweep", "repeat a scenario over an axis and seeds");
  sweep->add_option("--config", sweep_options.config, "scenario config file")->required();
  sweep->add_option("--out", sweep_options.out_dir, "output directory (default $MRCL_OUT_DIR)");
  sweep->add_option("--axis", sweep_options.axis,
                    "zone_radius, rho, comm_rate or n_robots")->required();
  sweep->add_option("--values", sweep_options.values, "axis values")
      ->required()
      ->delimiter(',');
  sweep->add_option("--seeds", sweep_options.seeds, "seeds per value")->required();
  sweep->add_option("--set", sweep_options.overrides, "config overrides, key=value");

  std::string validate_path;
  CLI::App* validate = app.add_subcommand("validate", "check a config file");
  validate->add_option("--config", validate_path, "scenario config file")->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return mrcl::cli::run_command(run_options);
  if (sweep->parsed()) return mrcl::cli::sweep_command(sweep_options);
  return mrcl::cli::validate_command(validate_path);
}
