#include "mrcl/cli.hpp"

#include <cstdlib>
#include <iostream>

#include "mrcl/config.hpp"
#include "mrcl/csv.hpp"

namespace mrcl::cli {

namespace {

ScenarioConfig load_with_overrides(const std::filesystem::path& config,
                                   const std::vector<std::string>& overrides) {
  nlohmann::json j = parse_config_file(config);
  for (const std::string& override_kv : overrides) apply_override(j, override_kv);
  return scenario_from_json(j);
}

}  // namespace

SweepAxis parse_axis(const std::string& name) {
  if (name == "zone_radius") return SweepAxis::kZoneRadius;
  if (name == "rho") return SweepAxis::kRho;
  if (name == "comm_rate") return SweepAxis::kCommRate;
  if (name == "n_robots") return SweepAxis::kNRobots;
  throw ConfigError("unknown sweep axis '" + name +
                    "' (expected zone_radius, rho, comm_rate or n_robots)");
}

std::filesystem::path resolve_out_dir(const std::filesystem::path& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("MRCL_OUT_DIR"); env && *env) return env;
  return ".";
}

int run_command(const RunOptions& options) {
  ScenarioConfig cfg;
  try {
    cfg = load_with_overrides(options.config, options.overrides);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kConfigError;
  }

  std::vector<StepRecord> records;
  try {
    records = run(cfg);
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << '\n';
    return kRuntimeError;
  }

  try {
    const std::filesystem::path out = resolve_out_dir(options.out_dir);
    std::filesystem::create_directories(out);
    export_csv(records, out / "records.csv");
    emit_plot_data(records, PlotKind::kMsleTimeseries, out / "msle_timeseries.csv");
    emit_plot_data(records, PlotKind::kCommRaster, out / "comm_raster.csv");
  } catch (const std::exception& e) {
    std::cerr << "output failed: " << e.what() << '\n';
    return kIoError;
  }
  return kOk;
}

int sweep_command(const SweepOptions& options) {
  ScenarioConfig cfg;
  SweepAxis axis;
  try {
    cfg = load_with_overrides(options.config, options.overrides);
    axis = parse_axis(options.axis);
    if (options.values.empty()) throw ConfigError("sweep needs at least one value");
    if (options.seeds < 1) throw ConfigError("sweep needs seeds >= 1");
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kConfigError;
  }

  SweepResult sweep;
  try {
    sweep = run_sweep(cfg, axis, options.values, options.seeds);
  } catch (const std::exception& e) {
    std::cerr << "sweep failed: " << e.what() << '\n';
    return kRuntimeError;
  }

  try {
    const std::filesystem::path out = resolve_out_dir(options.out_dir);
    std::filesystem::create_directories(out);
    export_sweep_csv(sweep, out / "sweep_runs.csv");
    emit_plot_data(sweep, out / "sweep_curve.csv");
  } catch (const std::exception& e) {
    std::cerr << "output failed: " << e.what() << '\n';
    return kIoError;
  }
  return kOk;
}

int validate_command(const std::filesystem::path& config) {
  try {
    load_config(config);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kConfigError;
  }
  std::cout << "ok\n";
  return kOk;
}

}  // namespace mrcl::cli
