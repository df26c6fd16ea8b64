#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mrcl/sim.hpp"

namespace mrcl::cli {

// Exit codes shared by every command.
inline constexpr int kOk = 0;
inline constexpr int kConfigError = 1;
inline constexpr int kRuntimeError = 2;
inline constexpr int kIoError = 3;

struct RunOptions {
  std::filesystem::path config;
  std::filesystem::path out_dir;
  std::vector<std::string> overrides;
};

struct SweepOptions {
  std::filesystem::path config;
  std::filesystem::path out_dir;
  std::string axis;
  std::vector<double> values;
  int seeds = 1;
  std::vector<std::string> overrides;
};

/// Runs one scenario and writes records.csv, msle_timeseries.csv and
/// comm_raster.csv into the output directory.
int run_command(const RunOptions& options);

/// Runs a sweep and writes sweep_runs.csv and sweep_curve.csv.
int sweep_command(const SweepOptions& options);

/// Exits 0 iff the config loads and validates.
int validate_command(const std::filesystem::path& config);

SweepAxis parse_axis(const std::string& name);

/// Output directory precedence: explicit flag, then $MRCL_OUT_DIR, then cwd.
std::filesystem::path resolve_out_dir(const std::filesystem::path& flag_value);

}  // namespace mrcl::cli
