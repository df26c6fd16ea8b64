#pragma once

#include <filesystem>
#include <stdexcept>
#include <vector>

#include "mrcl/sim.hpp"

namespace mrcl {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Writes `step,msle,comm_rate,lambda2,discarded,dropped` rows. Doubles are
/// printed with 17 significant digits so parsing the file back reproduces the
/// in-memory values exactly; output is byte-deterministic.
void export_csv(const std::vector<StepRecord>& records, const std::filesystem::path& path);

/// Per-step rows for every sweep run, prefixed with axis_value and seed.
void export_sweep_csv(const SweepResult& sweep, const std::filesystem::path& path);

enum class PlotKind { kMsleTimeseries, kCommRaster };

/// Plot-ready columnar data: `step,msle` or `step,observer,target,triggered`.
void emit_plot_data(const std::vector<StepRecord>& records, PlotKind kind,
                    const std::filesystem::path& path);

/// Sweep curve: `axis_value,mean_msle,std_msle,mean_comm_rate`.
void emit_plot_data(const SweepResult& sweep, const std::filesystem::path& path);

}  // namespace mrcl
