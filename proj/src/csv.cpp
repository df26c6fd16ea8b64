#include "mrcl/csv.hpp"

#include <cstdio>
#include <fstream>
#include <string>

namespace mrcl {

namespace {

std::string fmt(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::ofstream open_or_throw(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);  // binary: no newline translation
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void write_record_row(std::ofstream& out, const StepRecord& rec) {
  out << rec.step << ',' << fmt(rec.msle) << ',' << fmt(rec.comm_rate) << ','
      << fmt(rec.lambda2) << ',' << rec.discarded_count << ',' << rec.dropped_count
      << '\n';
}

}  // namespace

void export_csv(const std::vector<StepRecord>& records, const std::filesystem::path& path) {
  if (records.empty()) throw IoError("export_csv: no records for " + path.string());
  std::ofstream out = open_or_throw(path);
  out << "step,msle,comm_rate,lambda2,discarded,dropped\n";
  for (const StepRecord& rec : records) write_record_row(out, rec);
  if (!out) throw IoError("write failed for " + path.string());
}

void export_sweep_csv(const SweepResult& sweep, const std::filesystem::path& path) {
  std::ofstream out = open_or_throw(path);
  out << "axis_value,seed,step,msle,comm_rate,lambda2,discarded,dropped\n";
  for (const SweepRun& run : sweep.runs) {
    for (const StepRecord& rec : run.records) {
      out << fmt(run.axis_value) << ',' << run.seed << ',';
      write_record_row(out, rec);
    }
  }
  if (!out) throw IoError("write failed for " + path.string());
}

void emit_plot_data(const std::vector<StepRecord>& records, PlotKind kind,
                    const std::filesystem::path& path) {
  std::ofstream out = open_or_throw(path);
  switch (kind) {
    case PlotKind::kMsleTimeseries:
      out << "step,msle\n";
      for (const StepRecord& rec : records)
        out << rec.step << ',' << fmt(rec.msle) << '\n';
      break;
    case PlotKind::kCommRaster:
      out << "step,observer,target,triggered\n";
      for (const StepRecord& rec : records)
        for (const LinkFlag& link : rec.links)
          out << rec.step << ',' << link.observer << ',' << link.target << ','
              << (link.triggered ? 1 : 0) << '\n';
      break;
  }
  if (!out) throw IoError("write failed for " + path.string());
}

void emit_plot_data(const SweepResult& sweep, const std::filesystem::path& path) {
  std::ofstream out = open_or_throw(path);
  out << "axis_value,mean_msle,std_msle,mean_comm_rate\n";
  for (const SweepSummary& s : sweep.summary)
    out << fmt(s.axis_value) << ',' << fmt(s.msle_mean) << ',' << fmt(s.msle_std) << ','
        << fmt(s.comm_rate_mean) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace mrcl
