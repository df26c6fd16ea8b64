#pragma once

#include <cstdint>
#include <vector>

#include "mrcl/comms.hpp"
#include "mrcl/graph.hpp"

namespace mrcl {

/// Whether the trigger threshold uses network-wide algebraic connectivity or
/// each robot's neighborhood-subgraph approximation.
enum class Lambda2Scope { kGlobal, kNeighborhood };

struct AreaConfig {
  double width = 3.0;
  double height = 3.0;
};

struct InitConfig {
  double sigma_xy = 0.01;    // initial estimate perturbation, meters
  double sigma_theta = 0.02; // radians
};

struct ProcessNoiseConfig {
  double sigma_xy = 0.0;
  double sigma_theta = 0.0;

  Mat3 q() const {
    Mat3 q = Mat3::Zero();
    q(0, 0) = sigma_xy * sigma_xy;
    q(1, 1) = sigma_xy * sigma_xy;
    q(2, 2) = sigma_theta * sigma_theta;
    return q;
  }
};

struct CommConfig {
  CommMode mode = CommMode::kEventTriggered;
  double periodic_rate = 1.0;  // only used by kPeriodic
};

struct FilterConfig {
  FilterKind kind = FilterKind::kCkf;
  NeighborUncertainty neighbor_uncertainty = NeighborUncertainty::kInflate;
  UkfParams ukf{};
};

struct ScenarioConfig {
  int n_robots = 17;
  int steps = 500;
  double dt = 0.05;
  AreaConfig area;
  double sensing_radius = 1.0;
  double min_lattice_spacing = 0.02;
  NoiseConfig noise;
  ProcessNoiseConfig process_noise;
  InitConfig init;
  ControlGains gains;
  ControlLimits limits;
  double follower_tolerance = 0.02;
  std::vector<DangerZone> zones;
  InjectionMagnitude attack;
  TriggerConfig trigger;
  FilterConfig filter;
  CommConfig comm;
  Lambda2Scope lambda2_scope = Lambda2Scope::kGlobal;
  std::uint64_t seed = 1;
  std::vector<Waypoint> waypoints;
  bool loop_waypoints = false;
  // Follower targets rotate with the leader heading when true; plain
  // translation otherwise. Rotation is kinematically infeasible on sustained
  // loops when every robot shares one speed cap, so loop scenarios disable it.
  bool rotate_offsets = true;
};

struct LinkFlag {
  int observer = 0;
  int target = 0;
  bool triggered = false;
  bool dropped = false;    // triggered but communication unavailable
  bool discarded = false;  // attack gate rejection
};

struct StepRecord {
  int step = 0;
  double msle = 0.0;         // meters^2
  double comm_rate = 0.0;    // successful transmissions / eligible link-steps
  double trigger_rate = 0.0; // attempted transmissions / eligible link-steps
  double lambda2 = 0.0;
  double mse_abs = 0.0;      // diagnostic absolute position MSE, never in acceptance
  std::vector<double> per_robot_error;
  int discarded_count = 0;
  int dropped_count = 0;
  int false_discard_count = 0;  // honest measurements lost to the gate
  int conditioning_warnings = 0;
  bool divergence = false;
  std::vector<LinkFlag> links;
};

/// Pairwise relative-distance error over ordered pairs, normalized by 1/N.
/// Translation-invariant by construction. Throws std::domain_error for n < 2.
double msle(const std::vector<RobotState>& truth, const std::vector<Estimate>& estimates);

/// Runs the full scenario. Identical config and seed give identical records.
std::vector<StepRecord> run(const ScenarioConfig& cfg);

enum class SweepAxis { kZoneRadius, kRho, kCommRate, kNRobots };

struct SweepRun {
  double axis_value = 0.0;
  std::uint64_t seed = 0;
  double terminal_msle = 0.0;      // terminal-window mean
  double terminal_comm_rate = 0.0;
  std::vector<StepRecord> records;  // link flags stripped to bound memory
};

struct SweepSummary {
  double axis_value = 0.0;
  double msle_mean = 0.0;
  double msle_std = 0.0;
  double comm_rate_mean = 0.0;
  double comm_rate_std = 0.0;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::kZoneRadius;
  std::vector<SweepRun> runs;
  std::vector<SweepSummary> summary;
};

ScenarioConfig apply_axis(ScenarioConfig cfg, SweepAxis axis, double value);

/// Repeats the scenario across axis values and seeds (seed, seed+1, ...),
/// summarizing the terminal window (last 25% of steps) per value.
SweepResult run_sweep(const ScenarioConfig& base, SweepAxis axis,
                      const std::vector<double>& values, int seeds);

/// First step index of the terminal summary window.
int terminal_window_start(int steps);

}  // namespace mrcl
