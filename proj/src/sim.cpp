#include "mrcl/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mrcl/angles.hpp"
#include "mrcl/rng.hpp"

namespace mrcl {

double msle(const std::vector<RobotState>& truth, const std::vector<Estimate>& estimates) {
  const int n = static_cast<int>(truth.size());
  if (n < 2 || estimates.size() != truth.size())
    throw std::domain_error("msle: needs >= 2 robots and matching estimate count");
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double true_dist = (truth[i].position() - truth[j].position()).norm();
      const double est_dist =
          (estimates[i].mean.head<2>() - estimates[j].mean.head<2>()).norm();
      const double diff = true_dist - est_dist;
      acc += diff * diff;
    }
  }
  return acc / n;
}

int terminal_window_start(int steps) { return steps - std::max(1, steps / 4); }

namespace {

std::uint64_t link_key(int observer, int target, int n) {
  return static_cast<std::uint64_t>(observer) * static_cast<std::uint64_t>(n) + target;
}

}  // namespace

std::vector<StepRecord> run(const ScenarioConfig& cfg) {
  const int n = cfg.n_robots;
  const Mat3 q = cfg.process_noise.q();
  const Mat2 r = cfg.noise.covariance();

  std::vector<RobotState> truth =
      init_lattice(n, cfg.area.width, cfg.area.height, cfg.min_lattice_spacing);

  // The leader (robot 0) takes the lattice slot closest to the area center so
  // follower offsets stay short; followers hold fixed offsets from it, in the
  // leader's frame or by translation depending on rotate_offsets.
  int center_slot = 0;
  for (int i = 1; i < n; ++i)
    if (truth[i].position().norm() < truth[center_slot].position().norm())
      center_slot = i;
  std::swap(truth[0], truth[center_slot]);

  std::vector<Vec2> offsets(n);
  for (int i = 0; i < n; ++i) offsets[i] = truth[i].position() - truth[0].position();

  std::vector<Estimate> est(n);
  for (int i = 0; i < n; ++i) {
    Rng rng = substream(cfg.seed, StreamDomain::kInit, static_cast<std::uint64_t>(i));
    est[i].mean(0) = truth[i].x + rng.normal(cfg.init.sigma_xy);
    est[i].mean(1) = truth[i].y + rng.normal(cfg.init.sigma_xy);
    est[i].mean(2) = wrap_angle(truth[i].theta + rng.normal(cfg.init.sigma_theta));
    est[i].cov = Mat3::Zero();
    est[i].cov(0, 0) = cfg.init.sigma_xy * cfg.init.sigma_xy;
    est[i].cov(1, 1) = cfg.init.sigma_xy * cfg.init.sigma_xy;
    est[i].cov(2, 2) = cfg.init.sigma_theta * cfg.init.sigma_theta;
  }

  std::vector<bool> dead_reckoning(n, false);
  std::vector<ControlInput> controls(n);
  std::size_t waypoint_index = 0;

  std::vector<StepRecord> records;
  records.reserve(static_cast<std::size_t>(cfg.steps));

  for (int step = 0; step < cfg.steps; ++step) {
    StepRecord rec;
    rec.step = step;

    // Controls from ground truth; estimation stays a passive observer so one
    // seed yields the same trajectory for every filter kind.
    if (!cfg.waypoints.empty()) {
      const Waypoint& wp = cfg.waypoints[waypoint_index];
      const double dist = std::hypot(wp.x - truth[0].x, wp.y - truth[0].y);
      if (dist <= wp.arrival_tolerance) {
        if (cfg.loop_waypoints)
          waypoint_index = (waypoint_index + 1) % cfg.waypoints.size();
        else if (waypoint_index + 1 < cfg.waypoints.size())
          ++waypoint_index;
      }
      controls[0] = leader_follower_control(truth[0], cfg.waypoints[waypoint_index],
                                            cfg.gains, cfg.limits);
    } else {
      controls[0] = ControlInput{};
    }
    const double cos_l = cfg.rotate_offsets ? std::cos(truth[0].theta) : 1.0;
    const double sin_l = cfg.rotate_offsets ? std::sin(truth[0].theta) : 0.0;
    for (int i = 1; i < n; ++i) {
      Waypoint desired;
      desired.x = truth[0].x + cos_l * offsets[i](0) - sin_l * offsets[i](1);
      desired.y = truth[0].y + sin_l * offsets[i](0) + cos_l * offsets[i](1);
      desired.arrival_tolerance = cfg.follower_tolerance;
      controls[i] = leader_follower_control(truth[i], desired, cfg.gains, cfg.limits);
    }

    // Actuation noise with the same covariance the filters assume; the
    // noiseless scenario sets the sigmas to zero and stays exact.
    for (int i = 0; i < n; ++i) {
      truth[i] = step_unicycle(truth[i], controls[i], cfg.dt);
      if (cfg.process_noise.sigma_xy > 0.0 || cfg.process_noise.sigma_theta > 0.0) {
        Rng rng = substream(cfg.seed, StreamDomain::kProcess,
                            static_cast<std::uint64_t>(step), static_cast<std::uint64_t>(i));
        truth[i].x += rng.normal(cfg.process_noise.sigma_xy);
        truth[i].y += rng.normal(cfg.process_noise.sigma_xy);
        truth[i].theta = wrap_angle(truth[i].theta + rng.normal(cfg.process_noise.sigma_theta));
      }
    }

    std::vector<Vec2> positions(n);
    for (int i = 0; i < n; ++i) positions[i] = truth[i].position();
    const CommGraph graph = build_graph(positions, cfg.sensing_radius);
    const double lambda2_global =
        n >= 2 ? std::max(lambda2(graph), kLambda2Floor) : kLambda2Floor;
    rec.lambda2 = lambda2_global;

    // Zone rates at true positions drive both the attack sampling and the
    // D_s/D_c terms of the trigger threshold.
    std::vector<double> rate_s(n), rate_c(n);
    for (int i = 0; i < n; ++i) {
      rate_s[i] = zone_rate_at(cfg.zones, ZoneKind::kSensing, positions[i]);
      rate_c[i] = zone_rate_at(cfg.zones, ZoneKind::kCommunication, positions[i]);
    }

    std::vector<RelativeMeasurement> measurements =
        sense(truth, cfg.noise, cfg.sensing_radius, cfg.seed, step);
    std::vector<bool> sigma(measurements.size(), true);
    for (std::size_t k = 0; k < measurements.size(); ++k) {
      RelativeMeasurement& m = measurements[k];
      const std::uint64_t key = link_key(m.observer, m.target, n);
      Rng attack_rng = substream(cfg.seed, StreamDomain::kAttack,
                                 static_cast<std::uint64_t>(step), key);
      // Signs are keyed per observer without the step: a compromised robot is
      // pushed in one consistent direction for the whole run instead of
      // receiving a zero-mean bias field that fusion would average away.
      Rng sign_rng = substream(cfg.seed, StreamDomain::kAttackSign,
                               static_cast<std::uint64_t>(m.observer));
      m = attack_measurement(m, rate_s[m.observer], cfg.attack, attack_rng, sign_rng);
      Rng drop_rng = substream(cfg.seed, StreamDomain::kDropout,
                               static_cast<std::uint64_t>(step), key);
      sigma[k] = comm_available(rate_c[m.observer], drop_rng);
    }

    for (int i = 0; i < n; ++i) {
      if (!dead_reckoning[i]) {
        try {
          est[i] = predict(cfg.filter.kind, est[i], controls[i], cfg.dt, q,
                           cfg.filter.ukf);
        } catch (const FilterDivergence&) {
          dead_reckoning[i] = true;
          rec.divergence = true;
        }
      }
      if (dead_reckoning[i]) {
        est[i].mean = step_unicycle(est[i].mean, controls[i], cfg.dt);
        est[i].cov += q;
      }
    }

    std::vector<Broadcast> broadcasts(n);
    for (int i = 0; i < n; ++i) broadcasts[i] = {est[i].mean, est[i].cov};

    std::vector<std::vector<std::size_t>> by_observer(n);
    for (std::size_t k = 0; k < measurements.size(); ++k)
      by_observer[measurements[k].observer].push_back(k);

    int successes = 0;
    int attempts = 0;
    const int eligible = static_cast<int>(measurements.size());

    // Two-phase link handling: decisions against the prediction-phase priors,
    // then sequential fusion in ascending neighbor order.
    for (int i = 0; i < n; ++i) {
      LinkContext ctx;
      ctx.filter = cfg.filter.kind;
      ctx.ukf = cfg.filter.ukf;
      ctx.trigger = cfg.trigger;
      ctx.neighbor_uncertainty = cfg.filter.neighbor_uncertainty;
      ctx.r_nominal = r;
      ctx.lambda2 = cfg.lambda2_scope == Lambda2Scope::kGlobal
                        ? lambda2_global
                        : std::max(lambda2_neighborhood(graph, i), kLambda2Floor);
      ctx.ds = rate_s[i];
      ctx.dc = rate_c[i];
      ctx.mode = cfg.comm.mode;
      ctx.step = step;
      ctx.periodic_rate = cfg.comm.periodic_rate;

      const Estimate prior{broadcasts[i].mean, broadcasts[i].cov};
      std::vector<LinkDecision> decisions;
      decisions.reserve(by_observer[i].size());
      for (const std::size_t k : by_observer[i]) {
        ctx.sigma = sigma[k];
        const LinkDecision d =
            decide_link(prior, broadcasts[measurements[k].target], measurements[k], ctx);
        decisions.push_back(d);

        if (d.fuse) ++successes;
        if (d.triggered) ++attempts;
        const bool dropped = d.triggered && !d.sigma;
        if (dropped) ++rec.dropped_count;
        if (d.attack_flagged) {
          ++rec.discarded_count;
          if (!measurements[k].compromised) ++rec.false_discard_count;
        }
        rec.links.push_back(
            {d.observer, d.target, d.triggered, dropped, d.attack_flagged});
      }

      if (dead_reckoning[i]) continue;
      for (std::size_t li = 0; li < decisions.size(); ++li) {
        if (!decisions[li].fuse) continue;
        const std::size_t k = by_observer[i][li];
        ctx.sigma = sigma[k];
        const CorrectionOutcome outcome =
            fuse_link(est[i], broadcasts[measurements[k].target], measurements[k], ctx);
        if (outcome.fused)
          est[i] = outcome.estimate;
        else
          ++rec.conditioning_warnings;
      }
    }

    rec.comm_rate = eligible > 0 ? static_cast<double>(successes) / eligible : 0.0;
    rec.trigger_rate = eligible > 0 ? static_cast<double>(attempts) / eligible : 0.0;
    rec.msle = n >= 2 ? msle(truth, est) : 0.0;
    rec.per_robot_error.resize(n);
    double abs_acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double err = (truth[i].position() - est[i].mean.head<2>()).norm();
      rec.per_robot_error[i] = err;
      abs_acc += err * err;
    }
    rec.mse_abs = abs_acc / n;
    records.push_back(std::move(rec));
  }
  return records;
}

ScenarioConfig apply_axis(ScenarioConfig cfg, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::kZoneRadius:
      for (DangerZone& zone : cfg.zones) zone.radius = value;
      break;
    case SweepAxis::kRho:
      cfg.trigger.rho = value;
      break;
    case SweepAxis::kCommRate:
      cfg.comm.mode = CommMode::kPeriodic;
      cfg.comm.periodic_rate = value;
      break;
    case SweepAxis::kNRobots:
      cfg.n_robots = static_cast<int>(value);
      break;
  }
  return cfg;
}

namespace {

double window_mean(const std::vector<StepRecord>& records, int start,
                   double (*get)(const StepRecord&)) {
  double acc = 0.0;
  int count = 0;
  for (std::size_t i = static_cast<std::size_t>(start); i < records.size(); ++i) {
    acc += get(records[i]);
    ++count;
  }
  return count > 0 ? acc / count : 0.0;
}

}  // namespace

SweepResult run_sweep(const ScenarioConfig& base, SweepAxis axis,
                      const std::vector<double>& values, int seeds) {
  if (values.empty()) throw std::invalid_argument("run_sweep: values must be non-empty");
  if (seeds < 1) throw std::invalid_argument("run_sweep: seeds must be >= 1");

  SweepResult result;
  result.axis = axis;
  for (const double value : values) {
    double msle_acc = 0.0, msle_sq = 0.0, rate_acc = 0.0, rate_sq = 0.0;
    for (int s = 0; s < seeds; ++s) {
      ScenarioConfig cfg = apply_axis(base, axis, value);
      cfg.seed = base.seed + static_cast<std::uint64_t>(s);
      SweepRun sweep_run;
      sweep_run.axis_value = value;
      sweep_run.seed = cfg.seed;
      sweep_run.records = run(cfg);
      const int start = terminal_window_start(cfg.steps);
      sweep_run.terminal_msle =
          window_mean(sweep_run.records, start, [](const StepRecord& r) { return r.msle; });
      sweep_run.terminal_comm_rate = window_mean(
          sweep_run.records, start, [](const StepRecord& r) { return r.comm_rate; });
      for (StepRecord& rec : sweep_run.records) {
        rec.links.clear();
        rec.links.shrink_to_fit();
      }
      msle_acc += sweep_run.terminal_msle;
      msle_sq += sweep_run.terminal_msle * sweep_run.terminal_msle;
      rate_acc += sweep_run.terminal_comm_rate;
      rate_sq += sweep_run.terminal_comm_rate * sweep_run.terminal_comm_rate;
      result.runs.push_back(std::move(sweep_run));
    }
    SweepSummary summary;
    summary.axis_value = value;
    summary.msle_mean = msle_acc / seeds;
    summary.comm_rate_mean = rate_acc / seeds;
    if (seeds > 1) {
      summary.msle_std = std::sqrt(
          std::max(0.0, (msle_sq - seeds * summary.msle_mean * summary.msle_mean) /
                            (seeds - 1)));
      summary.comm_rate_std = std::sqrt(
          std::max(0.0, (rate_sq - seeds * summary.comm_rate_mean * summary.comm_rate_mean) /
                            (seeds - 1)));
    }
    result.summary.push_back(summary);
  }
  return result;
}

}  // namespace mrcl
