#include "mrcl/comms.hpp"

#include <cmath>

namespace mrcl {

Vec2 innovation(const Vec2& z, const Vec2& z_hat) {
  return measurement_ops().residual(z, z_hat);
}

double innovation_norm(const Vec2& lambda_vec, const Mat2& r, InnovationNorm kind) {
  if (kind == InnovationNorm::kEuclidean) return lambda_vec.norm();
  // Whitened: sqrt(0.5 * L^T R^-1 L); R is diagonal by construction.
  const double qr = lambda_vec(0) * lambda_vec(0) / r(0, 0);
  const double qb = lambda_vec(1) * lambda_vec(1) / r(1, 1);
  return std::sqrt(0.5 * (qr + qb));
}

double adaptive_threshold(const TriggerConfig& cfg, double lambda2,
                          double innovation_norm, double ds, double dc) {
  return cfg.alpha / lambda2 * (1.0 + cfg.gamma * innovation_norm) *
         (1.0 - cfg.zeta_s * ds - cfg.zeta_c * dc);
}

GateDecision attack_gate(const Vec2& lambda_vec, double rho, const Mat2& r,
                         InnovationNorm kind) {
  return innovation_norm(lambda_vec, r, kind) > rho ? GateDecision::kDiscard
                                                    : GateDecision::kAccept;
}

Mat2 effective_measurement_noise(const Mat2& r, const Vec3& observer_mean,
                                 const Broadcast& neighbor, NeighborUncertainty mode) {
  if (mode == NeighborUncertainty::kIgnore) return r;
  const Vec2 delta = neighbor.mean.head<2>() - observer_mean.head<2>();
  if (delta.squaredNorm() < 1e-12) return r;  // degenerate geometry, no inflation
  const Mat23 hj = range_bearing_jacobian_target(observer_mean, neighbor.mean);
  Mat2 r_eff = r + hj * neighbor.cov * hj.transpose();
  return (0.5 * (r_eff + r_eff.transpose())).eval();
}

bool periodic_slot(int step, double rate) {
  return std::floor((step + 1) * rate) > std::floor(step * rate);
}

LinkDecision decide_link(const Estimate& est, const Broadcast& neighbor,
                         const RelativeMeasurement& z, const LinkContext& ctx) {
  LinkDecision d;
  d.observer = z.observer;
  d.target = z.target;
  d.sigma = ctx.sigma;

  const Mat2 r_eff = effective_measurement_noise(ctx.r_nominal, est.mean, neighbor,
                                                 ctx.neighbor_uncertainty);
  const MeasurementPrediction pred =
      predict_measurement(ctx.filter, est, neighbor.mean, r_eff, ctx.ukf);
  const Vec2 lambda_vec = innovation(z.vec(), pred.z_hat);
  d.innovation_norm = innovation_norm(lambda_vec, ctx.r_nominal, ctx.trigger.norm);

  // Attack detection runs before the event trigger; a discarded measurement
  // is never transmitted.
  d.attack_flagged =
      attack_gate(lambda_vec, ctx.trigger.rho, ctx.r_nominal, ctx.trigger.norm) ==
      GateDecision::kDiscard;
  d.threshold = adaptive_threshold(ctx.trigger, ctx.lambda2, d.innovation_norm,
                                   ctx.ds, ctx.dc);

  if (!d.attack_flagged) {
    switch (ctx.mode) {
      case CommMode::kEventTriggered:
        d.triggered = d.innovation_norm > d.threshold;
        break;
      case CommMode::kPeriodic:
        d.triggered = periodic_slot(ctx.step, ctx.periodic_rate);
        break;
      case CommMode::kAlways:
        d.triggered = true;
        break;
    }
  }
  d.fuse = d.triggered && d.sigma;
  return d;
}

CorrectionOutcome fuse_link(const Estimate& est, const Broadcast& neighbor,
                            const RelativeMeasurement& z, const LinkContext& ctx) {
  const Mat2 r_eff = effective_measurement_noise(ctx.r_nominal, est.mean, neighbor,
                                                 ctx.neighbor_uncertainty);
  const MeasurementPrediction pred =
      predict_measurement(ctx.filter, est, neighbor.mean, r_eff, ctx.ukf);
  return apply_correction(est, pred, z.vec());
}

LinkResult process_link(const Estimate& est, const Broadcast& neighbor,
                        const RelativeMeasurement& z, const LinkContext& ctx) {
  LinkResult result;
  result.decision = decide_link(est, neighbor, z, ctx);
  result.estimate = est;
  if (!result.decision.fuse) return result;

  const CorrectionOutcome outcome = fuse_link(est, neighbor, z, ctx);
  if (outcome.fused) {
    result.estimate = outcome.estimate;
    result.fused = true;
  } else {
    result.singular_skip = true;
  }
  return result;
}

}  // namespace mrcl
