#include "mrcl/filters.hpp"

namespace mrcl {

const ComponentOps<3>& pose_ops() {
  static const ComponentOps<3> ops{{false, false, true}};
  return ops;
}

const ComponentOps<2>& measurement_ops() {
  static const ComponentOps<2> ops{{false, true}};
  return ops;
}

namespace {

Estimate finish_predict(const TransformResult<3, 3>& propagated, const Mat3& q) {
  Estimate out;
  out.mean = propagated.mean;
  out.cov = propagated.cov + q;
  out.cov = (0.5 * (out.cov + out.cov.transpose())).eval();
  return out;
}

MeasurementPrediction finish_measurement(const TransformResult<3, 2>& predicted,
                                         const Mat2& r_eff) {
  MeasurementPrediction out;
  out.z_hat = predicted.mean;
  out.innovation_cov = predicted.cov + r_eff;
  out.innovation_cov = (0.5 * (out.innovation_cov + out.innovation_cov.transpose())).eval();
  out.cross_cov = predicted.cross;
  return out;
}

}  // namespace

Estimate ckf_predict(const Estimate& est, const ControlInput& u, double dt, const Mat3& q) {
  auto f = [&](const Vec3& x) { return step_unicycle(x, u, dt); };
  return finish_predict(cubature_transform<3>(est.mean, est.cov, f, pose_ops()), q);
}

Estimate ekf_predict(const Estimate& est, const ControlInput& u, double dt, const Mat3& q) {
  const Mat3 f = step_unicycle_jacobian(est.mean, u, dt);
  return finish_predict(linearized_transform<3, 3>(est.cov, step_unicycle(est.mean, u, dt), f),
                        q);
}

Estimate ukf_predict(const Estimate& est, const ControlInput& u, double dt, const Mat3& q,
                     const UkfParams& params) {
  auto f = [&](const Vec3& x) { return step_unicycle(x, u, dt); };
  return finish_predict(unscented_transform<3>(est.mean, est.cov, f, pose_ops(), params), q);
}

Estimate predict(FilterKind kind, const Estimate& est, const ControlInput& u, double dt,
                 const Mat3& q, const UkfParams& params) {
  switch (kind) {
    case FilterKind::kCkf: return ckf_predict(est, u, dt, q);
    case FilterKind::kEkf: return ekf_predict(est, u, dt, q);
    case FilterKind::kUkf: return ukf_predict(est, u, dt, q, params);
  }
  return est;
}

MeasurementPrediction ckf_predict_measurement(const Estimate& est, const Vec3& neighbor_mean,
                                              const Mat2& r_eff) {
  auto h = [&](const Vec3& x) { return range_bearing_vec(x, neighbor_mean); };
  return finish_measurement(cubature_transform<2>(est.mean, est.cov, h, measurement_ops()),
                            r_eff);
}

MeasurementPrediction ekf_predict_measurement(const Estimate& est, const Vec3& neighbor_mean,
                                              const Mat2& r_eff) {
  const Mat23 h = range_bearing_jacobian_observer(est.mean, neighbor_mean);
  return finish_measurement(
      linearized_transform<3, 2>(est.cov, range_bearing_vec(est.mean, neighbor_mean), h),
      r_eff);
}

MeasurementPrediction ukf_predict_measurement(const Estimate& est, const Vec3& neighbor_mean,
                                              const Mat2& r_eff, const UkfParams& params) {
  auto h = [&](const Vec3& x) { return range_bearing_vec(x, neighbor_mean); };
  return finish_measurement(
      unscented_transform<2>(est.mean, est.cov, h, measurement_ops(), params), r_eff);
}

MeasurementPrediction predict_measurement(FilterKind kind, const Estimate& est,
                                          const Vec3& neighbor_mean, const Mat2& r_eff,
                                          const UkfParams& params) {
  switch (kind) {
    case FilterKind::kCkf: return ckf_predict_measurement(est, neighbor_mean, r_eff);
    case FilterKind::kEkf: return ekf_predict_measurement(est, neighbor_mean, r_eff);
    case FilterKind::kUkf: return ukf_predict_measurement(est, neighbor_mean, r_eff, params);
  }
  return {};
}

CorrectionOutcome apply_correction(const Estimate& est, const MeasurementPrediction& predicted,
                                   const Vec2& z) {
  TransformResult<3, 2> moments;
  moments.mean = predicted.z_hat;
  moments.cov = predicted.innovation_cov;  // noise already folded in
  moments.cross = predicted.cross_cov;
  const GaussianUpdate<3, 2> update = kalman_update<3, 2>(
      est.mean, est.cov, moments, Mat2::Zero(), z, pose_ops(), measurement_ops());

  CorrectionOutcome out;
  out.estimate = Estimate{update.mean, update.cov};
  out.innovation = update.innovation;
  out.gain = update.gain;
  out.fused = update.ok;
  if (!update.ok) out.estimate = est;
  return out;
}

CorrectionOutcome ckf_correct(const Estimate& est, const Vec3& neighbor_mean, const Vec2& z,
                              const Mat2& r_eff) {
  return apply_correction(est, ckf_predict_measurement(est, neighbor_mean, r_eff), z);
}

CorrectionOutcome ekf_correct(const Estimate& est, const Vec3& neighbor_mean, const Vec2& z,
                              const Mat2& r_eff) {
  return apply_correction(est, ekf_predict_measurement(est, neighbor_mean, r_eff), z);
}

CorrectionOutcome ukf_correct(const Estimate& est, const Vec3& neighbor_mean, const Vec2& z,
                              const Mat2& r_eff, const UkfParams& params) {
  return apply_correction(est, ukf_predict_measurement(est, neighbor_mean, r_eff, params), z);
}

}  // namespace mrcl
