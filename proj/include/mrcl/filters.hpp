#pragma once

#include "mrcl/sensing.hpp"
#include "mrcl/transforms.hpp"
#include "mrcl/world.hpp"

namespace mrcl {

enum class FilterKind { kCkf, kEkf, kUkf };

/// Per-robot filter state: pose mean and symmetric PSD covariance.
struct Estimate {
  Vec3 mean = Vec3::Zero();
  Mat3 cov = Mat3::Zero();
};

/// Component conventions shared by every filter: pose theta and measurement
/// bearing are angular.
const ComponentOps<3>& pose_ops();
const ComponentOps<2>& measurement_ops();

/// Predicted measurement for one link. innovation_cov already includes the
/// effective measurement noise.
struct MeasurementPrediction {
  Vec2 z_hat = Vec2::Zero();
  Mat2 innovation_cov = Mat2::Zero();
  Mat32 cross_cov = Mat32::Zero();
};

struct CorrectionOutcome {
  Estimate estimate;
  Vec2 innovation = Vec2::Zero();
  Mat32 gain = Mat32::Zero();
  bool fused = true;  // false: innovation covariance singular, measurement skipped
};

// Prediction step through the unicycle motion model. All variants add Q and
// re-symmetrize; Cholesky failure propagates as FilterDivergence.
Estimate ckf_predict(const Estimate& est, const ControlInput& u, double dt, const Mat3& q);
Estimate ekf_predict(const Estimate& est, const ControlInput& u, double dt, const Mat3& q);
Estimate ukf_predict(const Estimate& est, const ControlInput& u, double dt, const Mat3& q,
                     const UkfParams& params = {});
Estimate predict(FilterKind kind, const Estimate& est, const ControlInput& u, double dt,
                 const Mat3& q, const UkfParams& params = {});

// Predicted range-bearing observation of a neighbor at its transmitted mean.
MeasurementPrediction ckf_predict_measurement(const Estimate& est, const Vec3& neighbor_mean,
                                              const Mat2& r_eff);
MeasurementPrediction ekf_predict_measurement(const Estimate& est, const Vec3& neighbor_mean,
                                              const Mat2& r_eff);
MeasurementPrediction ukf_predict_measurement(const Estimate& est, const Vec3& neighbor_mean,
                                              const Mat2& r_eff, const UkfParams& params = {});
MeasurementPrediction predict_measurement(FilterKind kind, const Estimate& est,
                                          const Vec3& neighbor_mean, const Mat2& r_eff,
                                          const UkfParams& params = {});

/// Fuses one measurement given its prediction; bearing innovation is wrapped
/// and the posterior covariance symmetrized and PSD-projected.
CorrectionOutcome apply_correction(const Estimate& est, const MeasurementPrediction& predicted,
                                   const Vec2& z);

CorrectionOutcome ckf_correct(const Estimate& est, const Vec3& neighbor_mean, const Vec2& z,
                              const Mat2& r_eff);
CorrectionOutcome ekf_correct(const Estimate& est, const Vec3& neighbor_mean, const Vec2& z,
                              const Mat2& r_eff);
CorrectionOutcome ukf_correct(const Estimate& est, const Vec3& neighbor_mean, const Vec2& z,
                              const Mat2& r_eff, const UkfParams& params = {});

}  // namespace mrcl
