#pragma once

#include "mrcl/adversary.hpp"
#include "mrcl/filters.hpp"

namespace mrcl {

/// Norm used for both the event trigger and the attack gate. The whitened
/// form sqrt(0.5 * L^T R^-1 L) makes range and bearing commensurable; the
/// plain Euclidean form is kept for ablation.
enum class InnovationNorm { kWhitened, kEuclidean };

/// Whether fusion inflates the measurement noise with the neighbor's
/// transmitted covariance (loosely coupled handling of neighbor uncertainty).
enum class NeighborUncertainty { kIgnore, kInflate };

enum class GateDecision { kAccept, kDiscard };

enum class CommMode { kEventTriggered, kPeriodic, kAlways };

struct TriggerConfig {
  double alpha = 1.0;   // > 0
  double gamma = 0.0;   // >= 0
  double zeta_s = 0.0;  // [0, 1]
  double zeta_c = 0.0;  // [0, 1]
  double rho = 5.0;     // attack-detection threshold, > 0
  InnovationNorm norm = InnovationNorm::kWhitened;
};

/// State a robot shares when a link transmits: its mean and covariance.
struct Broadcast {
  Vec3 mean = Vec3::Zero();
  Mat3 cov = Mat3::Zero();
};

/// z - z_hat with the bearing component wrapped to (-pi, pi].
Vec2 innovation(const Vec2& z, const Vec2& z_hat);

double innovation_norm(const Vec2& lambda_vec, const Mat2& r, InnovationNorm kind);

/// Adaptive event threshold:
/// alpha / lambda2 * (1 + gamma*|L|) * (1 - zeta_s*Ds - zeta_c*Dc).
/// lambda2 must arrive clamped >= kLambda2Floor.
double adaptive_threshold(const TriggerConfig& cfg, double lambda2,
                          double innovation_norm, double ds, double dc);

/// Residual test: discard iff the innovation norm strictly exceeds rho.
GateDecision attack_gate(const Vec2& lambda_vec, double rho, const Mat2& r,
                         InnovationNorm kind);

/// R_eff = R + Hj * Pj * Hj^T evaluated at the transmitted neighbor mean
/// (identity when mode is kIgnore).
Mat2 effective_measurement_noise(const Mat2& r, const Vec3& observer_mean,
                                 const Broadcast& neighbor, NeighborUncertainty mode);

/// Deterministic transmit slots realizing an average rate for periodic mode.
bool periodic_slot(int step, double rate);

/// Everything a link decision needs beyond the estimates: sampled adversary
/// state, connectivity, and the policy knobs.
struct LinkContext {
  FilterKind filter = FilterKind::kCkf;
  UkfParams ukf{};
  TriggerConfig trigger{};
  NeighborUncertainty neighbor_uncertainty = NeighborUncertainty::kInflate;
  Mat2 r_nominal = Mat2::Zero();
  double lambda2 = 1.0;  // clamped
  double ds = 0.0;       // observer sensing-zone rate
  double dc = 0.0;       // observer communication-zone rate
  bool sigma = true;     // sampled communication availability
  CommMode mode = CommMode::kEventTriggered;
  int step = 0;
  double periodic_rate = 1.0;
};

struct LinkDecision {
  int observer = -1;
  int target = -1;
  double innovation_norm = 0.0;
  double threshold = 0.0;
  bool attack_flagged = false;
  bool triggered = false;  // transmission indicator
  bool sigma = true;
  bool fuse = false;  // triggered && sigma && !attack_flagged
};

/// Decision half of the link pipeline, evaluated against the given estimate
/// (the simulator passes the prediction-phase prior so metrics do not depend
/// on fusion order).
LinkDecision decide_link(const Estimate& est, const Broadcast& neighbor,
                         const RelativeMeasurement& z, const LinkContext& ctx);

/// Fusion half: recomputes the measurement prediction against the current
/// estimate and applies the correction.
CorrectionOutcome fuse_link(const Estimate& est, const Broadcast& neighbor,
                            const RelativeMeasurement& z, const LinkContext& ctx);

struct LinkResult {
  LinkDecision decision;
  Estimate estimate;         // fused when decision.fuse and not singular_skip
  bool fused = false;
  bool singular_skip = false;
};

/// Full pipeline for one link: gate, threshold, trigger, availability, fusion.
LinkResult process_link(const Estimate& est, const Broadcast& neighbor,
                        const RelativeMeasurement& z, const LinkContext& ctx);

}  // namespace mrcl
