#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mrcl/comms.hpp"
#include "mrcl/rng.hpp"

using namespace mrcl;

namespace {

constexpr double kPi = std::numbers::pi;

LinkContext base_context() {
  LinkContext ctx;
  ctx.filter = FilterKind::kCkf;
  ctx.trigger.alpha = 1.0;
  ctx.trigger.gamma = 0.0;
  ctx.trigger.zeta_s = 0.5;
  ctx.trigger.zeta_c = 0.5;
  ctx.trigger.rho = 5.0;
  ctx.trigger.norm = InnovationNorm::kWhitened;
  ctx.r_nominal << 25e-6, 0, 0, 2.5e-3;
  ctx.lambda2 = 2.0;
  return ctx;
}

Estimate example_estimate() {
  Estimate est;
  est.mean = Vec3(0.0, 0.0, 0.1);
  est.cov = Mat3::Identity() * 1e-3;
  return est;
}

Broadcast example_neighbor() {
  Broadcast b;
  b.mean = Vec3(0.6, 0.2, -0.4);
  b.cov = Mat3::Identity() * 1e-3;
  return b;
}

RelativeMeasurement measurement_at(const Vec2& z) {
  RelativeMeasurement m;
  m.observer = 0;
  m.target = 1;
  m.range = z(0);
  m.bearing = z(1);
  return m;
}

}  // namespace

TEST_CASE("innovation: componentwise difference with wrapped bearing") {
  CHECK(innovation(Vec2(1.0, 0.5), Vec2(1.0, 0.5)).norm() == 0.0);
  CHECK(innovation(Vec2(2.0, 0.0), Vec2(1.5, 0.0))(0) == doctest::Approx(0.5));

  const Vec2 wrapped = innovation(Vec2(1.0, 3.1), Vec2(1.0, -3.1));
  CHECK(wrapped(1) == doctest::Approx(6.2 - 2.0 * kPi).epsilon(1e-12));  // ~ -0.08319
  CHECK(wrapped(1) > -kPi);
  CHECK(wrapped(1) <= kPi);
}

TEST_CASE("innovation_norm: whitened and euclidean forms") {
  Mat2 r;
  r << 0.01, 0, 0, 0.04;
  const Vec2 lam(0.1, 0.2);
  // sqrt(0.5 * (0.1^2/0.01 + 0.2^2/0.04)) = sqrt(0.5 * (1 + 1)) = 1
  CHECK(innovation_norm(lam, r, InnovationNorm::kWhitened) == doctest::Approx(1.0));
  CHECK(innovation_norm(lam, r, InnovationNorm::kEuclidean) ==
        doctest::Approx(std::sqrt(0.05)));
}

TEST_CASE("adaptive_threshold: direct substitutions") {
  TriggerConfig cfg;
  cfg.alpha = 1.0;
  cfg.gamma = 0.0;
  cfg.zeta_s = 0.0;
  cfg.zeta_c = 0.0;
  CHECK(adaptive_threshold(cfg, 2.0, 0.7, 0.0, 0.0) == doctest::Approx(0.5));

  cfg.zeta_s = 1.0;
  CHECK(adaptive_threshold(cfg, 2.0, 0.7, 1.0, 0.0) == doctest::Approx(0.0));

  // 0.4/4 * (1 + 0.5*1) * (1 - 0.5*0.6 - 0.2*0.5) = 0.1 * 1.5 * 0.6 = 0.09
  cfg.alpha = 0.4;
  cfg.gamma = 0.5;
  cfg.zeta_s = 0.5;
  cfg.zeta_c = 0.2;
  CHECK(adaptive_threshold(cfg, 4.0, 1.0, 0.6, 0.5) == doctest::Approx(0.09).epsilon(1e-12));
}

TEST_CASE("adaptive_threshold: monotone in each argument") {
  Rng rng(55);
  for (int i = 0; i < 500; ++i) {
    TriggerConfig cfg;
    cfg.alpha = 0.1 + rng.uniform01();
    cfg.gamma = rng.uniform01();
    cfg.zeta_s = 0.5 * rng.uniform01();
    cfg.zeta_c = 0.5 * rng.uniform01();
    const double lam2 = 0.5 + 4.0 * rng.uniform01();
    const double norm = rng.uniform01() * 3.0;
    const double ds = rng.uniform01();
    const double dc = rng.uniform01();
    const double base = adaptive_threshold(cfg, lam2, norm, ds, dc);

    CHECK(adaptive_threshold(cfg, lam2 + 0.5, norm, ds, dc) <= base + 1e-12);
    CHECK(adaptive_threshold(cfg, lam2, norm, std::min(1.0, ds + 0.1), dc) <= base + 1e-12);
    CHECK(adaptive_threshold(cfg, lam2, norm, ds, std::min(1.0, dc + 0.1)) <= base + 1e-12);
    CHECK(adaptive_threshold(cfg, lam2, norm + 0.5, ds, dc) >= base - 1e-12);
  }
}

TEST_CASE("attack_gate: boundary accepts, clear excess discards") {
  Mat2 r = Mat2::Identity();
  CHECK(attack_gate(Vec2(0, 0), 3.0, r, InnovationNorm::kEuclidean) ==
        GateDecision::kAccept);
  // Exactly at rho: strict inequality, accepted.
  CHECK(attack_gate(Vec2(3.0, 0.0), 3.0, r, InnovationNorm::kEuclidean) ==
        GateDecision::kAccept);
  CHECK(attack_gate(Vec2(1.0, 1.0), 1.0, r, InnovationNorm::kWhitened) ==
        GateDecision::kAccept);  // whitened norm exactly 1
  CHECK(attack_gate(Vec2(30.0, 0.0), 3.0, r, InnovationNorm::kEuclidean) ==
        GateDecision::kDiscard);
}

TEST_CASE("effective_measurement_noise: inflation adds neighbor uncertainty") {
  Mat2 r;
  r << 1e-4, 0, 0, 1e-3;
  const Vec3 observer(0, 0, 0);
  Broadcast neighbor;
  neighbor.mean = Vec3(1.0, 0.0, 0.0);
  neighbor.cov = Mat3::Identity() * 0.01;

  const Mat2 same = effective_measurement_noise(r, observer, neighbor,
                                                NeighborUncertainty::kIgnore);
  CHECK(same.isApprox(r, 1e-15));

  const Mat2 inflated = effective_measurement_noise(r, observer, neighbor,
                                                    NeighborUncertainty::kInflate);
  const Mat2 extra = inflated - r;
  Eigen::LLT<Mat2> llt(Mat2(extra + 1e-15 * Mat2::Identity()));
  CHECK(llt.info() == Eigen::Success);
  CHECK(extra.trace() > 0.0);
}

TEST_CASE("decide_link: trigger equivalence with the strict inequality") {
  LinkContext ctx = base_context();
  const Estimate est = example_estimate();
  const Broadcast neighbor = example_neighbor();

  Rng rng(404);
  for (int i = 0; i < 200; ++i) {
    const MeasurementPrediction pred = predict_measurement(
        ctx.filter, est, neighbor.mean,
        effective_measurement_noise(ctx.r_nominal, est.mean, neighbor,
                                    ctx.neighbor_uncertainty));
    const Vec2 z = pred.z_hat + Vec2(rng.normal(0.02), rng.normal(0.2));
    const LinkDecision d = decide_link(est, neighbor, measurement_at(z), ctx);
    if (!d.attack_flagged)
      CHECK(d.triggered == (d.innovation_norm > d.threshold));
    else
      CHECK_FALSE(d.triggered);
    CHECK(d.fuse == (d.triggered && d.sigma));
  }
}

TEST_CASE("process_link: zero innovation does not trigger outside danger zones") {
  LinkContext ctx = base_context();
  const Estimate est = example_estimate();
  const Broadcast neighbor = example_neighbor();
  const MeasurementPrediction pred = predict_measurement(
      ctx.filter, est, neighbor.mean,
      effective_measurement_noise(ctx.r_nominal, est.mean, neighbor,
                                  ctx.neighbor_uncertainty));

  const LinkResult result = process_link(est, neighbor, measurement_at(pred.z_hat), ctx);
  CHECK(result.decision.threshold > 0.0);
  CHECK_FALSE(result.decision.triggered);
  CHECK_FALSE(result.fused);
  CHECK((result.estimate.mean - est.mean).norm() == 0.0);
}

TEST_CASE("process_link: saturated sensing zone forces delta to zero") {
  LinkContext ctx = base_context();
  ctx.trigger.zeta_s = 1.0;
  ctx.trigger.zeta_c = 0.0;
  ctx.ds = 1.0;  // saturated SDZ
  const Estimate est = example_estimate();
  const Broadcast neighbor = example_neighbor();
  const MeasurementPrediction pred = predict_measurement(
      ctx.filter, est, neighbor.mean,
      effective_measurement_noise(ctx.r_nominal, est.mean, neighbor,
                                  ctx.neighbor_uncertainty));

  // Any nonzero innovation below rho triggers and fuses when sigma = 1.
  const Vec2 z = pred.z_hat + Vec2(0.003, 0.02);
  const LinkResult result = process_link(est, neighbor, measurement_at(z), ctx);
  CHECK(result.decision.threshold == doctest::Approx(0.0));
  CHECK(result.decision.triggered);
  CHECK_FALSE(result.decision.attack_flagged);
  CHECK(result.fused);
  CHECK((result.estimate.mean - est.mean).norm() > 0.0);
}

TEST_CASE("process_link: dropped link counts as attempt but keeps the prior") {
  LinkContext ctx = base_context();
  ctx.sigma = false;
  const Estimate est = example_estimate();
  const Broadcast neighbor = example_neighbor();
  const MeasurementPrediction pred = predict_measurement(
      ctx.filter, est, neighbor.mean,
      effective_measurement_noise(ctx.r_nominal, est.mean, neighbor,
                                  ctx.neighbor_uncertainty));

  // Innovation between delta and rho.
  const Vec2 z = pred.z_hat + Vec2(0.01, 0.1);
  const LinkResult result = process_link(est, neighbor, measurement_at(z), ctx);
  CHECK(result.decision.triggered);
  CHECK(result.decision.innovation_norm > result.decision.threshold);
  CHECK(result.decision.innovation_norm <= ctx.trigger.rho);
  CHECK_FALSE(result.decision.fuse);
  CHECK_FALSE(result.fused);
  CHECK((result.estimate.mean - est.mean).norm() == 0.0);
  CHECK((result.estimate.cov - est.cov).norm() == 0.0);
}

TEST_CASE("process_link: gate discard blocks fusion entirely") {
  LinkContext ctx = base_context();
  ctx.trigger.rho = 2.0;
  const Estimate est = example_estimate();
  const Broadcast neighbor = example_neighbor();
  const MeasurementPrediction pred = predict_measurement(
      ctx.filter, est, neighbor.mean,
      effective_measurement_noise(ctx.r_nominal, est.mean, neighbor,
                                  ctx.neighbor_uncertainty));

  // Bias at 10x rho on the range channel.
  const Vec2 z = pred.z_hat + Vec2(2.0 * ctx.trigger.rho * 0.005 * 10.0, 0.0);
  const LinkResult result = process_link(est, neighbor, measurement_at(z), ctx);
  CHECK(result.decision.attack_flagged);
  CHECK_FALSE(result.decision.triggered);
  CHECK_FALSE(result.fused);
  CHECK((result.estimate.mean - est.mean).norm() == 0.0);
}

TEST_CASE("process_link: always mode fuses regardless of the threshold") {
  LinkContext ctx = base_context();
  ctx.mode = CommMode::kAlways;
  const Estimate est = example_estimate();
  const Broadcast neighbor = example_neighbor();
  const MeasurementPrediction pred = predict_measurement(
      ctx.filter, est, neighbor.mean,
      effective_measurement_noise(ctx.r_nominal, est.mean, neighbor,
                                  ctx.neighbor_uncertainty));

  const LinkResult result = process_link(est, neighbor, measurement_at(pred.z_hat), ctx);
  CHECK(result.decision.triggered);
  CHECK(result.fused);
}

TEST_CASE("periodic_slot realizes the requested average rate") {
  for (const double rate : {0.1, 0.25, 0.5, 0.75, 1.0}) {
    int on = 0;
    const int steps = 10000;
    for (int step = 0; step < steps; ++step)
      if (periodic_slot(step, rate)) ++on;
    CHECK(static_cast<double>(on) / steps == doctest::Approx(rate).epsilon(0.01));
  }
}
