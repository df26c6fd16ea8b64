#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "mrcl/angles.hpp"
#include "mrcl/sensing.hpp"

using namespace mrcl;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("range_bearing: target on the heading axis and rotated symmetry") {
  const RangeBearing a = range_bearing(RobotState{0, 0, 0}, RobotState{1, 0, 0.7});
  CHECK(a.range == doctest::Approx(1.0));
  CHECK(a.bearing == doctest::Approx(0.0));
  CHECK_FALSE(a.degenerate);

  const RangeBearing b = range_bearing(RobotState{0, 0, kPi / 2}, RobotState{0, 2, 0});
  CHECK(b.range == doctest::Approx(2.0));
  CHECK(b.bearing == doctest::Approx(0.0));
}

TEST_CASE("range_bearing: general pose against scalar computation") {
  const RangeBearing rb = range_bearing(RobotState{1, 1, 0.3}, RobotState{-1, 2, 0});
  CHECK(rb.range == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
  const double expected = wrap_angle(std::atan2(1.0, -2.0) - 0.3);
  CHECK(rb.bearing == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("range_bearing: coincident positions flag degenerate geometry") {
  const RangeBearing rb = range_bearing(RobotState{1, 1, 0.3}, RobotState{1, 1, 2.0});
  CHECK(rb.degenerate);
  CHECK(rb.range == 0.0);
  CHECK(rb.bearing == 0.0);
}

TEST_CASE("sense: boundary-inclusive edges") {
  NoiseConfig quiet;  // zero sigma
  std::vector<RobotState> at_boundary{{0, 0, 0}, {1.0, 0, 0}};
  CHECK(sense(at_boundary, quiet, 1.0, 1, 0).size() == 2);

  std::vector<RobotState> beyond{{0, 0, 0}, {1.01, 0, 0}};
  CHECK(sense(beyond, quiet, 1.0, 1, 0).empty());
}

TEST_CASE("sense: three collinear robots spaced 0.6 give 4 ordered measurements") {
  NoiseConfig quiet;
  std::vector<RobotState> world{{0, 0, 0}, {0.6, 0, 0}, {1.2, 0, 0}};
  const auto ms = sense(world, quiet, 1.0, 1, 0);
  REQUIRE(ms.size() == 4);  // ends see the middle, middle sees both
  int middle_observations = 0;
  for (const auto& m : ms) {
    CHECK(m.observer != m.target);
    if (m.observer == 1) ++middle_observations;
  }
  CHECK(middle_observations == 2);
}

TEST_CASE("sense: zero sigma reproduces the observation model exactly") {
  NoiseConfig quiet;
  std::vector<RobotState> world{{0.2, -0.4, 1.1}, {-0.3, 0.1, -2.0}, {0.5, 0.4, 0.0}};
  for (const auto& m : sense(world, quiet, 5.0, 99, 3)) {
    const RangeBearing rb = range_bearing(world[m.observer], world[m.target]);
    CHECK(m.range == rb.range);
    CHECK(m.bearing == rb.bearing);
    CHECK_FALSE(m.compromised);
  }
}

TEST_CASE("sense: empirical noise std within 5% of configuration") {
  NoiseConfig noise{0.05, 0.02};
  std::vector<RobotState> world{{0, 0, 0}, {0.5, 0, 0}};
  double acc_r = 0.0, acc_r2 = 0.0, acc_b = 0.0, acc_b2 = 0.0;
  const int samples = 100000;
  for (int step = 0; step < samples; ++step) {
    const auto ms = sense(world, noise, 1.0, 4242, step);
    const double dr = ms[0].range - 0.5;
    const double db = ms[0].bearing - 0.0;
    acc_r += dr;
    acc_r2 += dr * dr;
    acc_b += db;
    acc_b2 += db * db;
  }
  const double std_r = std::sqrt(acc_r2 / samples - (acc_r / samples) * (acc_r / samples));
  const double std_b = std::sqrt(acc_b2 / samples - (acc_b / samples) * (acc_b / samples));
  CHECK(std_r == doctest::Approx(noise.sigma_range).epsilon(0.05));
  CHECK(std_b == doctest::Approx(noise.sigma_bearing).epsilon(0.05));
}

TEST_CASE("sense: symmetric visibility and re-wrapped bearings") {
  NoiseConfig noise{0.01, 0.5};  // large bearing noise to stress the wrap
  std::vector<RobotState> world{
      {0, 0, 3.1}, {0.9, 0, -3.1}, {0.2, 0.8, 0.0}, {-0.7, 0.3, 1.0}};
  const auto ms = sense(world, noise, 1.0, 7, 0);
  std::vector<std::vector<bool>> seen(4, std::vector<bool>(4, false));
  for (const auto& m : ms) {
    seen[m.observer][m.target] = true;
    CHECK(m.bearing > -kPi);
    CHECK(m.bearing <= kPi);
    CHECK(m.step == 0);
  }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(seen[i][j] == seen[j][i]);
}

TEST_CASE("measurement jacobians match central finite differences") {
  const Vec3 xi(0.4, -0.2, 0.9);
  const Vec3 xj(-0.6, 0.7, -1.4);
  const Mat23 hi = range_bearing_jacobian_observer(xi, xj);
  const Mat23 hj = range_bearing_jacobian_target(xi, xj);
  const double eps = 1e-6;

  for (int c = 0; c < 3; ++c) {
    Vec3 hi_x = xi, lo_x = xi;
    hi_x(c) += eps;
    lo_x(c) -= eps;
    const Vec2 dhi = range_bearing_vec(hi_x, xj);
    const Vec2 dlo = range_bearing_vec(lo_x, xj);
    CHECK(hi(0, c) == doctest::Approx((dhi(0) - dlo(0)) / (2 * eps)).epsilon(1e-6));
    CHECK(hi(1, c) ==
          doctest::Approx(wrap_angle(dhi(1) - dlo(1)) / (2 * eps)).epsilon(1e-6));
  }
  for (int c = 0; c < 3; ++c) {
    Vec3 hi_x = xj, lo_x = xj;
    hi_x(c) += eps;
    lo_x(c) -= eps;
    const Vec2 dhi = range_bearing_vec(xi, hi_x);
    const Vec2 dlo = range_bearing_vec(xi, lo_x);
    CHECK(hj(0, c) == doctest::Approx((dhi(0) - dlo(0)) / (2 * eps)).epsilon(1e-6));
    CHECK(hj(1, c) ==
          doctest::Approx(wrap_angle(dhi(1) - dlo(1)) / (2 * eps)).epsilon(1e-6));
  }
}
