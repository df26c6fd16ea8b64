#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mrcl/world.hpp"

namespace mrcl {

struct NoiseConfig {
  double sigma_range = 0.0;    // meters
  double sigma_bearing = 0.0;  // radians

  Mat2 covariance() const {
    Mat2 r = Mat2::Zero();
    r(0, 0) = sigma_range * sigma_range;
    r(1, 1) = sigma_bearing * sigma_bearing;
    return r;
  }
};

/// One noisy (range, bearing) observation of a neighbor. `compromised` is
/// ground-truth bookkeeping written by the adversary; filters never read it.
struct RelativeMeasurement {
  int observer = 0;
  int target = 0;
  double range = 0.0;    // >= 0
  double bearing = 0.0;  // (-pi, pi]
  int step = 0;
  bool compromised = false;

  Vec2 vec() const { return {range, bearing}; }
};

struct RangeBearing {
  double range = 0.0;
  double bearing = 0.0;
  bool degenerate = false;  // coincident positions, bearing undefined
};

/// Range-bearing observation model: Euclidean distance and the target bearing
/// relative to the observer heading, wrapped to (-pi, pi].
RangeBearing range_bearing(const Vec3& observer, const Vec3& target);
RangeBearing range_bearing(const RobotState& observer, const RobotState& target);

/// Noise-free measurement as a vector; used by the filters when propagating
/// cubature/sigma points through the observation model.
Vec2 range_bearing_vec(const Vec3& observer, const Vec3& target);

/// Jacobians of range_bearing_vec with respect to the observer / target state.
Mat23 range_bearing_jacobian_observer(const Vec3& observer, const Vec3& target);
Mat23 range_bearing_jacobian_target(const Vec3& observer, const Vec3& target);

/// Generates one measurement per ordered pair within `radius` (boundary
/// inclusive). Noise is drawn from an independent substream per ordered pair
/// per step, so output does not depend on iteration order.
std::vector<RelativeMeasurement> sense(std::span<const RobotState> world,
                                       const NoiseConfig& noise, double radius,
                                       std::uint64_t seed, int step);

}  // namespace mrcl
