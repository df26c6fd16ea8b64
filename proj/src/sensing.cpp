#include "mrcl/sensing.hpp"

#include <cmath>

#include "mrcl/angles.hpp"
#include "mrcl/rng.hpp"

namespace mrcl {

RangeBearing range_bearing(const Vec3& observer, const Vec3& target) {
  const double dx = target(0) - observer(0);
  const double dy = target(1) - observer(1);
  const double range = std::hypot(dx, dy);
  RangeBearing out;
  if (range == 0.0) {
    out.degenerate = true;
    return out;  // range 0, bearing 0 by convention
  }
  out.range = range;
  out.bearing = wrap_angle(std::atan2(dy, dx) - observer(2));
  return out;
}

RangeBearing range_bearing(const RobotState& observer, const RobotState& target) {
  return range_bearing(observer.vec(), target.vec());
}

Vec2 range_bearing_vec(const Vec3& observer, const Vec3& target) {
  const RangeBearing rb = range_bearing(observer, target);
  return {rb.range, rb.bearing};
}

Mat23 range_bearing_jacobian_observer(const Vec3& observer, const Vec3& target) {
  const double dx = target(0) - observer(0);
  const double dy = target(1) - observer(1);
  const double q = dx * dx + dy * dy;
  const double r = std::sqrt(q);
  Mat23 h;
  h << -dx / r, -dy / r, 0.0,
       dy / q, -dx / q, -1.0;
  return h;
}

Mat23 range_bearing_jacobian_target(const Vec3& observer, const Vec3& target) {
  const double dx = target(0) - observer(0);
  const double dy = target(1) - observer(1);
  const double q = dx * dx + dy * dy;
  const double r = std::sqrt(q);
  Mat23 h;
  h << dx / r, dy / r, 0.0,
       -dy / q, dx / q, 0.0;
  return h;
}

std::vector<RelativeMeasurement> sense(std::span<const RobotState> world,
                                       const NoiseConfig& noise, double radius,
                                       std::uint64_t seed, int step) {
  const int n = static_cast<int>(world.size());
  std::vector<RelativeMeasurement> out;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double dist = (world[j].position() - world[i].position()).norm();
      if (dist > radius) continue;

      const RangeBearing rb = range_bearing(world[i], world[j]);
      Rng rng = substream(seed, StreamDomain::kSense, static_cast<std::uint64_t>(step),
                          static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(n) + j);
      RelativeMeasurement m;
      m.observer = i;
      m.target = j;
      m.step = step;
      m.range = rb.range + rng.normal(noise.sigma_range);
      m.bearing = wrap_angle(rb.bearing + rng.normal(noise.sigma_bearing));
      out.push_back(m);
    }
  }
  return out;
}

}  // namespace mrcl
