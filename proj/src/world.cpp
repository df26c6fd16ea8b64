#include "mrcl/world.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mrcl/angles.hpp"

namespace mrcl {

Vec3 step_unicycle(const Vec3& state, const ControlInput& u, double dt) {
  Vec3 next;
  next(0) = state(0) + u.v * std::cos(state(2)) * dt;
  next(1) = state(1) + u.v * std::sin(state(2)) * dt;
  next(2) = wrap_angle(state(2) + u.omega * dt);
  return next;
}

RobotState step_unicycle(const RobotState& state, const ControlInput& u, double dt) {
  return RobotState::from_vec(step_unicycle(state.vec(), u, dt));
}

Mat3 step_unicycle_jacobian(const Vec3& state, const ControlInput& u, double dt) {
  Mat3 f = Mat3::Identity();
  f(0, 2) = -u.v * std::sin(state(2)) * dt;
  f(1, 2) = u.v * std::cos(state(2)) * dt;
  return f;
}

ControlInput leader_follower_control(const RobotState& self, const Waypoint& target,
                                     const ControlGains& gains, const ControlLimits& limits) {
  const double dx = target.x - self.x;
  const double dy = target.y - self.y;
  const double distance = std::hypot(dx, dy);
  if (distance <= target.arrival_tolerance) return {0.0, 0.0};

  const double heading_error = wrap_angle(std::atan2(dy, dx) - self.theta);
  ControlInput u;
  u.v = std::clamp(gains.k_v * distance, 0.0, limits.v_max);
  u.omega = std::clamp(gains.k_omega * heading_error, -limits.omega_max, limits.omega_max);
  return u;
}

std::vector<RobotState> init_lattice(int n, double width, double height, double min_spacing) {
  if (n < 1) throw std::invalid_argument("init_lattice: n must be >= 1");
  if (width <= 0.0 || height <= 0.0)
    throw std::invalid_argument("init_lattice: area dimensions must be positive");

  const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  const int rows = (n + cols - 1) / cols;
  const double spacing_x = width / (cols + 1);
  const double spacing_y = height / (rows + 1);
  if (spacing_x < min_spacing || spacing_y < min_spacing)
    throw std::invalid_argument("init_lattice: " + std::to_string(n) +
                                " robots exceed grid capacity at minimum spacing " +
                                std::to_string(min_spacing));

  std::vector<RobotState> states;
  states.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int row = i / cols;
    const int col = i % cols;
    RobotState s;
    s.x = -0.5 * width + spacing_x * (col + 1);
    s.y = -0.5 * height + spacing_y * (row + 1);
    s.theta = 0.0;
    states.push_back(s);
  }
  return states;
}

}  // namespace mrcl
