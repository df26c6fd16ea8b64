#pragma once

#include <Eigen/Dense>
#include <vector>

namespace mrcl {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat32 = Eigen::Matrix<double, 3, 2>;
using Mat23 = Eigen::Matrix<double, 2, 3>;

/// Ground-truth pose of one robot. theta is kept wrapped to (-pi, pi].
struct RobotState {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Vec3 vec() const { return {x, y, theta}; }
  Vec2 position() const { return {x, y}; }
  static RobotState from_vec(const Vec3& v) { return {v(0), v(1), v(2)}; }
};

struct ControlInput {
  double v = 0.0;      // linear velocity, m/s
  double omega = 0.0;  // angular velocity, rad/s
};

struct ControlLimits {
  double v_max = 0.2;
  double omega_max = 2.5;
};

struct ControlGains {
  double k_v = 1.0;
  double k_omega = 2.0;
};

struct Waypoint {
  double x = 0.0;
  double y = 0.0;
  double arrival_tolerance = 0.05;  // > 0
};

/// Discrete unicycle update: Euler step of the planar kinematics, heading
/// wrapped back to (-pi, pi].
RobotState step_unicycle(const RobotState& state, const ControlInput& u, double dt);
Vec3 step_unicycle(const Vec3& state, const ControlInput& u, double dt);

/// Jacobian of step_unicycle with respect to the state.
Mat3 step_unicycle_jacobian(const Vec3& state, const ControlInput& u, double dt);

/// Proportional waypoint tracker: v = clamp(k_v * distance),
/// omega = clamp(k_omega * heading error). Stops inside the arrival tolerance.
ControlInput leader_follower_control(const RobotState& self, const Waypoint& target,
                                     const ControlGains& gains, const ControlLimits& limits);

/// Places n robots on a ceil(sqrt(n))-column grid centered in a
/// width x height area (origin at the area center), headings zero.
/// Throws std::invalid_argument when the grid spacing would fall below
/// min_spacing.
std::vector<RobotState> init_lattice(int n, double width, double height,
                                     double min_spacing = 0.0);

}  // namespace mrcl
