#pragma once

#include "rlp/bench.hpp"
#include "rlp/io.hpp"

namespace rlp::test {

inline const RobotModel& hsr() {
  static const RobotModel model = bundled_robot_model("hsr-like");
  return model;
}

inline const RobotModel& panda() {
  static const RobotModel model = bundled_robot_model("panda-like");
  return model;
}

/// Arm folded over the base, base at (x, y, yaw).
inline RobotState stowed(double x = 0.0, double y = 0.0, double yaw = 0.0) {
  VecX q = VecX::Zero(hsr().dof());
  q << x, y, yaw, 0.0, 0.0, -kPi / 2, -kPi / 2, 0.0;
  return RobotState(q);
}

/// Top-down grasp at p; any rotation about the vertical allowed.
inline GoalConstraintSet top_grasp(const Vec3& p) {
  EePoseConstraint c;
  c.reference = Pose(p, Quat(Eigen::AngleAxisd(kPi, Vec3::UnitX())));
  c.bounds[5] = {-kPi, kPi};
  return {GoalConstraint{c}};
}

/// Scenario in an empty world: stowed robot at the origin, grasp at goal.
inline Scenario open_scenario(const Vec3& goal = {1.5, 0.5, 0.6}, std::uint64_t seed = 1) {
  Scenario s;
  s.id = "open";
  s.robot = hsr().name();
  s.start = stowed();
  s.goals = top_grasp(goal);
  s.seed = seed;
  return s;
}

/// Closed box of walls around p; nothing can reach inside.
inline Environment walled_off(const Vec3& p, double half = 0.5) {
  std::vector<Aabb> walls;
  const double t = 0.05;
  const Vec3 lo = p - Vec3::Constant(half);
  const Vec3 hi = p + Vec3::Constant(half);
  walls.push_back({Vec3(lo.x() - t, lo.y(), -0.1), Vec3(lo.x(), hi.y(), hi.z())});
  walls.push_back({Vec3(hi.x(), lo.y(), -0.1), Vec3(hi.x() + t, hi.y(), hi.z())});
  walls.push_back({Vec3(lo.x() - t, lo.y() - t, -0.1), Vec3(hi.x() + t, lo.y(), hi.z())});
  walls.push_back({Vec3(lo.x() - t, hi.y(), -0.1), Vec3(hi.x() + t, hi.y() + t, hi.z())});
  walls.push_back({Vec3(lo.x() - t, lo.y() - t, hi.z()), Vec3(hi.x() + t, hi.y() + t, hi.z() + t)});
  return Environment({}, walls);
}

}  // namespace rlp::test
