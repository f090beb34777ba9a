#pragma once

#include <array>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rlp/environment.hpp"
#include "rlp/model.hpp"
#include "rlp/timing.hpp"

namespace rlp {

using Rng = std::mt19937_64;

struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double v, double tol = 0.0) const { return v >= lower - tol && v <= upper + tol; }
  double width() const { return upper - lower; }
};

/// Task-space region: box of allowed displacements (x, y, z, roll, pitch, yaw)
/// of the end-effector, expressed in the reference frame.
struct EePoseConstraint {
  static constexpr double kPositionTolerance = 1e-4;
  static constexpr double kRotationTolerance = 1e-3;

  Pose reference;
  std::array<Interval, 6> bounds{};

  static EePoseConstraint exact(const Pose& reference) { return {reference, {}}; }
};

/// Intervals over a subset of DOFs (by index).
struct JointConstraint {
  std::vector<std::pair<int, Interval>> intervals;
};

struct GoalConstraint {
  std::variant<EePoseConstraint, JointConstraint> value;

  bool is_ee() const { return std::holds_alternative<EePoseConstraint>(value); }
  const EePoseConstraint& ee() const { return std::get<EePoseConstraint>(value); }
  const JointConstraint& joint() const { return std::get<JointConstraint>(value); }
};
using GoalConstraintSet = std::vector<GoalConstraint>;

enum class SoftKind { kBaseDisplacement, kClearance, kJointPreference };

struct SoftConstraint {
  SoftKind kind = SoftKind::kBaseDisplacement;
  double weight = 1.0;
  double clearance_cap = 0.5;                   // clearance kind [m]
  std::vector<std::pair<int, double>> preferred;  // joint-preference kind: (DOF, value)
};
using SoftConstraintSet = std::vector<SoftConstraint>;

SoftKind soft_kind_from_string(const std::string& s);  // throws ConfigError
std::string to_string(SoftKind k);

std::vector<EePoseConstraint> extract_ee_constraints(const GoalConstraintSet& goals);

/// Displacement (x, y, z, roll, pitch, yaw) of pose relative to the reference.
std::array<double, 6> displacement(const EePoseConstraint& c, const Iso3& pose);

bool satisfies(const EePoseConstraint& c, const Iso3& ee_pose);
bool satisfies(const EePoseConstraint& c, const RobotModel& model, const RobotState& q);
bool satisfies(const JointConstraint& c, const RobotState& q, double tol = 0.0);
bool satisfies(const GoalConstraint& c, const RobotModel& model, const RobotState& q);
bool satisfies_any(const GoalConstraintSet& goals, const RobotModel& model, const RobotState& q);

/// Distance of a pose to the region: translation to the nearest point of the
/// position box, and geodesic angle to the nearest rotation of the RPY box.
struct RegionError {
  double translation = 0.0;
  double rotation = 0.0;
};
RegionError region_error(const EePoseConstraint& c, const Iso3& ee_pose);

/// Tolerance test of a reached state against any goal: end-effector goals use
/// region_error, joint goals interval containment with pos_tol slack.
bool goal_reached(const RobotModel& model, const RobotState& q, const GoalConstraintSet& goals, double pos_tol,
                  double rot_tol);

Pose sample_goal_pose(const EePoseConstraint& c, Rng& rng);

/// Uniform sample of a joint constraint; unconstrained DOFs uniform in model limits.
RobotState sample_joint_goal(const JointConstraint& c, const RobotModel& model, Rng& rng);

/// weight * kind score; higher is better. env may be null for the clearance kind.
double evaluate_soft(const SoftConstraint& c, const RobotModel& model, const Trajectory& q,
                     const Environment* env);

}  // namespace rlp
