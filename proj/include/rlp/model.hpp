#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rlp/geometry.hpp"

namespace rlp {

/// Malformed configuration, scenario or model file.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class JointType { kRevolute, kPrismatic };

struct DofLimits {
  double lower = 0.0;
  double upper = 0.0;
  double max_velocity = 1.0;
  double max_acceleration = 1.0;
};

struct JointSpec {
  std::string name;
  JointType type = JointType::kRevolute;
  Vec3 axis = Vec3::UnitZ();
  Iso3 origin = Iso3::Identity();
  DofLimits limits;
};

/// Sphere rigidly attached to a link frame. Link 0 is the base frame.
struct CollisionSphere {
  int link = 0;
  Vec3 center = Vec3::Zero();
  double radius = 0.0;
};

/// Places the base so the target lies in the arm's working plane before the
/// numeric IK polish (hybrid IK seeding for planar-arm robots).
struct BaseSeedHeuristic {
  bool enabled = false;
  double lateral_offset = 0.0;  // arm plane offset along base y [m]
  double reach_min = 0.3;       // horizontal base-to-target distance range [m]
  double reach_max = 0.7;
};

/// Joint vector over all DOFs: base x, y, yaw, then arm joints.
struct RobotState {
  VecX positions;
  VecX velocities;

  RobotState() = default;
  explicit RobotState(Eigen::Index dof) : positions(VecX::Zero(dof)), velocities(VecX::Zero(dof)) {}
  explicit RobotState(VecX q) : positions(std::move(q)), velocities(VecX::Zero(positions.size())) {}
  RobotState(VecX q, VecX v) : positions(std::move(q)), velocities(std::move(v)) {}

  Eigen::Index size() const { return positions.size(); }
  Vec3 base() const { return {positions[0], positions[1], positions[2]}; }
};

/// Immutable mobile-manipulator kinematic description.
class RobotModel {
 public:
  static constexpr int kBaseDofs = 3;
  static constexpr int kYaw = 2;

  RobotModel(std::string name, std::vector<DofLimits> base_limits, std::vector<JointSpec> joints,
             int ee_link, Iso3 tool_offset, std::vector<CollisionSphere> link_spheres,
             std::vector<CollisionSphere> base_footprint, BaseSeedHeuristic heuristic = {});

  const std::string& name() const { return name_; }
  int dof() const { return static_cast<int>(limits_.size()); }
  int num_joints() const { return static_cast<int>(joints_.size()); }
  int num_links() const { return num_joints() + 1; }
  const std::vector<JointSpec>& joints() const { return joints_; }
  const DofLimits& limits(int i) const { return limits_[static_cast<std::size_t>(i)]; }
  const std::vector<DofLimits>& limits() const { return limits_; }
  const std::string& dof_name(int i) const { return dof_names_[static_cast<std::size_t>(i)]; }
  int dof_index(std::string_view name) const;  // -1 if unknown
  int ee_link() const { return ee_link_; }
  const Iso3& tool_offset() const { return tool_offset_; }
  /// All robot spheres, base footprint included (link 0).
  const std::vector<CollisionSphere>& spheres() const { return spheres_; }
  /// Sphere index pairs checked for self-collision.
  const std::vector<std::pair<int, int>>& self_pairs() const { return self_pairs_; }
  /// Upper bound on the distance from the base origin to any point of the robot.
  double bounding_radius() const { return bounding_radius_; }
  /// Reciprocal max velocities: the default state-distance weights.
  const VecX& distance_weights() const { return weights_; }
  const BaseSeedHeuristic& base_seed_heuristic() const { return heuristic_; }

  VecX max_velocities() const;
  VecX max_accelerations() const;
  bool within_limits(const VecX& q, double tol = 1e-9) const;
  /// Clamps to limits and wraps yaw.
  VecX clamp(const VecX& q) const;

 private:
  void validate() const;

  std::string name_;
  std::vector<DofLimits> limits_;
  std::vector<JointSpec> joints_;
  std::vector<std::string> dof_names_;
  int ee_link_;
  Iso3 tool_offset_;
  std::vector<CollisionSphere> spheres_;
  std::vector<std::pair<int, int>> self_pairs_;
  double bounding_radius_ = 0.0;
  VecX weights_;
  BaseSeedHeuristic heuristic_;
};

/// Parses a JSON model description.
RobotModel load_robot_model(std::string_view json_text);
RobotModel load_robot_model_file(const std::string& path);
/// Loads one of the bundled models ("hsr-like", "panda-like") or a file path.
RobotModel bundled_robot_model(const std::string& name_or_path);

/// World frames of every link (index 0 = base) for positions q.
void link_frames(const RobotModel& model, const VecX& q, std::vector<Iso3>& frames);
/// World pose of the end-effector (ee link frame composed with the tool offset).
Iso3 ee_transform(const RobotModel& model, const VecX& q);

/// Poses of all link frames followed by the end-effector frame.
std::vector<Pose> forward_kinematics(const RobotModel& model, const RobotState& state);

RobotState interpolate(const RobotModel& model, const RobotState& a, const RobotState& b, double s);
VecX interpolate_positions(const VecX& a, const VecX& b, double s);

/// Weighted Euclidean distance, yaw taken along the shorter arc.
double state_distance(const RobotModel& model, const RobotState& a, const RobotState& b);
double state_distance(const RobotModel& model, const VecX& a, const VecX& b);

/// Position difference b - a with the yaw component on the shorter arc.
VecX state_delta(const VecX& a, const VecX& b);

}  // namespace rlp
