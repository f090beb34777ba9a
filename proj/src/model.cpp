#include "rlp/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json_util.hpp"
#include "rlp/work.hpp"

namespace rlp {

RobotModel::RobotModel(std::string name, std::vector<DofLimits> base_limits,
                       std::vector<JointSpec> joints, int ee_link, Iso3 tool_offset,
                       std::vector<CollisionSphere> link_spheres,
                       std::vector<CollisionSphere> base_footprint, BaseSeedHeuristic heuristic)
    : name_(std::move(name)),
      joints_(std::move(joints)),
      ee_link_(ee_link),
      tool_offset_(tool_offset),
      heuristic_(heuristic) {
  if (base_limits.size() != kBaseDofs) {
    throw ConfigError("model " + name_ + ": base needs exactly 3 DOF limits");
  }
  limits_ = std::move(base_limits);
  dof_names_ = {"base_x", "base_y", "base_yaw"};
  for (auto& j : joints_) {
    j.axis.normalize();
    limits_.push_back(j.limits);
    dof_names_.push_back(j.name);
  }
  for (auto s : base_footprint) {
    s.link = 0;
    spheres_.push_back(s);
  }
  spheres_.insert(spheres_.end(), link_spheres.begin(), link_spheres.end());
  validate();

  for (std::size_t a = 0; a < spheres_.size(); ++a) {
    for (std::size_t b = a + 1; b < spheres_.size(); ++b) {
      if (std::abs(spheres_[a].link - spheres_[b].link) >= 2) {
        self_pairs_.emplace_back(static_cast<int>(a), static_cast<int>(b));
      }
    }
  }

  std::vector<double> reach(static_cast<std::size_t>(num_links()), 0.0);
  for (int i = 0; i < num_joints(); ++i) {
    const auto& j = joints_[static_cast<std::size_t>(i)];
    double travel = j.origin.translation().norm();
    if (j.type == JointType::kPrismatic) {
      travel += std::max(std::abs(j.limits.lower), std::abs(j.limits.upper));
    }
    reach[static_cast<std::size_t>(i + 1)] = reach[static_cast<std::size_t>(i)] + travel;
  }
  for (const auto& s : spheres_) {
    bounding_radius_ = std::max(
        bounding_radius_, reach[static_cast<std::size_t>(s.link)] + s.center.norm() + s.radius);
  }
  if (ee_link_ >= 0) {
    bounding_radius_ = std::max(bounding_radius_, reach[static_cast<std::size_t>(ee_link_)] +
                                                      tool_offset_.translation().norm());
  }

  weights_ = max_velocities().cwiseInverse();
}

void RobotModel::validate() const {
  for (int i = 0; i < dof(); ++i) {
    const auto& l = limits_[static_cast<std::size_t>(i)];
    const std::string& n = dof_names_[static_cast<std::size_t>(i)];
    if (!(l.lower < l.upper)) {
      throw ConfigError("model " + name_ + ": joint '" + n + "' needs lower < upper");
    }
    if (!(l.max_velocity > 0.0) || !(l.max_acceleration > 0.0)) {
      throw ConfigError("model " + name_ + ": joint '" + n +
                        "' needs positive max velocity and acceleration");
    }
  }
  for (const auto& j : joints_) {
    if (!(j.axis.norm() > 0.0)) throw ConfigError("model " + name_ + ": joint '" + j.name + "' has a zero axis");
  }
  for (const auto& s : spheres_) {
    if (!(s.radius > 0.0)) throw ConfigError("model " + name_ + ": collision sphere radius must be > 0");
    if (s.link < 0 || s.link > num_joints()) {
      throw ConfigError("model " + name_ + ": collision sphere link " + std::to_string(s.link) +
                        " out of range");
    }
  }
  if (ee_link_ < 0 || ee_link_ > num_joints()) {
    throw ConfigError("model " + name_ + ": ee_link out of range");
  }
}

int RobotModel::dof_index(std::string_view name) const {
  for (std::size_t i = 0; i < dof_names_.size(); ++i) {
    if (dof_names_[i] == name) return static_cast<int>(i);
  }
  return -1;
}

VecX RobotModel::max_velocities() const {
  VecX v(dof());
  for (int i = 0; i < dof(); ++i) v[i] = limits_[static_cast<std::size_t>(i)].max_velocity;
  return v;
}

VecX RobotModel::max_accelerations() const {
  VecX a(dof());
  for (int i = 0; i < dof(); ++i) a[i] = limits_[static_cast<std::size_t>(i)].max_acceleration;
  return a;
}

bool RobotModel::within_limits(const VecX& q, double tol) const {
  if (q.size() != dof()) return false;
  for (int i = 0; i < dof(); ++i) {
    if (i == kYaw) continue;
    const auto& l = limits_[static_cast<std::size_t>(i)];
    if (q[i] < l.lower - tol || q[i] > l.upper + tol) return false;
  }
  return true;
}

VecX RobotModel::clamp(const VecX& q) const {
  VecX out = q;
  for (int i = 0; i < dof(); ++i) {
    if (i == kYaw) {
      out[i] = wrap_angle(out[i]);
      continue;
    }
    const auto& l = limits_[static_cast<std::size_t>(i)];
    out[i] = std::clamp(out[i], l.lower, l.upper);
  }
  return out;
}

namespace {

using detail::Json;

DofLimits parse_limits(const Json& j, const std::string& path) {
  DofLimits l;
  l.lower = detail::number(j, "lower", path);
  l.upper = detail::number(j, "upper", path);
  l.max_velocity = detail::number(j, "max_velocity", path);
  l.max_acceleration = detail::number(j, "max_acceleration", path);
  return l;
}

CollisionSphere parse_sphere(const Json& j, const std::string& path, bool with_link) {
  CollisionSphere s;
  if (with_link) {
    const Json& link = detail::field(j, "link", path);
    if (!link.is_number_integer()) throw ConfigError(path + ".link: expected an integer");
    s.link = link.get<int>();
  }
  s.center = detail::vec3(detail::field(j, "center", path), path + ".center");
  s.radius = detail::number(j, "radius", path);
  return s;
}

}  // namespace

RobotModel load_robot_model(std::string_view json_text) {
  const Json root = detail::parse_json(json_text, "robot model");
  const std::string path = "model";
  const Json& name = detail::field(root, "name", path);
  if (!name.is_string()) throw ConfigError("model.name: expected a string");

  std::vector<DofLimits> base;
  const Json& base_json = detail::field(root, "base_limits", path);
  if (!base_json.is_array() || base_json.size() != 3) {
    throw ConfigError("model.base_limits: expected 3 entries (x, y, yaw)");
  }
  for (std::size_t i = 0; i < 3; ++i) {
    base.push_back(parse_limits(base_json[i], "model.base_limits[" + std::to_string(i) + "]"));
  }

  std::vector<JointSpec> joints;
  const Json& joints_json = detail::field(root, "joints", path);
  if (!joints_json.is_array()) throw ConfigError("model.joints: expected an array");
  for (std::size_t i = 0; i < joints_json.size(); ++i) {
    const Json& jj = joints_json[i];
    const std::string jp = "model.joints[" + std::to_string(i) + "]";
    JointSpec spec;
    const Json& jn = detail::field(jj, "name", jp);
    if (!jn.is_string()) throw ConfigError(jp + ".name: expected a string");
    spec.name = jn.get<std::string>();
    const Json& type = detail::field(jj, "type", jp);
    if (type == "revolute") {
      spec.type = JointType::kRevolute;
    } else if (type == "prismatic") {
      spec.type = JointType::kPrismatic;
    } else {
      throw ConfigError(jp + ".type: expected revolute or prismatic");
    }
    spec.axis = detail::vec3(detail::field(jj, "axis", jp), jp + ".axis");
    if (jj.contains("origin")) spec.origin = detail::transform(jj.at("origin"), jp + ".origin");
    spec.limits = parse_limits(jj, jp);
    joints.push_back(std::move(spec));
  }

  const Json& ee = detail::field(root, "ee_link", path);
  if (!ee.is_number_integer()) throw ConfigError("model.ee_link: expected an integer");
  Iso3 tool = Iso3::Identity();
  if (root.contains("tool_offset")) tool = detail::transform(root.at("tool_offset"), "model.tool_offset");

  std::vector<CollisionSphere> spheres;
  if (root.contains("collision_spheres")) {
    const Json& arr = root.at("collision_spheres");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      spheres.push_back(parse_sphere(arr[i], "model.collision_spheres[" + std::to_string(i) + "]", true));
    }
  }
  std::vector<CollisionSphere> footprint;
  if (root.contains("base_footprint_spheres")) {
    const Json& arr = root.at("base_footprint_spheres");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      footprint.push_back(
          parse_sphere(arr[i], "model.base_footprint_spheres[" + std::to_string(i) + "]", false));
    }
  }

  BaseSeedHeuristic heuristic;
  if (root.contains("ik_base_heuristic")) {
    const Json& h = root.at("ik_base_heuristic");
    const std::string hp = "model.ik_base_heuristic";
    heuristic.enabled = h.value("enabled", false);
    heuristic.lateral_offset = detail::number_or(h, "lateral_offset", 0.0, hp);
    if (h.contains("reach")) {
      const Json& r = h.at("reach");
      if (!r.is_array() || r.size() != 2) throw ConfigError(hp + ".reach: expected [min, max]");
      heuristic.reach_min = r[0].get<double>();
      heuristic.reach_max = r[1].get<double>();
    }
  }

  return RobotModel(name.get<std::string>(), std::move(base), std::move(joints), ee.get<int>(), tool,
                    std::move(spheres), std::move(footprint), heuristic);
}

RobotModel load_robot_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open robot model file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_robot_model(ss.str());
}

RobotModel bundled_robot_model(const std::string& name_or_path) {
  if (name_or_path == "hsr-like" || name_or_path == "panda-like") {
    return load_robot_model_file(std::string(RLP_MODEL_DIR) + "/" + name_or_path + ".json");
  }
  return load_robot_model_file(name_or_path);
}

void link_frames(const RobotModel& model, const VecX& q, std::vector<Iso3>& frames) {
  if (q.size() != model.dof()) {
    throw std::invalid_argument("link_frames: state has " + std::to_string(q.size()) +
                                " DOFs, model has " + std::to_string(model.dof()));
  }
  work::charge(Work::kForwardKinematics);
  frames.resize(static_cast<std::size_t>(model.num_links()));
  Iso3 base = Iso3::Identity();
  base.linear() = Eigen::AngleAxisd(q[2], Vec3::UnitZ()).toRotationMatrix();
  base.translation() = Vec3(q[0], q[1], 0.0);
  frames[0] = base;
  const auto& joints = model.joints();
  for (std::size_t i = 0; i < joints.size(); ++i) {
    const auto& j = joints[i];
    const double v = q[static_cast<Eigen::Index>(i) + RobotModel::kBaseDofs];
    Iso3 motion = Iso3::Identity();
    if (j.type == JointType::kRevolute) {
      motion.linear() = Eigen::AngleAxisd(v, j.axis).toRotationMatrix();
    } else {
      motion.translation() = j.axis * v;
    }
    frames[i + 1] = frames[i] * j.origin * motion;
  }
}

Iso3 ee_transform(const RobotModel& model, const VecX& q) {
  thread_local std::vector<Iso3> frames;
  link_frames(model, q, frames);
  return frames[static_cast<std::size_t>(model.ee_link())] * model.tool_offset();
}

std::vector<Pose> forward_kinematics(const RobotModel& model, const RobotState& state) {
  std::vector<Iso3> frames;
  link_frames(model, state.positions, frames);
  std::vector<Pose> out;
  out.reserve(frames.size() + 1);
  for (const auto& f : frames) out.push_back(Pose::from_isometry(f));
  out.push_back(Pose::from_isometry(frames[static_cast<std::size_t>(model.ee_link())] * model.tool_offset()));
  return out;
}

VecX state_delta(const VecX& a, const VecX& b) {
  VecX d = b - a;
  d[RobotModel::kYaw] = shortest_arc(a[RobotModel::kYaw], b[RobotModel::kYaw]);
  return d;
}

VecX interpolate_positions(const VecX& a, const VecX& b, double s) {
  VecX out = (1.0 - s) * a + s * b;
  out[RobotModel::kYaw] = wrap_angle(a[RobotModel::kYaw] + s * shortest_arc(a[RobotModel::kYaw], b[RobotModel::kYaw]));
  return out;
}

RobotState interpolate(const RobotModel& model, const RobotState& a, const RobotState& b, double s) {
  (void)model;
  if (s <= 0.0) return RobotState(a.positions);
  if (s >= 1.0) return RobotState(b.positions);
  return RobotState(interpolate_positions(a.positions, b.positions, s));
}

double state_distance(const RobotModel& model, const VecX& a, const VecX& b) {
  return state_delta(a, b).cwiseProduct(model.distance_weights()).norm();
}

double state_distance(const RobotModel& model, const RobotState& a, const RobotState& b) {
  return state_distance(model, a.positions, b.positions);
}

}  // namespace rlp
