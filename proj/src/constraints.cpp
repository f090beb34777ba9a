#include "rlp/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace rlp {

namespace {

constexpr double kSingularPitchBand = 0.01;

double uniform(Rng& rng, double lo, double hi) {
  if (!(hi > lo)) return lo;
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Interval test for an angle, trying the 2*pi aliases.
bool angle_in(const Interval& iv, double a, double tol) {
  return iv.contains(a, tol) || iv.contains(a + 2.0 * kPi, tol) || iv.contains(a - 2.0 * kPi, tol);
}

double clamp_angle(const Interval& iv, double a) {
  if (angle_in(iv, a, 0.0)) return a;
  double best = std::clamp(a, iv.lower, iv.upper);
  double best_err = std::abs(shortest_arc(a, best));
  for (double v : {iv.lower, iv.upper}) {
    const double err = std::abs(shortest_arc(a, v));
    if (err < best_err) {
      best = v;
      best_err = err;
    }
  }
  return best;
}

}  // namespace

SoftKind soft_kind_from_string(const std::string& s) {
  if (s == "base_displacement") return SoftKind::kBaseDisplacement;
  if (s == "clearance") return SoftKind::kClearance;
  if (s == "joint_preference") return SoftKind::kJointPreference;
  throw ConfigError("unknown soft constraint kind '" + s + "'");
}

std::string to_string(SoftKind k) {
  switch (k) {
    case SoftKind::kBaseDisplacement: return "base_displacement";
    case SoftKind::kClearance: return "clearance";
    case SoftKind::kJointPreference: return "joint_preference";
  }
  return "unknown";
}

std::vector<EePoseConstraint> extract_ee_constraints(const GoalConstraintSet& goals) {
  std::vector<EePoseConstraint> out;
  for (const auto& g : goals) {
    if (g.is_ee()) out.push_back(g.ee());
  }
  return out;
}

std::array<double, 6> displacement(const EePoseConstraint& c, const Iso3& pose) {
  const Iso3 rel = c.reference.to_isometry().inverse() * pose;
  const Vec3 rpy = matrix_to_rpy(rel.linear());
  const Vec3& t = rel.translation();
  return {t.x(), t.y(), t.z(), rpy.x(), rpy.y(), rpy.z()};
}

bool satisfies(const EePoseConstraint& c, const Iso3& ee_pose) {
  const auto d = displacement(c, ee_pose);
  for (int i = 0; i < 3; ++i) {
    if (!c.bounds[static_cast<std::size_t>(i)].contains(d[static_cast<std::size_t>(i)],
                                                        EePoseConstraint::kPositionTolerance)) {
      return false;
    }
  }
  const Interval& roll = c.bounds[3];
  const Interval& pitch = c.bounds[4];
  const Interval& yaw = c.bounds[5];
  if (std::abs(d[4]) > kPi / 2 - kSingularPitchBand) {
    // RPY is ill-conditioned here; only symmetric rotation boxes have a clean answer.
    const bool symmetric = roll.lower == -roll.upper && pitch.lower == -pitch.upper && yaw.lower == -yaw.upper;
    if (!symmetric) return false;
    const Mat3 rel = c.reference.rotation.toRotationMatrix().transpose() * ee_pose.linear();
    const double limit = std::min({roll.upper, pitch.upper, yaw.upper});
    return rotation_angle(rel) <= limit + EePoseConstraint::kRotationTolerance;
  }
  const double tol = EePoseConstraint::kRotationTolerance;
  return angle_in(roll, d[3], tol) && pitch.contains(d[4], tol) && angle_in(yaw, d[5], tol);
}

bool satisfies(const EePoseConstraint& c, const RobotModel& model, const RobotState& q) {
  return satisfies(c, ee_transform(model, q.positions));
}

bool satisfies(const JointConstraint& c, const RobotState& q, double tol) {
  for (const auto& [dof, iv] : c.intervals) {
    if (dof < 0 || dof >= q.size()) return false;
    const double v = q.positions[dof];
    const bool ok = dof == RobotModel::kYaw ? angle_in(iv, v, tol) : iv.contains(v, tol);
    if (!ok) return false;
  }
  return true;
}

bool satisfies(const GoalConstraint& c, const RobotModel& model, const RobotState& q) {
  if (c.is_ee()) return satisfies(c.ee(), model, q);
  return satisfies(c.joint(), q);
}

bool satisfies_any(const GoalConstraintSet& goals, const RobotModel& model, const RobotState& q) {
  return std::any_of(goals.begin(), goals.end(),
                     [&](const GoalConstraint& g) { return satisfies(g, model, q); });
}

RegionError region_error(const EePoseConstraint& c, const Iso3& ee_pose) {
  const auto d = displacement(c, ee_pose);
  Vec3 off;
  for (int i = 0; i < 3; ++i) {
    const auto& iv = c.bounds[static_cast<std::size_t>(i)];
    const double v = d[static_cast<std::size_t>(i)];
    off[i] = v - std::clamp(v, iv.lower, iv.upper);
  }
  const double roll = clamp_angle(c.bounds[3], d[3]);
  const double pitch = std::clamp(d[4], c.bounds[4].lower, c.bounds[4].upper);
  const double yaw = clamp_angle(c.bounds[5], d[5]);
  const Mat3 nearest = c.reference.rotation.toRotationMatrix() * rpy_to_matrix(roll, pitch, yaw);
  return {off.norm(), rotation_angle(nearest.transpose() * ee_pose.linear())};
}

bool goal_reached(const RobotModel& model, const RobotState& q, const GoalConstraintSet& goals, double pos_tol,
                  double rot_tol) {
  std::optional<Iso3> ee;
  for (const auto& g : goals) {
    if (g.is_ee()) {
      if (!ee) ee = ee_transform(model, q.positions);
      const RegionError e = region_error(g.ee(), *ee);
      if (e.translation < pos_tol && e.rotation < rot_tol) return true;
    } else if (satisfies(g.joint(), q, pos_tol)) {
      return true;
    }
  }
  return false;
}

Pose sample_goal_pose(const EePoseConstraint& c, Rng& rng) {
  std::array<double, 6> d{};
  for (std::size_t i = 0; i < 6; ++i) d[i] = uniform(rng, c.bounds[i].lower, c.bounds[i].upper);
  Iso3 local = Iso3::Identity();
  local.translation() = Vec3(d[0], d[1], d[2]);
  local.linear() = rpy_to_matrix(d[3], d[4], d[5]);
  return Pose::from_isometry(c.reference.to_isometry() * local);
}

RobotState sample_joint_goal(const JointConstraint& c, const RobotModel& model, Rng& rng) {
  VecX q(model.dof());
  for (int i = 0; i < model.dof(); ++i) {
    const auto& l = model.limits(i);
    q[i] = uniform(rng, l.lower, l.upper);
  }
  for (const auto& [dof, iv] : c.intervals) {
    if (dof < 0 || dof >= model.dof()) throw ConfigError("joint constraint DOF index out of range");
    if (dof == RobotModel::kYaw) {
      q[dof] = wrap_angle(uniform(rng, iv.lower, iv.upper));
      continue;
    }
    const auto& l = model.limits(dof);
    const double lo = std::max(iv.lower, l.lower);
    const double hi = std::min(iv.upper, l.upper);
    if (lo > hi) throw ConfigError("joint constraint on '" + model.dof_name(dof) + "' lies outside its limits");
    q[dof] = uniform(rng, lo, hi);
  }
  return RobotState(q);
}

double evaluate_soft(const SoftConstraint& c, const RobotModel& model, const Trajectory& q,
                     const Environment* env) {
  if (q.empty()) throw std::invalid_argument("evaluate_soft: empty trajectory");
  const auto& samples = q.samples();
  double score = 0.0;
  switch (c.kind) {
    case SoftKind::kBaseDisplacement: {
      double length = 0.0;
      for (std::size_t i = 1; i < samples.size(); ++i) {
        const VecX& a = samples[i - 1].state.positions;
        const VecX& b = samples[i].state.positions;
        length += std::hypot(b[0] - a[0], b[1] - a[1]);
      }
      score = -length;
      break;
    }
    case SoftKind::kClearance: {
      double best = c.clearance_cap;
      if (env != nullptr) {
        for (const auto& s : samples) {
          const ObstacleView view = sample_env(*env, model, s.state, s.t);
          best = std::min(best, min_clearance(model, s.state, view, c.clearance_cap));
        }
      }
      score = std::clamp(best, 0.0, c.clearance_cap);
      break;
    }
    case SoftKind::kJointPreference: {
      if (c.preferred.empty()) break;
      double sum = 0.0;
      for (const auto& s : samples) {
        for (const auto& [dof, value] : c.preferred) {
          const double e = dof == RobotModel::kYaw ? shortest_arc(value, s.state.positions[dof])
                                                   : s.state.positions[dof] - value;
          sum += e * e;
        }
      }
      score = -sum / static_cast<double>(samples.size() * c.preferred.size());
      break;
    }
  }
  return c.weight * score;
}

}  // namespace rlp
