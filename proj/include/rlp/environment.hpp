#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "rlp/model.hpp"

namespace rlp {

struct Aabb {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();
};

/// Spheres rigidly attached to a robot link, e.g. a grasped object.
struct AttachedObject {
  int link = 0;
  std::vector<CollisionSphere> spheres;  // CollisionSphere::link is ignored
};

/// Static obstacle set: a point cloud with a uniform-grid index plus boxes.
class Environment {
 public:
  static constexpr double kDefaultMargin = 0.02;
  static constexpr double kDefaultCell = 0.2;

  Environment() { rebuild_index(); }
  Environment(std::vector<Vec3> points, std::vector<Aabb> boxes,
              std::vector<AttachedObject> attached = {}, double cell = kDefaultCell);

  const std::vector<Vec3>& points() const { return points_; }
  const std::vector<Aabb>& boxes() const { return boxes_; }
  const std::vector<AttachedObject>& attached() const { return attached_; }
  bool empty() const { return points_.empty() && boxes_.empty(); }

  double margin() const { return margin_; }
  void set_margin(double m) { margin_ = m; }
  /// Extra radius added to the robot's reach when cutting obstacle views.
  double view_padding() const { return view_padding_; }

  void add_points(const std::vector<Vec3>& pts);
  void add_box(const Aabb& box);
  void attach(AttachedObject obj);

  /// Calls f(index) for every point within radius r of c. Exact (not a superset).
  template <class F>
  void for_each_point_in_ball(const Vec3& c, double r, F&& f) const {
    any_point_in_ball(c, r, [&](int idx) {
      f(idx);
      return false;
    });
  }

  /// Stops at and returns true on the first in-ball point for which pred is true.
  template <class Pred>
  bool any_point_in_ball(const Vec3& c, double r, Pred&& pred) const;

 private:
  void rebuild_index();

  std::vector<Vec3> points_;
  std::vector<Aabb> boxes_;
  std::vector<AttachedObject> attached_;
  double cell_ = kDefaultCell;
  double margin_ = kDefaultMargin;
  double view_padding_ = 0.3;

  Vec3 origin_ = Vec3::Zero();
  Eigen::Vector3i dims_ = Eigen::Vector3i::Zero();
  std::vector<int> cell_start_;
  std::vector<int> cell_points_;
};

/// Obstacles relevant to one robot state: everything inside a ball around the
/// base that contains the whole robot. Point membership is tested lazily.
struct ObstacleView {
  const Environment* env = nullptr;
  Vec3 center = Vec3::Zero();
  double radius = std::numeric_limits<double>::infinity();
  std::vector<int> box_ids;

  bool contains(const Vec3& p) const { return (p - center).squaredNorm() <= radius * radius; }
  /// Materialized point subset.
  std::vector<Vec3> points() const;
  std::vector<Aabb> boxes() const;
  bool empty() const;
};

ObstacleView sample_env(const Environment& env, const RobotModel& model, const RobotState& q,
                        double t);
ObstacleView full_view(const Environment& env);

/// Sphere placements of every robot sphere plus attached objects for q.
struct PlacedSphere {
  Vec3 center;
  double radius;
  int link;
};
void place_spheres(const RobotModel& model, const VecX& q, const Environment* env,
                   std::vector<PlacedSphere>& out);

bool in_self_collision(const RobotModel& model, const VecX& q, const Environment* env = nullptr);

bool is_collision(const RobotModel& model, const VecX& q, const ObstacleView& view, double margin);
inline bool is_collision(const RobotModel& model, const RobotState& q, const ObstacleView& view,
                         double margin) {
  return is_collision(model, q.positions, view, margin);
}
/// Checks against the whole environment.
bool is_collision(const RobotModel& model, const VecX& q, const Environment& env, double margin);

/// Smallest (obstacle distance - sphere radius) over robot spheres; +inf when
/// nothing is in view. With a finite cap, obstacles farther than the cap are
/// ignored and the result is clamped to cap.
double min_clearance(const RobotModel& model, const RobotState& q, const ObstacleView& view,
                     double cap = std::numeric_limits<double>::infinity());

// ---------------------------------------------------------------------------

template <class Pred>
bool Environment::any_point_in_ball(const Vec3& c, double r, Pred&& pred) const {
  if (points_.empty()) return false;
  const double r2 = r * r;
  Eigen::Vector3i lo;
  Eigen::Vector3i hi;
  for (int a = 0; a < 3; ++a) {
    const double l = std::floor((c[a] - r - origin_[a]) / cell_);
    const double h = std::floor((c[a] + r - origin_[a]) / cell_);
    if (h < 0.0 || l > dims_[a] - 1) return false;
    lo[a] = static_cast<int>(std::max(l, 0.0));
    hi[a] = static_cast<int>(std::min(h, static_cast<double>(dims_[a] - 1)));
  }
  for (int z = lo.z(); z <= hi.z(); ++z) {
    for (int y = lo.y(); y <= hi.y(); ++y) {
      const int row = (z * dims_.y() + y) * dims_.x();
      const int begin = cell_start_[static_cast<std::size_t>(row + lo.x())];
      const int end = cell_start_[static_cast<std::size_t>(row + hi.x() + 1)];
      for (int k = begin; k < end; ++k) {
        const int idx = cell_points_[static_cast<std::size_t>(k)];
        if ((points_[static_cast<std::size_t>(idx)] - c).squaredNorm() <= r2 && pred(idx)) {
          return true;
        }
      }
    }
  }
  return false;
}

}  // namespace rlp
