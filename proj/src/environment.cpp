#include "rlp/environment.hpp"

#include <stdexcept>

#include "rlp/work.hpp"

namespace rlp {

Environment::Environment(std::vector<Vec3> points, std::vector<Aabb> boxes,
                         std::vector<AttachedObject> attached, double cell)
    : points_(std::move(points)), boxes_(std::move(boxes)), attached_(std::move(attached)), cell_(cell) {
  if (!(cell_ > 0.0)) throw std::invalid_argument("Environment: grid cell size must be positive");
  for (const auto& b : boxes_) {
    if (!(b.min.array() < b.max.array()).all()) {
      throw std::invalid_argument("Environment: box min must be < max componentwise");
    }
  }
  rebuild_index();
}

void Environment::add_points(const std::vector<Vec3>& pts) {
  points_.insert(points_.end(), pts.begin(), pts.end());
  rebuild_index();
}

void Environment::add_box(const Aabb& box) {
  if (!(box.min.array() < box.max.array()).all()) {
    throw std::invalid_argument("Environment: box min must be < max componentwise");
  }
  boxes_.push_back(box);
}

void Environment::attach(AttachedObject obj) { attached_.push_back(std::move(obj)); }

void Environment::rebuild_index() {
  cell_start_.assign(1, 0);
  cell_points_.clear();
  dims_.setZero();
  if (points_.empty()) return;

  Vec3 lo = points_.front();
  Vec3 hi = points_.front();
  for (const auto& p : points_) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  origin_ = lo;
  for (int a = 0; a < 3; ++a) {
    dims_[a] = static_cast<int>(std::floor((hi[a] - lo[a]) / cell_)) + 1;
  }
  const std::size_t ncell = static_cast<std::size_t>(dims_.x()) * static_cast<std::size_t>(dims_.y()) *
                            static_cast<std::size_t>(dims_.z());
  std::vector<int> cell_of(points_.size());
  std::vector<int> counts(ncell + 1, 0);
  for (std::size_t i = 0; i < points_.size(); ++i) {
    Eigen::Vector3i c;
    for (int a = 0; a < 3; ++a) {
      c[a] = std::min(static_cast<int>(std::floor((points_[i][a] - origin_[a]) / cell_)), dims_[a] - 1);
    }
    const int linear = (c.z() * dims_.y() + c.y()) * dims_.x() + c.x();
    cell_of[i] = linear;
    ++counts[static_cast<std::size_t>(linear) + 1];
  }
  for (std::size_t i = 1; i < counts.size(); ++i) counts[i] += counts[i - 1];
  cell_start_ = counts;
  cell_points_.assign(points_.size(), 0);
  std::vector<int> fill(counts.begin(), counts.end() - 1);
  for (std::size_t i = 0; i < points_.size(); ++i) {
    cell_points_[static_cast<std::size_t>(fill[static_cast<std::size_t>(cell_of[i])]++)] = static_cast<int>(i);
  }
}

std::vector<Vec3> ObstacleView::points() const {
  std::vector<Vec3> out;
  if (env == nullptr) return out;
  if (std::isinf(radius)) return env->points();
  env->for_each_point_in_ball(center, radius,
                              [&](int i) { out.push_back(env->points()[static_cast<std::size_t>(i)]); });
  return out;
}

std::vector<Aabb> ObstacleView::boxes() const {
  std::vector<Aabb> out;
  if (env == nullptr) return out;
  for (int i : box_ids) out.push_back(env->boxes()[static_cast<std::size_t>(i)]);
  return out;
}

bool ObstacleView::empty() const {
  if (env == nullptr) return true;
  if (!box_ids.empty()) return false;
  if (std::isinf(radius)) return env->points().empty();
  return !env->any_point_in_ball(center, radius, [](int) { return true; });
}

namespace {

double attached_reach(const Environment& env) {
  double r = 0.0;
  for (const auto& obj : env.attached()) {
    for (const auto& s : obj.spheres) r = std::max(r, s.center.norm() + s.radius);
  }
  return r;
}

}  // namespace

ObstacleView sample_env(const Environment& env, const RobotModel& model, const RobotState& q,
                        double t) {
  (void)t;  // static scenes
  ObstacleView view;
  view.env = &env;
  view.center = Vec3(q.positions[0], q.positions[1], 0.0);
  view.radius = model.bounding_radius() + attached_reach(env) + env.view_padding();
  for (std::size_t i = 0; i < env.boxes().size(); ++i) {
    const auto& b = env.boxes()[i];
    if (point_box_distance(view.center, b.min, b.max) <= view.radius) {
      view.box_ids.push_back(static_cast<int>(i));
    }
  }
  return view;
}

ObstacleView full_view(const Environment& env) {
  ObstacleView view;
  view.env = &env;
  for (std::size_t i = 0; i < env.boxes().size(); ++i) view.box_ids.push_back(static_cast<int>(i));
  return view;
}

void place_spheres(const RobotModel& model, const VecX& q, const Environment* env,
                   std::vector<PlacedSphere>& out) {
  thread_local std::vector<Iso3> frames;
  link_frames(model, q, frames);
  out.clear();
  for (const auto& s : model.spheres()) {
    out.push_back({frames[static_cast<std::size_t>(s.link)] * s.center, s.radius, s.link});
  }
  if (env != nullptr) {
    for (const auto& obj : env->attached()) {
      const Iso3& f = frames[static_cast<std::size_t>(obj.link)];
      for (const auto& s : obj.spheres) out.push_back({f * s.center, s.radius, obj.link});
    }
  }
}

namespace {

bool self_collision(const RobotModel& model, const std::vector<PlacedSphere>& spheres) {
  for (const auto& [a, b] : model.self_pairs()) {
    const auto& sa = spheres[static_cast<std::size_t>(a)];
    const auto& sb = spheres[static_cast<std::size_t>(b)];
    const double r = sa.radius + sb.radius;
    if ((sa.center - sb.center).squaredNorm() < r * r) return true;
  }
  // attached spheres against robot spheres on links at least two joints away
  const std::size_t n_robot = model.spheres().size();
  for (std::size_t i = n_robot; i < spheres.size(); ++i) {
    for (std::size_t j = 0; j < n_robot; ++j) {
      if (std::abs(spheres[i].link - spheres[j].link) < 2) continue;
      const double r = spheres[i].radius + spheres[j].radius;
      if ((spheres[i].center - spheres[j].center).squaredNorm() < r * r) return true;
    }
  }
  return false;
}

}  // namespace

bool in_self_collision(const RobotModel& model, const VecX& q, const Environment* env) {
  thread_local std::vector<PlacedSphere> spheres;
  place_spheres(model, q, env, spheres);
  return self_collision(model, spheres);
}

bool is_collision(const RobotModel& model, const VecX& q, const ObstacleView& view, double margin) {
  work::charge(Work::kCollisionCheck);
  thread_local std::vector<PlacedSphere> spheres;
  place_spheres(model, q, view.env, spheres);
  if (self_collision(model, spheres)) return true;
  if (view.env == nullptr) return false;
  const Environment& env = *view.env;

  std::uint64_t point_tests = 0;
  bool hit = false;
  for (const auto& s : spheres) {
    const double reach = s.radius + margin;
    for (int b : view.box_ids) {
      const auto& box = env.boxes()[static_cast<std::size_t>(b)];
      work::charge(Work::kBoxTest);
      if (point_box_distance(s.center, box.min, box.max) <= reach) {
        hit = true;
        break;
      }
    }
    if (hit) break;
    hit = env.any_point_in_ball(s.center, reach, [&](int idx) {
      ++point_tests;
      return view.contains(env.points()[static_cast<std::size_t>(idx)]);
    });
    if (hit) break;
  }
  work::charge(Work::kPointTest, point_tests);
  return hit;
}

bool is_collision(const RobotModel& model, const VecX& q, const Environment& env, double margin) {
  return is_collision(model, q, full_view(env), margin);
}

double min_clearance(const RobotModel& model, const RobotState& q, const ObstacleView& view,
                     double cap) {
  if (view.env == nullptr) return std::isinf(cap) ? cap : cap;
  const Environment& env = *view.env;
  thread_local std::vector<PlacedSphere> spheres;
  place_spheres(model, q.positions, &env, spheres);

  double best = std::numeric_limits<double>::infinity();
  const bool capped = std::isfinite(cap);
  std::vector<Vec3> all;
  if (!capped) all = view.points();
  for (const auto& s : spheres) {
    for (int b : view.box_ids) {
      const auto& box = env.boxes()[static_cast<std::size_t>(b)];
      best = std::min(best, point_box_distance(s.center, box.min, box.max) - s.radius);
    }
    if (capped) {
      env.for_each_point_in_ball(s.center, s.radius + cap, [&](int idx) {
        const Vec3& p = env.points()[static_cast<std::size_t>(idx)];
        if (view.contains(p)) best = std::min(best, (p - s.center).norm() - s.radius);
      });
    } else {
      for (const auto& p : all) best = std::min(best, (p - s.center).norm() - s.radius);
    }
  }
  return capped ? std::min(best, cap) : best;
}

}  // namespace rlp
