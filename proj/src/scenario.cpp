#include "rlp/scenario.hpp"

#include <cmath>
#include <iostream>
#include <map>

#include "rlp/baseline.hpp"

namespace rlp {

SceneTemplate scene_template_from_string(const std::string& s) {
  for (auto t : {SceneTemplate::kTabletop, SceneTemplate::kShelf, SceneTemplate::kCorridor}) {
    if (to_string(t) == s) return t;
  }
  throw ConfigError("unknown scene template '" + s + "' (expected tabletop, shelf or corridor)");
}

std::string to_string(SceneTemplate t) {
  switch (t) {
    case SceneTemplate::kTabletop: return "tabletop";
    case SceneTemplate::kShelf: return "shelf";
    case SceneTemplate::kCorridor: return "corridor";
  }
  return "unknown";
}

namespace {

constexpr double kPointSpacing = 0.02;

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Aabb box(double x0, double y0, double z0, double x1, double y1, double z1) { return {{x0, y0, z0}, {x1, y1, z1}}; }

/// Surface points of a box on a regular grid.
void add_box_surface(const Aabb& b, std::vector<Vec3>& out) {
  const Vec3 size = b.max - b.min;
  Eigen::Vector3i n;
  for (int a = 0; a < 3; ++a) n[a] = std::max(1, static_cast<int>(std::ceil(size[a] / kPointSpacing)));
  for (int i = 0; i <= n.x(); ++i) {
    for (int j = 0; j <= n.y(); ++j) {
      for (int k = 0; k <= n.z(); ++k) {
        const bool surface = i == 0 || i == n.x() || j == 0 || j == n.y() || k == 0 || k == n.z();
        if (!surface) continue;
        out.push_back(b.min + Vec3(size.x() * i / n.x(), size.y() * j / n.y(), size.z() * k / n.z()));
      }
    }
  }
}

/// Scene in a local frame, before placement in the world.
struct Layout {
  std::vector<Aabb> boxes;
  std::vector<Vec3> points;
  Vec3 goal = Vec3::Zero();
  double surface = 0.0;
  /// Region the start base is sampled from (x/y only).
  Aabb start_region;
};

/// Object clusters on a surface, kept clear of the goal.
void add_clusters(Rng& rng, const Aabb& top, const Vec3& goal, int count, std::vector<Vec3>& out) {
  for (int c = 0, tries = 0; c < count && tries < 50; ++tries) {
    const double sx = uniform(rng, 0.04, 0.1);
    const double sy = uniform(rng, 0.04, 0.1);
    const double h = uniform(rng, 0.04, 0.15);
    const double cx = uniform(rng, top.min.x() + sx, top.max.x() - sx);
    const double cy = uniform(rng, top.min.y() + sy, top.max.y() - sy);
    if (std::hypot(cx - goal.x(), cy - goal.y()) < 0.22 + std::max(sx, sy)) continue;
    add_box_surface(box(cx - sx / 2, cy - sy / 2, top.max.z(), cx + sx / 2, cy + sy / 2, top.max.z() + h), out);
    ++c;
  }
}

Layout tabletop(Rng& rng) {
  Layout l;
  const double w = uniform(rng, 0.6, 1.0);
  const double d = uniform(rng, 0.5, 0.8);
  const double h = uniform(rng, 0.4, 0.75);
  const Aabb table = box(0.0, -w / 2, 0.0, d, w / 2, h);
  l.boxes.push_back(table);
  l.surface = h;
  l.goal = {uniform(rng, 0.08, 0.2), uniform(rng, -w / 2 + 0.12, w / 2 - 0.12), h + uniform(rng, 0.05, 0.12)};
  add_clusters(rng, table, l.goal, 3, l.points);
  l.start_region = box(-2.6, -2.0, 0.0, -0.5, 2.0, 0.0);
  return l;
}

Layout shelf(Rng& rng) {
  Layout l;
  const double w = uniform(rng, 0.8, 1.1);
  const double d = 0.4;
  const double board = uniform(rng, 0.4, 0.6);
  const double gap = uniform(rng, 0.55, 0.65);
  const double t = 0.03;
  const double top = board + gap;
  l.boxes.push_back(box(0.0, -w / 2, 0.0, d, w / 2, board));                  // lower cabinet
  l.boxes.push_back(box(0.0, -w / 2, top, d, w / 2, top + t));                // upper board
  l.boxes.push_back(box(0.0, -w / 2 - t, 0.0, d, -w / 2, top + t));           // side walls
  l.boxes.push_back(box(0.0, w / 2, 0.0, d, w / 2 + t, top + t));
  l.boxes.push_back(box(d, -w / 2 - t, 0.0, d + t, w / 2 + t, top + t));      // back
  l.surface = board;
  l.goal = {uniform(rng, 0.1, 0.18), uniform(rng, -w / 2 + 0.2, w / 2 - 0.2), board + uniform(rng, 0.05, 0.1)};
  add_clusters(rng, box(0.0, -w / 2, 0.0, d, w / 2, board), l.goal, 2, l.points);
  l.start_region = box(-2.6, -2.0, 0.0, -0.5, 2.0, 0.0);
  return l;
}

Layout corridor(Rng& rng) {
  Layout l;
  const double w = uniform(rng, 0.6, 0.8);
  const double h = uniform(rng, 0.45, 0.7);
  const Aabb table = box(0.0, -w / 2, 0.0, 0.6, w / 2, h);
  l.boxes.push_back(table);
  l.surface = h;
  l.goal = {uniform(rng, 0.08, 0.18), uniform(rng, -w / 2 + 0.12, w / 2 - 0.12), h + uniform(rng, 0.05, 0.12)};
  add_clusters(rng, table, l.goal, 2, l.points);
  // side walls, and a free-standing block across the direct route
  const double half = 2.5;
  const double wall_h = 1.2;
  l.boxes.push_back(box(-3.0, -half - 0.1, 0.0, 1.0, -half, wall_h));
  l.boxes.push_back(box(-3.0, half, 0.0, 1.0, half + 0.1, wall_h));
  const double c = uniform(rng, -0.2, 0.2);
  const double bw = uniform(rng, 0.8, 1.4);
  l.boxes.push_back(box(-1.6, c - bw / 2, 0.0, -1.3, c + bw / 2, wall_h));
  l.start_region = box(-2.4, -0.3, 0.0, -2.0, 0.3, 0.0);
  return l;
}

/// Rotation by k quarter turns about z, then translation; keeps boxes axis aligned.
struct Placement {
  int quarter = 0;
  Vec3 offset = Vec3::Zero();

  Vec3 point(const Vec3& p) const {
    Vec3 r = p;
    for (int i = 0; i < quarter; ++i) r = Vec3(-r.y(), r.x(), r.z());
    return r + offset;
  }
  Aabb aabb(const Aabb& b) const {
    const Vec3 a = point(b.min);
    const Vec3 c = point(b.max);
    return {a.cwiseMin(c), a.cwiseMax(c)};
  }
  double yaw() const { return quarter * kPi / 2; }
};

VecX stow_pose(const RobotModel& model) {
  static const std::map<std::string, double> kStow = {
      {"arm_lift_joint", 0.0},   {"arm_flex_joint", 0.0},    {"arm_roll_joint", -kPi / 2},
      {"wrist_flex_joint", -kPi / 2}, {"wrist_roll_joint", 0.0}, {"joint4", -2.356},
      {"joint6", 1.571},         {"joint7", 0.785},
  };
  VecX q = VecX::Zero(model.dof());
  for (int i = RobotModel::kBaseDofs; i < model.dof(); ++i) {
    if (const auto it = kStow.find(model.dof_name(i)); it != kStow.end()) q[i] = it->second;
  }
  return model.clamp(q);
}

/// Top-down grasp at `goal`; any rotation about the vertical is allowed.
GoalConstraintSet top_grasp(const Vec3& goal) {
  EePoseConstraint c;
  c.reference = Pose(goal, Quat(Eigen::AngleAxisd(kPi, Vec3::UnitX())));
  c.bounds[5] = {-kPi, kPi};
  return {GoalConstraint{c}};
}

std::optional<Scenario> build(const RobotModel& model, SceneTemplate tmpl, std::uint64_t seed, bool screen) {
  Rng rng(seed);
  Layout l;
  switch (tmpl) {
    case SceneTemplate::kTabletop: l = tabletop(rng); break;
    case SceneTemplate::kShelf: l = shelf(rng); break;
    case SceneTemplate::kCorridor: l = corridor(rng); break;
  }
  Placement place;
  place.quarter = static_cast<int>(rng() % 4);
  place.offset = {uniform(rng, -2.0, 2.0), uniform(rng, -2.0, 2.0), 0.0};

  std::vector<Aabb> boxes;
  for (const auto& b : l.boxes) boxes.push_back(place.aabb(b));
  std::vector<Vec3> points;
  points.reserve(l.points.size());
  for (const auto& p : l.points) points.push_back(place.point(p));

  Scenario s;
  s.robot = model.name();
  s.template_name = to_string(tmpl);
  s.env = Environment(std::move(points), std::move(boxes));
  s.seed = seed;
  const Vec3 goal = place.point(l.goal);
  s.goals = top_grasp(goal);

  const VecX stow = stow_pose(model);
  bool found = false;
  for (int tries = 0; tries < 100 && !found; ++tries) {
    const Vec3 local(uniform(rng, l.start_region.min.x(), l.start_region.max.x()),
                     uniform(rng, l.start_region.min.y(), l.start_region.max.y()), 0.0);
    const Vec3 base = place.point(local);
    const double dist = std::hypot(base.x() - goal.x(), base.y() - goal.y());
    if (dist < 1.0 || dist > 2.5) continue;
    VecX q = stow;
    q[0] = base.x();
    q[1] = base.y();
    q[2] = wrap_angle(place.yaw() + uniform(rng, -kPi, kPi));
    q = model.clamp(q);
    if (in_self_collision(model, q) || is_collision(model, q, s.env, s.env.margin())) continue;
    s.start = RobotState(q);
    found = true;
  }
  if (!found) return std::nullopt;

  if (screen) {
    Rng plan_rng(mix(seed));
    if (!plan_baseline(model, s.start, s.goals, s.env, plan_rng, RrtConfig{}, TimingConfig{})) return std::nullopt;
  }
  return s;
}

std::string scenario_id(const std::string& prefix, int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%03d", i);
  return prefix + "-" + buf;
}

std::optional<Scenario> build_with_retries(const RobotModel& model, SceneTemplate tmpl, std::uint64_t seed, int index,
                                           const ScenarioGenConfig& cfg) {
  for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
    const std::uint64_t s = mix(seed ^ mix(static_cast<std::uint64_t>(index) << 8 | static_cast<std::uint64_t>(attempt)));
    if (auto sc = build(model, tmpl, s, cfg.screen)) return sc;
  }
  std::cerr << "warning: skipped " << to_string(tmpl) << " scenario " << index << " after " << cfg.max_retries + 1
            << " attempts\n";
  return std::nullopt;
}

}  // namespace

std::vector<Scenario> gen_scenarios(const RobotModel& model, SceneTemplate tmpl, int n, std::uint64_t seed,
                                    const ScenarioGenConfig& cfg) {
  if (n < 1) throw ConfigError("gen_scenarios: n must be >= 1");
  std::vector<Scenario> out;
  for (int i = 0; i < n; ++i) {
    if (auto s = build_with_retries(model, tmpl, seed, i, cfg)) {
      s->id = scenario_id(to_string(tmpl), i);
      out.push_back(std::move(*s));
    }
  }
  return out;
}

std::vector<Scenario> default_suite(const RobotModel& model, int n, std::uint64_t seed, const ScenarioGenConfig& cfg) {
  if (n < 1) throw ConfigError("default_suite: n must be >= 1");
  static constexpr SceneTemplate kRotation[] = {SceneTemplate::kTabletop, SceneTemplate::kShelf,
                                                SceneTemplate::kCorridor};
  std::vector<Scenario> out;
  for (int i = 0; i < n; ++i) {
    const SceneTemplate tmpl = kRotation[i % 3];
    if (auto s = build_with_retries(model, tmpl, seed, i, cfg)) {
      s->id = scenario_id("suite", i) + "-" + to_string(tmpl);
      out.push_back(std::move(*s));
    }
  }
  return out;
}

Scenario corridor_switch_scenario(const RobotModel& model) {
  Scenario s;
  s.id = "corridor-switch";
  s.robot = model.name();
  s.template_name = "corridor";
  s.seed = 2;
  std::vector<Aabb> boxes = {
      box(0.0, -0.4, 0.0, 0.6, 0.4, 0.6),      // table
      box(-0.95, -3.0, 0.0, -0.85, 0.3, 1.5),  // block with a free side at +y
  };
  s.env = Environment({}, std::move(boxes));
  s.goals = top_grasp({0.12, 0.0, 0.68});
  VecX q = stow_pose(model);
  q[0] = -2.0;
  q[1] = 0.0;
  q[2] = 0.0;
  s.start = RobotState(q);
  return s;
}

}  // namespace rlp
