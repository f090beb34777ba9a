#include "rlp/baseline.hpp"

#include <algorithm>
#include <cmath>

#include "rlp/work.hpp"

namespace rlp {

namespace {

double uniform(Rng& rng, double lo, double hi) {
  if (!(hi > lo)) return lo;
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

struct Node {
  VecX q;
  int parent = -1;
};

class Tree {
 public:
  explicit Tree(const RobotModel& model) : model_(model) {}

  int add(VecX q, int parent) {
    nodes_.push_back({std::move(q), parent});
    return static_cast<int>(nodes_.size()) - 1;
  }
  const Node& operator[](int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  bool empty() const { return nodes_.empty(); }

  int nearest(const VecX& q) const {
    work::charge(Work::kNearestTest, nodes_.size());
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const double d = state_distance(model_, nodes_[i].q, q);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(i);
      }
    }
    return best;
  }

  /// Root-to-node chain.
  std::vector<VecX> chain(int i) const {
    std::vector<VecX> out;
    for (; i >= 0; i = (*this)[i].parent) out.push_back((*this)[i].q);
    std::reverse(out.begin(), out.end());
    return out;
  }

 private:
  const RobotModel& model_;
  std::vector<Node> nodes_;
};

enum class Extend { kTrapped, kAdvanced, kReached };

bool state_free(const RobotModel& model, const VecX& q, const Environment& env) {
  return !is_collision(model, q, sample_env(env, model, RobotState(q), 0.0), env.margin());
}

VecX steer(const RobotModel& model, const VecX& from, const VecX& to, double step, bool& reached) {
  const double d = state_distance(model, from, to);
  reached = d <= step;
  if (reached) return to;
  return interpolate_positions(from, to, step / d);
}

Extend extend(Tree& tree, const VecX& target, const RobotModel& model, const Environment& env, double step,
              int& new_index) {
  const int near = tree.nearest(target);
  bool reached = false;
  VecX q = steer(model, tree[near].q, target, step, reached);
  if (!edge_free(model, tree[near].q, q, env, step)) return Extend::kTrapped;
  new_index = tree.add(std::move(q), near);
  return reached ? Extend::kReached : Extend::kAdvanced;
}

Extend connect(Tree& tree, const VecX& target, const RobotModel& model, const Environment& env, double step,
               int& new_index) {
  Extend r = Extend::kAdvanced;
  while (r == Extend::kAdvanced) r = extend(tree, target, model, env, step, new_index);
  return r;
}

std::optional<VecX> sample_goal_root(const GoalConstraintSet& goals, const RobotModel& model, const Environment& env,
                                     Rng& rng, const RrtConfig& cfg) {
  const auto pick = std::uniform_int_distribution<std::size_t>(0, goals.size() - 1)(rng);
  std::optional<RobotState> q;
  if (goals[pick].is_ee()) {
    q = sample_ik_from_constraint(model, goals[pick].ee(), rng, cfg.sampling);
  } else {
    q = sample_joint_goal(goals[pick].joint(), model, rng);
  }
  if (!q || !state_free(model, q->positions, env)) return std::nullopt;
  return q->positions;
}

/// Time-parameterized path whose samples are all collision-free; blends are
/// dropped when they cut into obstacles.
std::optional<Trajectory> parameterize_clear(const RobotModel& model, const std::vector<VecX>& path,
                                             const Environment& env, const TimingConfig& timing) {
  const VecX rest = VecX::Zero(model.dof());
  for (const double fraction : {timing.blend.fraction, 0.0}) {
    TimingConfig t = timing;
    t.blend.fraction = fraction;
    auto traj = time_parameterize(model, path, rest, t);
    if (!traj) continue;
    const bool clear = std::none_of(traj->samples().begin(), traj->samples().end(), [&](const TrajectorySample& s) {
      return is_collision(model, s.state, sample_env(env, model, s.state, s.t), env.margin());
    });
    if (!clear) continue;
    traj->source = Provenance::kBaseline;
    return traj;
  }
  return std::nullopt;
}

}  // namespace

void RrtConfig::validate() const {
  if (!(step > 0.0)) throw ConfigError("rrt: step must be > 0");
  if (goal_bias < 0.0 || goal_bias > 1.0) throw ConfigError("rrt: goal_bias must be in [0, 1]");
  if (max_iterations < 0 || shortcut_iterations < 0 || restarts < 1) throw ConfigError("rrt: iteration counts must be >= 0");
}

bool edge_free(const RobotModel& model, const VecX& a, const VecX& b, const Environment& env, double step) {
  const double d = state_distance(model, a, b);
  const int n = std::max(1, static_cast<int>(std::ceil(d / (0.5 * step))));
  for (int i = 1; i <= n; ++i) {
    if (!state_free(model, interpolate_positions(a, b, static_cast<double>(i) / n), env)) return false;
  }
  return true;
}

double path_length(const RobotModel& model, const std::vector<VecX>& path) {
  double len = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) len += state_distance(model, path[i - 1], path[i]);
  return len;
}

std::optional<std::vector<VecX>> rrt_connect(const RobotModel& model, const RobotState& q_init,
                                             const GoalConstraintSet& goals, const Environment& env, Rng& rng,
                                             const RrtConfig& cfg) {
  if (goals.empty()) throw std::invalid_argument("rrt_connect: empty goal set");
  if (!state_free(model, q_init.positions, env)) return std::nullopt;
  if (satisfies_any(goals, model, q_init)) return std::vector<VecX>{q_init.positions};

  Tree start(model);
  Tree goal(model);
  start.add(q_init.positions, -1);

  Vec3 lo(q_init.positions[0], q_init.positions[1], 0.0);
  Vec3 hi = lo;
  auto add_goal_root = [&]() {
    if (auto g = sample_goal_root(goals, model, env, rng, cfg)) {
      lo = lo.cwiseMin(Vec3((*g)[0], (*g)[1], 0.0));
      hi = hi.cwiseMax(Vec3((*g)[0], (*g)[1], 0.0));
      goal.add(std::move(*g), -1);
    }
  };
  for (int i = 0; i < 10 && goal.empty(); ++i) add_goal_root();

  Tree* a = &start;
  Tree* b = &goal;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    if (goal.empty() || std::uniform_real_distribution<double>(0.0, 1.0)(rng) < cfg.goal_bias) {
      add_goal_root();
      if (goal.empty()) continue;
    }
    VecX q_rand(model.dof());
    q_rand[0] = uniform(rng, std::max(lo.x() - cfg.base_padding, model.limits(0).lower),
                        std::min(hi.x() + cfg.base_padding, model.limits(0).upper));
    q_rand[1] = uniform(rng, std::max(lo.y() - cfg.base_padding, model.limits(1).lower),
                        std::min(hi.y() + cfg.base_padding, model.limits(1).upper));
    q_rand[RobotModel::kYaw] = uniform(rng, -kPi, kPi);
    for (int i = RobotModel::kBaseDofs; i < model.dof(); ++i) {
      q_rand[i] = uniform(rng, model.limits(i).lower, model.limits(i).upper);
    }

    int a_new = -1;
    if (extend(*a, q_rand, model, env, cfg.step, a_new) != Extend::kTrapped) {
      int b_new = -1;
      if (connect(*b, (*a)[a_new].q, model, env, cfg.step, b_new) == Extend::kReached) {
        std::vector<VecX> from_start = (a == &start) ? start.chain(a_new) : start.chain(b_new);
        std::vector<VecX> from_goal = (a == &start) ? goal.chain(b_new) : goal.chain(a_new);
        // the meeting node is duplicated at the join
        from_goal.pop_back();
        std::reverse(from_goal.begin(), from_goal.end());
        from_start.insert(from_start.end(), from_goal.begin(), from_goal.end());
        return from_start;
      }
    }
    std::swap(a, b);
  }
  return std::nullopt;
}

std::vector<VecX> shortcut(std::vector<VecX> path, const Environment& env, const RobotModel& model, Rng& rng,
                           int iterations, double step) {
  for (int it = 0; it < iterations && path.size() > 2; ++it) {
    if (it % 2 == 0) {
      // waypoint pair schedule
      const auto n = path.size();
      auto i = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
      auto j = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
      if (i > j) std::swap(i, j);
      if (j - i < 2) continue;
      if (!edge_free(model, path[i], path[j], env, step)) continue;
      path.erase(path.begin() + static_cast<std::ptrdiff_t>(i) + 1, path.begin() + static_cast<std::ptrdiff_t>(j));
    } else {
      // continuous point schedule
      std::vector<double> cum(path.size(), 0.0);
      for (std::size_t k = 1; k < path.size(); ++k) cum[k] = cum[k - 1] + state_distance(model, path[k - 1], path[k]);
      const double total = cum.back();
      if (!(total > 0.0)) break;
      double s1 = uniform(rng, 0.0, total);
      double s2 = uniform(rng, 0.0, total);
      if (s1 > s2) std::swap(s1, s2);
      auto locate = [&](double s) {
        const auto it2 = std::upper_bound(cum.begin(), cum.end(), s);
        std::size_t k = static_cast<std::size_t>(std::distance(cum.begin(), it2));
        k = std::clamp<std::size_t>(k, 1, path.size() - 1);
        const double seg = cum[k] - cum[k - 1];
        const double f = seg > 0.0 ? (s - cum[k - 1]) / seg : 0.0;
        return std::make_pair(k, interpolate_positions(path[k - 1], path[k], std::clamp(f, 0.0, 1.0)));
      };
      auto [k1, p1] = locate(s1);
      auto [k2, p2] = locate(s2);
      if (k1 == k2) continue;  // same segment: already straight
      const double old_len = (cum[k1] - s1) + (cum[k2 - 1] - cum[k1]) + (s2 - cum[k2 - 1]);
      if (state_distance(model, p1, p2) >= old_len - 1e-9) continue;
      // the cut ends are re-checked too, so every output edge passes edge_free at this step
      if (!edge_free(model, p1, p2, env, step) || !edge_free(model, path[k1 - 1], p1, env, step) ||
          !edge_free(model, p2, path[k2], env, step)) {
        continue;
      }
      std::vector<VecX> next(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(k1));
      next.push_back(p1);
      next.push_back(p2);
      next.insert(next.end(), path.begin() + static_cast<std::ptrdiff_t>(k2), path.end());
      path = std::move(next);
    }
  }
  return path;
}

std::optional<Trajectory> plan_baseline(const RobotModel& model, const RobotState& q_init,
                                        const GoalConstraintSet& goals, const Environment& env, Rng& rng,
                                        const RrtConfig& cfg, const TimingConfig& timing) {
  for (int attempt = 0; attempt < cfg.restarts; ++attempt) {
    auto raw = rrt_connect(model, q_init, goals, env, rng, cfg);
    if (!raw) continue;
    std::vector<VecX> path = shortcut(std::move(*raw), env, model, rng, cfg.shortcut_iterations, cfg.step);
    if (path.size() == 1) path.push_back(path.front());
    if (auto traj = parameterize_clear(model, path, env, timing)) return traj;
  }
  return std::nullopt;
}

}  // namespace rlp
