#include "rlp/trajgen.hpp"

#include <algorithm>

#include "rlp/work.hpp"

namespace rlp {

namespace {

double uniform(Rng& rng, double lo, double hi) {
  if (!(hi > lo)) return lo;
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::optional<RobotState> sample_goal_state(const GoalConstraint& goal, const RobotModel& model, Rng& rng,
                                            const GeneratorConfig& cfg) {
  if (goal.is_ee()) return sample_ik_from_constraint(model, goal.ee(), rng, cfg.sampling);
  return sample_joint_goal(goal.joint(), model, rng);
}

}  // namespace

void GeneratorConfig::validate() const {
  if (max_candidates < 1 || max_straight < 0) throw ConfigError("generator: candidate counts must be positive");
  if (max_straight > max_candidates) throw ConfigError("generator: max_straight must not exceed max_candidates");
  if (mid_position_halfwidth < 0.0 || mid_rotation_halfwidth < 0.0) {
    throw ConfigError("generator: midpoint widths must be >= 0");
  }
  if (!(timeout > 0.0)) throw ConfigError("generator: timeout must be > 0");
  base_error.validate();
  robust.validate();
}

RobotState sample_random_mid(const RobotModel& model, const RobotState& q_init, const RobotState& q_goal, Rng& rng,
                             double position_halfwidth, double rotation_halfwidth) {
  const VecX& a = q_init.positions;
  const VecX& b = q_goal.positions;
  VecX q(model.dof());
  q[0] = 0.5 * (a[0] + b[0]) + uniform(rng, -position_halfwidth, position_halfwidth);
  q[1] = 0.5 * (a[1] + b[1]) + uniform(rng, -position_halfwidth, position_halfwidth);
  q[RobotModel::kYaw] = a[RobotModel::kYaw] + 0.5 * shortest_arc(a[RobotModel::kYaw], b[RobotModel::kYaw]) +
                        uniform(rng, -rotation_halfwidth, rotation_halfwidth);
  for (int i = RobotModel::kBaseDofs; i < model.dof(); ++i) {
    q[i] = uniform(rng, model.limits(i).lower, model.limits(i).upper);
  }
  return RobotState(model.clamp(q));
}

std::optional<PathCandidate> sample_trajectory(const GoalConstraintSet& goals, const RobotState& q_init, bool use_middle,
                                               const RobotModel& model, Rng& rng, const GeneratorConfig& cfg) {
  if (goals.empty()) throw std::invalid_argument("sample_trajectory: empty goal set");
  const auto pick = std::uniform_int_distribution<std::size_t>(0, goals.size() - 1)(rng);
  auto q_goal = sample_goal_state(goals[pick], model, rng, cfg);
  if (!q_goal) return std::nullopt;
  RobotState start(q_init.positions);
  if (!use_middle) return merge({start, *q_goal}, Provenance::kRandomStraight);
  RobotState mid = sample_random_mid(model, q_init, *q_goal, rng, cfg.mid_position_halfwidth, cfg.mid_rotation_halfwidth);
  return merge({start, std::move(mid), std::move(*q_goal)}, Provenance::kRandomMid);
}

PathCandidate carryover_candidate(const Trajectory& remaining, const RobotState& q_init) {
  PathCandidate c;
  c.source = Provenance::kCarryover;
  c.waypoints.emplace_back(q_init.positions);
  const auto& w = remaining.waypoints;
  if (w.size() > 2 && remaining.profile() != nullptr) {
    // keep interior waypoints the motion has not reached yet
    double s = 0.0;
    double sdot = 0.0;
    remaining.profile()->path_state(remaining.profile_offset(), s, sdot);
    double along = 0.0;
    for (std::size_t i = 1; i + 1 < w.size(); ++i) {
      along += state_delta(w[i - 1], w[i]).norm();
      if (along > s) c.waypoints.emplace_back(w[i]);
    }
  }
  c.waypoints.emplace_back(remaining.final_state().positions);
  return c;
}

std::vector<PathCandidate> generate(const GoalConstraintSet& goals, const RobotState& q_init, const Environment& env,
                                    const RobotModel& model, Rng& rng, const GeneratorConfig& cfg,
                                    const Trajectory* carryover, GenerationStats* stats) {
  if (goals.empty()) throw std::invalid_argument("generate: empty goal set");
  GenerationStats local;
  GenerationStats& st = stats != nullptr ? *stats : local;
  const Deadline deadline = Deadline::after(cfg.timeout);
  const auto n_total = static_cast<std::size_t>(cfg.max_candidates);
  const auto n_straight = static_cast<std::size_t>(cfg.max_straight);
  const RobotState start(q_init.positions);

  std::vector<PathCandidate> out;
  if (cfg.use_robust_ik) {
    for (const auto& c : extract_ee_constraints(goals)) {
      if (deadline.expired() || out.size() >= n_total) break;
      const auto robust = solve_robust_ik(model, c, env, rng, cfg.base_error, cfg.robust, cfg.sampling);
      st.robust_goals += static_cast<int>(robust.size());
      for (const auto& g : robust) {
        if (out.size() >= n_total) break;
        if (out.size() < n_straight) {
          out.push_back(merge({start, g.state}, Provenance::kRobustIk));
        } else {
          RobotState mid = sample_random_mid(model, q_init, g.state, rng, cfg.mid_position_halfwidth,
                                             cfg.mid_rotation_halfwidth);
          out.push_back(merge({start, std::move(mid), g.state}, Provenance::kRobustIk));
        }
      }
    }
  }

  while (out.size() < n_total) {
    if (deadline.expired()) {
      st.timed_out = true;
      break;
    }
    if (st.attempts >= cfg.max_attempts) break;
    ++st.attempts;
    auto cand = sample_trajectory(goals, q_init, out.size() >= n_straight, model, rng, cfg);
    if (!cand) {
      ++st.failures;
      continue;
    }
    out.push_back(std::move(*cand));
  }

  if (carryover != nullptr && !carryover->empty()) {
    out.insert(out.begin(), carryover_candidate(*carryover, q_init));
  }
  return out;
}

}  // namespace rlp
