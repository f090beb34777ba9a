#include "rlp/ik.hpp"

#include <algorithm>
#include <cmath>

#include "rlp/work.hpp"

namespace rlp {

namespace {

using Matrix6X = Eigen::Matrix<double, 6, Eigen::Dynamic>;
using Vector6 = Eigen::Matrix<double, 6, 1>;

/// Pose error twist (world frame) and geometric Jacobian of the end-effector.
void error_and_jacobian(const RobotModel& model, const VecX& q, const Iso3& target, Vector6& err, Matrix6X& jac,
                        std::vector<Iso3>& frames) {
  link_frames(model, q, frames);
  const Iso3 ee = frames[static_cast<std::size_t>(model.ee_link())] * model.tool_offset();
  const Vec3 p = ee.translation();
  err.head<3>() = target.translation() - p;
  err.tail<3>() = rotation_log(target.linear() * ee.linear().transpose());

  jac.setZero(6, model.dof());
  jac(0, 0) = 1.0;
  jac(1, 1) = 1.0;
  const Vec3 base_pos = frames[0].translation();
  jac.block<3, 1>(0, 2) = Vec3::UnitZ().cross(p - base_pos);
  jac.block<3, 1>(3, 2) = Vec3::UnitZ();
  const auto& joints = model.joints();
  for (int i = 0; i < model.ee_link(); ++i) {
    const auto& j = joints[static_cast<std::size_t>(i)];
    const Iso3& f = frames[static_cast<std::size_t>(i) + 1];
    const Vec3 axis = f.linear() * j.axis;
    const int col = RobotModel::kBaseDofs + i;
    if (j.type == JointType::kRevolute) {
      jac.block<3, 1>(0, col) = axis.cross(p - f.translation());
      jac.block<3, 1>(3, col) = axis;
    } else {
      jac.block<3, 1>(0, col) = axis;
    }
  }
}

double uniform(Rng& rng, double lo, double hi) {
  if (!(hi > lo)) return lo;
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

VecX random_arm(const RobotModel& model, Rng& rng, VecX q) {
  for (int i = RobotModel::kBaseDofs; i < model.dof(); ++i) q[i] = uniform(rng, model.limits(i).lower, model.limits(i).upper);
  return q;
}

}  // namespace

std::optional<RobotState> solve_ik_numeric(const RobotModel& model, const Pose& target, const RobotState& seed,
                                           BaseLock lock, const IkOptions& opt) {
  if (seed.size() != model.dof()) throw std::invalid_argument("solve_ik_numeric: seed dimension mismatch");
  const Iso3 goal = target.to_isometry();
  thread_local std::vector<Iso3> frames;
  VecX q = model.clamp(seed.positions);
  Vector6 err;
  Matrix6X jac(6, model.dof());
  const double pos_done = 0.01 * opt.position_tolerance;
  const double rot_done = 0.01 * opt.rotation_tolerance;
  const double lambda_sq = opt.damping * opt.damping;

  double best = std::numeric_limits<double>::infinity();
  int since_best = 0;
  for (int it = 0; it <= opt.max_iterations; ++it) {
    work::charge(Work::kIkIteration);
    error_and_jacobian(model, q, goal, err, jac, frames);
    const double pe = err.head<3>().norm();
    const double re = err.tail<3>().norm();
    if (pe < pos_done && re < rot_done) break;
    if (it == opt.max_iterations) break;

    const double total = pe + re;
    if (total < 0.99 * best) {
      best = total;
      since_best = 0;
    } else if (++since_best > 12) {
      break;  // stalled, typically against a joint limit
    }

    if (lock != BaseLock::kNone) {
      jac.col(0).setZero();
      jac.col(1).setZero();
      if (lock == BaseLock::kFull) jac.col(2).setZero();
    }
    const Eigen::Matrix<double, 6, 6> jjt = jac * jac.transpose() + lambda_sq * Eigen::Matrix<double, 6, 6>::Identity();
    VecX dq = jac.transpose() * jjt.ldlt().solve(err);
    const double m = dq.cwiseAbs().maxCoeff();
    if (m > opt.step_clamp) dq *= opt.step_clamp / m;
    q = model.clamp(q + dq);
  }

  // accept on an independent residual check
  const Iso3 ee = ee_transform(model, q);
  const double pe = (ee.translation() - goal.translation()).norm();
  const double re = rotation_angle(goal.linear().transpose() * ee.linear());
  if (pe > 0.1 * opt.position_tolerance || re > 0.1 * opt.rotation_tolerance) return std::nullopt;
  if (!model.within_limits(q)) return std::nullopt;
  return RobotState(q);
}

std::optional<RobotState> sample_ik_from_constraint(const RobotModel& model, const EePoseConstraint& c, Rng& rng,
                                                    const IkSamplingConfig& cfg) {
  const auto& heuristic = model.base_seed_heuristic();
  for (int attempt = 0; attempt < cfg.retries; ++attempt) {
    const Pose target = sample_goal_pose(c, rng);
    VecX seed = VecX::Zero(model.dof());
    const double yaw = uniform(rng, -kPi, kPi);
    if (cfg.use_base_heuristic && heuristic.enabled) {
      // put the target in the arm's working plane, at a comfortable reach
      const double reach = uniform(rng, heuristic.reach_min, heuristic.reach_max);
      const Vec3 offset = Eigen::AngleAxisd(yaw, Vec3::UnitZ()) * Vec3(reach, heuristic.lateral_offset, 0.0);
      seed[0] = target.translation.x() - offset.x();
      seed[1] = target.translation.y() - offset.y();
    } else {
      seed[0] = target.translation.x() + uniform(rng, -cfg.base_radius, cfg.base_radius);
      seed[1] = target.translation.y() + uniform(rng, -cfg.base_radius, cfg.base_radius);
    }
    seed[RobotModel::kYaw] = yaw;
    seed = random_arm(model, rng, model.clamp(seed));
    auto sol = solve_ik_numeric(model, target, RobotState(seed), BaseLock::kNone, cfg.ik);
    if (sol && satisfies(c, model, *sol)) return sol;
  }
  return std::nullopt;
}

void BaseErrorModel::validate() const {
  if (!(sigma > 0.0)) throw ConfigError("base error sigma must be > 0");
  if (grid_n < 3 || grid_n % 2 == 0) throw ConfigError("base error grid_n must be odd and >= 3");
  if (!(grid_halfwidth > 0.0)) throw ConfigError("base error grid_halfwidth must be > 0");
}

void RobustIkConfig::validate() const {
  if (continuation_steps < 1) throw ConfigError("continuation_steps must be >= 1");
  if (!(robust_fraction > 0.0 && robust_fraction <= 1.0)) throw ConfigError("robust_fraction must be in (0, 1]");
  if (!(max_joint_step > 0.0)) throw ConfigError("max_joint_step must be > 0");
  if (max_solutions < 1 || pool_size < 1) throw ConfigError("max_solutions and pool_size must be >= 1");
}

double robustness(const RobotModel& model, const RobotState& q0, const Environment& env, const BaseErrorModel& err,
                  const RobustIkConfig& cfg, const IkOptions& ik) {
  const int n = err.grid_n;
  const double half = err.grid_halfwidth * err.sigma;
  const double spacing = 2.0 * half / (n - 1);
  const Pose target = Pose::from_isometry(ee_transform(model, q0.positions));

  auto feasible = [&](const RobotState& q) {
    if (!model.within_limits(q.positions)) return false;
    return !is_collision(model, q, sample_env(env, model, q, 0.0), 0.0);
  };
  const bool origin_ok = feasible(q0);

  double total_weight = 0.0;
  double score = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double dx = -half + i * spacing;
      const double dy = -half + j * spacing;
      const double w = std::exp(-(dx * dx + dy * dy) / (2.0 * err.sigma * err.sigma));
      total_weight += w;
      if (!origin_ok) continue;
      bool ok = true;
      RobotState q = q0;
      for (int k = 1; k <= cfg.continuation_steps && ok; ++k) {
        const double s = static_cast<double>(k) / cfg.continuation_steps;
        VecX seed = q.positions;
        seed[0] = q0.positions[0] + s * dx;
        seed[1] = q0.positions[1] + s * dy;
        auto next = solve_ik_numeric(model, target, RobotState(seed), BaseLock::kTranslation, ik);
        if (!next) {
          ok = false;
          break;
        }
        const VecX step = state_delta(q.positions, next->positions);
        for (int d = RobotModel::kYaw; d < model.dof(); ++d) {
          if (std::abs(step[d]) > cfg.max_joint_step) ok = false;
        }
        ok = ok && feasible(*next);
        q = std::move(*next);
      }
      if (ok) score += w;
    }
  }
  return std::clamp(score / total_weight, 0.0, 1.0);
}

std::vector<ScoredState> select_robust(std::vector<ScoredState> pool, double robust_fraction, int max_solutions) {
  if (pool.empty()) return pool;
  double best = 0.0;
  for (const auto& s : pool) best = std::max(best, s.score);
  std::vector<ScoredState> out;
  for (auto& s : pool) {
    if (s.score >= robust_fraction * best) out.push_back(std::move(s));
  }
  std::stable_sort(out.begin(), out.end(), [](const ScoredState& a, const ScoredState& b) { return a.score > b.score; });
  if (out.size() > static_cast<std::size_t>(max_solutions)) out.resize(static_cast<std::size_t>(max_solutions));
  return out;
}

std::vector<ScoredState> solve_robust_ik(const RobotModel& model, const EePoseConstraint& c, const Environment& env,
                                         Rng& rng, const BaseErrorModel& err, const RobustIkConfig& cfg,
                                         const IkSamplingConfig& sampling) {
  std::vector<ScoredState> pool;
  for (int i = 0; i < cfg.pool_size; ++i) {
    auto q = sample_ik_from_constraint(model, c, rng, sampling);
    if (!q) continue;
    if (is_collision(model, *q, sample_env(env, model, *q, 0.0), env.margin())) continue;
    const double r = robustness(model, *q, env, err, cfg, sampling.ik);
    pool.push_back({std::move(*q), r});
  }
  return select_robust(std::move(pool), cfg.robust_fraction, cfg.max_solutions);
}

}  // namespace rlp
