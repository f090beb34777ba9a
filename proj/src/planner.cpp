#include "rlp/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "rlp/work.hpp"

namespace rlp {

void PlannerConfig::validate() const {
  if (!(replan_period > 0.0)) throw ConfigError("planner: replan_period must be > 0");
  if (!(validation_timeout > 0.0)) throw ConfigError("planner: validation_timeout must be > 0");
  if (sparse_interval < timing.sample_period) throw ConfigError("planner: sparse_interval must be >= sample_period");
  if (!(timing.sample_period > 0.0)) throw ConfigError("planner: sample_period must be > 0");
  if (max_stopped_loops < 1 || max_loops < 1) throw ConfigError("planner: loop limits must be >= 1");
  if (!(timeout > 0.0)) throw ConfigError("planner: timeout must be > 0");
  generator.validate();
  rrt.validate();
}

std::string to_string(LoopOutcome o) {
  switch (o) {
    case LoopOutcome::kSwitched: return "switched";
    case LoopOutcome::kKept: return "kept";
    case LoopOutcome::kStopped: return "stopped";
    case LoopOutcome::kFinished: return "finished";
  }
  return "unknown";
}

LoopOutcome loop_outcome_from_string(const std::string& s) {
  for (auto o : {LoopOutcome::kSwitched, LoopOutcome::kKept, LoopOutcome::kStopped, LoopOutcome::kFinished}) {
    if (to_string(o) == s) return o;
  }
  throw ConfigError("unknown loop outcome '" + s + "'");
}

double evaluate(const Trajectory& q, const SoftConstraintSet& soft, const RobotModel& model, const Environment* env) {
  if (q.empty()) throw std::invalid_argument("evaluate: empty trajectory");
  double score = -q.duration();
  for (const auto& c : soft) score += evaluate_soft(c, model, q, env);
  return score;
}

std::vector<std::size_t> rank(const std::vector<Trajectory>& trajectories, const SoftConstraintSet& soft,
                              const RobotModel& model, const Environment* env) {
  std::vector<double> score(trajectories.size());
  for (std::size_t i = 0; i < trajectories.size(); ++i) score[i] = evaluate(trajectories[i], soft, model, env);
  std::vector<std::size_t> order(trajectories.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  return order;
}

std::vector<std::size_t> validation_indices(const Trajectory& q, const PlannerConfig& cfg) {
  std::vector<std::size_t> out;
  const auto& samples = q.samples();
  if (samples.empty()) return out;
  const auto stride =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(cfg.sparse_interval / q.sample_period())));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const bool dense = samples[i].t <= cfg.dense_horizon + 1e-9;
    if (dense || i % stride == 0 || i + 1 == samples.size()) out.push_back(i);
  }
  return out;
}

ValidationResult validate(const Trajectory& q, const Environment& env, const RobotModel& model,
                          const PlannerConfig& cfg, const Deadline& deadline) {
  const auto& samples = q.samples();
  for (std::size_t i : validation_indices(q, cfg)) {
    if (deadline.expired()) return ValidationResult::kTimeout;
    const auto& s = samples[i];
    if (is_collision(model, s.state, sample_env(env, model, s.state, s.t), env.margin())) {
      return ValidationResult::kCollision;
    }
  }
  return ValidationResult::kValid;
}

PlanLoopResult plan_loop(const GoalConstraintSet& goals, const SoftConstraintSet& soft, const Environment& env,
                         const RobotModel& model, Rng& rng, const PlannerConfig& cfg, const Trajectory* current,
                         const RobotState& q_now) {
  if (goals.empty()) throw std::invalid_argument("plan_loop: empty goal set");
  const auto wall_start = std::chrono::steady_clock::now();
  const double start = work::now();
  PlanLoopResult res;
  auto finish = [&]() {
    res.compute_time = work::now() - start;
    res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    return res;
  };

  const bool at_rest = q_now.velocities.size() == 0 || q_now.velocities.norm() < cfg.finish_velocity;
  if (at_rest && goal_reached(model, q_now, goals, cfg.finish_position_tolerance, cfg.finish_rotation_tolerance)) {
    res.outcome = LoopOutcome::kFinished;
    res.q_init = q_now;
    return finish();
  }

  std::optional<Trajectory> remaining;
  if (current != nullptr && !current->empty()) {
    remaining = current->tail(cfg.replan_period);
    res.q_init = remaining->state_at(0.0);
    // a hold short of the goal is not a path to it and never competes
    if (!goal_reached(model, remaining->final_state(), goals, cfg.finish_position_tolerance,
                      cfg.finish_rotation_tolerance)) {
      remaining.reset();
    }
  } else {
    res.q_init = RobotState(q_now.positions);
  }

  const auto candidates = generate(goals, res.q_init, env, model, rng, cfg.generator,
                                   remaining ? &*remaining : nullptr, &res.generation);
  res.generated = static_cast<int>(candidates.size());

  std::vector<Trajectory> trajectories;
  std::vector<bool> is_carryover;
  trajectories.reserve(candidates.size());
  for (const auto& c : candidates) {
    if (c.source == Provenance::kCarryover) {
      trajectories.push_back(*remaining);
      is_carryover.push_back(true);
      continue;
    }
    if (auto t = time_parameterize(model, c, res.q_init.velocities, cfg.timing)) {
      trajectories.push_back(std::move(*t));
      is_carryover.push_back(false);
    }
  }
  res.parameterized = static_cast<int>(trajectories.size());

  const auto order = rank(trajectories, soft, model, &env);
  const Deadline deadline = Deadline::after(cfg.validation_timeout);
  for (std::size_t idx : order) {
    const ValidationResult v = validate(trajectories[idx], env, model, cfg, deadline);
    if (v == ValidationResult::kTimeout) {
      ++res.timeouts;
      break;
    }
    ++res.checked;
    if (v == ValidationResult::kCollision) {
      ++res.collided;
      continue;
    }
    res.outcome = is_carryover[idx] ? LoopOutcome::kKept : LoopOutcome::kSwitched;
    res.score = evaluate(trajectories[idx], soft, model, &env);
    res.trajectory = std::move(trajectories[idx]);
    break;
  }
  return finish();
}

// ---------------------------------------------------------------------------

std::optional<std::size_t> Timeline::active(double t) const {
  std::optional<std::size_t> out;
  for (std::size_t i = 0; i < publications_.size(); ++i) {
    if (publications_[i].adopt_time <= t + 1e-12) out = i;
  }
  return out;
}

RobotState Timeline::commanded(double t) const {
  const auto idx = active(t);
  if (!idx) return RobotState(start_.positions);
  const auto& p = publications_[*idx];
  return p.trajectory.state_at(t - p.anchor);
}

double Timeline::settle_time() const {
  if (publications_.empty()) return 0.0;
  const auto& p = publications_.back();
  return std::max(p.adopt_time, p.anchor + p.trajectory.duration());
}

Transcript run_periodic(const GoalConstraintSet& goals, const SoftConstraintSet& soft, const Environment& env,
                        const RobotModel& model, const RobotState& start, const PlannerConfig& cfg, Executor& executor,
                        Rng& rng) {
  Transcript tr;
  tr.start = start;
  Timeline timeline(start);
  auto publish = [&](Publication p) {
    executor.publish(p);
    timeline.publish(p);
    tr.publications.push_back(std::move(p));
    return tr.publications.size() - 1;
  };

  const double period = cfg.replan_period;
  double now = 0.0;
  int stops = 0;
  tr.termination = "loop_limit";
  for (int loop = 0; loop < cfg.max_loops; ++loop) {
    if (now >= cfg.timeout) {
      tr.termination = "timeout";
      break;
    }
    if (executor.stop_at(now)) {
      tr.termination = "goal_reached";
      break;
    }
    const RobotState q_now = timeline.commanded(now);
    std::optional<Trajectory> current;
    if (const auto idx = timeline.active(now)) {
      const auto& p = tr.publications[*idx];
      current = p.trajectory.tail(now - p.anchor);
    }

    WorkMeter meter;
    PlanLoopResult res;
    {
      work::Scope scope(meter);
      res = plan_loop(goals, soft, env, model, rng, cfg, current ? &*current : nullptr, q_now);
    }
    double charged = std::min(res.compute_time, cfg.loop_budget());

    LoopRecord rec;
    rec.time = now;
    rec.outcome = res.outcome;
    rec.wall_time = res.wall_time;
    rec.generated = res.generated;
    rec.checked = res.checked;
    rec.collided = res.collided;
    rec.timeouts = res.timeouts;
    rec.score = res.score;
    if (res.trajectory) {
      rec.source = res.trajectory->source;
      rec.shape = res.trajectory->shape;
      rec.duration = res.trajectory->duration();
    }

    bool done = false;
    if (res.outcome == LoopOutcome::kFinished) {
      tr.termination = "finished";
      done = true;
    } else if (res.outcome == LoopOutcome::kStopped) {
      ++stops;
      const bool moving = current && q_now.velocities.norm() >= cfg.finish_velocity;
      if (moving) {
        // halt where the robot will be when this loop would have published
        Trajectory hold({TrajectorySample{0.0, RobotState(current->state_at(period).positions)}});
        hold.source = Provenance::kCarryover;
        rec.publication = publish({now + period, now + period, std::move(hold)});
      } else if (cfg.fallback) {
        WorkMeter fb_meter;
        std::optional<Trajectory> fb;
        {
          work::Scope scope(fb_meter);
          fb = plan_baseline(model, RobotState(q_now.positions), goals, env, rng, cfg.rrt, cfg.timing);
        }
        charged += fb_meter.elapsed();
        if (fb) {
          rec.fallback = true;
          rec.source = fb->source;
          rec.shape = fb->shape;
          rec.duration = fb->duration();
          rec.publication = publish({now + charged, now + charged, std::move(*fb)});
          stops = 0;
        }
      }
      if (stops >= cfg.max_stopped_loops) {
        tr.termination = "stopped";
        done = true;
      }
    } else {
      stops = 0;
      if (!current) {
        rec.publication = publish({now + charged, now + charged, std::move(*res.trajectory)});
      } else if (res.outcome == LoopOutcome::kSwitched) {
        if (charged <= period) {
          rec.publication = publish({now + period, now + period, std::move(*res.trajectory)});
        } else {
          rec.late = true;  // the predicted start state is already in the past
        }
      }
    }
    rec.compute_time = charged;
    tr.loops.push_back(std::move(rec));
    if (done) break;
    if (!cfg.periodic && !tr.publications.empty()) {
      tr.termination = "executed";
      break;
    }
    now += std::max(period, charged);
  }
  tr.end_time = now;
  return tr;
}

}  // namespace rlp
