#include "rlp/sim.hpp"

#include <cmath>

#include "rlp/work.hpp"

namespace rlp {

std::string to_string(Method m) {
  switch (m) {
    case Method::kRlp: return "rlp";
    case Method::kRlpMinus: return "rlp-minus";
    case Method::kRlpMm: return "rlp-mm";
    case Method::kRrt: return "rrt";
  }
  return "unknown";
}

Method method_from_string(const std::string& s) {
  for (auto m : {Method::kRlp, Method::kRlpMinus, Method::kRlpMm, Method::kRrt}) {
    if (to_string(m) == s) return m;
  }
  throw ConfigError("unknown method '" + s + "' (expected rlp, rlp-minus, rlp-mm or rrt)");
}

PlannerConfig config_for(Method m, const PlannerConfig& base) {
  PlannerConfig cfg = base;
  if (m == Method::kRlpMinus) cfg.generator.use_robust_ik = false;
  if (m == Method::kRlpMm) cfg.periodic = false;
  return cfg;
}

void SimConfig::validate() const {
  if (!(dt > 0.0)) throw ConfigError("sim: dt must be > 0");
  if (!(position_tolerance > 0.0) || !(rotation_tolerance > 0.0)) throw ConfigError("sim: tolerances must be > 0");
  if (base_noise_sigma < 0.0) throw ConfigError("sim: base_noise_sigma must be >= 0");
  if (!(episode_timeout > 0.0)) throw ConfigError("sim: episode_timeout must be > 0");
}

Vec3 base_offset(std::uint64_t seed, double sigma) {
  if (!(sigma > 0.0)) return Vec3::Zero();
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> n(0.0, sigma);
  const double x = n(rng);
  const double y = n(rng);
  return {x, y, 0.0};
}

RobotState executed_state(const RobotState& commanded, const Vec3& offset) {
  RobotState q = commanded;
  q.positions[0] += offset.x();
  q.positions[1] += offset.y();
  return q;
}

namespace {

/// Tick-level ground truth: goal check and collision on executed states.
class Monitor final : public Executor {
 public:
  Monitor(const RobotModel& model, const Scenario& scenario, const SimConfig& sim)
      : model_(model),
        scenario_(scenario),
        sim_(sim),
        offset_(base_offset(scenario.seed, sim.base_noise_sigma)),
        timeline_(scenario.start) {}

  void publish(const Publication& p) override { timeline_.publish(p); }

  bool stop_at(double t) override {
    advance(t);
    return reached_.has_value();
  }

  /// Ticks until the goal is reached, the timeout, or the motion has settled.
  void run_out() {
    while (!reached_ && next_tick_ * sim_.dt <= sim_.episode_timeout + 1e-9) {
      const double t = next_tick_ * sim_.dt;
      if (t > timeline_.settle_time() + sim_.dt) break;  // static from here on
      advance(t);
    }
  }

  const Timeline& timeline() const { return timeline_; }
  std::optional<double> reached() const { return reached_; }
  bool collided() const { return collided_; }

 private:
  void advance(double t) {
    for (; !reached_ && next_tick_ * sim_.dt <= t + 1e-9; ++next_tick_) {
      const double tick = next_tick_ * sim_.dt;
      if (tick > sim_.episode_timeout + 1e-9) return;
      const RobotState q = executed_state(timeline_.commanded(tick), offset_);
      if (is_collision(model_, q.positions, scenario_.env, 0.0)) collided_ = true;
      if (goal_reached(model_, q, scenario_.goals, sim_.position_tolerance, sim_.rotation_tolerance)) {
        reached_ = tick;
      }
    }
  }

  const RobotModel& model_;
  const Scenario& scenario_;
  const SimConfig& sim_;
  Vec3 offset_;
  Timeline timeline_;
  long next_tick_ = 0;
  std::optional<double> reached_;
  bool collided_ = false;
};

EpisodeMetrics metrics_from(const RobotModel& model, const Scenario& scenario, const Monitor& monitor,
                            const SimConfig& sim, const PlannerConfig& planner) {
  EpisodeMetrics m;
  const auto& pubs = monitor.timeline().publications();
  m.plan_to_motion_delay = pubs.empty() ? sim.episode_timeout : std::min(pubs.front().adopt_time, sim.episode_timeout);
  m.completed = monitor.reached().has_value();
  m.motion_completion_time = m.completed ? *monitor.reached() : sim.episode_timeout;
  m.motion_duration = std::max(m.motion_completion_time - m.plan_to_motion_delay, 0.0);
  // keep the identity exact in floating point
  m.plan_to_motion_delay = m.motion_completion_time - m.motion_duration;
  m.collided = monitor.collided();
  const double final_time = m.completed ? monitor.timeline().settle_time() : sim.episode_timeout;
  const RobotState final_state(monitor.timeline().commanded(final_time).positions);
  m.robustness = robustness(model, final_state, scenario.env, planner.generator.base_error, planner.generator.robust,
                            planner.generator.sampling.ik);
  return m;
}

}  // namespace

Episode run_episode(const RobotModel& model, const Scenario& scenario, Method method, const SimConfig& sim,
                    const PlannerConfig& planner) {
  sim.validate();
  const PlannerConfig cfg = config_for(method, planner);
  Monitor monitor(model, scenario, sim);
  Rng rng(scenario.seed);
  Episode ep;

  if (method == Method::kRrt) {
    ep.transcript.method = to_string(method);
    ep.transcript.start = scenario.start;
    WorkMeter meter;
    std::optional<Trajectory> traj;
    {
      work::Scope scope(meter);
      traj = plan_baseline(model, scenario.start, scenario.goals, scenario.env, rng, cfg.rrt, cfg.timing);
    }
    LoopRecord rec;
    rec.compute_time = meter.elapsed();
    rec.outcome = traj ? LoopOutcome::kSwitched : LoopOutcome::kStopped;
    if (traj && meter.elapsed() < sim.episode_timeout) {
      rec.source = traj->source;
      rec.shape = traj->shape;
      rec.duration = traj->duration();
      rec.publication = 0;
      Publication p{meter.elapsed(), meter.elapsed(), std::move(*traj)};
      monitor.publish(p);
      ep.transcript.publications.push_back(std::move(p));
      ep.transcript.termination = "executed";
    } else {
      ep.transcript.termination = "stopped";
    }
    ep.transcript.loops.push_back(rec);
    ep.transcript.end_time = meter.elapsed();
  } else {
    PlannerConfig run_cfg = cfg;
    run_cfg.timeout = sim.episode_timeout;
    ep.transcript = run_periodic(scenario.goals, scenario.soft, scenario.env, model, scenario.start, run_cfg, monitor, rng);
    ep.transcript.method = to_string(method);
  }
  monitor.run_out();
  ep.metrics = metrics_from(model, scenario, monitor, sim, cfg);
  return ep;
}

EpisodeMetrics replay_metrics(const RobotModel& model, const Scenario& scenario, const Transcript& transcript,
                              const SimConfig& sim, const PlannerConfig& planner) {
  Monitor monitor(model, scenario, sim);
  for (const auto& p : transcript.publications) monitor.publish(p);
  monitor.run_out();
  Method method = Method::kRlp;
  if (!transcript.method.empty()) method = method_from_string(transcript.method);
  return metrics_from(model, scenario, monitor, sim, config_for(method, planner));
}

}  // namespace rlp
