#pragma once

#include <optional>
#include <string>

#include "rlp/planner.hpp"
#include "rlp/scenario.hpp"

namespace rlp {

enum class Method { kRlp, kRlpMinus, kRlpMm, kRrt };
std::string to_string(Method m);
Method method_from_string(const std::string& s);  // throws ConfigError

/// Planner configuration a method runs with; each variant changes one field.
PlannerConfig config_for(Method m, const PlannerConfig& base);

struct SimConfig {
  double dt = 0.02;
  double base_noise_sigma = 0.0;  // constant per-episode base offset [m]
  double position_tolerance = 0.01;
  double rotation_tolerance = 15.0 * kPi / 180.0;
  double episode_timeout = 20.0;

  void validate() const;  // throws ConfigError
};

struct EpisodeMetrics {
  bool completed = false;
  double motion_completion_time = 0.0;
  double plan_to_motion_delay = 0.0;
  double motion_duration = 0.0;
  double robustness = 0.0;
  bool collided = false;
};

struct Episode {
  EpisodeMetrics metrics;
  Transcript transcript;
};

/// Constant base offset applied to the executed state for a scenario seed.
Vec3 base_offset(std::uint64_t seed, double sigma);

/// Executed (noisy) state for a commanded state.
RobotState executed_state(const RobotState& commanded, const Vec3& offset);

Episode run_episode(const RobotModel& model, const Scenario& scenario, Method method, const SimConfig& sim,
                    const PlannerConfig& planner);

/// Metrics of a recorded transcript, by re-executing its publications.
EpisodeMetrics replay_metrics(const RobotModel& model, const Scenario& scenario, const Transcript& transcript,
                              const SimConfig& sim, const PlannerConfig& planner);

}  // namespace rlp
