#pragma once

#include <optional>
#include <vector>

#include "rlp/constraints.hpp"
#include "rlp/environment.hpp"
#include "rlp/ik.hpp"
#include "rlp/path.hpp"
#include "rlp/timing.hpp"

namespace rlp {

struct GeneratorConfig {
  int max_candidates = 50;               // total candidates per loop
  int max_straight = 5;                  // straight-line candidates per loop
  double mid_position_halfwidth = 2.0;   // [m]
  double mid_rotation_halfwidth = 1.5;   // [rad]
  double timeout = 0.1;                  // [s] on the modeled clock
  int max_attempts = 200;                // hard cap when no clock is running
  bool use_robust_ik = true;
  BaseErrorModel base_error;
  RobustIkConfig robust;
  IkSamplingConfig sampling;

  void validate() const;  // throws ConfigError
};

/// Random intermediate state around the base midpoint of q_init and q_goal;
/// arm joints uniform within limits.
RobotState sample_random_mid(const RobotModel& model, const RobotState& q_init, const RobotState& q_goal, Rng& rng,
                             double position_halfwidth, double rotation_halfwidth);

/// Samples one goal state for a uniformly chosen constraint and builds a
/// straight or three-point candidate from q_init.
std::optional<PathCandidate> sample_trajectory(const GoalConstraintSet& goals, const RobotState& q_init, bool use_middle,
                                               const RobotModel& model, Rng& rng, const GeneratorConfig& cfg);

/// Remaining path of a running trajectory, rooted at q_init.
PathCandidate carryover_candidate(const Trajectory& remaining, const RobotState& q_init);

struct GenerationStats {
  int attempts = 0;
  int failures = 0;
  int robust_goals = 0;
  bool timed_out = false;
};

/// Candidate set for one planning cycle. With a carryover, the first entry is
/// its remaining path.
std::vector<PathCandidate> generate(const GoalConstraintSet& goals, const RobotState& q_init, const Environment& env,
                                    const RobotModel& model, Rng& rng, const GeneratorConfig& cfg,
                                    const Trajectory* carryover = nullptr, GenerationStats* stats = nullptr);

}  // namespace rlp
