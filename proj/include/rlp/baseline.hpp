#pragma once

#include <optional>
#include <vector>

#include "rlp/constraints.hpp"
#include "rlp/environment.hpp"
#include "rlp/ik.hpp"
#include "rlp/timing.hpp"

namespace rlp {

struct RrtConfig {
  double step = 0.3;          // weighted state distance per extension
  double goal_bias = 0.1;     // probability of adding a goal root per iteration
  int max_iterations = 4000;
  int shortcut_iterations = 200;
  int restarts = 10;          // full replans when the parameterized path collides
  double base_padding = 1.5;  // base sampling box around start and goal roots [m]
  IkSamplingConfig sampling;

  void validate() const;  // throws ConfigError
};

/// Straight segment a -> b is collision-free when checked every step/2.
bool edge_free(const RobotModel& model, const VecX& a, const VecX& b, const Environment& env, double step);

/// Bidirectional RRT between q_init and goal roots sampled from the goal set.
std::optional<std::vector<VecX>> rrt_connect(const RobotModel& model, const RobotState& q_init,
                                             const GoalConstraintSet& goals, const Environment& env, Rng& rng,
                                             const RrtConfig& cfg);

/// Round-robin shortcutting: alternates random waypoint pairs and random points
/// along the path. Never lengthens the path or adds a collision.
std::vector<VecX> shortcut(std::vector<VecX> path, const Environment& env, const RobotModel& model, Rng& rng,
                           int iterations, double step = 0.3);

double path_length(const RobotModel& model, const std::vector<VecX>& path);

/// rrt_connect + shortcut + time parameterization, replanned from scratch until
/// every trajectory sample is collision-free. Blends are dropped if they collide.
std::optional<Trajectory> plan_baseline(const RobotModel& model, const RobotState& q_init,
                                        const GoalConstraintSet& goals, const Environment& env, Rng& rng,
                                        const RrtConfig& cfg, const TimingConfig& timing);

}  // namespace rlp
