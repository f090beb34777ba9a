#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rlp/constraints.hpp"
#include "rlp/environment.hpp"
#include "rlp/model.hpp"

namespace rlp {

/// Benchmark input: robot, obstacles, start state and goal.
struct Scenario {
  std::string id;
  std::string robot = "hsr-like";
  std::string template_name;
  Environment env;
  RobotState start;
  GoalConstraintSet goals;
  SoftConstraintSet soft;
  std::uint64_t seed = 0;
};

enum class SceneTemplate { kTabletop, kShelf, kCorridor };
SceneTemplate scene_template_from_string(const std::string& s);  // throws ConfigError
std::string to_string(SceneTemplate t);

struct ScenarioGenConfig {
  int max_retries = 20;
  bool screen = true;  // keep only scenarios the baseline planner solves
};

/// n deterministic scenarios of a template. Every scenario has a collision-free
/// start and, with screening on, a baseline solution.
std::vector<Scenario> gen_scenarios(const RobotModel& model, SceneTemplate tmpl, int n, std::uint64_t seed,
                                    const ScenarioGenConfig& cfg = {});

/// Mixed default suite: templates in rotation.
std::vector<Scenario> default_suite(const RobotModel& model, int n, std::uint64_t seed,
                                    const ScenarioGenConfig& cfg = {});

/// Hand-built corridor scene whose direct path is blocked at first, so the
/// planner starts on a three-point path and later switches to a straight one.
Scenario corridor_switch_scenario(const RobotModel& model);

}  // namespace rlp
