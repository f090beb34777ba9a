#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "rlp/scenario.hpp"
#include "rlp/sim.hpp"

namespace rlp {

struct SuiteRow {
  std::string scenario_id;
  Method method = Method::kRlp;
  EpisodeMetrics metrics;
  std::string error;  // non-empty when the episode threw; metrics then mark it incomplete
};

/// Means over every episode of one method; rates in [0, 1].
struct MethodAggregate {
  Method method = Method::kRlp;
  int episodes = 0;
  double completion_rate = 0.0;
  double motion_completion_time = 0.0;
  double plan_to_motion_delay = 0.0;
  double motion_duration = 0.0;
  double robustness = 0.0;
  double collision_rate = 0.0;
};

struct SuiteResult {
  std::vector<SuiteRow> rows;  // scenario-major, methods in request order
  std::vector<MethodAggregate> aggregates;
};

/// Rounds every metric to the precision the CSV stores, so aggregates are
/// recomputable from the file.
EpisodeMetrics quantize(const EpisodeMetrics& m);

std::vector<MethodAggregate> aggregate(const std::vector<SuiteRow>& rows, const std::vector<Method>& methods);

/// Runs every (scenario, method) episode on `threads` workers. Output does not
/// depend on the thread count.
SuiteResult run_suite(const RobotModel& model, const std::vector<Scenario>& scenarios,
                      const std::vector<Method>& methods, const SimConfig& sim, const PlannerConfig& planner,
                      int threads = 1);

/// Header, one row per episode, then one "aggregate,<method>,..." line per method.
void write_csv(std::ostream& out, const SuiteResult& result);

std::vector<Method> parse_methods(const std::string& comma_list);  // throws ConfigError

}  // namespace rlp
