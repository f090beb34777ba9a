#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rlp/planner.hpp"
#include "rlp/scenario.hpp"
#include "rlp/sim.hpp"

namespace rlp {

using Json = nlohmann::json;

/// Planner and simulation settings as one document.
struct RunConfig {
  PlannerConfig planner;
  SimConfig sim;
};

// All readers throw ConfigError with the JSON path of the offending field.

Json to_json(const RunConfig& cfg);
/// Fields present in j override the defaults; unknown keys are rejected.
RunConfig run_config_from_json(const Json& j);
RunConfig load_run_config(const std::string& path);

Json to_json(const Scenario& s);
Scenario scenario_from_json(const Json& j);
Scenario load_scenario(const std::string& path);

/// Profile-backed trajectories store their timing profile, so a loaded copy
/// reproduces every state exactly. with_samples adds the sampled states.
Json to_json(const Trajectory& q, bool with_samples = false);
Trajectory trajectory_from_json(const Json& j);

Json to_json(const Transcript& tr);
Transcript transcript_from_json(const Json& j);

Json to_json(const EpisodeMetrics& m);
EpisodeMetrics metrics_from_json(const Json& j);

/// Self-contained record of one simulated episode.
struct EpisodeRecord {
  Scenario scenario;
  RunConfig config;
  EpisodeMetrics metrics;
  Transcript transcript;
};
Json to_json(const EpisodeRecord& e);
EpisodeRecord episode_from_json(const Json& j);
EpisodeRecord load_episode(const std::string& path);

Json read_json_file(const std::string& path);
/// Writes j with two-space indentation and a trailing newline.
void write_json_file(const std::string& path, const Json& j);

}  // namespace rlp
