#include "rlp/bench.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

namespace rlp {

namespace {

constexpr double kQuantum = 1e-6;

double q6(double v) { return std::round(v / kQuantum) * kQuantum; }

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

EpisodeMetrics quantize(const EpisodeMetrics& m) {
  EpisodeMetrics out = m;
  out.motion_completion_time = q6(m.motion_completion_time);
  out.motion_duration = q6(m.motion_duration);
  out.plan_to_motion_delay = q6(m.plan_to_motion_delay);
  out.robustness = q6(m.robustness);
  return out;
}

std::vector<MethodAggregate> aggregate(const std::vector<SuiteRow>& rows, const std::vector<Method>& methods) {
  std::vector<MethodAggregate> out;
  for (Method method : methods) {
    MethodAggregate a;
    a.method = method;
    for (const auto& r : rows) {
      if (r.method != method) continue;
      ++a.episodes;
      a.completion_rate += r.metrics.completed ? 1.0 : 0.0;
      a.motion_completion_time += r.metrics.motion_completion_time;
      a.plan_to_motion_delay += r.metrics.plan_to_motion_delay;
      a.motion_duration += r.metrics.motion_duration;
      a.robustness += r.metrics.robustness;
      a.collision_rate += r.metrics.collided ? 1.0 : 0.0;
    }
    if (a.episodes > 0) {
      const double n = a.episodes;
      a.completion_rate /= n;
      a.motion_completion_time /= n;
      a.plan_to_motion_delay /= n;
      a.motion_duration /= n;
      a.robustness /= n;
      a.collision_rate /= n;
    }
    out.push_back(a);
  }
  return out;
}

SuiteResult run_suite(const RobotModel& model, const std::vector<Scenario>& scenarios,
                      const std::vector<Method>& methods, const SimConfig& sim, const PlannerConfig& planner,
                      int threads) {
  if (scenarios.empty() || methods.empty()) throw ConfigError("run_suite: need at least one scenario and one method");
  sim.validate();
  planner.validate();
  SuiteResult result;
  result.rows.resize(scenarios.size() * methods.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t k = next++; k < result.rows.size(); k = next++) {
      const Scenario& s = scenarios[k / methods.size()];
      SuiteRow& row = result.rows[k];
      row.scenario_id = s.id;
      row.method = methods[k % methods.size()];
      try {
        row.metrics = quantize(run_episode(model, s, row.method, sim, planner).metrics);
      } catch (const std::exception& e) {
        row.error = e.what();
        row.metrics = EpisodeMetrics{false, sim.episode_timeout, sim.episode_timeout, 0.0, 0.0, false};
      }
    }
  };
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(result.rows.size())));
  {
    std::vector<std::jthread> pool;
    for (int i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
  }
  result.aggregates = aggregate(result.rows, methods);
  return result;
}

void write_csv(std::ostream& out, const SuiteResult& result) {
  out << "scenario_id,method,completed,motion_completion_time,plan_to_motion_delay,motion_duration,robustness,"
         "collided\n";
  for (const auto& r : result.rows) {
    const auto& m = r.metrics;
    out << r.scenario_id << ',' << to_string(r.method) << ',' << (m.completed ? 1 : 0) << ','
        << fixed(m.motion_completion_time) << ',' << fixed(m.plan_to_motion_delay) << ',' << fixed(m.motion_duration)
        << ',' << fixed(m.robustness) << ',' << (m.collided ? 1 : 0) << '\n';
  }
  for (const auto& a : result.aggregates) {
    out << "aggregate," << to_string(a.method) << ',' << fixed(a.completion_rate) << ','
        << fixed(a.motion_completion_time) << ',' << fixed(a.plan_to_motion_delay) << ',' << fixed(a.motion_duration)
        << ',' << fixed(a.robustness) << ',' << fixed(a.collision_rate) << '\n';
  }
}

std::vector<Method> parse_methods(const std::string& comma_list) {
  std::vector<Method> out;
  std::stringstream ss(comma_list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(method_from_string(item));
  }
  if (out.empty()) throw ConfigError("no methods given");
  return out;
}

}  // namespace rlp
