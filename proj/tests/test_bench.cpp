#include <set>
#include <sstream>

#include "support.hpp"

namespace rlp {
namespace {

using test::hsr;

std::string csv_of(const SuiteResult& r) {
  std::ostringstream out;
  write_csv(out, r);
  return out.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

/// Flattened JSON paths whose values differ between a and b.
std::vector<std::string> changed_fields(const Json& a, const Json& b) {
  std::vector<std::string> out;
  const Json fa = a.flatten();
  const Json fb = b.flatten();
  for (auto it = fa.begin(); it != fa.end(); ++it) {
    if (!fb.contains(it.key()) || fb[it.key()] != it.value()) out.push_back(it.key());
  }
  return out;
}

TEST(RunSuite, OneRowPerEpisodeAndOneAggregatePerMethod) {
  const std::vector<Scenario> scenarios{test::open_scenario()};
  const std::vector<Method> methods{Method::kRlp, Method::kRrt};
  const SuiteResult r = run_suite(hsr(), scenarios, methods, SimConfig{}, PlannerConfig{});
  ASSERT_EQ(r.rows.size(), 2U);
  EXPECT_EQ(r.rows[0].method, Method::kRlp);
  EXPECT_EQ(r.rows[1].method, Method::kRrt);
  ASSERT_EQ(r.aggregates.size(), 2U);
  const auto l = lines(csv_of(r));
  ASSERT_EQ(l.size(), 5U);
  EXPECT_EQ(l[3].rfind("aggregate,rlp,", 0), 0U);
  EXPECT_EQ(l[4].rfind("aggregate,rrt,", 0), 0U);
}

TEST(Aggregate, MeansAndRates) {
  std::vector<SuiteRow> rows(3);
  const double durations[] = {2.0, 4.0, 20.0};
  for (int i = 0; i < 3; ++i) {
    auto& r = rows[static_cast<std::size_t>(i)];
    r.scenario_id = "s" + std::to_string(i);
    r.metrics.completed = i < 2;
    r.metrics.motion_duration = durations[i];
    r.metrics.plan_to_motion_delay = 0.5;
    r.metrics.motion_completion_time = durations[i] + 0.5;
    r.metrics.robustness = 0.3 * i;
    r.metrics.collided = i == 1;
  }
  const auto agg = aggregate(rows, {Method::kRlp});
  ASSERT_EQ(agg.size(), 1U);
  EXPECT_EQ(agg[0].episodes, 3);
  EXPECT_DOUBLE_EQ(agg[0].completion_rate, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(agg[0].motion_duration, 26.0 / 3.0);
  EXPECT_DOUBLE_EQ(agg[0].plan_to_motion_delay, 0.5);
  EXPECT_DOUBLE_EQ(agg[0].robustness, 0.3);
  EXPECT_DOUBLE_EQ(agg[0].collision_rate, 1.0 / 3.0);
}

TEST(Quantize, IsIdempotent) {
  EpisodeMetrics m;
  m.motion_completion_time = 3.14159265358979;
  m.plan_to_motion_delay = 0.0123456789;
  m.motion_duration = m.motion_completion_time - m.plan_to_motion_delay;
  m.robustness = 0.987654321;
  const EpisodeMetrics q = quantize(m);
  EXPECT_EQ(to_json(quantize(q)), to_json(q));
  EXPECT_NEAR(q.robustness, m.robustness, 1e-6);
}

TEST(RunSuite, ThreadCountDoesNotChangeTheCsv) {
  const auto scenarios = default_suite(hsr(), 3, 11);
  const std::vector<Method> methods{Method::kRlp, Method::kRlpMm};
  const auto one = csv_of(run_suite(hsr(), scenarios, methods, SimConfig{}, PlannerConfig{}, 1));
  const auto three = csv_of(run_suite(hsr(), scenarios, methods, SimConfig{}, PlannerConfig{}, 3));
  EXPECT_EQ(one, three);
}

TEST(GenScenarios, DeterministicAndCollisionFreeStarts) {
  for (auto t : {SceneTemplate::kTabletop, SceneTemplate::kShelf, SceneTemplate::kCorridor}) {
    const auto a = gen_scenarios(hsr(), t, 3, 5);
    const auto b = gen_scenarios(hsr(), t, 3, 5);
    ASSERT_EQ(a.size(), 3U);
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(to_json(a[i]), to_json(b[i]));
      EXPECT_EQ(a[i].template_name, to_string(t));
      EXPECT_FALSE(is_collision(hsr(), a[i].start.positions, a[i].env, a[i].env.margin())) << a[i].id;
      EXPECT_FALSE(a[i].goals.empty());
    }
    EXPECT_NE(to_json(a[0]), to_json(gen_scenarios(hsr(), t, 1, 6)[0]));
  }
  EXPECT_THROW(scene_template_from_string("kitchen"), ConfigError);
}

TEST(DefaultSuite, RotatesTemplatesWithUniqueIds) {
  const auto suite = default_suite(hsr(), 6, 1);
  ASSERT_EQ(suite.size(), 6U);
  std::set<std::string> ids;
  std::set<std::string> templates;
  for (const auto& s : suite) {
    ids.insert(s.id);
    templates.insert(s.template_name);
  }
  EXPECT_EQ(ids.size(), 6U);
  EXPECT_EQ(templates.size(), 3U);
}

TEST(CorridorSwitch, DirectPathIsBlockedAtTheFirstLoop) {
  const Scenario s = corridor_switch_scenario(hsr());
  const Episode ep = run_episode(hsr(), s, Method::kRlp, SimConfig{}, PlannerConfig{});
  ASSERT_FALSE(ep.transcript.loops.empty());
  EXPECT_GT(ep.transcript.loops[0].collided, 0);
  EXPECT_EQ(ep.transcript.loops[0].shape, PathShape::kThreePoint);
}

TEST(ConfigFor, EachVariantChangesOneField) {
  const RunConfig base;
  auto variant = [&](Method m) { return to_json(RunConfig{config_for(m, base.planner), base.sim}); };
  EXPECT_TRUE(changed_fields(to_json(base), variant(Method::kRlp)).empty());
  EXPECT_TRUE(changed_fields(to_json(base), variant(Method::kRrt)).empty());
  EXPECT_EQ(changed_fields(to_json(base), variant(Method::kRlpMinus)),
            std::vector<std::string>{"/planner/generator/use_robust_ik"});
  EXPECT_EQ(changed_fields(to_json(base), variant(Method::kRlpMm)), std::vector<std::string>{"/planner/periodic"});
}

TEST(ParseMethods, AcceptsKnownNames) {
  EXPECT_EQ(parse_methods("rlp,rrt"), (std::vector<Method>{Method::kRlp, Method::kRrt}));
  EXPECT_THROW(parse_methods("rlp,prm"), ConfigError);
  EXPECT_THROW(parse_methods(""), ConfigError);
}

}  // namespace
}  // namespace rlp
