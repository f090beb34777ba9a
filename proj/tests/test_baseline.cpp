#include "support.hpp"

namespace rlp {
namespace {

using test::hsr;

double u(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

bool free_at(const VecX& q, const Environment& env) { return !is_collision(hsr(), q, env, env.margin()); }

/// Every edge re-checked ten times finer than the planner's own resolution.
void expect_fine_free(const std::vector<VecX>& path, const Environment& env, double step) {
  for (std::size_t i = 1; i < path.size(); ++i) {
    EXPECT_TRUE(edge_free(hsr(), path[i - 1], path[i], env, step / 10)) << "edge " << i;
  }
}

/// A pillar between start and goal forces a detour.
Environment pillar() { return Environment({}, {Aabb{Vec3(0.6, -0.4, 0.0), Vec3(0.9, 0.4, 1.5)}}); }

TEST(EdgeFree, SeesAnObstacleOnTheSegment) {
  const VecX a = test::stowed(0.0).positions;
  const VecX b = test::stowed(2.0).positions;
  EXPECT_TRUE(edge_free(hsr(), a, b, Environment{}, 0.3));
  EXPECT_FALSE(edge_free(hsr(), a, b, pillar(), 0.3));
}

TEST(RrtConnect, FindsAFreePathInOpenSpace) {
  const Scenario s = test::open_scenario();
  Rng rng(1);
  const RrtConfig cfg;
  const auto path = rrt_connect(hsr(), s.start, s.goals, s.env, rng, cfg);
  ASSERT_TRUE(path);
  EXPECT_EQ(path->front(), s.start.positions);
  EXPECT_TRUE(satisfies_any(s.goals, hsr(), RobotState(path->back())));
}

TEST(RrtConnect, DetoursAroundAPillar) {
  Scenario s = test::open_scenario(Vec3(1.6, 0.0, 0.6));
  s.env = pillar();
  Rng rng(2);
  const RrtConfig cfg;
  const auto path = rrt_connect(hsr(), s.start, s.goals, s.env, rng, cfg);
  ASSERT_TRUE(path);
  EXPECT_TRUE(satisfies_any(s.goals, hsr(), RobotState(path->back())));
  for (const auto& q : *path) EXPECT_TRUE(free_at(q, s.env));
  expect_fine_free(*path, s.env, cfg.step);
}

TEST(RrtConnect, EnclosedGoalFails) {
  Scenario s = test::open_scenario();
  s.env = test::walled_off(Vec3(1.5, 0.5, 0.6));
  Rng rng(3);
  RrtConfig cfg;
  cfg.max_iterations = 500;
  EXPECT_FALSE(rrt_connect(hsr(), s.start, s.goals, s.env, rng, cfg));
}

TEST(Shortcut, ZeroIterationsIsTheIdentity) {
  Rng rng(4);
  const std::vector<VecX> path{test::stowed().positions, test::stowed(0.5, 1.0).positions,
                               test::stowed(1.0).positions};
  EXPECT_EQ(shortcut(path, Environment{}, hsr(), rng, 0), path);
}

TEST(Shortcut, StraightensAZigZagInFreeSpace) {
  Rng rng(5);
  std::vector<VecX> path;
  for (int i = 0; i <= 6; ++i) path.push_back(test::stowed(0.3 * i, i % 2 == 0 ? 0.0 : 0.6).positions);
  const auto out = shortcut(path, Environment{}, hsr(), rng, 200);
  EXPECT_EQ(out.front(), path.front());
  EXPECT_EQ(out.back(), path.back());
  EXPECT_LT(path_length(hsr(), out), 0.8 * path_length(hsr(), path));
}

TEST(Shortcut, NeverLengthensOrCollides) {
  Rng rng(6);
  const Environment env = pillar();
  int shortened = 0;
  for (int k = 0; k < 1000; ++k) {
    // a free detour around the pillar with random bumps
    std::vector<VecX> path{test::stowed(0.0, 0.0).positions};
    const double side = k % 2 == 0 ? 1.0 : -1.0;
    for (int i = 1; i <= 4; ++i) {
      path.push_back(test::stowed(0.35 * i - 0.1 + u(rng, -0.05, 0.05), side * (0.75 + u(rng, 0.0, 0.3))).positions);
    }
    path.push_back(test::stowed(1.6, 0.0).positions);
    // inputs are checked finely so that their sub-segments are free at any resolution
    bool valid = true;
    for (std::size_t i = 1; i < path.size(); ++i) valid = valid && edge_free(hsr(), path[i - 1], path[i], env, 0.01);
    if (!valid) continue;
    const auto out = shortcut(path, env, hsr(), rng, 20);
    ASSERT_EQ(out.front(), path.front());
    ASSERT_EQ(out.back(), path.back());
    ASSERT_LE(path_length(hsr(), out), path_length(hsr(), path) + 1e-9) << "case " << k;
    for (std::size_t i = 1; i < out.size(); ++i) {
      ASSERT_TRUE(edge_free(hsr(), out[i - 1], out[i], env, 0.3)) << "case " << k << " edge " << i;
    }
    if (path_length(hsr(), out) < path_length(hsr(), path) - 1e-9) ++shortened;
  }
  EXPECT_GT(shortened, 100);
}

TEST(PlanBaseline, EveryTrajectorySampleIsFree) {
  Scenario s = test::open_scenario(Vec3(1.6, 0.0, 0.6));
  s.env = pillar();
  Rng rng(7);
  const auto q = plan_baseline(hsr(), s.start, s.goals, s.env, rng, RrtConfig{}, TimingConfig{});
  ASSERT_TRUE(q);
  EXPECT_EQ(q->source, Provenance::kBaseline);
  EXPECT_EQ(q->state_at(0.0).positions, s.start.positions);
  EXPECT_TRUE(satisfies_any(s.goals, hsr(), q->final_state()));
  for (const auto& smp : q->samples()) ASSERT_TRUE(free_at(smp.state.positions, s.env)) << "t " << smp.t;
}

TEST(PlanBaseline, SameSeedSamePlan) {
  const Scenario s = test::open_scenario();
  Rng a(8);
  Rng b(8);
  const auto qa = plan_baseline(hsr(), s.start, s.goals, s.env, a, RrtConfig{}, TimingConfig{});
  const auto qb = plan_baseline(hsr(), s.start, s.goals, s.env, b, RrtConfig{}, TimingConfig{});
  ASSERT_TRUE(qa && qb);
  EXPECT_EQ(qa->waypoints, qb->waypoints);
  EXPECT_EQ(qa->duration(), qb->duration());
}

TEST(RrtConfig, RejectsNonPositiveStep) {
  RrtConfig cfg;
  cfg.step = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

}  // namespace
}  // namespace rlp
