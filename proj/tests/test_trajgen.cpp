#include <algorithm>

#include "support.hpp"

namespace rlp {
namespace {

using test::hsr;

/// Kolmogorov-Smirnov statistic of xs against uniform(lo, hi).
double ks_uniform(std::vector<double> xs, double lo, double hi) {
  std::sort(xs.begin(), xs.end());
  const auto n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = (xs[i] - lo) / (hi - lo);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

GeneratorConfig plain_config() {
  GeneratorConfig cfg;
  cfg.use_robust_ik = false;
  return cfg;
}

TEST(RandomMid, ZeroWidthGivesTheBaseMidpoint) {
  Rng rng(1);
  const RobotState a = test::stowed(0.0, 0.0, 3.0);
  const RobotState b = test::stowed(2.0, -1.0, -3.0);
  const RobotState m = sample_random_mid(hsr(), a, b, rng, 0.0, 0.0);
  EXPECT_DOUBLE_EQ(m.positions[0], 1.0);
  EXPECT_DOUBLE_EQ(m.positions[1], -0.5);
  // the short arc between 3 and -3 passes through pi
  EXPECT_NEAR(std::abs(m.positions[2]), kPi, 1e-9);
  EXPECT_TRUE(hsr().within_limits(m.positions));
}

TEST(RandomMid, IsUniformAroundTheMidpoint) {
  Rng rng(2);
  const RobotState a = test::stowed(-1.0, 0.0);
  const RobotState b = test::stowed(3.0, 2.0);
  std::vector<double> xs;
  std::vector<double> flex;
  const int n = 4000;
  for (int k = 0; k < n; ++k) {
    const RobotState m = sample_random_mid(hsr(), a, b, rng, 2.0, 1.5);
    xs.push_back(m.positions[0]);
    flex.push_back(m.positions[4]);
    EXPECT_TRUE(hsr().within_limits(m.positions));
  }
  // 1% critical value
  const double crit = 1.63 / std::sqrt(static_cast<double>(n));
  EXPECT_LT(ks_uniform(xs, -1.0, 3.0), crit);
  EXPECT_LT(ks_uniform(flex, hsr().limits(4).lower, hsr().limits(4).upper), crit);
}

TEST(Merge, ArityDecidesTheShape) {
  const RobotState a = test::stowed();
  const RobotState b = test::stowed(1.0);
  EXPECT_EQ(merge({a, b}, Provenance::kRandomStraight).shape(), PathShape::kStraight);
  const auto three = merge({a, b, a}, Provenance::kRandomMid);
  EXPECT_EQ(three.shape(), PathShape::kThreePoint);
  EXPECT_EQ(three.source, Provenance::kRandomMid);
  EXPECT_THROW(merge({a}, Provenance::kRandomStraight), std::invalid_argument);
  EXPECT_THROW(merge({a, b, a, b}, Provenance::kRandomStraight), std::invalid_argument);
}

TEST(SampleTrajectory, StraightAndThreePointCandidates) {
  Rng rng(3);
  const auto goals = test::top_grasp(Vec3(1.5, 0.5, 0.6));
  RobotState q0 = test::stowed(0.1, 0.2, 0.3);
  q0.velocities.setConstant(0.05);
  const auto cfg = plain_config();
  for (bool middle : {false, true}) {
    const auto c = sample_trajectory(goals, q0, middle, hsr(), rng, cfg);
    ASSERT_TRUE(c);
    EXPECT_EQ(c->waypoints.size(), middle ? 3U : 2U);
    EXPECT_EQ(c->source, middle ? Provenance::kRandomMid : Provenance::kRandomStraight);
    EXPECT_EQ(c->waypoints.front().positions, q0.positions);
    EXPECT_TRUE(satisfies_any(goals, hsr(), c->waypoints.back()));
  }
  EXPECT_THROW(sample_trajectory({}, q0, false, hsr(), rng, cfg), std::invalid_argument);
}

TEST(Generate, CountsFollowTheCandidateLimits) {
  Rng rng(4);
  const auto goals = test::top_grasp(Vec3(1.5, 0.5, 0.6));
  const RobotState q0 = test::stowed();
  const auto cfg = plain_config();
  GenerationStats st;
  const auto out = generate(goals, q0, Environment{}, hsr(), rng, cfg, nullptr, &st);
  ASSERT_EQ(out.size(), static_cast<std::size_t>(cfg.max_candidates));
  for (std::size_t i = 0; i < out.size(); ++i) {
    EXPECT_EQ(out[i].shape(), i < static_cast<std::size_t>(cfg.max_straight) ? PathShape::kStraight
                                                                             : PathShape::kThreePoint);
    EXPECT_EQ(out[i].waypoints.front().positions, q0.positions);
    EXPECT_TRUE(satisfies_any(goals, hsr(), out[i].waypoints.back()));
  }
  EXPECT_EQ(st.attempts - st.failures, cfg.max_candidates);
}

TEST(Generate, RobustGoalsComeFirstAndLimitsHold) {
  Rng rng(5);
  const auto goals = test::top_grasp(Vec3(1.5, 0.5, 0.6));
  const RobotState q0 = test::stowed();
  GeneratorConfig cfg;
  cfg.max_candidates = 12;
  cfg.max_straight = 3;
  GenerationStats st;
  const auto out = generate(goals, q0, Environment{}, hsr(), rng, cfg, nullptr, &st);
  EXPECT_LE(out.size(), 12U);
  EXPECT_GT(st.robust_goals, 0);
  std::size_t straight = 0;
  for (const auto& c : out) straight += c.shape() == PathShape::kStraight ? 1 : 0;
  EXPECT_LE(straight, 3U);
  const auto robust = static_cast<std::size_t>(std::min(st.robust_goals, 12));
  for (std::size_t i = 0; i < robust; ++i) EXPECT_EQ(out[i].source, Provenance::kRobustIk);
}

TEST(Generate, CarryoverIsTheFirstCandidate) {
  Rng rng(6);
  const auto goals = test::top_grasp(Vec3(1.5, 0.5, 0.6));
  const RobotState q0 = test::stowed();
  const auto traj = time_parameterize(hsr(), std::vector<VecX>{q0.positions, test::stowed(1.0, 0.5).positions},
                                      VecX::Zero(hsr().dof()));
  ASSERT_TRUE(traj);
  const Trajectory rest = traj->tail(0.5);
  const RobotState now = rest.state_at(0.0);
  auto cfg = plain_config();
  cfg.max_candidates = 6;
  cfg.max_straight = 2;
  const auto out = generate(goals, now, Environment{}, hsr(), rng, cfg, &rest);
  ASSERT_EQ(out.size(), 7U);
  EXPECT_EQ(out[0].source, Provenance::kCarryover);
  EXPECT_EQ(out[0].waypoints.front().positions, now.positions);
  EXPECT_EQ(out[0].waypoints.back().positions, rest.final_state().positions);
  for (std::size_t i = 1; i < out.size(); ++i) EXPECT_NE(out[i].source, Provenance::kCarryover);
}

TEST(CarryoverCandidate, DropsPassedWaypoints) {
  const VecX a = test::stowed().positions;
  const VecX b = test::stowed(1.0).positions;
  const VecX c = test::stowed(1.0, 1.0).positions;
  const auto traj = time_parameterize(hsr(), std::vector<VecX>{a, b, c}, VecX::Zero(hsr().dof()));
  ASSERT_TRUE(traj);
  const auto early = carryover_candidate(traj->tail(0.2), traj->state_at(0.2));
  EXPECT_EQ(early.shape(), PathShape::kThreePoint);
  EXPECT_EQ(early.waypoints[1].positions, b);
  const auto late = carryover_candidate(traj->tail(traj->duration() - 0.2), traj->state_at(traj->duration() - 0.2));
  EXPECT_EQ(late.shape(), PathShape::kStraight);
  EXPECT_EQ(late.waypoints.back().positions, traj->final_state().positions);
}

TEST(Generate, SameSeedSameCandidates) {
  const auto goals = test::top_grasp(Vec3(1.5, 0.5, 0.6));
  const RobotState q0 = test::stowed();
  const GeneratorConfig cfg;
  Rng r1(7);
  Rng r2(7);
  const auto a = generate(goals, q0, Environment{}, hsr(), r1, cfg);
  const auto b = generate(goals, q0, Environment{}, hsr(), r2, cfg);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].positions(), b[i].positions());
}

TEST(Generate, StopsAtTheModeledTimeout) {
  Rng rng(8);
  const auto goals = test::top_grasp(Vec3(1.5, 0.5, 0.6));
  auto cfg = plain_config();
  cfg.timeout = 1e-4;
  WorkMeter meter;
  work::Scope scope(meter);
  GenerationStats st;
  const auto out = generate(goals, test::stowed(), Environment{}, hsr(), rng, cfg, nullptr, &st);
  EXPECT_TRUE(st.timed_out);
  EXPECT_LT(out.size(), static_cast<std::size_t>(cfg.max_candidates));
}

TEST(Generate, JointGoalsAreSampledWithinTheirIntervals) {
  Rng rng(9);
  const JointConstraint jc{{{0, {1.0, 1.2}}, {3, {0.2, 0.3}}}};
  const GoalConstraintSet goals{GoalConstraint{jc}};
  auto cfg = plain_config();
  cfg.max_candidates = 10;
  const auto out = generate(goals, test::stowed(), Environment{}, hsr(), rng, cfg);
  ASSERT_EQ(out.size(), 10U);
  for (const auto& c : out) EXPECT_TRUE(satisfies(jc, c.waypoints.back()));
}

TEST(GeneratorConfig, RejectsMoreStraightThanTotal) {
  GeneratorConfig cfg;
  cfg.max_straight = cfg.max_candidates + 1;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

}  // namespace
}  // namespace rlp
