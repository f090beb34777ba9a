#include "support.hpp"

namespace rlp {
namespace {

using test::hsr;

double box_distance_oracle(const Vec3& p, const Aabb& b) {
  const Vec3 nearest = p.cwiseMax(b.min).cwiseMin(b.max);
  return (p - nearest).norm();
}

std::vector<PlacedSphere> spheres_at(const RobotState& q, const Environment* env = nullptr) {
  std::vector<PlacedSphere> out;
  place_spheres(hsr(), q.positions, env, out);
  return out;
}

RobotState random_pose(Rng& rng, double extent) {
  std::uniform_real_distribution<double> u(-extent, extent);
  RobotState q = test::stowed(u(rng), u(rng), u(rng));
  for (int i = RobotModel::kBaseDofs; i < hsr().dof(); ++i) {
    q.positions[i] = std::uniform_real_distribution<double>(hsr().limits(i).lower, hsr().limits(i).upper)(rng);
  }
  return q;
}

Environment random_scene(Rng& rng, int n_points, int n_boxes, double extent) {
  std::uniform_real_distribution<double> u(-extent, extent);
  std::uniform_real_distribution<double> z(0.0, 1.5);
  std::vector<Vec3> pts;
  for (int i = 0; i < n_points; ++i) pts.emplace_back(u(rng), u(rng), z(rng));
  std::vector<Aabb> boxes;
  for (int i = 0; i < n_boxes; ++i) {
    const Vec3 c(u(rng), u(rng), z(rng));
    const Vec3 h = Vec3::Constant(0.05) + 0.3 * Vec3::Random().cwiseAbs();
    boxes.push_back({c - h, c + h});
  }
  return Environment(pts, boxes);
}

TEST(SampleEnv, EmptyEnvironmentGivesEmptyView) {
  const Environment env;
  const ObstacleView v = sample_env(env, hsr(), test::stowed(), 0.0);
  EXPECT_TRUE(v.empty());
  EXPECT_TRUE(v.points().empty());
}

TEST(SampleEnv, FarPointIsExcluded) {
  const Environment env({Vec3(100.0, 0.0, 0.5)}, {});
  const ObstacleView v = sample_env(env, hsr(), test::stowed(), 0.0);
  EXPECT_TRUE(v.points().empty());
  EXPECT_GE(v.radius, hsr().bounding_radius());
}

TEST(SampleEnv, ViewEqualsLinearScan) {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Environment env = random_scene(rng, 1000, 5, 4.0);
    const RobotState q = random_pose(rng, 3.0);
    const ObstacleView v = sample_env(env, hsr(), q, 0.0);
    std::vector<Vec3> expected;
    for (const auto& p : env.points()) {
      if ((p - v.center).norm() <= v.radius) expected.push_back(p);
    }
    auto got = v.points();
    auto key = [](const Vec3& a, const Vec3& b) { return std::lexicographical_compare(a.data(), a.data() + 3, b.data(), b.data() + 3); };
    std::sort(got.begin(), got.end(), key);
    std::sort(expected.begin(), expected.end(), key);
    ASSERT_EQ(got, expected);
  }
}

TEST(Environment, BallQueryIsExact) {
  Rng rng(2);
  const Environment env = random_scene(rng, 1000, 0, 3.0);
  std::uniform_real_distribution<double> u(-3.5, 3.5);
  for (int k = 0; k < 200; ++k) {
    const Vec3 c(u(rng), u(rng), u(rng) / 3.0);
    const double r = std::uniform_real_distribution<double>(0.01, 1.5)(rng);
    std::vector<int> got;
    env.for_each_point_in_ball(c, r, [&](int i) { got.push_back(i); });
    std::sort(got.begin(), got.end());
    std::vector<int> expected;
    for (int i = 0; i < static_cast<int>(env.points().size()); ++i) {
      if ((env.points()[static_cast<std::size_t>(i)] - c).norm() <= r) expected.push_back(i);
    }
    ASSERT_EQ(got, expected);
  }
}

TEST(IsCollision, EmptyViewIsFree) {
  const Environment env;
  EXPECT_FALSE(is_collision(hsr(), test::stowed(), sample_env(env, hsr(), test::stowed(), 0.0), 0.02));
}

TEST(IsCollision, PointAtSphereCenterCollides) {
  const auto spheres = spheres_at(test::stowed());
  for (const auto& s : spheres) {
    const Environment env({s.center}, {});
    EXPECT_TRUE(is_collision(hsr(), test::stowed().positions, env, 0.0));
  }
}

TEST(IsCollision, SphereBoxTangency) {
  const RobotState q = test::stowed();
  const auto spheres = spheres_at(q);
  const double margin = 0.02;
  Aabb box{Vec3(-2.0, -0.05, 0.1), Vec3(-1.0, 0.05, 0.2)};
  double gap = 1e9;
  for (const auto& s : spheres) gap = std::min(gap, box_distance_oracle(s.center, box) - s.radius);
  for (const double eps : {1e-6, -1e-6}) {
    Aabb moved = box;
    const double shift = gap - (margin + eps);
    moved.min.x() += shift;
    moved.max.x() += shift;
    const Environment env({}, {moved});
    EXPECT_EQ(is_collision(hsr(), q.positions, env, margin), eps < 0.0) << "eps " << eps;
  }
}

TEST(IsCollision, MonotoneInMargin) {
  Rng rng(3);
  for (int k = 0; k < 300; ++k) {
    const Environment env = random_scene(rng, 200, 3, 2.5);
    const RobotState q = random_pose(rng, 2.0);
    const ObstacleView v = sample_env(env, hsr(), q, 0.0);
    bool prev = false;
    for (const double m : {0.0, 0.01, 0.02, 0.05, 0.1}) {
      const bool hit = is_collision(hsr(), q, v, m);
      if (prev) ASSERT_TRUE(hit);
      prev = hit;
    }
  }
}

TEST(IsCollision, ViewAgreesWithFullEnvironment) {
  Rng rng(4);
  int hits = 0;
  for (int k = 0; k < 1000; ++k) {
    const Environment env = random_scene(rng, 300, 4, 3.0);
    const RobotState q = random_pose(rng, 2.5);
    const bool via_view = is_collision(hsr(), q, sample_env(env, hsr(), q, 0.0), 0.02);
    const bool full = is_collision(hsr(), q.positions, env, 0.02);
    ASSERT_EQ(via_view, full);
    hits += full ? 1 : 0;
  }
  EXPECT_GT(hits, 100);  // both outcomes exercised
  EXPECT_LT(hits, 900);
}

TEST(IsCollision, AttachedObjectCollides) {
  const RobotState q = test::stowed();
  const Vec3 ee = ee_transform(hsr(), q.positions).translation();
  // object hanging 0.3 m below the gripper, obstacle point at its center
  AttachedObject obj{hsr().ee_link(), {CollisionSphere{0, hsr().tool_offset().translation() + Vec3(0, 0, 0.3), 0.05}}};
  std::vector<PlacedSphere> placed;
  Environment probe({}, {}, {obj});
  place_spheres(hsr(), q.positions, &probe, placed);
  const Vec3 obj_center = placed.back().center;
  EXPECT_GT((obj_center - ee).norm(), 0.25);
  Environment without({obj_center}, {});
  Environment with({obj_center}, {}, {obj});
  const bool robot_alone = is_collision(hsr(), q.positions, without, 0.0);
  EXPECT_TRUE(is_collision(hsr(), q.positions, with, 0.0));
  if (robot_alone) GTEST_SKIP() << "robot body already covers the probe point";
}

TEST(MinClearance, EmptyViewIsInfinite) {
  const Environment env;
  EXPECT_TRUE(std::isinf(min_clearance(hsr(), test::stowed(), sample_env(env, hsr(), test::stowed(), 0.0))));
}

TEST(MinClearance, MatchesBruteForce) {
  Rng rng(5);
  for (int k = 0; k < 200; ++k) {
    const Environment env = random_scene(rng, 100, 2, 2.0);
    const RobotState q = random_pose(rng, 1.5);
    double expected = std::numeric_limits<double>::infinity();
    for (const auto& s : spheres_at(q)) {
      for (const auto& p : env.points()) expected = std::min(expected, (p - s.center).norm() - s.radius);
      for (const auto& b : env.boxes()) expected = std::min(expected, box_distance_oracle(s.center, b) - s.radius);
    }
    const double got = min_clearance(hsr(), q, full_view(env));
    if (expected <= 0.0) {
      ASSERT_LE(got, 1e-9);  // penetration depth is not a contract
    } else {
      ASSERT_NEAR(got, expected, 1e-9);
    }
  }
}

TEST(MinClearance, SinglePointSingleSphere) {
  const RobotState q = test::stowed();
  const auto spheres = spheres_at(q);
  // a point straight below the base sphere is nearest to it alone
  const Vec3 p = spheres.front().center - Vec3(0.0, 0.0, 1.0);
  const Environment env({p}, {});
  double expected = 1e9;
  for (const auto& s : spheres) expected = std::min(expected, (p - s.center).norm() - s.radius);
  EXPECT_NEAR(min_clearance(hsr(), q, full_view(env)), expected, 1e-12);
}

TEST(SelfCollision, IndependentOfSphereOrder) {
  Json j = read_json_file(std::string(RLP_MODEL_DIR) + "/hsr-like.json");
  auto& spheres = j["collision_spheres"];
  std::reverse(spheres.begin(), spheres.end());
  const RobotModel reversed = load_robot_model(j.dump());
  Rng rng(6);
  int hits = 0;
  for (int k = 0; k < 1000; ++k) {
    const RobotState q = random_pose(rng, 1.0);
    const bool a = in_self_collision(hsr(), q.positions);
    ASSERT_EQ(a, in_self_collision(reversed, q.positions));
    hits += a ? 1 : 0;
  }
  EXPECT_GT(hits, 0);
}

TEST(SelfCollision, PairsSkipAdjacentLinks) {
  const auto& spheres = hsr().spheres();
  for (const auto& [a, b] : hsr().self_pairs()) {
    EXPECT_GE(std::abs(spheres[static_cast<std::size_t>(a)].link - spheres[static_cast<std::size_t>(b)].link), 2);
  }
}

}  // namespace
}  // namespace rlp
