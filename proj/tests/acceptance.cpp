// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero when any fails.
#include <algorithm>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "fixtures.hpp"
#include "rlp/cli.hpp"

namespace rlp {
namespace {

using test::hsr;

constexpr int kSuiteSize = 100;
constexpr std::uint64_t kSuiteSeed = 1;
constexpr double kNoiseSigma = 0.03;
constexpr double kNoisyMargin = 0.02;

double u(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... xs) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, xs...);
  return buf;
}

const MethodAggregate& find(const SuiteResult& r, Method m) {
  for (const auto& a : r.aggregates) {
    if (a.method == m) return a;
  }
  throw std::logic_error("method missing from suite: " + to_string(m));
}

int workers() { return static_cast<int>(std::max(1U, std::thread::hardware_concurrency())); }

// Suites

struct Suites {
  SuiteResult clean;  // every method, no base noise
  SuiteResult noisy;  // rlp and rlp-minus, constant base offset
};

Suites run_suites() {
  const auto scenarios = default_suite(hsr(), kSuiteSize, kSuiteSeed);
  const PlannerConfig planner;
  Suites s;
  s.clean = run_suite(hsr(), scenarios, {Method::kRlp, Method::kRlpMm, Method::kRrt, Method::kRlpMinus}, SimConfig{},
                      planner, workers());
  auto noisy_scenarios = scenarios;
  for (auto& sc : noisy_scenarios) sc.env.set_margin(kNoisyMargin);
  SimConfig noisy;
  noisy.base_noise_sigma = kNoiseSigma;
  s.noisy = run_suite(hsr(), noisy_scenarios, {Method::kRlp, Method::kRlpMinus}, noisy, planner, workers());
  return s;
}

Outcome duration_trend(const Suites& s) {
  const double rlp = find(s.clean, Method::kRlp).motion_duration;
  const double mm = find(s.clean, Method::kRlpMm).motion_duration;
  return {rlp <= 0.95 * mm, fmt("rlp %.3f s, rlp-mm %.3f s, ratio %.3f (<= 0.95)", rlp, mm, rlp / mm)};
}

Outcome robustness_trend(const Suites& s) {
  const double rlp = find(s.noisy, Method::kRlp).robustness;
  const double minus = find(s.noisy, Method::kRlpMinus).robustness;
  return {rlp >= minus + 0.05, fmt("rlp %.3f, rlp-minus %.3f, gap %.3f (>= 0.05)", rlp, minus, rlp - minus)};
}

Outcome delay_trend(const Suites& s) {
  const double rlp = find(s.clean, Method::kRlp).plan_to_motion_delay;
  const double rrt = find(s.clean, Method::kRrt).plan_to_motion_delay;
  return {rlp < rrt, fmt("rlp %.4f s, rrt %.4f s (rlp < rrt)", rlp, rrt)};
}

Outcome safety(const Suites& s) {
  double worst_clean = 0.0;
  for (const auto& a : s.clean.aggregates) worst_clean = std::max(worst_clean, a.collision_rate);
  const double rlp = find(s.noisy, Method::kRlp).collision_rate;
  const double minus = find(s.noisy, Method::kRlpMinus).collision_rate;
  return {worst_clean == 0.0 && rlp <= minus,
          fmt("noise-free worst %.3f (== 0); noisy rlp %.3f, rlp-minus %.3f (rlp <= rlp-minus)", worst_clean, rlp,
              minus)};
}

Outcome completion(const Suites& s) {
  const double rate = find(s.clean, Method::kRlp).completion_rate;
  return {rate >= 0.95, fmt("rlp %.3f (>= 0.95)", rate)};
}

// Timing

VecX random_positions(Rng& rng) {
  VecX q(hsr().dof());
  q[0] = u(rng, -2, 2);
  q[1] = u(rng, -2, 2);
  q[2] = u(rng, -kPi, kPi);
  for (int i = 3; i < hsr().dof(); ++i) q[i] = u(rng, hsr().limits(i).lower, hsr().limits(i).upper);
  return q;
}

/// Fastest time along a straight line of length len from path speed w0 to rest.
double line_time(double len, double w0, double v, double a) {
  const double d_acc = (v * v - w0 * w0) / (2.0 * a);
  const double d_dec = v * v / (2.0 * a);
  if (d_acc + d_dec <= len) return (v - w0) / a + (len - d_acc - d_dec) / v + v / a;
  const double peak = std::sqrt((2.0 * a * len + w0 * w0) / 2.0);
  return (peak - w0) / a + peak / a;
}

Outcome timing_oracle() {
  Rng rng(3);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int k = 0; k < 200; ++k) {
    const VecX a = random_positions(rng);
    const VecX b = random_positions(rng);
    const VecX d = state_delta(a, b);
    const double len = d.norm();
    double v = std::numeric_limits<double>::infinity();
    double acc = v;
    for (int j = 0; j < hsr().dof(); ++j) {
      const double c = std::abs(d[j]) / len;
      if (c < 1e-12) continue;
      v = std::min(v, hsr().limits(j).max_velocity / c);
      acc = std::min(acc, hsr().limits(j).max_acceleration / c);
    }
    const double w0 = k % 2 == 0 ? 0.0 : u(rng, 0.0, std::min(v, std::sqrt(2.0 * acc * len)));
    const auto q = time_parameterize(hsr(), std::vector<VecX>{a, b}, VecX(w0 * d / len));
    if (!q) return {false, fmt("case %d not parameterized", k)};
    const double ratio = q->duration() / line_time(len, w0, v, acc);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  double worst_abs = 0.0;
  for (double dist : {1.0, 2.5, 0.2, 0.05}) {
    VecX b = VecX::Zero(hsr().dof());
    b[0] = dist;
    const auto q = time_parameterize(hsr(), std::vector<VecX>{VecX::Zero(hsr().dof()), b}, VecX::Zero(hsr().dof()));
    if (!q) return {false, "closed-form case not parameterized"};
    const auto& l = hsr().limits(0);
    worst_abs = std::max(worst_abs, std::abs(q->duration() - min_time_rest_to_rest(dist, l.max_velocity,
                                                                                   l.max_acceleration)));
  }
  return {lo >= 1.0 - 1e-9 && hi <= 1.10 && worst_abs <= 1e-3,
          fmt("ratio range [%.6f, %.4f] (within [1, 1.10]); closed-form error %.2e s (<= 1e-3)", lo, hi, worst_abs)};
}

// Robustness score

RobotState reaching(double x = 0.0, double y = 0.0, double yaw = 0.0) {
  VecX q(hsr().dof());
  q << x, y, yaw, 0.3, -0.6, 0.0, -1.0, 0.0;
  return RobotState(q);
}

Outcome robustness_quadrature() {
  const double free = robustness(hsr(), reaching(), Environment{}, BaseErrorModel{}, RobustIkConfig{});

  // footprint sphere touches a wall behind the base: backward offsets collide
  const Environment wall({}, {Aabb{Vec3(-2.0, -2.0, 0.0), Vec3(-0.2 - 1e-9, 2.0, 2.0)}});
  BaseErrorModel err;
  err.grid_n = 41;
  const double half = robustness(hsr(), reaching(), wall, err, RobustIkConfig{});

  Rng rng(6);
  auto random_box = [&rng](const Vec3& around) {
    const Vec3 c = around + Vec3(u(rng, -0.8, 0.8), u(rng, -0.8, 0.8), u(rng, -0.3, 0.6));
    const Vec3 h(u(rng, 0.05, 0.2), u(rng, 0.05, 0.2), u(rng, 0.05, 0.4));
    return Aabb{c - h, c + h};
  };
  int violations = 0;
  for (int k = 0; k < 200; ++k) {
    const RobotState q = reaching(u(rng, -1, 1), u(rng, -1, 1), u(rng, -kPi, kPi));
    const Vec3 base(q.positions[0], q.positions[1], 0.3);
    std::vector<Aabb> boxes{random_box(base)};
    const Environment scene({}, boxes);
    boxes.push_back(random_box(base));
    std::vector<Vec3> points;
    for (int i = 0; i < 20; ++i) points.push_back(base + Vec3(u(rng, -0.6, 0.6), u(rng, -0.6, 0.6), u(rng, 0, 1)));
    const Environment more(points, boxes);
    const double r0 = robustness(hsr(), q, scene, BaseErrorModel{}, RobustIkConfig{});
    const double r1 = robustness(hsr(), q, more, BaseErrorModel{}, RobustIkConfig{});
    if (r1 > r0 + 1e-12) ++violations;
  }
  return {free >= 0.99 && free <= 1.0 && std::abs(half - 0.5) <= 0.05 && violations == 0,
          fmt("free %.4f (in [0.99, 1]); half-plane %.4f (0.5 +- 0.05); monotone violations %d/200", free, half,
              violations)};
}

// Ranking

Trajectory holding(double duration) {
  const RobotState q = test::stowed();
  return Trajectory(std::vector<TrajectorySample>{{0.0, q}, {duration, q}});
}

Outcome ranking() {
  Rng rng(1);
  int mismatches = 0;
  for (int k = 0; k < 1000; ++k) {
    const auto n = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
    std::vector<Trajectory> set;
    std::vector<double> durations;
    for (std::size_t i = 0; i < n; ++i) {
      durations.push_back(0.5 * std::uniform_int_distribution<int>(1, 8)(rng));
      set.push_back(holding(durations.back()));
    }
    std::vector<std::size_t> expected(n);
    std::iota(expected.begin(), expected.end(), 0);
    std::stable_sort(expected.begin(), expected.end(),
                     [&](std::size_t a, std::size_t b) { return durations[a] < durations[b]; });
    if (rank(set, {}, hsr()) != expected) ++mismatches;
  }
  const std::vector<Trajectory> ties{holding(2.0), holding(1.0), holding(2.0), holding(1.0)};
  const bool stable = rank(ties, {}, hsr()) == std::vector<std::size_t>{1, 3, 0, 2};
  return {mismatches == 0 && stable, fmt("mismatched sets %d/1000; ties stable %s", mismatches, stable ? "yes" : "no")};
}

// Loop semantics

Outcome corridor() {
  const Episode ep = run_episode(hsr(), corridor_switch_scenario(hsr()), Method::kRlp, SimConfig{}, PlannerConfig{});
  const auto& loops = ep.transcript.loops;
  auto active = [](const LoopRecord& l) { return l.outcome == LoopOutcome::kSwitched || l.outcome == LoopOutcome::kKept; };
  const auto first = std::find_if(loops.begin(), loops.end(), active);
  const bool starts_three_point = first != loops.end() && first->shape == PathShape::kThreePoint;
  const bool switches_straight = first != loops.end() && std::any_of(first + 1, loops.end(), [](const LoopRecord& l) {
                                   return l.outcome == LoopOutcome::kSwitched && l.shape == PathShape::kStraight &&
                                          l.publication;
                                 });
  double last = -std::numeric_limits<double>::infinity();
  bool monotone = true;
  for (const auto& l : loops) {
    if (!active(l)) continue;
    monotone = monotone && l.score >= last - 1e-9;
    last = l.score;
  }
  return {starts_three_point && switches_straight && monotone,
          fmt("three-point first %s; later straight switch %s; score nondecreasing %s",
              starts_three_point ? "yes" : "no", switches_straight ? "yes" : "no", monotone ? "yes" : "no")};
}

// Determinism

std::string bench_csv(const std::string& threads) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli({"--seed", "7", "--threads", threads, "bench", "--count", "6"}, out, err);
  if (code != 0) throw std::runtime_error("bench failed: " + err.str());
  return out.str();
}

Outcome determinism() {
  const std::string a = bench_csv("1");
  const std::string b = bench_csv("1");
  const std::string c = bench_csv("8");
  return {a == b && a == c, fmt("repeat run identical %s; --threads 1 vs 8 identical %s; %zu bytes",
                                a == b ? "yes" : "no", a == c ? "yes" : "no", a.size())};
}

// Goal tolerances

Outcome goal_protocol() {
  const SimConfig sim;
  const bool defaults = sim.position_tolerance == 0.01 && std::abs(sim.rotation_tolerance - 15.0 * kPi / 180.0) < 1e-15 &&
                        sim.episode_timeout == 20.0;
  const RobotState q = test::stowed(0.4, 0.1, 0.3);
  const Iso3 ee = ee_transform(hsr(), q.positions);
  auto reached = [&](const Iso3& g) {
    const GoalConstraintSet goals{GoalConstraint{EePoseConstraint::exact(Pose::from_isometry(g))}};
    return goal_reached(hsr(), q, goals, sim.position_tolerance, sim.rotation_tolerance);
  };
  auto shifted = [&](double d) {
    Iso3 g = ee;
    g.translation().x() += d;
    return g;
  };
  auto turned = [&](double deg) {
    Iso3 g = ee;
    g.rotate(Eigen::AngleAxisd(deg * kPi / 180.0, Vec3(1, 2, 3).normalized()));
    return g;
  };
  const bool pos = reached(shifted(0.009)) && !reached(shifted(0.011));
  const bool rot = reached(turned(14.0)) && !reached(turned(16.0));
  return {defaults && pos && rot, fmt("defaults %s; 0.009/0.011 m %s; 14/16 deg %s", defaults ? "ok" : "wrong",
                                      pos ? "ok" : "wrong", rot ? "ok" : "wrong")};
}

}  // namespace
}  // namespace rlp

int main() {
  using namespace rlp;
  std::printf("running suites: %d scenarios, seed %llu\n", kSuiteSize, static_cast<unsigned long long>(kSuiteSeed));
  std::fflush(stdout);
  const Suites suites = run_suites();
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"motion duration below the max-candidates ablation", [&] { return duration_trend(suites); }},
      {"robust goals raise final-state robustness", [&] { return robustness_trend(suites); }},
      {"plan-to-motion delay below the baseline", [&] { return delay_trend(suites); }},
      {"no collisions without noise, noisy rlp no worse", [&] { return safety(suites); }},
      {"completion rate", [&] { return completion(suites); }},
      {"time parameterization against the closed-form optimum", timing_oracle},
      {"robustness quadrature", robustness_quadrature},
      {"ranking by duration with stable ties", ranking},
      {"corridor switches from three-point to straight", corridor},
      {"bench output is deterministic", determinism},
      {"goal tolerances and boundaries", goal_protocol},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const Outcome o = criteria[i].second();
    failed += o.pass ? 0 : 1;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
