#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rlp/baseline.hpp"
#include "rlp/constraints.hpp"
#include "rlp/environment.hpp"
#include "rlp/timing.hpp"
#include "rlp/trajgen.hpp"
#include "rlp/work.hpp"

namespace rlp {

struct PlannerConfig {
  double replan_period = 0.25;       // [s]
  double validation_timeout = 0.15;  // [s] on the modeled clock
  double dense_horizon = 2.0;        // every sample up to here is checked [s]
  double sparse_interval = 0.1;      // then one sample per interval [s]
  double loop_overhead = 0.05;       // fixed cost added to the per-loop charge cap [s]
  int max_loops = 200;
  int max_stopped_loops = 4;
  double timeout = 20.0;  // [s]
  double finish_position_tolerance = 0.01;
  double finish_rotation_tolerance = 15.0 * kPi / 180.0;
  double finish_velocity = 1e-3;
  bool periodic = true;
  bool fallback = false;
  GeneratorConfig generator;
  TimingConfig timing;
  RrtConfig rrt;

  /// Upper bound on the compute time charged to one loop.
  double loop_budget() const { return generator.timeout + validation_timeout + loop_overhead; }
  void validate() const;  // throws ConfigError
};

enum class LoopOutcome { kSwitched, kKept, kStopped, kFinished };
std::string to_string(LoopOutcome o);
LoopOutcome loop_outcome_from_string(const std::string& s);

enum class ValidationResult { kValid, kCollision, kTimeout };

/// -duration + sum of soft terms.
double evaluate(const Trajectory& q, const SoftConstraintSet& soft, const RobotModel& model,
                const Environment* env = nullptr);

/// Indices of trajectories by descending score; ties keep input order.
std::vector<std::size_t> rank(const std::vector<Trajectory>& trajectories, const SoftConstraintSet& soft,
                              const RobotModel& model, const Environment* env = nullptr);

/// Sample indices the validator checks: all samples up to the dense horizon,
/// then every sparse stride, plus the final sample.
std::vector<std::size_t> validation_indices(const Trajectory& q, const PlannerConfig& cfg);

ValidationResult validate(const Trajectory& q, const Environment& env, const RobotModel& model,
                          const PlannerConfig& cfg, const Deadline& deadline = Deadline::never());

struct PlanLoopResult {
  LoopOutcome outcome = LoopOutcome::kStopped;
  /// Active trajectory from q_init on (absent when stopped or finished).
  std::optional<Trajectory> trajectory;
  RobotState q_init;
  double score = 0.0;
  double compute_time = 0.0;  // modeled [s]
  double wall_time = 0.0;     // measured [s], diagnostics only
  int generated = 0;
  int parameterized = 0;
  int checked = 0;
  int collided = 0;
  int timeouts = 0;
  GenerationStats generation;
};

/// One planning cycle. `current` is the remaining active trajectory with t = 0
/// at the present instant; q_now is the commanded state now.
PlanLoopResult plan_loop(const GoalConstraintSet& goals, const SoftConstraintSet& soft, const Environment& env,
                         const RobotModel& model, Rng& rng, const PlannerConfig& cfg, const Trajectory* current,
                         const RobotState& q_now);

/// A trajectory the robot follows: state_at(t - anchor) from adopt_time on.
struct Publication {
  double adopt_time = 0.0;
  double anchor = 0.0;
  Trajectory trajectory;
};

/// Commanded motion as a sequence of publications.
class Timeline {
 public:
  explicit Timeline(RobotState start) : start_(std::move(start)) {}

  void publish(Publication p) { publications_.push_back(std::move(p)); }
  const std::vector<Publication>& publications() const { return publications_; }
  const RobotState& start() const { return start_; }
  /// Commanded state at t.
  RobotState commanded(double t) const;
  /// Index of the publication active at t, if any.
  std::optional<std::size_t> active(double t) const;
  /// Time after which the commanded state no longer changes.
  double settle_time() const;

 private:
  RobotState start_;
  std::vector<Publication> publications_;
};

/// Consumer of published trajectories. stop_at lets the executor end the run
/// before a loop starting at time t (e.g. once the goal is reached).
class Executor {
 public:
  virtual ~Executor() = default;
  virtual void publish(const Publication& p) = 0;
  virtual bool stop_at(double t) = 0;
};

struct LoopRecord {
  double time = 0.0;
  LoopOutcome outcome = LoopOutcome::kStopped;
  double compute_time = 0.0;  // charged to the simulated clock
  double wall_time = 0.0;
  bool late = false;          // overran the replan period; result dropped
  bool fallback = false;      // baseline planner supplied the trajectory
  int generated = 0;
  int checked = 0;
  int collided = 0;
  int timeouts = 0;
  double score = 0.0;
  Provenance source = Provenance::kRandomStraight;
  PathShape shape = PathShape::kStraight;
  double duration = 0.0;
  std::optional<std::size_t> publication;
};

struct Transcript {
  std::string method;
  RobotState start;
  std::vector<LoopRecord> loops;
  std::vector<Publication> publications;
  std::string termination;
  double end_time = 0.0;
};

/// Runs plan_loop every replan period of simulated time and publishes results.
Transcript run_periodic(const GoalConstraintSet& goals, const SoftConstraintSet& soft, const Environment& env,
                        const RobotModel& model, const RobotState& start, const PlannerConfig& cfg, Executor& executor,
                        Rng& rng);

}  // namespace rlp
