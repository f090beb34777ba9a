#pragma once

#include <optional>
#include <vector>

#include "rlp/constraints.hpp"
#include "rlp/environment.hpp"
#include "rlp/model.hpp"

namespace rlp {

/// Which base DOFs the solver may move.
enum class BaseLock { kNone, kTranslation, kFull };

struct IkOptions {
  int max_iterations = 100;
  double damping = 0.01;
  double step_clamp = 0.3;  // per DOF per iteration
  double position_tolerance = 1e-4;
  double rotation_tolerance = 1e-3;
};

/// Damped least-squares IK on the end-effector pose. On success the FK residual
/// is below a tenth of the tolerances, limits hold and velocities are zero.
std::optional<RobotState> solve_ik_numeric(const RobotModel& model, const Pose& target, const RobotState& seed,
                                           BaseLock lock, const IkOptions& opt = {});

struct IkSamplingConfig {
  int retries = 10;
  double base_radius = 2.0;  // base seeded uniformly within this x/y distance of the target
  bool use_base_heuristic = true;
  IkOptions ik;
};

/// Samples a pose in c and solves IK from a random seed; retries with fresh
/// pose and seed on failure. Result satisfies c.
std::optional<RobotState> sample_ik_from_constraint(const RobotModel& model, const EePoseConstraint& c, Rng& rng,
                                                    const IkSamplingConfig& cfg = {});

/// Isotropic Gaussian base position error, integrated on a grid.
struct BaseErrorModel {
  double sigma = 0.03;
  double grid_halfwidth = 3.0;  // in sigmas
  int grid_n = 7;               // odd

  void validate() const;  // throws ConfigError
};

struct RobustIkConfig {
  int continuation_steps = 3;
  double max_joint_step = 0.2;
  double robust_fraction = 0.5;
  int max_solutions = 8;
  int pool_size = 16;

  void validate() const;  // throws ConfigError
};

/// Probability that the end-effector pose of q0 stays reachable by a continuous
/// IK solution when the base lands at a displaced position.
double robustness(const RobotModel& model, const RobotState& q0, const Environment& env, const BaseErrorModel& err,
                  const RobustIkConfig& cfg, const IkOptions& ik = {});

struct ScoredState {
  RobotState state;
  double score = 0.0;
};

/// Pool of collision-free IK states for c, filtered to those scoring at least
/// robust_fraction of the best, sorted by descending score.
std::vector<ScoredState> solve_robust_ik(const RobotModel& model, const EePoseConstraint& c, const Environment& env,
                                         Rng& rng, const BaseErrorModel& err, const RobustIkConfig& cfg,
                                         const IkSamplingConfig& sampling = {});

/// Threshold-and-sort step of solve_robust_ik on an already scored pool.
std::vector<ScoredState> select_robust(std::vector<ScoredState> pool, double robust_fraction, int max_solutions);

}  // namespace rlp
