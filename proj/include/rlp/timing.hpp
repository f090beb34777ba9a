#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "rlp/model.hpp"
#include "rlp/path.hpp"

namespace rlp {

/// Joint-space curve made of straight pieces joined by quadratic Bezier blends.
/// Yaw is unwrapped along the waypoints, so positions() may leave (-pi, pi].
class GeometricPath {
 public:
  struct Piece {
    enum class Kind { kLine, kBezier } kind = Kind::kLine;
    VecX p0, p1, p2;  // line uses p0 -> p1; Bezier uses all three (p1 = control)
    double s0 = 0.0;
    double length = 0.0;
  };

  /// Blend radius at interior waypoints: min(fraction * adjacent lengths, cap).
  struct BlendOptions {
    double fraction = 0.1;
    double cap = 0.25;
  };

  /// Polyline through the waypoints. When start_direction and start_handle are
  /// given, the path leaves the first waypoint along that direction and curves
  /// into the first segment.
  static GeometricPath build(const std::vector<VecX>& waypoints, const BlendOptions& blend,
                             const VecX* start_direction = nullptr, double start_handle = 0.0);
  /// Path from stored pieces (s0 is recomputed from the lengths).
  static GeometricPath from_pieces(std::vector<Piece> pieces);

  double length() const { return length_; }
  int dof() const { return dof_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  std::size_t piece_at(double s) const;

  VecX position(double s) const;
  /// dq/ds evaluated inside piece i (one-sided at piece boundaries).
  VecX tangent(std::size_t i, double s) const;
  /// d2q/ds2 inside piece i.
  VecX curvature(std::size_t i, double s) const;

 private:
  std::vector<Piece> pieces_;
  double length_ = 0.0;
  int dof_ = 0;
};

/// Time-optimal path speed along a GeometricPath, piecewise constant path
/// acceleration between grid nodes.
class TimingProfile {
 public:
  TimingProfile(GeometricPath path, std::vector<double> s, std::vector<double> sdot_sq,
                std::vector<double> t);

  double duration() const { return t_.back(); }
  const GeometricPath& path() const { return path_; }
  const std::vector<double>& grid() const { return s_; }
  const std::vector<double>& speed_sq() const { return x_; }
  const std::vector<double>& times() const { return t_; }
  /// Path parameter, path speed at time t (clamped to [0, duration]).
  void path_state(double t, double& s, double& sdot) const;
  /// Exact positions (yaw wrapped) and velocities at time t.
  RobotState state(double t) const;

 private:
  GeometricPath path_;
  std::vector<double> s_;
  std::vector<double> x_;  // sdot^2 at nodes
  std::vector<double> t_;
};

struct TrajectorySample {
  double t = 0.0;
  RobotState state;
};

/// Time-parameterized whole-body trajectory sampled at a fixed period. Profile-backed
/// trajectories materialize their samples on first access; copies share them.
class Trajectory {
 public:
  Trajectory() = default;
  /// Trajectory given only by samples; state_at interpolates linearly.
  explicit Trajectory(std::vector<TrajectorySample> samples);
  /// Trajectory following profile from time `offset` on, sampled every ts.
  Trajectory(std::shared_ptr<const TimingProfile> profile, double offset, double ts);

  const std::vector<TrajectorySample>& samples() const;
  bool empty() const { return !cache_; }
  double duration() const { return duration_; }
  double sample_period() const { return ts_; }
  const RobotState& final_state() const { return final_; }

  /// State at time t >= 0; t past the end returns the final sample.
  RobotState state_at(double t) const;
  /// Remaining motion from time t, re-timed to start at 0 and resampled.
  Trajectory tail(double t) const;

  const TimingProfile* profile() const { return profile_.get(); }
  double profile_offset() const { return offset_; }

  Provenance source = Provenance::kRandomStraight;
  PathShape shape = PathShape::kStraight;
  /// Waypoints and start velocity the profile was built from (for replay).
  std::vector<VecX> waypoints;
  VecX start_velocity;

 private:
  struct SampleCache {
    std::once_flag once;
    std::vector<TrajectorySample> samples;
  };

  std::shared_ptr<SampleCache> cache_;
  std::shared_ptr<const TimingProfile> profile_;
  double offset_ = 0.0;
  double ts_ = 0.02;
  double duration_ = 0.0;
  RobotState final_;
};

struct TimingConfig {
  double sample_period = 0.02;
  /// Start velocity may leave the first segment by at most this fraction of
  /// each DOF's velocity limit before a curved start is used.
  double off_tangent_fraction = 0.05;
  int min_steps_per_piece = 50;
  int target_steps = 1000;
  GeometricPath::BlendOptions blend;
};

/// Time-optimal parameterization from start_velocity to rest. Fails when the
/// start velocity cannot be absorbed by the path.
std::optional<Trajectory> time_parameterize(const RobotModel& model, const std::vector<VecX>& waypoints,
                                            const VecX& start_velocity, const TimingConfig& cfg = {});
std::optional<Trajectory> time_parameterize(const RobotModel& model, const PathCandidate& path,
                                            const VecX& start_velocity, const TimingConfig& cfg = {});

/// Fastest single-DOF rest-to-rest time over distance d.
double min_time_rest_to_rest(double d, double vmax, double amax);

}  // namespace rlp
