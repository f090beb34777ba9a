#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace rlp {

/// Primitive operations whose cost is accounted by the modeled compute clock.
///
/// Planning timeouts (generation, validation) and the simulated plan-to-motion
/// delay are measured in modeled seconds: every primitive charges a fixed cost
/// to the meter that is active on the calling thread. This keeps budgets and
/// benchmark metrics reproducible across machines and thread counts, while
/// wall time is still reported separately for diagnostics.
enum class Work : std::uint8_t {
  kIkIteration = 0,   // one damped least-squares step (FK + Jacobian + solve)
  kForwardKinematics,
  kCollisionCheck,    // fixed part of one is_collision call
  kPointTest,         // one sphere-point distance test
  kBoxTest,           // one sphere-box distance test
  kTimingStep,        // one path-parameter grid point in time parameterization
  kSample,            // one trajectory sample evaluation
  kNearestTest,       // one distance evaluation in a nearest-neighbour scan
  kCount
};

/// Seconds charged per unit of each primitive.
struct CostModel {
  std::array<double, static_cast<std::size_t>(Work::kCount)> seconds{
      1.6e-6,   // kIkIteration
      0.35e-6,  // kForwardKinematics
      0.6e-6,   // kCollisionCheck
      4.0e-9,   // kPointTest
      6.0e-9,   // kBoxTest
      0.12e-6,  // kTimingStep
      0.25e-6,  // kSample
      30.0e-9,  // kNearestTest
  };

  double operator()(Work w) const { return seconds[static_cast<std::size_t>(w)]; }
};

/// Accumulates modeled compute time. Not thread-safe; one meter per thread.
class WorkMeter {
 public:
  WorkMeter() = default;
  explicit WorkMeter(const CostModel& cost) : cost_(cost) {}

  void charge(Work w, std::uint64_t n = 1) {
    counts_[static_cast<std::size_t>(w)] += n;
    elapsed_ += cost_(w) * static_cast<double>(n);
  }
  void charge_seconds(double s) { elapsed_ += s; }

  double elapsed() const { return elapsed_; }
  std::uint64_t count(Work w) const { return counts_[static_cast<std::size_t>(w)]; }
  const CostModel& cost() const { return cost_; }

 private:
  CostModel cost_{};
  std::array<std::uint64_t, static_cast<std::size_t>(Work::kCount)> counts_{};
  double elapsed_ = 0.0;
};

namespace work {

/// Charges the meter installed on this thread, if any.
void charge(Work w, std::uint64_t n = 1);

/// Elapsed modeled time of the active meter (0 without one).
double now();

/// Installs a meter on the current thread for the lifetime of the scope.
class Scope {
 public:
  explicit Scope(WorkMeter& meter);
  ~Scope();
  Scope(const Scope&) = delete;
  Scope& operator=(const Scope&) = delete;

 private:
  WorkMeter* previous_;
};

WorkMeter* active();

}  // namespace work

/// Deadline on the modeled clock of the active meter.
class Deadline {
 public:
  static Deadline after(double seconds) { return Deadline(work::now() + seconds); }
  static Deadline never() { return Deadline(1e300); }
  bool expired() const { return work::now() >= at_; }
  double remaining() const { return at_ - work::now(); }

 private:
  explicit Deadline(double at) : at_(at) {}
  double at_;
};

}  // namespace rlp
