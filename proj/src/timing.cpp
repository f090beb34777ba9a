#include "rlp/timing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rlp/work.hpp"

namespace rlp {

// ---------------------------------------------------------------------------
// GeometricPath

namespace {

constexpr double kTiny = 1e-12;

/// Control-polygon length: with equal legs the tangent is unit length at both
/// ends, so path speed stays continuous across line/blend junctions.
double bezier_length(const VecX& p0, const VecX& p1, const VecX& p2) {
  return (p1 - p0).norm() + (p2 - p1).norm();
}

}  // namespace

GeometricPath GeometricPath::build(const std::vector<VecX>& waypoints, const BlendOptions& blend,
                                   const VecX* start_direction, double start_handle) {
  GeometricPath path;
  if (waypoints.empty()) throw std::invalid_argument("GeometricPath: no waypoints");
  path.dof_ = static_cast<int>(waypoints.front().size());

  // unwrap yaw and drop repeated points
  std::vector<VecX> pts;
  pts.push_back(waypoints.front());
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    VecX w = waypoints[i];
    w[RobotModel::kYaw] = pts.back()[RobotModel::kYaw] +
                          shortest_arc(pts.back()[RobotModel::kYaw], waypoints[i][RobotModel::kYaw]);
    if ((w - pts.back()).norm() > kTiny) pts.push_back(std::move(w));
  }

  auto add = [&path](Piece piece) {
    if (!(piece.length > kTiny)) return;
    piece.s0 = path.length_;
    path.length_ += piece.length;
    path.pieces_.push_back(std::move(piece));
  };

  if (pts.size() == 1) {
    path.pieces_.push_back(Piece{Piece::Kind::kLine, pts[0], pts[0], pts[0], 0.0, 0.0});
    return path;
  }

  if (start_direction != nullptr && start_handle > 0.0) {
    const VecX& p0 = pts[0];
    const VecX c = p0 + start_handle * *start_direction;
    const VecX to_next = pts[1] - c;
    const double dist = to_next.norm();
    const VecX e = dist > start_handle ? VecX(c + start_handle * to_next / dist) : VecX(pts[1]);
    add(Piece{Piece::Kind::kBezier, p0, c, e, 0.0, bezier_length(p0, c, e)});
    pts[0] = e;
  }

  const std::size_t n = pts.size();
  std::vector<double> radius(n, 0.0);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double l_in = (pts[k] - pts[k - 1]).norm();
    const double l_out = (pts[k + 1] - pts[k]).norm();
    radius[k] = std::min(blend.fraction * std::min(l_in, l_out), blend.cap);
  }
  VecX cursor = pts[0];
  for (std::size_t k = 1; k < n; ++k) {
    const VecX dir = (pts[k] - pts[k - 1]).normalized();
    const VecX line_end = pts[k] - radius[k] * dir;
    add(Piece{Piece::Kind::kLine, cursor, line_end, line_end, 0.0, (line_end - cursor).norm()});
    cursor = line_end;
    if (k + 1 < n && radius[k] > 0.0) {
      const VecX next_dir = (pts[k + 1] - pts[k]).normalized();
      const VecX b_end = pts[k] + radius[k] * next_dir;
      add(Piece{Piece::Kind::kBezier, cursor, pts[k], b_end, 0.0, bezier_length(cursor, pts[k], b_end)});
      cursor = b_end;
    }
  }
  if (path.pieces_.empty()) {
    path.pieces_.push_back(Piece{Piece::Kind::kLine, pts[0], pts[0], pts[0], 0.0, 0.0});
  }
  return path;
}

GeometricPath GeometricPath::from_pieces(std::vector<Piece> pieces) {
  if (pieces.empty()) throw std::invalid_argument("GeometricPath: no pieces");
  GeometricPath path;
  path.dof_ = static_cast<int>(pieces.front().p0.size());
  for (auto& p : pieces) {
    if (p.p0.size() != path.dof_ || p.p1.size() != path.dof_ || p.p2.size() != path.dof_ || p.length < 0.0) {
      throw std::invalid_argument("GeometricPath: malformed piece");
    }
    p.s0 = path.length_;
    path.length_ += p.length;
    path.pieces_.push_back(std::move(p));
  }
  return path;
}

std::size_t GeometricPath::piece_at(double s) const {
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), s,
                             [](double v, const Piece& p) { return v < p.s0; });
  if (it == pieces_.begin()) return 0;
  return static_cast<std::size_t>(std::distance(pieces_.begin(), it) - 1);
}

VecX GeometricPath::position(double s) const {
  const std::size_t i = piece_at(s);
  const Piece& p = pieces_[i];
  if (!(p.length > 0.0)) return p.p0;
  const double u = std::clamp((s - p.s0) / p.length, 0.0, 1.0);
  if (p.kind == Piece::Kind::kLine) {
    if (u >= 1.0) return p.p1;
    return p.p0 + u * (p.p1 - p.p0);
  }
  if (u >= 1.0) return p.p2;
  return (1 - u) * (1 - u) * p.p0 + 2 * u * (1 - u) * p.p1 + u * u * p.p2;
}

VecX GeometricPath::tangent(std::size_t i, double s) const {
  const Piece& p = pieces_[i];
  if (!(p.length > 0.0)) return VecX::Zero(dof_);
  if (p.kind == Piece::Kind::kLine) return (p.p1 - p.p0) / p.length;
  const double u = std::clamp((s - p.s0) / p.length, 0.0, 1.0);
  return (2 * (1 - u) * (p.p1 - p.p0) + 2 * u * (p.p2 - p.p1)) / p.length;
}

VecX GeometricPath::curvature(std::size_t i, double /*s*/) const {
  const Piece& p = pieces_[i];
  if (p.kind == Piece::Kind::kLine || !(p.length > 0.0)) return VecX::Zero(dof_);
  return 2 * (p.p2 - 2 * p.p1 + p.p0) / (p.length * p.length);
}

// ---------------------------------------------------------------------------
// TimingProfile

TimingProfile::TimingProfile(GeometricPath path, std::vector<double> s, std::vector<double> sdot_sq,
                             std::vector<double> t)
    : path_(std::move(path)), s_(std::move(s)), x_(std::move(sdot_sq)), t_(std::move(t)) {}

void TimingProfile::path_state(double t, double& s, double& sdot) const {
  if (t <= 0.0) {
    s = s_.front();
    sdot = std::sqrt(x_.front());
    return;
  }
  if (t >= t_.back()) {
    s = s_.back();
    sdot = std::sqrt(x_.back());
    return;
  }
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  const std::size_t k = static_cast<std::size_t>(std::distance(t_.begin(), it)) - 1;
  const double ds = s_[k + 1] - s_[k];
  const double u = (x_[k + 1] - x_[k]) / (2.0 * ds);
  const double tau = t - t_[k];
  const double v0 = std::sqrt(x_[k]);
  s = std::min(s_[k] + v0 * tau + 0.5 * u * tau * tau, s_[k + 1]);
  sdot = std::max(v0 + u * tau, 0.0);
}

RobotState TimingProfile::state(double t) const {
  work::charge(Work::kSample);
  double s = 0.0;
  double sdot = 0.0;
  path_state(t, s, sdot);
  VecX q = path_.position(s);
  q[RobotModel::kYaw] = wrap_angle(q[RobotModel::kYaw]);
  const VecX v = path_.tangent(path_.piece_at(s), s) * sdot;
  return RobotState(std::move(q), v);
}

// ---------------------------------------------------------------------------
// Trajectory

Trajectory::Trajectory(std::vector<TrajectorySample> samples) {
  if (samples.empty()) return;
  if (samples.size() >= 2) ts_ = samples[1].t - samples[0].t;
  duration_ = samples.back().t;
  final_ = samples.back().state;
  cache_ = std::make_shared<SampleCache>();
  std::call_once(cache_->once, [&] { cache_->samples = std::move(samples); });
}

Trajectory::Trajectory(std::shared_ptr<const TimingProfile> profile, double offset, double ts)
    : cache_(std::make_shared<SampleCache>()), profile_(std::move(profile)), offset_(offset), ts_(ts) {
  duration_ = std::max(profile_->duration() - offset_, 0.0);
  final_ = profile_->state(profile_->duration());
}

const std::vector<TrajectorySample>& Trajectory::samples() const {
  static const std::vector<TrajectorySample> kNone;
  if (!cache_) return kNone;
  std::call_once(cache_->once, [this] {
    auto& out = cache_->samples;
    const auto n = static_cast<std::size_t>(std::floor(duration_ / ts_ + 1e-9));
    out.reserve(n + 2);
    for (std::size_t i = 0; i <= n; ++i) {
      const double t = static_cast<double>(i) * ts_;
      if (t > duration_ - 1e-9 && i > 0) break;
      out.push_back({t, profile_->state(offset_ + t)});
    }
    if (duration_ - out.back().t > 1e-9) out.push_back({duration_, final_});
  });
  return cache_->samples;
}

RobotState Trajectory::state_at(double t) const {
  if (empty()) throw std::logic_error("Trajectory::state_at on empty trajectory");
  if (t >= duration()) return final_;
  if (profile_) return profile_->state(offset_ + std::max(t, 0.0));
  const auto& s = samples();
  if (t <= 0.0) return s.front().state;
  auto it = std::upper_bound(s.begin(), s.end(), t, [](double v, const TrajectorySample& x) { return v < x.t; });
  const auto& b = *it;
  const auto& a = *(it - 1);
  const double u = (t - a.t) / (b.t - a.t);
  return RobotState(interpolate_positions(a.state.positions, b.state.positions, u),
                    (1.0 - u) * a.state.velocities + u * b.state.velocities);
}

Trajectory Trajectory::tail(double t) const {
  t = std::clamp(t, 0.0, duration());
  Trajectory out;
  if (profile_) {
    out = Trajectory(profile_, offset_ + t, ts_);
  } else if (!empty()) {
    std::vector<TrajectorySample> samples;
    const double rest = duration() - t;
    for (double dt = 0.0; dt < rest - 1e-9; dt += ts_) samples.push_back({dt, state_at(t + dt)});
    samples.push_back({rest, final_});
    out = Trajectory(std::move(samples));
    out.ts_ = ts_;
  }
  out.source = source;
  out.shape = shape;
  out.waypoints = waypoints;
  out.start_velocity = start_velocity;
  return out;
}

// ---------------------------------------------------------------------------
// time parameterization

namespace {

using ConstMap = Eigen::Map<const VecX>;

/// Path derivatives at one path point.
struct PointLimits {
  ConstMap tangent;    // dq/ds
  ConstMap curvature;  // d2q/ds2
};

struct LimitSet {
  const VecX& vmax;
  const VecX& amax;
};

constexpr double kAxisEps = 1e-9;

/// Largest sdot^2 such that some path acceleration satisfies every bound.
double max_sdot_sq(const PointLimits& p, const LimitSet& lim) {
  double x = std::numeric_limits<double>::infinity();
  const Eigen::Index n = p.tangent.size();
  bool curved = false;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double a = std::abs(p.tangent[j]);
    if (std::abs(p.curvature[j]) > kAxisEps) curved = true;
    if (a > kAxisEps) {
      const double v = lim.vmax[j] / a;
      x = std::min(x, v * v);
    } else if (std::abs(p.curvature[j]) > kAxisEps) {
      x = std::min(x, lim.amax[j] / std::abs(p.curvature[j]));
    }
  }
  if (!curved) return x;  // any path acceleration near zero is feasible
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ai = p.tangent[i];
    if (std::abs(ai) <= kAxisEps) continue;
    const double bi = lim.amax[i] / std::abs(ai);
    const double ci = p.curvature[i] / ai;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double aj = p.tangent[j];
      if (std::abs(aj) <= kAxisEps) continue;
      const double bj = lim.amax[j] / std::abs(aj);
      const double cj = p.curvature[j] / aj;
      const double dc = std::abs(ci - cj);
      if (dc > kTiny) x = std::min(x, (bi + bj) / dc);
    }
  }
  return x;
}

/// Tightest bound on x_near implied by u = sign * (x_far - x_near) / (2 ds) lying
/// inside the acceleration interval evaluated at the near point.
/// sign = -1: backward pass (u >= lower bound), sign = +1: forward pass (u <= upper bound).
double implicit_bound(const PointLimits& p, const LimitSet& lim, double x_far, double ds, double sign) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < p.tangent.size(); ++j) {
    const double a = p.tangent[j];
    if (std::abs(a) <= kAxisEps) continue;
    const double beta = lim.amax[j] / std::abs(a);
    const double c = p.curvature[j] / a;
    // backward: x_far - x_near >= 2ds(-beta - c x_near)  ->  x_near (1 - 2ds c) <= x_far + 2ds beta
    // forward:  x_near - x_far <= 2ds(beta - c x_near)   ->  x_near (1 + 2ds c) <= x_far + 2ds beta
    const double coef = 1.0 + sign * 2.0 * ds * c;
    if (coef > kTiny) best = std::min(best, (x_far + 2.0 * ds * beta) / coef);
  }
  return best;
}

/// Explicit bound: from x at the far point, how far x can move to the near point.
/// backward: x_near <= x_far - 2ds * L(x_far); forward: x_near <= x_far + 2ds * U(x_far).
double explicit_bound(const PointLimits& p, const LimitSet& lim, double x_far, double ds, double sign) {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < p.tangent.size(); ++j) {
    const double a = p.tangent[j];
    if (std::abs(a) <= kAxisEps) continue;
    const double beta = lim.amax[j] / std::abs(a);
    const double c = p.curvature[j] / a;
    lo = std::max(lo, -beta - c * x_far);
    hi = std::min(hi, beta - c * x_far);
  }
  if (sign < 0.0) return std::isfinite(lo) ? x_far - 2.0 * ds * lo : std::numeric_limits<double>::infinity();
  return std::isfinite(hi) ? x_far + 2.0 * ds * hi : std::numeric_limits<double>::infinity();
}

std::optional<std::shared_ptr<const TimingProfile>> integrate(GeometricPath path, double x0,
                                                               const LimitSet& lim,
                                                               const TimingConfig& cfg) {
  const double total = path.length();
  if (!(total > 0.0)) {
    if (x0 > kTiny) return std::nullopt;
    return std::make_shared<const TimingProfile>(std::move(path), std::vector<double>{0.0},
                                                 std::vector<double>{0.0}, std::vector<double>{0.0});
  }

  // grid nodes; cell k lies in piece cell_piece[k]
  std::vector<double> s{0.0};
  std::vector<std::size_t> cell_piece;
  for (std::size_t i = 0; i < path.pieces().size(); ++i) {
    const auto& piece = path.pieces()[i];
    const int steps = std::max(cfg.min_steps_per_piece,
                               static_cast<int>(std::ceil(cfg.target_steps * piece.length / total)));
    for (int k = 1; k <= steps; ++k) {
      s.push_back(piece.s0 + piece.length * static_cast<double>(k) / steps);
      cell_piece.push_back(i);
    }
  }
  s.back() = total;
  const std::size_t n = s.size();
  work::charge(Work::kTimingStep, 3 * n);

  // one-sided derivatives at both ends of each cell; curvature is constant per piece
  const auto dof = static_cast<Eigen::Index>(path.dof());
  const auto cells = static_cast<Eigen::Index>(n - 1);
  Eigen::MatrixXd tan_left(dof, cells);
  Eigen::MatrixXd tan_right(dof, cells);
  Eigen::MatrixXd curv(dof, static_cast<Eigen::Index>(path.pieces().size()));
  for (std::size_t i = 0; i < path.pieces().size(); ++i) curv.col(static_cast<Eigen::Index>(i)) = path.curvature(i, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const auto c = static_cast<Eigen::Index>(k);
    tan_left.col(c) = path.tangent(cell_piece[k], s[k]);
    tan_right.col(c) = path.tangent(cell_piece[k], s[k + 1]);
  }
  auto left = [&](std::size_t k) {
    return PointLimits{ConstMap(tan_left.col(static_cast<Eigen::Index>(k)).data(), dof),
                       ConstMap(curv.col(static_cast<Eigen::Index>(cell_piece[k])).data(), dof)};
  };
  auto right = [&](std::size_t k) {
    return PointLimits{ConstMap(tan_right.col(static_cast<Eigen::Index>(k)).data(), dof),
                       ConstMap(curv.col(static_cast<Eigen::Index>(cell_piece[k])).data(), dof)};
  };

  std::vector<double> mvc(n, std::numeric_limits<double>::infinity());
  std::vector<double> line_mvc(path.pieces().size(), -1.0);  // lines: constant along the piece
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const std::size_t p = cell_piece[k];
    double lo = 0.0;
    double hi = 0.0;
    if (path.pieces()[p].kind == GeometricPath::Piece::Kind::kLine) {
      if (line_mvc[p] < 0.0) line_mvc[p] = max_sdot_sq(left(k), lim);
      lo = hi = line_mvc[p];
    } else {
      lo = max_sdot_sq(left(k), lim);
      hi = max_sdot_sq(right(k), lim);
      // |dq/ds| is linear across the cell and sdot lies between its end values,
      // so the larger end tangent bounds the velocity inside the cell
      const auto c = static_cast<Eigen::Index>(k);
      const VecX t_max = tan_left.col(c).cwiseAbs().cwiseMax(tan_right.col(c).cwiseAbs());
      for (Eigen::Index j = 0; j < dof; ++j) {
        if (t_max[j] <= kAxisEps) continue;
        const double v = lim.vmax[j] / t_max[j];
        lo = std::min(lo, v * v);
        hi = std::min(hi, v * v);
      }
    }
    mvc[k] = std::min(mvc[k], lo);
    mvc[k + 1] = std::min(mvc[k + 1], hi);
  }

  // a tangent jump between pieces can only be crossed at rest
  for (std::size_t k = 0; k + 2 < n; ++k) {
    if (cell_piece[k] != cell_piece[k + 1] &&
        (tan_right.col(static_cast<Eigen::Index>(k)) - tan_left.col(static_cast<Eigen::Index>(k + 1))).norm() > 1e-6) {
      mvc[k + 1] = 0.0;
    }
  }

  std::vector<double> back(n);
  back[n - 1] = 0.0;
  for (std::size_t k = n - 1; k-- > 0;) {
    const double ds = s[k + 1] - s[k];
    double x = mvc[k];
    x = std::min(x, implicit_bound(left(k), lim, back[k + 1], ds, -1.0));
    x = std::min(x, explicit_bound(right(k), lim, back[k + 1], ds, -1.0));
    back[k] = std::max(x, 0.0);
  }

  const double slack = 1e-9 * std::max(1.0, back[0]) + 1e-12;
  if (x0 > back[0] + slack) return std::nullopt;

  std::vector<double> x(n);
  x[0] = std::min(x0, back[0]);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double ds = s[k + 1] - s[k];
    double next = back[k + 1];
    next = std::min(next, explicit_bound(left(k), lim, x[k], ds, +1.0));
    next = std::min(next, implicit_bound(right(k), lim, x[k], ds, +1.0));
    x[k + 1] = std::max(next, 0.0);
  }

  std::vector<double> t(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double denom = std::sqrt(x[k]) + std::sqrt(x[k + 1]);
    if (!(denom > 0.0)) return std::nullopt;  // stalled
    t[k + 1] = t[k] + 2.0 * (s[k + 1] - s[k]) / denom;
  }
  return std::make_shared<const TimingProfile>(std::move(path), std::move(s), std::move(x), std::move(t));
}

Trajectory make_trajectory(std::shared_ptr<const TimingProfile> profile, const std::vector<VecX>& waypoints,
                           const VecX& start_velocity, const TimingConfig& cfg) {
  Trajectory traj(std::move(profile), 0.0, cfg.sample_period);
  traj.waypoints = waypoints;
  traj.start_velocity = start_velocity;
  traj.shape = waypoints.size() == 2 ? PathShape::kStraight
               : waypoints.size() == 3 ? PathShape::kThreePoint
                                       : PathShape::kMulti;
  return traj;
}

}  // namespace

std::optional<Trajectory> time_parameterize(const RobotModel& model, const std::vector<VecX>& waypoints,
                                            const VecX& start_velocity, const TimingConfig& cfg) {
  if (waypoints.empty()) return std::nullopt;
  const VecX vmax = model.max_velocities();
  const VecX amax = model.max_accelerations();
  const LimitSet lim{vmax, amax};
  const VecX v0 = start_velocity.size() == model.dof() ? start_velocity : VecX::Zero(model.dof());

  GeometricPath straight = GeometricPath::build(waypoints, cfg.blend);
  if (!(straight.length() > 0.0)) {
    auto prof = integrate(std::move(straight), v0.squaredNorm(), lim, cfg);
    if (!prof) return std::nullopt;
    return make_trajectory(*prof, waypoints, v0, cfg);
  }

  const VecX dir = straight.tangent(0, 0.0);
  const double along = std::max(v0.dot(dir), 0.0);
  const VecX residual = v0 - along * dir;
  bool on_tangent = true;
  for (Eigen::Index j = 0; j < v0.size(); ++j) {
    if (std::abs(residual[j]) > cfg.off_tangent_fraction * vmax[j]) on_tangent = false;
  }
  if (on_tangent) {
    auto prof = integrate(std::move(straight), along * along, lim, cfg);
    if (!prof) return std::nullopt;
    return make_trajectory(*prof, waypoints, v0, cfg);
  }

  // Curved start: leave along v0 and bend into the first segment.
  const double speed = v0.norm();
  const VecX heading = v0 / speed;
  double stop_scale = 0.0;
  for (Eigen::Index j = 0; j < v0.size(); ++j) stop_scale = std::max(stop_scale, std::abs(v0[j]) / amax[j]);
  double first_len = 0.0;
  for (std::size_t i = 1; i < waypoints.size() && !(first_len > 0.0); ++i) {
    first_len = state_delta(waypoints[0], waypoints[i]).norm();
  }
  double handle = std::max(speed * stop_scale, 1e-3);
  constexpr int kAttempts = 5;
  for (int attempt = 0; attempt < kAttempts; ++attempt, handle *= 2.0) {
    if (handle > 0.45 * first_len) break;
    GeometricPath curved = GeometricPath::build(waypoints, cfg.blend, &heading, handle);
    const auto& first = curved.pieces().front();
    // dq/ds at s = 0 is 2 * handle * heading / length
    const double sdot0 = speed * first.length / (2.0 * handle);
    auto prof = integrate(std::move(curved), sdot0 * sdot0, lim, cfg);
    if (prof) return make_trajectory(*prof, waypoints, v0, cfg);
  }
  return std::nullopt;
}

std::optional<Trajectory> time_parameterize(const RobotModel& model, const PathCandidate& path,
                                            const VecX& start_velocity, const TimingConfig& cfg) {
  auto traj = time_parameterize(model, path.positions(), start_velocity, cfg);
  if (traj) {
    traj->source = path.source;
    traj->shape = path.shape();
  }
  return traj;
}

double min_time_rest_to_rest(double d, double vmax, double amax) {
  d = std::abs(d);
  if (d <= vmax * vmax / amax) return 2.0 * std::sqrt(d / amax);
  return d / vmax + vmax / amax;
}

}  // namespace rlp
