#include "rlp/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json_util.hpp"

namespace rlp {

namespace {

using detail::vec3;
using detail::vecx;

/// Object reader that remembers which keys were consumed, so leftovers can be
/// reported as unknown.
class Reader {
 public:
  Reader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  const std::string& path() const { return path_; }
  std::string at(const char* key) const { return path_ + "." + key; }

  const Json* find(const char* key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  const Json& need(const char* key) {
    const Json* v = find(key);
    if (v == nullptr) throw ConfigError(at(key) + ": missing field");
    return *v;
  }

  void operator()(const char* key, double& out) {
    if (const Json* v = find(key)) {
      if (!v->is_number()) throw ConfigError(at(key) + ": expected a number");
      out = v->get<double>();
    }
  }
  void operator()(const char* key, int& out) {
    if (const Json* v = find(key)) {
      if (!v->is_number_integer()) throw ConfigError(at(key) + ": expected an integer");
      out = v->get<int>();
    }
  }
  void operator()(const char* key, bool& out) {
    if (const Json* v = find(key)) {
      if (!v->is_boolean()) throw ConfigError(at(key) + ": expected true or false");
      out = v->get<bool>();
    }
  }
  void operator()(const char* key, std::string& out) {
    if (const Json* v = find(key)) {
      if (!v->is_string()) throw ConfigError(at(key) + ": expected a string");
      out = v->get<std::string>();
    }
  }
  void operator()(const char* key, std::uint64_t& out) {
    if (const Json* v = find(key)) {
      if (!v->is_number_unsigned()) throw ConfigError(at(key) + ": expected a non-negative integer");
      out = v->get<std::uint64_t>();
    }
  }

  template <class T>
  void group(const char* key, T& sub);

  /// Rejects keys nobody asked for.
  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.contains(key)) throw ConfigError(path_ + "." + key + ": unknown field");
    }
  }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

class Writer {
 public:
  explicit Writer(Json& out) : out_(out) { out_ = Json::object(); }

  template <class T>
  void operator()(const char* key, const T& value) {
    out_[key] = value;
  }

  template <class T>
  void group(const char* key, T& sub);

 private:
  Json& out_;
};

// Field lists shared by the reader and the writer.

template <class V>
void visit(V& v, IkOptions& c) {
  v("max_iterations", c.max_iterations);
  v("damping", c.damping);
  v("step_clamp", c.step_clamp);
  v("position_tolerance", c.position_tolerance);
  v("rotation_tolerance", c.rotation_tolerance);
}

template <class V>
void visit(V& v, IkSamplingConfig& c) {
  v("retries", c.retries);
  v("base_radius", c.base_radius);
  v("use_base_heuristic", c.use_base_heuristic);
  v.group("ik", c.ik);
}

template <class V>
void visit(V& v, BaseErrorModel& c) {
  v("sigma", c.sigma);
  v("grid_halfwidth", c.grid_halfwidth);
  v("grid_n", c.grid_n);
}

template <class V>
void visit(V& v, RobustIkConfig& c) {
  v("continuation_steps", c.continuation_steps);
  v("max_joint_step", c.max_joint_step);
  v("robust_fraction", c.robust_fraction);
  v("max_solutions", c.max_solutions);
  v("pool_size", c.pool_size);
}

template <class V>
void visit(V& v, GeneratorConfig& c) {
  v("max_candidates", c.max_candidates);
  v("max_straight", c.max_straight);
  v("mid_position_halfwidth", c.mid_position_halfwidth);
  v("mid_rotation_halfwidth", c.mid_rotation_halfwidth);
  v("timeout", c.timeout);
  v("max_attempts", c.max_attempts);
  v("use_robust_ik", c.use_robust_ik);
  v.group("base_error", c.base_error);
  v.group("robust", c.robust);
  v.group("sampling", c.sampling);
}

template <class V>
void visit(V& v, GeometricPath::BlendOptions& c) {
  v("fraction", c.fraction);
  v("cap", c.cap);
}

template <class V>
void visit(V& v, TimingConfig& c) {
  v("sample_period", c.sample_period);
  v("off_tangent_fraction", c.off_tangent_fraction);
  v("min_steps_per_piece", c.min_steps_per_piece);
  v("target_steps", c.target_steps);
  v.group("blend", c.blend);
}

template <class V>
void visit(V& v, RrtConfig& c) {
  v("step", c.step);
  v("goal_bias", c.goal_bias);
  v("max_iterations", c.max_iterations);
  v("shortcut_iterations", c.shortcut_iterations);
  v("restarts", c.restarts);
  v("base_padding", c.base_padding);
  v.group("sampling", c.sampling);
}

template <class V>
void visit(V& v, PlannerConfig& c) {
  v("replan_period", c.replan_period);
  v("validation_timeout", c.validation_timeout);
  v("dense_horizon", c.dense_horizon);
  v("sparse_interval", c.sparse_interval);
  v("loop_overhead", c.loop_overhead);
  v("max_loops", c.max_loops);
  v("max_stopped_loops", c.max_stopped_loops);
  v("timeout", c.timeout);
  v("finish_position_tolerance", c.finish_position_tolerance);
  v("finish_rotation_tolerance", c.finish_rotation_tolerance);
  v("finish_velocity", c.finish_velocity);
  v("periodic", c.periodic);
  v("fallback", c.fallback);
  v.group("generator", c.generator);
  v.group("timing", c.timing);
  v.group("rrt", c.rrt);
}

template <class V>
void visit(V& v, SimConfig& c) {
  v("dt", c.dt);
  v("base_noise_sigma", c.base_noise_sigma);
  v("position_tolerance", c.position_tolerance);
  v("rotation_tolerance", c.rotation_tolerance);
  v("episode_timeout", c.episode_timeout);
}

template <class V>
void visit(V& v, RunConfig& c) {
  v.group("planner", c.planner);
  v.group("sim", c.sim);
}

template <class T>
void Reader::group(const char* key, T& sub) {
  if (const Json* v = find(key)) {
    Reader r(*v, at(key));
    visit(r, sub);
    r.finish();
  }
}

template <class T>
void Writer::group(const char* key, T& sub) {
  Writer w(out_[key]);
  visit(w, sub);
}

// ---------------------------------------------------------------------------

Json to_json(const VecX& v) { return detail::to_json(v); }

Json state_json(const RobotState& q) {
  return Json{{"positions", to_json(q.positions)}, {"velocities", to_json(q.velocities)}};
}

RobotState state_from(const Json& j, const std::string& path) {
  Reader r(j, path);
  VecX q = vecx(r.need("positions"), r.at("positions"));
  VecX v = VecX::Zero(q.size());
  if (const Json* vel = r.find("velocities")) v = vecx(*vel, r.at("velocities"));
  if (v.size() != q.size()) throw ConfigError(r.at("velocities") + ": size differs from positions");
  r.finish();
  return {std::move(q), std::move(v)};
}

Json pose_json(const Pose& p) {
  const Quat& q = p.rotation;
  return Json{{"xyz", detail::to_json(p.translation)}, {"quat", Json::array({q.w(), q.x(), q.y(), q.z()})}};
}

Pose pose_from(const Json& j, const std::string& path) {
  Reader r(j, path);
  Pose p;
  if (const Json* t = r.find("xyz")) p.translation = vec3(*t, r.at("xyz"));
  const Json* quat = r.find("quat");
  const Json* rpy = r.find("rpy");
  if (quat != nullptr && rpy != nullptr) throw ConfigError(path + ": give quat or rpy, not both");
  if (quat != nullptr) {
    const VecX q = vecx(*quat, r.at("quat"));
    if (q.size() != 4 || !(q.norm() > 0.0)) throw ConfigError(r.at("quat") + ": expected nonzero [w, x, y, z]");
    p.rotation = Quat(q[0], q[1], q[2], q[3]);
    // stored quaternions are already unit; renormalizing would perturb them
    if (std::abs(p.rotation.norm() - 1.0) > 1e-9) p.rotation.normalize();
  } else if (rpy != nullptr) {
    const Vec3 a = vec3(*rpy, r.at("rpy"));
    p.rotation = Quat(rpy_to_matrix(a.x(), a.y(), a.z()));
  }
  r.finish();
  return p;
}

Json goal_json(const GoalConstraint& g) {
  if (g.is_ee()) {
    Json bounds = Json::array();
    for (const auto& b : g.ee().bounds) bounds.push_back(Json::array({b.lower, b.upper}));
    return Json{{"type", "ee"}, {"reference", pose_json(g.ee().reference)}, {"bounds", bounds}};
  }
  Json intervals = Json::array();
  for (const auto& [dof, iv] : g.joint().intervals) {
    intervals.push_back(Json{{"dof", dof}, {"lower", iv.lower}, {"upper", iv.upper}});
  }
  return Json{{"type", "joint"}, {"intervals", intervals}};
}

Interval interval_from(const Json& j, const std::string& path) {
  const VecX v = vecx(j, path);
  if (v.size() != 2 || v[0] > v[1]) throw ConfigError(path + ": expected [lower, upper] with lower <= upper");
  return {v[0], v[1]};
}

GoalConstraint goal_from(const Json& j, const std::string& path) {
  Reader r(j, path);
  std::string type;
  r("type", type);
  GoalConstraint g;
  if (type == "ee") {
    EePoseConstraint c;
    c.reference = pose_from(r.need("reference"), r.at("reference"));
    if (const Json* b = r.find("bounds")) {
      if (!b->is_array() || b->size() != 6) throw ConfigError(r.at("bounds") + ": expected 6 intervals");
      for (std::size_t i = 0; i < 6; ++i) {
        c.bounds[i] = interval_from((*b)[i], r.at("bounds") + "[" + std::to_string(i) + "]");
      }
    }
    g.value = c;
  } else if (type == "joint") {
    JointConstraint c;
    const Json& list = r.need("intervals");
    if (!list.is_array()) throw ConfigError(r.at("intervals") + ": expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      Reader e(list[i], r.at("intervals") + "[" + std::to_string(i) + "]");
      int dof = -1;
      Interval iv;
      e("dof", dof);
      e("lower", iv.lower);
      e("upper", iv.upper);
      e.finish();
      if (dof < 0) throw ConfigError(e.path() + ".dof: expected a DOF index");
      if (iv.lower > iv.upper) throw ConfigError(e.path() + ": lower > upper");
      c.intervals.emplace_back(dof, iv);
    }
    g.value = c;
  } else {
    throw ConfigError(r.at("type") + ": expected \"ee\" or \"joint\"");
  }
  r.finish();
  return g;
}

Json soft_json(const SoftConstraint& c) {
  Json pref = Json::array();
  for (const auto& [dof, value] : c.preferred) pref.push_back(Json{{"dof", dof}, {"value", value}});
  return Json{{"kind", to_string(c.kind)},
              {"weight", c.weight},
              {"clearance_cap", c.clearance_cap},
              {"preferred", pref}};
}

SoftConstraint soft_from(const Json& j, const std::string& path) {
  Reader r(j, path);
  SoftConstraint c;
  std::string kind = to_string(c.kind);
  r("kind", kind);
  c.kind = soft_kind_from_string(kind);
  r("weight", c.weight);
  r("clearance_cap", c.clearance_cap);
  if (const Json* pref = r.find("preferred")) {
    if (!pref->is_array()) throw ConfigError(r.at("preferred") + ": expected an array");
    for (std::size_t i = 0; i < pref->size(); ++i) {
      Reader e((*pref)[i], r.at("preferred") + "[" + std::to_string(i) + "]");
      int dof = -1;
      double value = 0.0;
      e("dof", dof);
      e("value", value);
      e.finish();
      if (dof < 0) throw ConfigError(e.path() + ".dof: expected a DOF index");
      c.preferred.emplace_back(dof, value);
    }
  }
  r.finish();
  return c;
}

Json environment_json(const Environment& env) {
  Json boxes = Json::array();
  for (const auto& b : env.boxes()) {
    boxes.push_back(Json{{"min", detail::to_json(b.min)}, {"max", detail::to_json(b.max)}});
  }
  Json points = Json::array();
  for (const auto& p : env.points()) points.push_back(detail::to_json(p));
  Json attached = Json::array();
  for (const auto& a : env.attached()) {
    Json spheres = Json::array();
    for (const auto& s : a.spheres) {
      spheres.push_back(Json{{"center", detail::to_json(s.center)}, {"radius", s.radius}});
    }
    attached.push_back(Json{{"link", a.link}, {"spheres", spheres}});
  }
  return Json{{"margin", env.margin()}, {"boxes", boxes}, {"points", points}, {"attached", attached}};
}

Environment environment_from(const Json& j, const std::string& path) {
  Reader r(j, path);
  std::vector<Aabb> boxes;
  if (const Json* list = r.find("boxes")) {
    if (!list->is_array()) throw ConfigError(r.at("boxes") + ": expected an array");
    for (std::size_t i = 0; i < list->size(); ++i) {
      Reader b((*list)[i], r.at("boxes") + "[" + std::to_string(i) + "]");
      Aabb box{vec3(b.need("min"), b.at("min")), vec3(b.need("max"), b.at("max"))};
      b.finish();
      if ((box.max - box.min).minCoeff() < 0.0) throw ConfigError(b.path() + ": min exceeds max");
      boxes.push_back(box);
    }
  }
  std::vector<Vec3> points;
  if (const Json* list = r.find("points")) {
    if (!list->is_array()) throw ConfigError(r.at("points") + ": expected an array");
    points.reserve(list->size());
    for (std::size_t i = 0; i < list->size(); ++i) {
      points.push_back(vec3((*list)[i], r.at("points") + "[" + std::to_string(i) + "]"));
    }
  }
  std::vector<AttachedObject> attached;
  if (const Json* list = r.find("attached")) {
    if (!list->is_array()) throw ConfigError(r.at("attached") + ": expected an array");
    for (std::size_t i = 0; i < list->size(); ++i) {
      Reader a((*list)[i], r.at("attached") + "[" + std::to_string(i) + "]");
      AttachedObject obj;
      a("link", obj.link);
      const Json& spheres = a.need("spheres");
      if (!spheres.is_array()) throw ConfigError(a.at("spheres") + ": expected an array");
      for (std::size_t k = 0; k < spheres.size(); ++k) {
        Reader s(spheres[k], a.at("spheres") + "[" + std::to_string(k) + "]");
        CollisionSphere sphere;
        sphere.link = obj.link;
        sphere.center = vec3(s.need("center"), s.at("center"));
        s("radius", sphere.radius);
        s.finish();
        if (!(sphere.radius > 0.0)) throw ConfigError(s.path() + ".radius: must be > 0");
        obj.spheres.push_back(sphere);
      }
      a.finish();
      attached.push_back(std::move(obj));
    }
  }
  double margin = Environment::kDefaultMargin;
  r("margin", margin);
  if (margin < 0.0) throw ConfigError(r.at("margin") + ": must be >= 0");
  r.finish();
  Environment env(std::move(points), std::move(boxes), std::move(attached));
  env.set_margin(margin);
  return env;
}

template <class T, class F>
std::vector<T> array_of(const Json* list, const std::string& path, F&& parse) {
  std::vector<T> out;
  if (list == nullptr) return out;
  if (!list->is_array()) throw ConfigError(path + ": expected an array");
  for (std::size_t i = 0; i < list->size(); ++i) out.push_back(parse((*list)[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Json profile_json(const TimingProfile& p) {
  Json pieces = Json::array();
  for (const auto& piece : p.path().pieces()) {
    const bool line = piece.kind == GeometricPath::Piece::Kind::kLine;
    pieces.push_back(Json{{"kind", line ? "line" : "bezier"},
                          {"p0", to_json(piece.p0)},
                          {"p1", to_json(piece.p1)},
                          {"p2", to_json(piece.p2)},
                          {"length", piece.length}});
  }
  return Json{{"pieces", pieces}, {"s", p.grid()}, {"sdot_sq", p.speed_sq()}, {"t", p.times()}};
}

std::vector<double> doubles(const Json& j, const std::string& path) {
  const VecX v = vecx(j, path);
  return {v.data(), v.data() + v.size()};
}

std::shared_ptr<const TimingProfile> profile_from(const Json& j, const std::string& path) {
  Reader r(j, path);
  std::vector<GeometricPath::Piece> pieces =
      array_of<GeometricPath::Piece>(&r.need("pieces"), r.at("pieces"), [](const Json& e, const std::string& p) {
        Reader pr(e, p);
        GeometricPath::Piece piece;
        std::string kind;
        pr("kind", kind);
        if (kind == "line") {
          piece.kind = GeometricPath::Piece::Kind::kLine;
        } else if (kind == "bezier") {
          piece.kind = GeometricPath::Piece::Kind::kBezier;
        } else {
          throw ConfigError(pr.at("kind") + ": expected \"line\" or \"bezier\"");
        }
        piece.p0 = vecx(pr.need("p0"), pr.at("p0"));
        piece.p1 = vecx(pr.need("p1"), pr.at("p1"));
        piece.p2 = vecx(pr.need("p2"), pr.at("p2"));
        pr("length", piece.length);
        pr.finish();
        return piece;
      });
  auto s = doubles(r.need("s"), r.at("s"));
  auto x = doubles(r.need("sdot_sq"), r.at("sdot_sq"));
  auto t = doubles(r.need("t"), r.at("t"));
  r.finish();
  if (s.empty() || s.size() != x.size() || s.size() != t.size()) {
    throw ConfigError(path + ": s, sdot_sq and t must be nonempty and of equal length");
  }
  try {
    return std::make_shared<const TimingProfile>(GeometricPath::from_pieces(std::move(pieces)), std::move(s),
                                                 std::move(x), std::move(t));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

Json loop_json(const LoopRecord& l) {
  return Json{{"time", l.time},
              {"outcome", to_string(l.outcome)},
              {"compute_time", l.compute_time},
              {"wall_time", l.wall_time},
              {"late", l.late},
              {"fallback", l.fallback},
              {"generated", l.generated},
              {"checked", l.checked},
              {"collided", l.collided},
              {"timeouts", l.timeouts},
              {"score", l.score},
              {"source", std::string(to_string(l.source))},
              {"shape", std::string(to_string(l.shape))},
              {"duration", l.duration},
              {"publication", l.publication ? Json(*l.publication) : Json(nullptr)}};
}

LoopRecord loop_from(const Json& j, const std::string& path) {
  Reader r(j, path);
  LoopRecord l;
  std::string outcome = to_string(l.outcome);
  std::string source(to_string(l.source));
  std::string shape(to_string(l.shape));
  r("time", l.time);
  r("outcome", outcome);
  r("compute_time", l.compute_time);
  r("wall_time", l.wall_time);
  r("late", l.late);
  r("fallback", l.fallback);
  r("generated", l.generated);
  r("checked", l.checked);
  r("collided", l.collided);
  r("timeouts", l.timeouts);
  r("score", l.score);
  r("source", source);
  r("shape", shape);
  r("duration", l.duration);
  if (const Json* p = r.find("publication"); p != nullptr && !p->is_null()) {
    if (!p->is_number_unsigned()) throw ConfigError(r.at("publication") + ": expected an index or null");
    l.publication = p->get<std::size_t>();
  }
  r.finish();
  l.outcome = loop_outcome_from_string(outcome);
  l.source = provenance_from_string(source);
  l.shape = shape_from_string(shape);
  return l;
}

}  // namespace

// ---------------------------------------------------------------------------

Json to_json(const RunConfig& cfg) {
  RunConfig copy = cfg;
  Json out;
  Writer w(out);
  visit(w, copy);
  return out;
}

RunConfig run_config_from_json(const Json& j) {
  RunConfig cfg;
  Reader r(j, "config");
  visit(r, cfg);
  r.finish();
  cfg.planner.validate();
  cfg.sim.validate();
  return cfg;
}

RunConfig load_run_config(const std::string& path) { return run_config_from_json(read_json_file(path)); }

Json to_json(const Scenario& s) {
  Json goals = Json::array();
  for (const auto& g : s.goals) goals.push_back(goal_json(g));
  Json soft = Json::array();
  for (const auto& c : s.soft) soft.push_back(soft_json(c));
  return Json{{"id", s.id},
              {"robot", s.robot},
              {"template", s.template_name},
              {"seed", s.seed},
              {"start", state_json(s.start)},
              {"goals", goals},
              {"soft", soft},
              {"environment", environment_json(s.env)}};
}

Scenario scenario_from_json(const Json& j) {
  Reader r(j, "scenario");
  Scenario s;
  r("id", s.id);
  r("robot", s.robot);
  r("template", s.template_name);
  r("seed", s.seed);
  s.start = state_from(r.need("start"), r.at("start"));
  s.goals = array_of<GoalConstraint>(&r.need("goals"), r.at("goals"), goal_from);
  s.soft = array_of<SoftConstraint>(r.find("soft"), r.at("soft"), soft_from);
  if (const Json* env = r.find("environment")) s.env = environment_from(*env, r.at("environment"));
  r.finish();
  if (s.goals.empty()) throw ConfigError("scenario.goals: at least one goal is required");
  return s;
}

Scenario load_scenario(const std::string& path) { return scenario_from_json(read_json_file(path)); }

Json to_json(const Trajectory& q, bool with_samples) {
  Json out{{"source", std::string(to_string(q.source))},
           {"shape", std::string(to_string(q.shape))},
           {"sample_period", q.sample_period()},
           {"duration", q.duration()}};
  Json waypoints = Json::array();
  for (const auto& w : q.waypoints) waypoints.push_back(to_json(w));
  out["waypoints"] = waypoints;
  out["start_velocity"] = to_json(q.start_velocity);
  if (q.profile() != nullptr) {
    out["profile"] = profile_json(*q.profile());
    out["offset"] = q.profile_offset();
  }
  if (q.profile() == nullptr || with_samples) {
    Json samples = Json::array();
    for (const auto& s : q.samples()) {
      samples.push_back(Json{{"t", s.t}, {"positions", to_json(s.state.positions)},
                             {"velocities", to_json(s.state.velocities)}});
    }
    out["samples"] = samples;
  }
  return out;
}

Trajectory trajectory_from_json(const Json& j) {
  Reader r(j, "trajectory");
  std::string source(to_string(Provenance::kRandomStraight));
  std::string shape(to_string(PathShape::kStraight));
  double ts = TimingConfig{}.sample_period;
  double offset = 0.0;
  double duration = 0.0;
  r("source", source);
  r("shape", shape);
  r("sample_period", ts);
  r("offset", offset);
  r("duration", duration);  // derived; read only to accept the key
  if (!(ts > 0.0)) throw ConfigError(r.at("sample_period") + ": must be > 0");

  Trajectory q;
  const Json* profile = r.find("profile");
  const Json* samples = r.find("samples");
  if (profile != nullptr) {
    q = Trajectory(profile_from(*profile, r.at("profile")), offset, ts);
  } else if (samples != nullptr) {
    q = Trajectory(array_of<TrajectorySample>(samples, r.at("samples"), [](const Json& e, const std::string& p) {
      Reader sr(e, p);
      TrajectorySample s;
      sr("t", s.t);
      VecX pos = vecx(sr.need("positions"), sr.at("positions"));
      VecX vel = VecX::Zero(pos.size());
      if (const Json* v = sr.find("velocities")) vel = vecx(*v, sr.at("velocities"));
      sr.finish();
      s.state = RobotState(std::move(pos), std::move(vel));
      return s;
    }));
  } else {
    throw ConfigError("trajectory: needs a profile or samples");
  }
  q.source = provenance_from_string(source);
  q.shape = shape_from_string(shape);
  q.waypoints = array_of<VecX>(r.find("waypoints"), r.at("waypoints"),
                               [](const Json& e, const std::string& p) { return vecx(e, p); });
  if (const Json* v = r.find("start_velocity")) q.start_velocity = vecx(*v, r.at("start_velocity"));
  r.finish();
  return q;
}

Json to_json(const Transcript& tr) {
  Json loops = Json::array();
  for (const auto& l : tr.loops) loops.push_back(loop_json(l));
  Json pubs = Json::array();
  for (const auto& p : tr.publications) {
    pubs.push_back(Json{{"adopt_time", p.adopt_time}, {"anchor", p.anchor}, {"trajectory", to_json(p.trajectory)}});
  }
  return Json{{"method", tr.method},
              {"start", state_json(tr.start)},
              {"termination", tr.termination},
              {"end_time", tr.end_time},
              {"loops", loops},
              {"publications", pubs}};
}

Transcript transcript_from_json(const Json& j) {
  Reader r(j, "transcript");
  Transcript tr;
  r("method", tr.method);
  r("termination", tr.termination);
  r("end_time", tr.end_time);
  tr.start = state_from(r.need("start"), r.at("start"));
  tr.loops = array_of<LoopRecord>(r.find("loops"), r.at("loops"), loop_from);
  tr.publications = array_of<Publication>(r.find("publications"), r.at("publications"),
                                          [](const Json& e, const std::string& p) {
                                            Reader pr(e, p);
                                            Publication pub;
                                            pr("adopt_time", pub.adopt_time);
                                            pr("anchor", pub.anchor);
                                            pub.trajectory = trajectory_from_json(pr.need("trajectory"));
                                            pr.finish();
                                            return pub;
                                          });
  r.finish();
  for (const auto& l : tr.loops) {
    if (l.publication && *l.publication >= tr.publications.size()) {
      throw ConfigError("transcript.loops: publication index out of range");
    }
  }
  return tr;
}

Json to_json(const EpisodeMetrics& m) {
  return Json{{"completed", m.completed},
              {"motion_completion_time", m.motion_completion_time},
              {"plan_to_motion_delay", m.plan_to_motion_delay},
              {"motion_duration", m.motion_duration},
              {"robustness", m.robustness},
              {"collided", m.collided}};
}

EpisodeMetrics metrics_from_json(const Json& j) {
  Reader r(j, "metrics");
  EpisodeMetrics m;
  r("completed", m.completed);
  r("motion_completion_time", m.motion_completion_time);
  r("plan_to_motion_delay", m.plan_to_motion_delay);
  r("motion_duration", m.motion_duration);
  r("robustness", m.robustness);
  r("collided", m.collided);
  r.finish();
  return m;
}

Json to_json(const EpisodeRecord& e) {
  return Json{{"scenario", to_json(e.scenario)},
              {"config", to_json(e.config)},
              {"metrics", to_json(e.metrics)},
              {"transcript", to_json(e.transcript)}};
}

EpisodeRecord episode_from_json(const Json& j) {
  Reader r(j, "episode");
  EpisodeRecord e;
  e.scenario = scenario_from_json(r.need("scenario"));
  if (const Json* c = r.find("config")) e.config = run_config_from_json(*c);
  if (const Json* m = r.find("metrics")) e.metrics = metrics_from_json(*m);
  e.transcript = transcript_from_json(r.need("transcript"));
  r.finish();
  return e;
}

EpisodeRecord load_episode(const std::string& path) { return episode_from_json(read_json_file(path)); }

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return detail::parse_json(text.str(), path);
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace rlp
