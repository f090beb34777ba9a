#include "rlp/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "rlp/bench.hpp"
#include "rlp/io.hpp"
#include "rlp/replay.hpp"

namespace rlp {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::uint64_t seed = 1;
  bool seed_given = false;
  std::string config_path;
  std::string method = "rlp";
  std::string methods = "rlp,rlp-minus,rlp-mm,rrt";
  std::string fallback;  // empty keeps the configured value
  int threads = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
  std::string robot = "hsr-like";
  std::string scenario_path;
  std::string scenarios_dir;
  std::string out_path;
  std::string svg_path;
  std::string episode_path;
  std::string template_name;
  int count = 100;
  std::optional<double> noise;
};

RunConfig load_config(const Options& o) {
  RunConfig cfg = o.config_path.empty() ? RunConfig{} : load_run_config(o.config_path);
  if (!o.fallback.empty()) cfg.planner.fallback = o.fallback == "on";
  if (o.noise) cfg.sim.base_noise_sigma = *o.noise;
  cfg.planner.validate();
  cfg.sim.validate();
  return cfg;
}

Scenario scenario_for(const Options& o) {
  Scenario s = load_scenario(o.scenario_path);
  if (o.seed_given) s.seed = o.seed;
  return s;
}

/// Writes text to the --out file, or to out when none was given.
void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out_path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + o.out_path + "'");
  f << text;
}

int cmd_plan(const Options& o, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load_config(o);
  const Scenario s = scenario_for(o);
  const RobotModel model = bundled_robot_model(s.robot);
  const Method method = method_from_string(o.method);
  const PlannerConfig planner = config_for(method, cfg.planner);
  Rng rng(s.seed);
  std::optional<Trajectory> traj;
  if (method == Method::kRrt) {
    traj = plan_baseline(model, s.start, s.goals, s.env, rng, planner.rrt, planner.timing);
  } else {
    WorkMeter meter;
    work::Scope scope(meter);
    auto res = plan_loop(s.goals, s.soft, s.env, model, rng, planner, nullptr, s.start);
    traj = std::move(res.trajectory);
  }
  if (!traj) {
    err << "plan: no collision-free trajectory found for '" << s.id << "'\n";
    return 1;
  }
  emit(o, out, to_json(*traj, true).dump(2) + "\n");
  return 0;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load_config(o);
  EpisodeRecord rec;
  rec.scenario = scenario_for(o);
  rec.config = cfg;
  const RobotModel model = bundled_robot_model(rec.scenario.robot);
  const Method method = method_from_string(o.method);
  Episode ep = run_episode(model, rec.scenario, method, cfg.sim, cfg.planner);
  rec.metrics = ep.metrics;
  rec.transcript = std::move(ep.transcript);
  emit(o, out, to_json(rec).dump(2) + "\n");
  const auto& m = rec.metrics;
  err << rec.scenario.id << " " << o.method << ": " << (m.completed ? "completed" : "not completed")
      << ", completion " << m.motion_completion_time << " s, delay " << m.plan_to_motion_delay << " s, duration "
      << m.motion_duration << " s, robustness " << m.robustness << (m.collided ? ", collided" : "") << "\n";
  return m.completed ? 0 : 1;
}

std::vector<Scenario> load_scenario_dir(const std::string& dir) {
  if (!fs::is_directory(dir)) throw ConfigError("'" + dir + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Scenario> out;
  for (const auto& f : files) out.push_back(load_scenario(f.string()));
  if (out.empty()) throw ConfigError("no scenario files in '" + dir + "'");
  return out;
}

int cmd_bench(const Options& o, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load_config(o);
  const auto methods = parse_methods(o.methods);
  const RobotModel model = bundled_robot_model(o.robot);
  if (o.count < 1) throw ConfigError("--count must be >= 1");
  const auto scenarios = o.scenarios_dir.empty() ? default_suite(model, o.count, o.seed)
                                                 : load_scenario_dir(o.scenarios_dir);
  for (const auto& s : scenarios) {
    if (s.robot != model.name()) {
      throw ConfigError("scenario '" + s.id + "' is for robot '" + s.robot + "', bench runs '" + model.name() + "'");
    }
  }
  const SuiteResult result = run_suite(model, scenarios, methods, cfg.sim, cfg.planner, o.threads);
  for (const auto& r : result.rows) {
    if (!r.error.empty()) err << "warning: " << r.scenario_id << " " << to_string(r.method) << ": " << r.error << "\n";
  }
  std::ostringstream csv;
  write_csv(csv, result);
  emit(o, out, csv.str());
  return 0;
}

int cmd_gen(const Options& o, std::ostream& out, std::ostream&) {
  const RobotModel model = bundled_robot_model(o.robot);
  if (o.count < 1) throw ConfigError("--count must be >= 1");
  const auto scenarios = gen_scenarios(model, scene_template_from_string(o.template_name), o.count, o.seed);
  fs::create_directories(o.out_path);
  for (const auto& s : scenarios) {
    const fs::path file = fs::path(o.out_path) / (s.id + ".json");
    write_json_file(file.string(), to_json(s));
    out << file.string() << "\n";
  }
  return 0;
}

int cmd_replay(const Options& o, std::ostream& out, std::ostream&) {
  const EpisodeRecord rec = load_episode(o.episode_path);
  out << loop_summary(rec.transcript);
  if (!o.svg_path.empty()) {
    const OverheadPlot plot = overhead_plot(rec.scenario, rec.transcript, rec.config.sim.dt);
    std::ofstream f(o.svg_path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + o.svg_path + "'");
    f << render_svg(plot);
    out << "wrote " << o.svg_path << " (" << plot.base_paths.size() << " base paths)\n";
  }
  return 0;
}

int cmd_config(const Options& o, std::ostream& out, std::ostream&) {
  emit(o, out, to_json(load_config(o)).dump(2) + "\n");
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Whole-body mobile manipulator planner: periodic straight/three-point replanning"};
  app.name("rlp");
  app.require_subcommand(1);
  app.fallthrough();

  auto* seed = app.add_option("--seed", o.seed, "Random seed (suite seed, or overrides the scenario seed)");
  app.add_option("--config", o.config_path, "JSON file overriding planner/sim defaults")->check(CLI::ExistingFile);
  app.add_option("--method", o.method, "rlp, rlp-minus, rlp-mm or rrt")->capture_default_str();
  app.add_option("--methods", o.methods, "Comma-separated methods for bench")->capture_default_str();
  app.add_option("--fallback", o.fallback, "Use the baseline planner when periodic planning stops")
      ->check(CLI::IsMember({"on", "off"}));
  app.add_option("--threads", o.threads, "Worker threads for bench")->check(CLI::PositiveNumber);
  app.add_option("--robot", o.robot, "Bundled robot name or model file")->capture_default_str();

  auto* plan = app.add_subcommand("plan", "One planning call from the scenario start; prints trajectory JSON");
  plan->add_option("--scenario", o.scenario_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
  plan->add_option("--out", o.out_path, "Output file (default stdout)");

  auto* sim = app.add_subcommand("simulate", "Simulate one episode; prints the episode JSON");
  sim->add_option("--scenario", o.scenario_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
  sim->add_option("--noise", o.noise, "Base offset standard deviation [m]")->check(CLI::NonNegativeNumber);
  sim->add_option("--out", o.out_path, "Output file (default stdout)");

  auto* bench = app.add_subcommand("bench", "Run a scenario suite for several methods; prints CSV");
  bench->add_option("--scenarios", o.scenarios_dir, "Directory of scenario JSON files (default: generated suite)");
  bench->add_option("--count", o.count, "Generated suite size")->capture_default_str();
  bench->add_option("--noise", o.noise, "Base offset standard deviation [m]")->check(CLI::NonNegativeNumber);
  bench->add_option("--out", o.out_path, "Output CSV (default stdout)");

  auto* gen = app.add_subcommand("gen-scenarios", "Write seeded scenario files");
  gen->add_option("--template", o.template_name, "tabletop, shelf or corridor")->required();
  gen->add_option("--count", o.count, "Number of scenarios")->capture_default_str();
  gen->add_option("--out", o.out_path, "Output directory")->required();

  auto* replay = app.add_subcommand("replay", "Summarize an episode loop by loop; optionally draw it as SVG");
  replay->add_option("episode", o.episode_path, "Episode JSON written by simulate")->required()->check(CLI::ExistingFile);
  replay->add_option("--svg", o.svg_path, "Overhead SVG output");

  auto* config = app.add_subcommand("config", "Print the effective configuration JSON");
  config->add_option("--out", o.out_path, "Output file (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }
  o.seed_given = seed->count() > 0;

  try {
    if (*plan) return cmd_plan(o, out, err);
    if (*sim) return cmd_simulate(o, out, err);
    if (*bench) return cmd_bench(o, out, err);
    if (*gen) return cmd_gen(o, out, err);
    if (*replay) return cmd_replay(o, out, err);
    if (*config) return cmd_config(o, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace rlp
