#include "rlp/replay.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace rlp {

namespace {

std::string format(const char* fmt, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

// distinct hues for consecutive base paths
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

std::string loop_summary(const Transcript& tr) {
  std::ostringstream out;
  out << "method " << (tr.method.empty() ? "?" : tr.method) << ", " << tr.loops.size() << " loops, "
      << tr.publications.size() << " publications, ended " << tr.termination << " at "
      << format("%.3f", tr.end_time) << " s\n";
  out << "    time  outcome   shape        source          duration     score  compute  gen  chk  col  note\n";
  for (const auto& l : tr.loops) {
    const bool has_path = l.outcome == LoopOutcome::kSwitched || l.outcome == LoopOutcome::kKept || l.fallback;
    std::string note;
    auto add = [&note](const std::string& s) { note += (note.empty() ? "" : ", ") + s; };
    if (l.publication) add("published #" + std::to_string(*l.publication));
    if (l.late) add("late, dropped");
    if (l.fallback) add("baseline fallback");
    if (l.timeouts > 0) add("validation timeout");
    out << format("%8.3f  %-8s  %-11s  %-14s  %8.3f  %8.3f  %7.4f  %3d  %3d  %3d  ", l.time,
                  to_string(l.outcome).c_str(), has_path ? std::string(to_string(l.shape)).c_str() : "-",
                  has_path ? std::string(to_string(l.source)).c_str() : "-", l.duration, l.score, l.compute_time,
                  l.generated, l.checked, l.collided)
        << note << "\n";
  }
  return out.str();
}

OverheadPlot overhead_plot(const Scenario& scenario, const Transcript& tr, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("overhead_plot: dt must be > 0");
  OverheadPlot plot;
  plot.boxes = scenario.env.boxes();
  plot.points.reserve(scenario.env.points().size());
  for (const auto& p : scenario.env.points()) plot.points.emplace_back(p.x(), p.y());
  plot.start = scenario.start.positions.head<2>();
  for (const auto& g : scenario.goals) {
    if (g.is_ee()) {
      plot.goal = g.ee().reference.translation.head<2>();
      break;
    }
  }

  const auto& pubs = tr.publications;
  for (std::size_t i = 0; i < pubs.size(); ++i) {
    const auto& p = pubs[i];
    const double begin = p.adopt_time;
    const double end = i + 1 < pubs.size() ? pubs[i + 1].adopt_time : p.anchor + p.trajectory.duration();
    OverheadPlot::BasePath path{i, p.trajectory.shape, p.trajectory.source, {}};
    double moved = 0.0;
    for (double t = begin;; t = std::min(t + dt, end)) {
      const Vec2 xy = p.trajectory.state_at(std::max(t - p.anchor, 0.0)).positions.head<2>();
      if (!path.points.empty()) moved += (xy - path.points.back()).norm();
      path.points.push_back(xy);
      if (t >= end) break;
    }
    if (moved > 1e-6) plot.base_paths.push_back(std::move(path));
  }
  return plot;
}

std::string render_svg(const OverheadPlot& plot) {
  Eigen::AlignedBox2d bounds;
  bounds.extend(plot.start);
  bounds.extend(plot.goal);
  for (const auto& b : plot.boxes) {
    bounds.extend(Vec2(b.min.x(), b.min.y()));
    bounds.extend(Vec2(b.max.x(), b.max.y()));
  }
  for (const auto& p : plot.points) bounds.extend(p);
  for (const auto& path : plot.base_paths) {
    for (const auto& p : path.points) bounds.extend(p);
  }
  constexpr double kPad = 0.3;
  constexpr double kScale = 100.0;  // px per metre
  const Vec2 lo = bounds.min() - Vec2::Constant(kPad);
  const Vec2 size = bounds.sizes() + Vec2::Constant(2.0 * kPad);
  // y points up in the world and down in SVG
  auto px = [&](const Vec2& p) { return Vec2((p.x() - lo.x()) * kScale, (lo.y() + size.y() - p.y()) * kScale); };

  std::ostringstream svg;
  svg << format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n",
                size.x() * kScale, size.y() * kScale, size.x() * kScale, size.y() * kScale);
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& b : plot.boxes) {
    const Vec2 a = px(Vec2(b.min.x(), b.max.y()));
    svg << format("<rect class=\"obstacle\" x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"#bbbbbb\"/>\n",
                  a.x(), a.y(), (b.max.x() - b.min.x()) * kScale, (b.max.y() - b.min.y()) * kScale);
  }
  for (const auto& p : plot.points) {
    const Vec2 a = px(p);
    svg << format("<circle class=\"point\" cx=\"%.1f\" cy=\"%.1f\" r=\"1\" fill=\"#555555\"/>\n", a.x(), a.y());
  }
  for (std::size_t k = 0; k < plot.base_paths.size(); ++k) {
    const auto& path = plot.base_paths[k];
    svg << "<polyline class=\"base-path\" data-publication=\"" << path.publication << "\" data-shape=\""
        << to_string(path.shape) << "\" data-source=\"" << to_string(path.source) << "\" fill=\"none\" stroke=\""
        << kPalette[k % std::size(kPalette)] << "\" stroke-width=\"3\" points=\"";
    for (std::size_t i = 0; i < path.points.size(); ++i) {
      const Vec2 a = px(path.points[i]);
      svg << (i == 0 ? "" : " ") << format("%.1f,%.1f", a.x(), a.y());
    }
    svg << "\"/>\n";
  }
  const Vec2 s = px(plot.start);
  const Vec2 g = px(plot.goal);
  svg << format("<circle class=\"start\" cx=\"%.1f\" cy=\"%.1f\" r=\"6\" fill=\"black\"/>\n", s.x(), s.y());
  svg << format("<circle class=\"goal\" cx=\"%.1f\" cy=\"%.1f\" r=\"6\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n",
                g.x(), g.y());
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace rlp
