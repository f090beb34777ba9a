#pragma once

#include <string>
#include <vector>

#include "rlp/planner.hpp"
#include "rlp/scenario.hpp"

namespace rlp {

/// One line per planning loop: time, outcome, chosen path and its score.
std::string loop_summary(const Transcript& tr);

/// Overhead view of an episode in the x/y plane.
struct OverheadPlot {
  struct BasePath {
    std::size_t publication = 0;
    PathShape shape = PathShape::kStraight;
    Provenance source = Provenance::kRandomStraight;
    std::vector<Vec2> points;  // commanded base positions while this publication was active
  };
  std::vector<Aabb> boxes;
  std::vector<Vec2> points;  // obstacle points, projected
  std::vector<BasePath> base_paths;
  Vec2 start = Vec2::Zero();
  Vec2 goal = Vec2::Zero();
};

/// Base path segments executed under each publication; publications that never
/// moved the base are left out.
OverheadPlot overhead_plot(const Scenario& scenario, const Transcript& tr, double dt = 0.02);

std::string render_svg(const OverheadPlot& plot);

}  // namespace rlp
