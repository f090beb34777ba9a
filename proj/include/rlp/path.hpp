#pragma once

#include <string_view>
#include <vector>

#include "rlp/model.hpp"

namespace rlp {

/// Where a candidate path came from.
enum class Provenance { kRobustIk, kRandomStraight, kRandomMid, kCarryover, kBaseline };

std::string_view to_string(Provenance p);
Provenance provenance_from_string(std::string_view s);  // throws ConfigError

/// Geometric family of a path, preserved through carryover.
enum class PathShape { kStraight, kThreePoint, kMulti };

std::string_view to_string(PathShape s);
PathShape shape_from_string(std::string_view s);  // throws ConfigError

/// Untimed waypoint path (q_init, [q_middle], q_goal).
struct PathCandidate {
  std::vector<RobotState> waypoints;
  Provenance source = Provenance::kRandomStraight;

  PathShape shape() const {
    return waypoints.size() == 2 ? PathShape::kStraight
           : waypoints.size() == 3 ? PathShape::kThreePoint
                                   : PathShape::kMulti;
  }
  std::vector<VecX> positions() const;
};

/// Combines 2 or 3 states into a candidate; throws std::invalid_argument otherwise.
PathCandidate merge(const std::vector<RobotState>& points, Provenance source);

}  // namespace rlp
