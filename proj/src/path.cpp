#include "rlp/path.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace rlp {

namespace {

constexpr std::array<std::string_view, 5> kProvenanceNames{"robust-ik", "random-straight", "random-mid",
                                                           "carryover", "baseline"};
constexpr std::array<std::string_view, 3> kShapeNames{"straight", "three-point", "multi"};

}  // namespace

std::string_view to_string(Provenance p) { return kProvenanceNames[static_cast<std::size_t>(p)]; }

Provenance provenance_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kProvenanceNames.size(); ++i) {
    if (kProvenanceNames[i] == s) return static_cast<Provenance>(i);
  }
  throw ConfigError("unknown provenance '" + std::string(s) + "'");
}

std::string_view to_string(PathShape s) { return kShapeNames[static_cast<std::size_t>(s)]; }

PathShape shape_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kShapeNames.size(); ++i) {
    if (kShapeNames[i] == s) return static_cast<PathShape>(i);
  }
  throw ConfigError("unknown path shape '" + std::string(s) + "'");
}

std::vector<VecX> PathCandidate::positions() const {
  std::vector<VecX> out;
  out.reserve(waypoints.size());
  for (const auto& w : waypoints) out.push_back(w.positions);
  return out;
}

PathCandidate merge(const std::vector<RobotState>& points, Provenance source) {
  if (points.size() < 2 || points.size() > 3) {
    throw std::invalid_argument("merge: expected 2 or 3 waypoints, got " + std::to_string(points.size()));
  }
  return PathCandidate{points, source};
}

}  // namespace rlp
