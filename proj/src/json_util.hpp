#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "rlp/geometry.hpp"
#include "rlp/model.hpp"

namespace rlp::detail {

using Json = nlohmann::json;

/// Parses text, rethrowing syntax errors as ConfigError with a line number.
inline Json parse_json(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    const std::size_t end = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') ++line;
    }
    throw ConfigError(std::string(what) + ": parse error at line " + std::to_string(line) + ": " +
                      e.what());
  }
}

inline const Json& field(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ConfigError(path + "." + key + ": missing field");
  }
  return obj.at(key);
}

inline double number(const Json& obj, const char* key, const std::string& path) {
  const Json& v = field(obj, key, path);
  if (!v.is_number()) throw ConfigError(path + "." + key + ": expected a number");
  return v.get<double>();
}

inline double number_or(const Json& obj, const char* key, double fallback, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  return number(obj, key, path);
}

inline Vec3 vec3(const Json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3) throw ConfigError(path + ": expected [x, y, z]");
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(path + ": expected numbers");
  }
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

inline Json to_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

inline Json to_json(const VecX& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline VecX vecx(const Json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path + ": expected an array");
  VecX out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ConfigError(path + ": expected numbers");
    out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
  }
  return out;
}

/// {"xyz": [...], "rpy": [...]} with both optional.
inline Iso3 transform(const Json& v, const std::string& path) {
  Iso3 iso = Iso3::Identity();
  if (v.contains("xyz")) iso.translation() = vec3(v.at("xyz"), path + ".xyz");
  if (v.contains("rpy")) {
    const Vec3 rpy = vec3(v.at("rpy"), path + ".rpy");
    iso.linear() = rpy_to_matrix(rpy.x(), rpy.y(), rpy.z());
  }
  return iso;
}

}  // namespace rlp::detail
