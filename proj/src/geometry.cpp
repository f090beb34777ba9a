#include "rlp/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace rlp {

Pose Pose::from_isometry(const Iso3& iso) {
  return Pose(iso.translation(), Quat(iso.rotation()));
}

Iso3 Pose::to_isometry() const {
  Iso3 iso = Iso3::Identity();
  iso.linear() = rotation.toRotationMatrix();
  iso.translation() = translation;
  return iso;
}

Pose Pose::operator*(const Pose& other) const {
  return Pose(translation + rotation * other.translation, rotation * other.rotation);
}

Pose Pose::inverse() const {
  const Quat inv = rotation.conjugate();
  return Pose(-(inv * translation), inv);
}

double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * kPi);  // [-pi, pi]
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

Mat3 rpy_to_matrix(double roll, double pitch, double yaw) {
  return (Eigen::AngleAxisd(yaw, Vec3::UnitZ()) * Eigen::AngleAxisd(pitch, Vec3::UnitY()) *
          Eigen::AngleAxisd(roll, Vec3::UnitX()))
      .toRotationMatrix();
}

Vec3 matrix_to_rpy(const Mat3& r) {
  const double sp = std::clamp(-r(2, 0), -1.0, 1.0);
  const double pitch = std::asin(sp);
  double roll = 0.0;
  double yaw = 0.0;
  if (std::abs(sp) < 1.0 - 1e-12) {
    roll = std::atan2(r(2, 1), r(2, 2));
    yaw = std::atan2(r(1, 0), r(0, 0));
  } else {
    // gimbal lock: fold roll into yaw
    yaw = std::atan2(-r(0, 1), r(1, 1));
  }
  return {roll, pitch, yaw};
}

double rotation_angle(const Mat3& r) {
  const double c = std::clamp((r.trace() - 1.0) * 0.5, -1.0, 1.0);
  return std::acos(c);
}

Vec3 rotation_log(const Mat3& r) {
  const Eigen::AngleAxisd aa(r);
  return aa.axis() * aa.angle();
}

double point_box_distance(const Vec3& p, const Vec3& box_min, const Vec3& box_max) {
  const Vec3 clamped = p.cwiseMax(box_min).cwiseMin(box_max);
  return (p - clamped).norm();
}

}  // namespace rlp
