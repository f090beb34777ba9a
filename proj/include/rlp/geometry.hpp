#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

namespace rlp {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Quat = Eigen::Quaterniond;
using Iso3 = Eigen::Isometry3d;
using VecX = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Rigid transform with a unit quaternion rotation.
struct Pose {
  Vec3 translation = Vec3::Zero();
  Quat rotation = Quat::Identity();

  Pose() = default;
  Pose(const Vec3& t, const Quat& q) : translation(t), rotation(q.normalized()) {}

  static Pose from_isometry(const Iso3& iso);
  Iso3 to_isometry() const;

  Pose operator*(const Pose& other) const;
  Pose inverse() const;
};

/// Wraps to (-pi, pi].
double wrap_angle(double a);

/// Signed shortest rotation taking `from` to `to`, in (-pi, pi].
inline double shortest_arc(double from, double to) { return wrap_angle(to - from); }

/// R = Rz(yaw) * Ry(pitch) * Rx(roll).
Mat3 rpy_to_matrix(double roll, double pitch, double yaw);
Vec3 matrix_to_rpy(const Mat3& r);

/// Rotation angle of r in [0, pi].
double rotation_angle(const Mat3& r);

/// Angle-axis vector of r (log map).
Vec3 rotation_log(const Mat3& r);

/// Distance from p to an axis-aligned box (0 inside).
double point_box_distance(const Vec3& p, const Vec3& box_min, const Vec3& box_max);

}  // namespace rlp
