#include "sdftrack/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sdftrack/error.hpp"

namespace sdftrack {

Quaternion Quaternion::from_axis_angle(const Vec3& axis, double angle_rad) {
  const Vec3 a = axis.normalized();
  const double s = std::sin(0.5 * angle_rad);
  return {std::cos(0.5 * angle_rad), a.x() * s, a.y() * s, a.z() * s};
}

Quaternion Quaternion::from_rotation_matrix(const Mat3& r) {
  // Shepperd's method: branch on the largest diagonal combination.
  const double trace = r.trace();
  Quaternion q;
  if (trace > r(0, 0) && trace > r(1, 1) && trace > r(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + trace);
    q = {0.25 * s, (r(2, 1) - r(1, 2)) / s, (r(0, 2) - r(2, 0)) / s, (r(1, 0) - r(0, 1)) / s};
  } else if (r(0, 0) > r(1, 1) && r(0, 0) > r(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + r(0, 0) - r(1, 1) - r(2, 2));
    q = {(r(2, 1) - r(1, 2)) / s, 0.25 * s, (r(0, 1) + r(1, 0)) / s, (r(0, 2) + r(2, 0)) / s};
  } else if (r(1, 1) > r(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + r(1, 1) - r(0, 0) - r(2, 2));
    q = {(r(0, 2) - r(2, 0)) / s, (r(0, 1) + r(1, 0)) / s, 0.25 * s, (r(1, 2) + r(2, 1)) / s};
  } else {
    const double s = 2.0 * std::sqrt(1.0 + r(2, 2) - r(0, 0) - r(1, 1));
    q = {(r(1, 0) - r(0, 1)) / s, (r(0, 2) + r(2, 0)) / s, (r(1, 2) + r(2, 1)) / s, 0.25 * s};
  }
  if (q.w < 0.0) q = {-q.w, -q.x, -q.y, -q.z};
  return normalize(q);
}

double Quaternion::norm() const { return std::sqrt(squared_norm()); }

Mat3 Quaternion::rotation_matrix() const {
  Mat3 r;
  r << w * w + x * x - y * y - z * z, 2.0 * (x * y - w * z), 2.0 * (x * z + w * y),
      2.0 * (x * y + w * z), w * w - x * x + y * y - z * z, 2.0 * (y * z - w * x),
      2.0 * (x * z - w * y), 2.0 * (y * z + w * x), w * w - x * x - y * y + z * z;
  return r;
}

Quaternion operator*(const Quaternion& a, const Quaternion& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

Quaternion normalize(const Quaternion& q) {
  const double n = q.norm();
  if (!(n > 1e-12)) {
    std::ostringstream os;
    os << "cannot normalize quaternion with norm " << n;
    throw DegenerateQuaternion(os.str());
  }
  return {q.w / n, q.x / n, q.y / n, q.z / n};
}

Vec3 rotate(const Quaternion& q, const Vec3& p) { return q.rotation_matrix() * p; }

double geodesic_rotation_error(const Quaternion& q1, const Quaternion& q2) {
  const double dot = std::abs(q1.w * q2.w + q1.x * q2.x + q1.y * q2.y + q1.z * q2.z);
  return 2.0 * std::acos(std::min(1.0, dot));
}

Pose Pose::inverse() const {
  const Quaternion qi = q.conjugate();
  return {-rotate(qi, t), qi};
}

Vec3 transform(const Pose& pose, const Vec3& p_cam) { return rotate(pose.q, p_cam) + pose.t; }

Pose compose(const Pose& a, const Pose& b) { return {rotate(a.q, b.t) + a.t, a.q * b.q}; }

Pose look_at(const Vec3& eye, const Vec3& target, const Vec3& up) {
  const Vec3 forward = (target - eye).normalized();
  const Vec3 side = forward.cross(up);
  if (side.norm() < 1e-9) throw InvalidArgument("look_at: view direction parallel to up vector");
  const Vec3 right = side.normalized();
  const Vec3 down = forward.cross(right);
  Mat3 r;
  r.col(0) = right;
  r.col(1) = down;
  r.col(2) = forward;
  return {eye, Quaternion::from_rotation_matrix(r)};
}

void Intrinsics::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) throw InvalidArgument("intrinsics: focal lengths must be positive");
  if (width <= 0 || height <= 0) throw InvalidArgument("intrinsics: image size must be positive");
  if (!(cx >= 0.0 && cx < width) || !(cy >= 0.0 && cy < height))
    throw InvalidArgument("intrinsics: principal point outside image");
}

Vec3 backproject(const Intrinsics& k, double u, double v, double depth) {
  if (!std::isfinite(depth) || depth <= 0.0) {
    std::ostringstream os;
    os << "backproject: invalid depth " << depth << " at (" << u << ", " << v << ")";
    throw InvalidDepth(os.str());
  }
  return {(u - k.cx) * depth / k.fx, (v - k.cy) * depth / k.fy, depth};
}

Eigen::Vector2d project(const Intrinsics& k, const Vec3& p_cam) {
  return {k.fx * p_cam.x() / p_cam.z() + k.cx, k.fy * p_cam.y() / p_cam.z() + k.cy};
}

Mat34 rotation_jacobian(const Quaternion& q, const Vec3& p) {
  const double w = q.w, x = q.x, y = q.y, z = q.z;
  const double px = p.x(), py = p.y(), pz = p.z();
  Mat34 j;
  j.col(0) << w * px - z * py + y * pz, z * px + w * py - x * pz, -y * px + x * py + w * pz;
  j.col(1) << x * px + y * py + z * pz, y * px - x * py - w * pz, z * px + w * py - x * pz;
  j.col(2) << -y * px + x * py + w * pz, x * px + y * py + z * pz, -w * px + z * py - y * pz;
  j.col(3) << -z * px - w * py + x * pz, w * px - z * py + y * pz, x * px + y * py + z * pz;
  return 2.0 * j;
}

PoseJacobians pose_jacobians(const Pose& pose, const Vec3& p_cam) {
  return {Mat3::Identity(), rotation_jacobian(pose.q, p_cam)};
}

}  // namespace sdftrack
