#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace sdftrack {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat34 = Eigen::Matrix<double, 3, 4>;

/// Hamilton quaternion, scalar first. The identity rotation is (1,0,0,0).
///
/// `rotate` uses the sandwich product q p q*, which for a non-unit q equals
/// |q|^2 R(q/|q|) p. Pose Jacobians are taken on that polynomial map so that
/// gradients w.r.t. the raw 4-vector agree with finite differences; the
/// optimizer renormalizes after every step.
struct Quaternion {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static Quaternion identity() { return {}; }
  static Quaternion from_axis_angle(const Vec3& axis, double angle_rad);
  /// Rotation matrix must be orthonormal with det +1.
  static Quaternion from_rotation_matrix(const Mat3& r);
  static Quaternion from_vector(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }

  Vec4 as_vector() const { return {w, x, y, z}; }
  double squared_norm() const { return w * w + x * x + y * y + z * z; }
  double norm() const;
  Quaternion conjugate() const { return {w, -x, -y, -z}; }
  /// R(q) as the polynomial matrix of the sandwich product.
  Mat3 rotation_matrix() const;

  friend Quaternion operator*(const Quaternion& a, const Quaternion& b);
  friend bool operator==(const Quaternion&, const Quaternion&) = default;
};

/// Throws DegenerateQuaternion when |q| <= 1e-12.
Quaternion normalize(const Quaternion& q);
Vec3 rotate(const Quaternion& q, const Vec3& p);
/// 2 acos(|<q1,q2>|), in [0, pi].
double geodesic_rotation_error(const Quaternion& q1, const Quaternion& q2);

/// Camera-to-world rigid transform.
struct Pose {
  Vec3 t = Vec3::Zero();
  Quaternion q;

  static Pose identity() { return {}; }
  Pose inverse() const;
  friend bool operator==(const Pose& a, const Pose& b) { return a.t == b.t && a.q == b.q; }
};

Vec3 transform(const Pose& pose, const Vec3& p_cam);
/// a * b, i.e. transform(a*b, p) == transform(a, transform(b, p)).
Pose compose(const Pose& a, const Pose& b);

/// Camera looking from `eye` toward `target`, +x right, +y down, +z forward.
/// `up` is the world up direction and must not be parallel to the view ray.
Pose look_at(const Vec3& eye, const Vec3& target, const Vec3& up);

/// Pinhole intrinsics; image size in pixels.
struct Intrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 1;
  int height = 1;

  /// Throws InvalidArgument unless fx,fy > 0 and the principal point is inside the image.
  void validate() const;
  friend bool operator==(const Intrinsics&, const Intrinsics&) = default;
};

/// Throws InvalidDepth when depth <= 0 or non-finite. Depth is camera z.
Vec3 backproject(const Intrinsics& k, double u, double v, double depth);
Eigen::Vector2d project(const Intrinsics& k, const Vec3& p_cam);

struct PoseJacobians {
  Mat3 d_translation;   // always identity
  Mat34 d_quaternion;   // d(R(q) p)/d(w,x,y,z)
};

PoseJacobians pose_jacobians(const Pose& pose, const Vec3& p_cam);
/// d(R(q) p)/d(w,x,y,z) on the raw (possibly non-unit) 4-vector.
Mat34 rotation_jacobian(const Quaternion& q, const Vec3& p);

}  // namespace sdftrack
