#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "sdftrack/error.hpp"
#include "sdftrack/geometry.hpp"
#include "support/oracles.hpp"

using namespace sdftrack;

namespace {

const double kHalfSqrt2 = std::sqrt(2.0) / 2.0;

void expect_vec_near(const Vec3& a, const Vec3& b, double tol) {
  EXPECT_NEAR(a.x(), b.x(), tol);
  EXPECT_NEAR(a.y(), b.y(), tol);
  EXPECT_NEAR(a.z(), b.z(), tol);
}

}  // namespace

TEST(Normalize, ScalesToUnitNorm) {
  EXPECT_EQ(normalize(Quaternion{2, 0, 0, 0}), (Quaternion{1, 0, 0, 0}));
  EXPECT_EQ(normalize(Quaternion{0, 0, 0, -3}), (Quaternion{0, 0, 0, -1}));
  const Quaternion q = normalize(Quaternion{1, 1, 1, 1});
  EXPECT_DOUBLE_EQ(q.w, 0.5);
  EXPECT_DOUBLE_EQ(q.x, 0.5);
  EXPECT_DOUBLE_EQ(q.y, 0.5);
  EXPECT_DOUBLE_EQ(q.z, 0.5);
}

TEST(Normalize, RejectsDegenerateInput) {
  EXPECT_THROW(normalize(Quaternion{0, 0, 0, 0}), DegenerateQuaternion);
  EXPECT_THROW(normalize(Quaternion{1e-13, 0, 0, 0}), DegenerateQuaternion);
}

TEST(Normalize, IsIdempotentAndUnit) {
  Rng rng(11);
  std::normal_distribution<double> n(0.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const Quaternion q{n(rng), n(rng), n(rng), n(rng)};
    const Quaternion once = normalize(q);
    EXPECT_LT((normalize(once).as_vector() - once.as_vector()).norm(), 1e-15);
    EXPECT_NEAR(once.squared_norm(), 1.0, 1e-12);
  }
}

TEST(Rotate, Examples) {
  expect_vec_near(rotate(Quaternion::identity(), Vec3(3, -1, 2)), Vec3(3, -1, 2), 0.0);
  expect_vec_near(rotate(Quaternion{kHalfSqrt2, 0, 0, kHalfSqrt2}, Vec3(1, 0, 0)), Vec3(0, 1, 0), 1e-15);
  expect_vec_near(rotate(Quaternion{0, 1, 0, 0}, Vec3(0, 1, 1)), Vec3(0, -1, -1), 0.0);
}

TEST(Rotate, PreservesNormsAndDotProducts) {
  Rng rng(12);
  for (int i = 0; i < 1000; ++i) {
    const Quaternion q = oracle::random_rotation(rng);
    const Vec3 p = oracle::uniform_vec(rng, -5, 5), r = oracle::uniform_vec(rng, -5, 5);
    const Vec3 rp = rotate(q, p), rr = rotate(q, r);
    EXPECT_NEAR(rp.norm(), p.norm(), 1e-9 * p.norm());
    EXPECT_NEAR(rp.dot(rr), p.dot(r), 1e-9 * p.norm() * r.norm());
  }
}

TEST(Rotate, MatchesAxisAngleConstruction) {
  const Quaternion q = Quaternion::from_axis_angle(Vec3(0, 0, 2), std::numbers::pi / 2);
  EXPECT_NEAR((q.as_vector() - Vec4(kHalfSqrt2, 0, 0, kHalfSqrt2)).norm(), 0.0, 1e-15);
}

TEST(Rotate, RotationMatrixRoundTrip) {
  Rng rng(13);
  for (int i = 0; i < 200; ++i) {
    const Quaternion q = oracle::random_rotation(rng);
    const Quaternion back = Quaternion::from_rotation_matrix(q.rotation_matrix());
    EXPECT_NEAR(geodesic_rotation_error(q, back), 0.0, 1e-7);
    const Mat3 r = q.rotation_matrix();
    EXPECT_NEAR((r * r.transpose() - Mat3::Identity()).norm(), 0.0, 1e-12);
    EXPECT_NEAR(r.determinant(), 1.0, 1e-12);
  }
}

TEST(Transform, Examples) {
  expect_vec_near(transform(Pose::identity(), Vec3(1, 2, 3)), Vec3(1, 2, 3), 0.0);
  expect_vec_near(transform(Pose{Vec3(1, 0, 0), Quaternion::identity()}, Vec3(0, 0, 2)), Vec3(1, 0, 2), 0.0);
  expect_vec_near(transform(Pose{Vec3::Zero(), Quaternion{kHalfSqrt2, 0, 0, kHalfSqrt2}}, Vec3(1, 0, 0)),
                  Vec3(0, 1, 0), 1e-15);
}

TEST(Transform, InverseRoundTrip) {
  Rng rng(14);
  for (int i = 0; i < 1000; ++i) {
    const Pose pose = oracle::random_pose(rng, 3.0);
    const Vec3 p = oracle::uniform_vec(rng, -5, 5);
    expect_vec_near(transform(pose.inverse(), transform(pose, p)), p, 1e-9);
  }
}

TEST(Transform, IsAnIsometry) {
  Rng rng(15);
  for (int i = 0; i < 1000; ++i) {
    const Pose pose = oracle::random_pose(rng, 3.0);
    const Vec3 a = oracle::uniform_vec(rng, -5, 5), b = oracle::uniform_vec(rng, -5, 5);
    const double d = (a - b).norm();
    EXPECT_NEAR((transform(pose, a) - transform(pose, b)).norm(), d, 1e-9 * d);
  }
}

TEST(Transform, ComposeMatchesSequentialApplication) {
  Rng rng(16);
  for (int i = 0; i < 200; ++i) {
    const Pose a = oracle::random_pose(rng, 2.0), b = oracle::random_pose(rng, 2.0);
    const Vec3 p = oracle::uniform_vec(rng, -2, 2);
    expect_vec_near(transform(compose(a, b), p), transform(a, transform(b, p)), 1e-12);
  }
}

TEST(LookAt, ForwardAxisPointsAtTarget) {
  const Vec3 eye(1, -2, 0.5), target(0, 0, 0);
  const Pose pose = look_at(eye, target, Vec3::UnitZ());
  expect_vec_near(pose.t, eye, 0.0);
  expect_vec_near(rotate(pose.q, Vec3::UnitZ()), (target - eye).normalized(), 1e-12);
  // Image "down" has a negative world-up component.
  EXPECT_LT(rotate(pose.q, Vec3::UnitY()).z(), 0.0);
  EXPECT_THROW(look_at(Vec3(0, 0, 1), Vec3::Zero(), Vec3::UnitZ()), InvalidArgument);
}

TEST(Backproject, Examples) {
  const Intrinsics k{100, 100, 50, 50, 100, 100};
  expect_vec_near(backproject(k, 50, 50, 2.0), Vec3(0, 0, 2), 0.0);
  expect_vec_near(backproject(k, 150, 50, 1.0), Vec3(1, 0, 1), 0.0);
  expect_vec_near(backproject(k, 75, 25, 2.0), Vec3(0.5, -0.5, 2), 1e-15);
}

TEST(Backproject, RejectsInvalidDepth) {
  const Intrinsics k{100, 100, 50, 50, 100, 100};
  EXPECT_THROW(backproject(k, 1, 1, 0.0), InvalidDepth);
  EXPECT_THROW(backproject(k, 1, 1, -1.0), InvalidDepth);
  EXPECT_THROW(backproject(k, 1, 1, std::nan("")), InvalidDepth);
  EXPECT_THROW(backproject(k, 1, 1, INFINITY), InvalidDepth);
}

TEST(Backproject, ProjectRoundTrip) {
  const Intrinsics k{525.0, 520.0, 319.5, 239.5, 640, 480};
  Rng rng(17);
  std::uniform_real_distribution<double> u(0, 640), v(0, 480), d(0.1, 10);
  for (int i = 0; i < 1000; ++i) {
    const double uu = u(rng), vv = v(rng);
    const Eigen::Vector2d px = project(k, backproject(k, uu, vv, d(rng)));
    EXPECT_NEAR(px.x(), uu, 1e-9);
    EXPECT_NEAR(px.y(), vv, 1e-9);
  }
}

TEST(Intrinsics, Validation) {
  EXPECT_NO_THROW((Intrinsics{1, 1, 0, 0, 2, 2}.validate()));
  EXPECT_THROW((Intrinsics{0, 1, 0, 0, 2, 2}.validate()), InvalidArgument);
  EXPECT_THROW((Intrinsics{1, -1, 0, 0, 2, 2}.validate()), InvalidArgument);
  EXPECT_THROW((Intrinsics{1, 1, 2, 0, 2, 2}.validate()), InvalidArgument);
  EXPECT_THROW((Intrinsics{1, 1, 0, -0.1, 2, 2}.validate()), InvalidArgument);
}

TEST(PoseJacobians, TranslationIsIdentity) {
  Rng rng(18);
  const Pose pose = oracle::random_pose(rng);
  EXPECT_EQ(pose_jacobians(pose, Vec3(1, 2, 3)).d_translation, Mat3::Identity());
}

TEST(PoseJacobians, OriginHasZeroRotationJacobian) {
  EXPECT_EQ(rotation_jacobian(Quaternion::identity(), Vec3::Zero()), Mat34::Zero());
}

TEST(PoseJacobians, MatchFiniteDifferences) {
  Rng rng(19);
  for (int trial = 0; trial < 101; ++trial) {
    const Pose pose = trial == 0 ? Pose::identity() : oracle::random_pose(rng, 2.0);
    const Vec3 p = trial == 0 ? Vec3(1, 2, 3) : oracle::uniform_vec(rng, -3, 3);
    const PoseJacobians j = pose_jacobians(pose, p);
    const double h = 1e-6;
    for (int c = 0; c < 4; ++c) {
      Vec4 qp = pose.q.as_vector(), qm = qp;
      qp[c] += h;
      qm[c] -= h;
      const Vec3 fd = (transform({pose.t, Quaternion::from_vector(qp)}, p) -
                       transform({pose.t, Quaternion::from_vector(qm)}, p)) /
                      (2 * h);
      EXPECT_LT((j.d_quaternion.col(c) - fd).cwiseAbs().maxCoeff(), 1e-5) << "trial " << trial << " col " << c;
    }
    for (int c = 0; c < 3; ++c) {
      Pose plus = pose, minus = pose;
      plus.t[c] += h;
      minus.t[c] -= h;
      const Vec3 fd = (transform(plus, p) - transform(minus, p)) / (2 * h);
      EXPECT_LT((j.d_translation.col(c) - fd).cwiseAbs().maxCoeff(), 1e-5);
    }
  }
}

TEST(GeodesicRotationError, Examples) {
  Rng rng(20);
  const Quaternion q = oracle::random_rotation(rng);
  EXPECT_NEAR(geodesic_rotation_error(q, q), 0.0, 1e-7);
  EXPECT_NEAR(geodesic_rotation_error(Quaternion::identity(), Quaternion{kHalfSqrt2, 0, 0, kHalfSqrt2}),
              std::numbers::pi / 2, 1e-12);
  EXPECT_NEAR(geodesic_rotation_error(q, Quaternion::from_vector(-q.as_vector())), 0.0, 1e-7);
}

TEST(GeodesicRotationError, RangeIsZeroToPi) {
  Rng rng(21);
  for (int i = 0; i < 1000; ++i) {
    const double e = geodesic_rotation_error(oracle::random_rotation(rng), oracle::random_rotation(rng));
    EXPECT_GE(e, 0.0);
    EXPECT_LE(e, std::numbers::pi);
  }
}
