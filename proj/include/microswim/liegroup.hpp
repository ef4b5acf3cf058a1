#pragma once

// Rotation and rigid-motion primitives.
//
// Conventions used throughout the library:
//
//  * Twists and wrenches are ordered (linear; angular):
//      twist  = (vx, vy, vz, wx, wy, wz)
//      wrench = (fx, fy, fz, mx, my, mz)
//    Many libraries (Sophus, Pinocchio's Motion in some APIs) use (w; v). We do not.
//
//  * The elementary rotations rot_x/rot_y/rot_z use the *passive* sign layout
//
//        rot_z(t) = [  cos t  sin t  0 ]
//                   [ -sin t  cos t  0 ]
//                   [    0      0    1 ]
//
//    which is the transpose of the usual active rotation. A matrix built from them maps
//    coordinates in the parent frame to coordinates in the child frame. The link shape
//    matrices R = rot_y(phi) * rot_z(theta) follow this, so R^T holds the link axes in
//    base-frame columns.
//
//  * Pose (SE(3)) is the usual active body->world transform: p_world = R p_body + t.

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>

namespace microswim {

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Vec6 = Eigen::Matrix<Scalar, 6, 1>;
template <typename Scalar>
using Mat3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using Mat4 = Eigen::Matrix<Scalar, 4, 4>;
template <typename Scalar>
using Mat6 = Eigen::Matrix<Scalar, 6, 6>;

using Vector3d = Vec3<double>;
using Vector6d = Vec6<double>;
using Matrix3d = Mat3<double>;
using Matrix6d = Mat6<double>;

/// Skew-symmetric matrix with hat(v) * w == v.cross(w).
template <typename Derived>
[[nodiscard]] Mat3<typename Derived::Scalar> hat(const Eigen::MatrixBase<Derived>& v) {
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(Derived, 3);
  using Scalar = typename Derived::Scalar;
  Mat3<Scalar> s;
  // clang-format off
  s << Scalar(0), -v(2),      v(1),
       v(2),       Scalar(0), -v(0),
      -v(1),       v(0),      Scalar(0);
  // clang-format on
  return s;
}

/// Inverse of hat. Reads only the lower-left entries; no skew check.
template <typename Derived>
[[nodiscard]] Vec3<typename Derived::Scalar> unhat(const Eigen::MatrixBase<Derived>& m) {
  return {m(2, 1), m(0, 2), m(1, 0)};
}

template <typename Scalar>
[[nodiscard]] Mat3<Scalar> rot_x(Scalar a) {
  using std::cos;
  using std::sin;
  const Scalar c = cos(a);
  const Scalar s = sin(a);
  Mat3<Scalar> r;
  // clang-format off
  r << Scalar(1), Scalar(0), Scalar(0),
       Scalar(0), c,         s,
       Scalar(0), -s,        c;
  // clang-format on
  return r;
}

template <typename Scalar>
[[nodiscard]] Mat3<Scalar> rot_y(Scalar a) {
  using std::cos;
  using std::sin;
  const Scalar c = cos(a);
  const Scalar s = sin(a);
  Mat3<Scalar> r;
  // clang-format off
  r << c,         Scalar(0), -s,
       Scalar(0), Scalar(1), Scalar(0),
       s,         Scalar(0), c;
  // clang-format on
  return r;
}

template <typename Scalar>
[[nodiscard]] Mat3<Scalar> rot_z(Scalar a) {
  using std::cos;
  using std::sin;
  const Scalar c = cos(a);
  const Scalar s = sin(a);
  Mat3<Scalar> r;
  // clang-format off
  r << c,         s,         Scalar(0),
       -s,        c,         Scalar(0),
       Scalar(0), Scalar(0), Scalar(1);
  // clang-format on
  return r;
}

/// Literal product rot_x(alpha) * rot_y(beta) * rot_z(gamma).
template <typename Scalar>
[[nodiscard]] Mat3<Scalar> euler_zyx_compose(Scalar gamma, Scalar beta, Scalar alpha) {
  return rot_x(alpha) * rot_y(beta) * rot_z(gamma);
}

template <typename Scalar>
struct EulerZYX {
  Scalar gamma{0};
  Scalar beta{0};
  Scalar alpha{0};
  // Set when |cos beta| < 1e-8; gamma is then pinned to 0.
  bool gimbal_lock{false};
};

/// Inverse of euler_zyx_compose, beta in [-pi/2, pi/2].
template <typename Derived>
[[nodiscard]] EulerZYX<typename Derived::Scalar> euler_zyx_extract(const Eigen::MatrixBase<Derived>& r) {
  using Scalar = typename Derived::Scalar;
  using std::atan2;
  using std::hypot;
  EulerZYX<Scalar> e;
  const Scalar cos_beta = hypot(r(0, 0), r(0, 1));
  e.beta = atan2(-r(0, 2), cos_beta);
  if (cos_beta < Scalar(1e-8)) {
    // r = rot_x(alpha) rot_y(+-pi/2): row 1 = (sa sb, ca, 0), row 2 = (ca sb, -sa, 0)
    e.gimbal_lock = true;
    e.gamma = Scalar(0);
    e.alpha = atan2(-r(2, 1), r(1, 1));
    return e;
  }
  e.gamma = atan2(r(0, 1), r(0, 0));
  e.alpha = atan2(r(1, 2), r(2, 2));
  return e;
}

/// Rodrigues formula; exact for any angle, series below 1e-8 rad.
template <typename Derived>
[[nodiscard]] Mat3<typename Derived::Scalar> so3_exp(const Eigen::MatrixBase<Derived>& phi) {
  using Scalar = typename Derived::Scalar;
  using std::cos;
  using std::sin;
  const Scalar theta = phi.norm();
  const Mat3<Scalar> k = hat(phi);
  if (theta < Scalar(1e-8)) {
    return Mat3<Scalar>::Identity() + k + Scalar(0.5) * k * k;
  }
  const Scalar a = sin(theta) / theta;
  const Scalar b = (Scalar(1) - cos(theta)) / (theta * theta);
  return Mat3<Scalar>::Identity() + a * k + b * k * k;
}

/// Element of SE(3) acting as p -> rotation * p + translation.
template <typename Scalar>
struct Pose {
  Mat3<Scalar> rotation = Mat3<Scalar>::Identity();
  Vec3<Scalar> translation = Vec3<Scalar>::Zero();

  [[nodiscard]] static Pose Identity() { return {}; }

  [[nodiscard]] Pose operator*(const Pose& other) const {
    return {rotation * other.rotation, rotation * other.translation + translation};
  }

  [[nodiscard]] Pose inverse() const {
    const Mat3<Scalar> rt = rotation.transpose();
    return {rt, -(rt * translation)};
  }

  [[nodiscard]] Vec3<Scalar> act(const Vec3<Scalar>& p) const { return rotation * p + translation; }

  [[nodiscard]] Mat4<Scalar> matrix() const {
    Mat4<Scalar> m = Mat4<Scalar>::Identity();
    m.template topLeftCorner<3, 3>() = rotation;
    m.template topRightCorner<3, 1>() = translation;
    return m;
  }

  /// max |R^T R - I|
  [[nodiscard]] Scalar orthonormality_error() const {
    return (rotation.transpose() * rotation - Mat3<Scalar>::Identity()).cwiseAbs().maxCoeff();
  }
};

/// Closed-form group exponential exp(dt * twist), twist = (v; w).
template <typename Derived>
[[nodiscard]] Pose<typename Derived::Scalar> se3_exp(const Eigen::MatrixBase<Derived>& twist,
                                                     typename Derived::Scalar dt) {
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(Derived, 6);
  using Scalar = typename Derived::Scalar;
  using std::cos;
  using std::sin;
  const Vec3<Scalar> v = twist.template head<3>() * dt;
  const Vec3<Scalar> phi = twist.template tail<3>() * dt;
  const Scalar theta = phi.norm();
  const Mat3<Scalar> k = hat(phi);

  // V = I + (1 - cos t)/t^2 K + (t - sin t)/t^3 K^2
  Mat3<Scalar> left_jacobian;
  if (theta < Scalar(1e-8)) {
    left_jacobian = Mat3<Scalar>::Identity() + Scalar(0.5) * k + k * k / Scalar(6);
  } else {
    const Scalar t2 = theta * theta;
    left_jacobian = Mat3<Scalar>::Identity() + (Scalar(1) - cos(theta)) / t2 * k +
                    (theta - sin(theta)) / (t2 * theta) * k * k;
  }
  return {so3_exp(phi), left_jacobian * v};
}

/// 4x4 matrix form of a twist (v; w).
template <typename Derived>
[[nodiscard]] Mat4<typename Derived::Scalar> twist_matrix(const Eigen::MatrixBase<Derived>& xi) {
  using Scalar = typename Derived::Scalar;
  Mat4<Scalar> m = Mat4<Scalar>::Zero();
  m.template topLeftCorner<3, 3>() = hat(xi.template tail<3>());
  m.template topRightCorner<3, 1>() = xi.template head<3>();
  return m;
}

template <typename Derived>
[[nodiscard]] Vec6<typename Derived::Scalar> twist_vector(const Eigen::MatrixBase<Derived>& m) {
  Vec6<typename Derived::Scalar> xi;
  xi << m(0, 3), m(1, 3), m(2, 3), unhat(m.template topLeftCorner<3, 3>());
  return xi;
}

/// Maps a wrench (f; m) given in a child frame about its origin to the parent frame, about
/// the parent origin. `rotation` maps parent->child coordinates (passive), `arm` is the child
/// origin in parent coordinates:
///
///     [ R^T          0  ]
///     [ hat(arm) R^T R^T ]
template <typename Scalar>
[[nodiscard]] Mat6<Scalar> wrench_transform(const Mat3<Scalar>& rotation, const Vec3<Scalar>& arm) {
  Mat6<Scalar> t = Mat6<Scalar>::Zero();
  const Mat3<Scalar> rt = rotation.transpose();
  t.template topLeftCorner<3, 3>() = rt;
  t.template bottomLeftCorner<3, 3>() = hat(arm) * rt;
  t.template bottomRightCorner<3, 3>() = rt;
  return t;
}

/// Closest rotation in the Frobenius sense (polar factor U V^T, det forced to +1).
template <typename Scalar>
[[nodiscard]] Mat3<Scalar> project_to_so3(const Mat3<Scalar>& m) {
  Eigen::JacobiSVD<Mat3<Scalar>> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3<Scalar> u = svd.matrixU();
  const Mat3<Scalar> v = svd.matrixV();
  if ((u * v.transpose()).determinant() < Scalar(0)) {
    u.col(2) *= Scalar(-1);
  }
  return u * v.transpose();
}

}  // namespace microswim
