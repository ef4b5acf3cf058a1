#pragma once

// Local connection form of the three-link swimmer.
//
// Geometry: the base link lies along its body x axis, centered at the origin, with joints at
// (+L, 0, 0) (link 1) and (-L, 0, 0) (link 2). Outer link i has orientation R_i (parent->child,
// passive; see liegroup.hpp) and points away from the base: its center sits at
//
//     c_1 = ( L, 0, 0) + L R_1^T e_x,     c_2 = (-L, 0, 0) - L R_2^T e_x.
//
// Every link's drag wrench is taken about its own center and mapped to the base center.
// The body velocity of the base satisfies xi_0 = -A(r) rdot with A = P^{-1} Q.

#include "microswim/drag.hpp"
#include "microswim/liegroup.hpp"

#include <Eigen/QR>

#include <array>
#include <stdexcept>
#include <string>

namespace microswim {

/// Shape restricted to the two-sphere: R_i = rot_y(phi_i) rot_z(theta_i).
/// Coordinates and rates are ordered (theta1, phi1, theta2, phi2).
template <typename Scalar_ = double>
struct RestrictedShape {
  using Scalar = Scalar_;
  static constexpr int kRates = 4;
  static constexpr int kRatesPerLink = 2;
  using Coordinates = Eigen::Matrix<Scalar, 4, 1>;

  Coordinates angles = Coordinates::Zero();

  RestrictedShape() = default;
  explicit RestrictedShape(const Coordinates& a) : angles(a) {}
  RestrictedShape(Scalar theta1, Scalar phi1, Scalar theta2, Scalar phi2) { angles << theta1, phi1, theta2, phi2; }

  [[nodiscard]] Scalar theta(int link) const { return angles(2 * (link - 1)); }
  [[nodiscard]] Scalar phi(int link) const { return angles(2 * (link - 1) + 1); }
};

/// Unrestricted shape in SO(3) x SO(3). Rates are each outer link's angular velocity relative
/// to the base, in the outer link's own frame: (w1; w2).
template <typename Scalar_ = double>
struct FullShape {
  using Scalar = Scalar_;
  static constexpr int kRates = 6;
  static constexpr int kRatesPerLink = 3;

  Mat3<Scalar> r1 = Mat3<Scalar>::Identity();
  Mat3<Scalar> r2 = Mat3<Scalar>::Identity();
};

template <typename Scalar>
[[nodiscard]] Mat3<Scalar> link_rotation(Scalar theta, Scalar phi) {
  return rot_y(phi) * rot_z(theta);
}

template <typename Scalar>
[[nodiscard]] FullShape<Scalar> to_full(const RestrictedShape<Scalar>& s) {
  return {link_rotation(s.theta(1), s.phi(1)), link_rotation(s.theta(2), s.phi(2))};
}

/// Thrown when the grand resistance matrix cannot be inverted reliably. For physical drag
/// parameters this indicates a bug.
class SingularResistance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void check_link_index(int link) {
  if (link != 1 && link != 2) {
    throw std::out_of_range("link index must be 1 or 2, got " + std::to_string(link));
  }
}

/// +1 for link 1 (toward +x), -1 for link 2.
[[nodiscard]] constexpr int link_side(int link) { return link == 1 ? 1 : -1; }

template <typename Scalar>
[[nodiscard]] Mat3<Scalar> link_rotation(const RestrictedShape<Scalar>& s, int link) {
  check_link_index(link);
  return link_rotation(s.theta(link), s.phi(link));
}

template <typename Scalar>
[[nodiscard]] Mat3<Scalar> link_rotation(const FullShape<Scalar>& s, int link) {
  check_link_index(link);
  return link == 1 ? s.r1 : s.r2;
}

/// Link-frame relative angular velocity per unit joint rate.
template <typename Scalar>
[[nodiscard]] Eigen::Matrix<Scalar, 3, 2> joint_rate_map(const RestrictedShape<Scalar>& s, int link) {
  check_link_index(link);
  // theta is a rotation about the base z axis, phi about the intermediate y axis.
  Eigen::Matrix<Scalar, 3, 2> e;
  e.col(0) = rot_y(s.phi(link)) * Vec3<Scalar>::UnitZ();
  e.col(1) = Vec3<Scalar>::UnitY();
  return e;
}

template <typename Scalar>
[[nodiscard]] Mat3<Scalar> joint_rate_map(const FullShape<Scalar>&, int link) {
  check_link_index(link);
  return Mat3<Scalar>::Identity();
}

/// Center of outer link `link` in base coordinates.
template <class Shape>
[[nodiscard]] Vec3<typename Shape::Scalar> link_center(const Shape& shape, int link, double half_length) {
  using Scalar = typename Shape::Scalar;
  const Scalar l(half_length);
  const Scalar side(link_side(link));
  const Mat3<Scalar> r = link_rotation(shape, link);
  return Vec3<Scalar>(side * l, Scalar(0), Scalar(0)) + side * l * r.transpose().col(0);
}

/// Twist map from the base twist to the twist of link `link` about its center, in its frame:
/// [[R, -R hat(c)], [0, R]].
template <class Shape>
[[nodiscard]] Mat6<typename Shape::Scalar> base_twist_map(const Shape& shape, int link, double half_length) {
  using Scalar = typename Shape::Scalar;
  const Mat3<Scalar> r = link_rotation(shape, link);
  const Vec3<Scalar> c = link_center(shape, link, half_length);
  Mat6<Scalar> b = Mat6<Scalar>::Zero();
  b.template topLeftCorner<3, 3>() = r;
  b.template topRightCorner<3, 3>() = -r * hat(c);
  b.template bottomRightCorner<3, 3>() = r;
  return b;
}

/// Columns of the link twist driven by that link's own joint rates.
template <class Shape>
[[nodiscard]] Eigen::Matrix<typename Shape::Scalar, 6, Shape::kRatesPerLink> joint_twist_map(const Shape& shape,
                                                                                             int link,
                                                                                             double half_length) {
  using Scalar = typename Shape::Scalar;
  const auto e = joint_rate_map(shape, link);
  // Link center sits at side*L along the link axis from the joint: v = w x (side L e_x).
  const Vec3<Scalar> offset(Scalar(link_side(link) * half_length), Scalar(0), Scalar(0));
  Eigen::Matrix<Scalar, 6, Shape::kRatesPerLink> j;
  j.template topRows<3>() = -hat(offset) * e;
  j.template bottomRows<3>() = e;
  return j;
}

/// B_i: link twist = B_i * (xi_0; rdot). 6 x (6 + m); the other link's rate columns are zero.
template <class Shape>
[[nodiscard]] Eigen::Matrix<typename Shape::Scalar, 6, 6 + Shape::kRates> body_jacobian(int link, const Shape& shape,
                                                                                        double half_length) {
  check_link_index(link);
  using Scalar = typename Shape::Scalar;
  constexpr int k = Shape::kRatesPerLink;
  Eigen::Matrix<Scalar, 6, 6 + Shape::kRates> b = Eigen::Matrix<Scalar, 6, 6 + Shape::kRates>::Zero();
  b.template leftCols<6>() = base_twist_map(shape, link, half_length);
  b.template middleCols<k>(6 + k * (link - 1)) = joint_twist_map(shape, link, half_length);
  return b;
}

/// T^0_i: link-center wrench in link frame -> base-center wrench in base frame.
template <class Shape>
[[nodiscard]] Mat6<typename Shape::Scalar> wrench_to_base(int link, const Shape& shape, double half_length) {
  check_link_index(link);
  return wrench_transform(link_rotation(shape, link), link_center(shape, link, half_length));
}

template <typename Scalar, int Rates>
struct ForceBalance {
  Mat6<Scalar> resistance;                      // P
  Eigen::Matrix<Scalar, 6, Rates> coupling;     // Q
};

/// P = H_0 + sum_i T_i H_i B_i|xi0 and Q = [T_1 H_1 B_1|r1, T_2 H_2 B_2|r2].
template <class Shape>
[[nodiscard]] ForceBalance<typename Shape::Scalar, Shape::kRates> assemble_force_balance(const Shape& shape,
                                                                                        const DragModel& drag) {
  using Scalar = typename Shape::Scalar;
  constexpr int k = Shape::kRatesPerLink;
  const double l = drag.geometry.half_length;
  const Mat6<Scalar> h = link_drag_matrix<Scalar>(drag);

  ForceBalance<Scalar, Shape::kRates> fb;
  fb.resistance = h;
  for (int link = 1; link <= 2; ++link) {
    const Mat6<Scalar> t = wrench_to_base(link, shape, l);
    const Mat6<Scalar> th = t * h;
    fb.resistance += th * base_twist_map(shape, link, l);
    fb.coupling.template middleCols<k>(k * (link - 1)) = th * joint_twist_map(shape, link, l);
  }
  return fb;
}

/// Net drag wrench about the base center, summed link by link (no P/Q assembly).
template <class Shape>
[[nodiscard]] Vec6<typename Shape::Scalar> net_wrench(const Shape& shape, const DragModel& drag,
                                                      const Vec6<typename Shape::Scalar>& base_twist,
                                                      const Eigen::Matrix<typename Shape::Scalar, Shape::kRates, 1>& rates) {
  using Scalar = typename Shape::Scalar;
  const double l = drag.geometry.half_length;
  const Mat6<Scalar> h = link_drag_matrix<Scalar>(drag);
  Eigen::Matrix<Scalar, 6 + Shape::kRates, 1> q;
  q << base_twist, rates;
  Vec6<Scalar> w = h * base_twist;
  for (int link = 1; link <= 2; ++link) {
    w += wrench_to_base(link, shape, l) * (h * (body_jacobian(link, shape, l) * q));
  }
  return w;
}

template <typename Scalar, int Rates>
struct ConnectionForm {
  Eigen::Matrix<Scalar, 6, Rates> matrix;
  // |R_ii| ratio of the pivoted QR of P, a cheap lower bound on cond(P).
  Scalar condition_estimate{1};

  /// xi_0 = -A rdot
  [[nodiscard]] Vec6<Scalar> body_velocity(const Eigen::Matrix<Scalar, Rates, 1>& rates) const {
    return -(matrix * rates);
  }
};

inline constexpr double kMaxResistanceCondition = 1e12;

/// A(r) = P^{-1} Q by column-pivoted QR.
template <class Shape>
[[nodiscard]] ConnectionForm<typename Shape::Scalar, Shape::kRates> local_connection(const Shape& shape,
                                                                                    const DragModel& drag) {
  using Scalar = typename Shape::Scalar;
  using std::abs;
  const auto fb = assemble_force_balance(shape, drag);
  const Eigen::ColPivHouseholderQR<Mat6<Scalar>> qr(fb.resistance);
  const auto diag = qr.matrixQR().diagonal().cwiseAbs();
  const Scalar lo = diag.minCoeff();
  const Scalar hi = diag.maxCoeff();
  if (!(lo > Scalar(0)) || hi / lo > Scalar(kMaxResistanceCondition)) {
    throw SingularResistance("grand resistance matrix is singular or ill-conditioned");
  }
  ConnectionForm<Scalar, Shape::kRates> form;
  form.matrix = qr.solve(fb.coupling);
  form.condition_estimate = hi / lo;
  return form;
}

/// Mirror image through the base's y-z plane: links swap, (th1, ph1, th2, ph2) -> (-th2, -ph2, -th1, -ph1).
template <typename Scalar>
[[nodiscard]] RestrictedShape<Scalar> mirror(const RestrictedShape<Scalar>& s) {
  return {-s.theta(2), -s.phi(2), -s.theta(1), -s.phi(1)};
}

struct MirrorReport {
  RestrictedShape<double> shape;
  RestrictedShape<double> mirrored;
  Eigen::Matrix<double, 6, 4> connection;
  Eigen::Matrix<double, 6, 4> mirrored_connection;
  // S A(r) Pi, the prediction for A(mirror(r)).
  Eigen::Matrix<double, 6, 4> predicted;
  double max_deviation{0};
  bool self_mirrored{false};
};

/// A(mirror(r)) = S A(r) Pi with S = diag(-1, 1, 1, 1, -1, -1) (reflection of a twist) and
/// Pi the signed swap of the rates.
[[nodiscard]] inline MirrorReport mirror_symmetry_check(const RestrictedShape<double>& shape, const DragModel& drag) {
  MirrorReport r;
  r.shape = shape;
  r.mirrored = mirror(shape);
  r.connection = local_connection(shape, drag).matrix;
  r.mirrored_connection = local_connection(r.mirrored, drag).matrix;

  Eigen::Matrix<double, 6, 1> s;
  s << -1, 1, 1, 1, -1, -1;
  Eigen::Matrix4d pi = Eigen::Matrix4d::Zero();
  pi(0, 2) = pi(1, 3) = pi(2, 0) = pi(3, 1) = -1.0;
  r.predicted = s.asDiagonal() * r.connection * pi;
  r.max_deviation = (r.predicted - r.mirrored_connection).cwiseAbs().maxCoeff();
  r.self_mirrored = (r.mirrored.angles - shape.angles).cwiseAbs().maxCoeff() == 0.0;
  return r;
}

}  // namespace microswim
