#include "microswim/connection.hpp"

#include "test_util.hpp"

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

namespace microswim {
namespace {

using testing::default_drag;
using testing::random_rotation;
using testing::random_shape;
using testing::random_vector;

constexpr double kL = 0.1;

TEST(BodyJacobian, ReferenceShapeBlocks) {
  const RestrictedShape<double> s;
  for (int link = 1; link <= 2; ++link) {
    const auto b = body_jacobian(link, s, kL);
    EXPECT_TRUE((b.block<3, 3>(0, 0).isIdentity()));
    EXPECT_TRUE((b.block<3, 3>(3, 3).isIdentity()));
    EXPECT_TRUE((b.block<3, 3>(3, 0).isZero()));
    Eigen::Matrix<double, 3, 2> e;
    e << 0, 0, 0, 1, 1, 0;
    const int col = 6 + 2 * (link - 1);
    EXPECT_TRUE((b.block<3, 2>(3, col).isApprox(e)));
    // The other link's rates do not move this link.
    EXPECT_TRUE((b.block<6, 2>(0, 6 + 2 * (2 - link)).isZero()));
  }
  EXPECT_THROW((void)body_jacobian(3, s, kL), std::out_of_range);
}

TEST(BodyJacobian, ZeroInZeroOut) {
  std::mt19937_64 rng(10);
  const auto s = random_shape(rng);
  EXPECT_TRUE((body_jacobian(1, s, kL) * Eigen::Matrix<double, 10, 1>::Zero()).isZero());
}

// Velocity of a material point of link `link`, in base coordinates, from the link twist.
Vector3d point_velocity(const RestrictedShape<double>& s, int link, const Vector6d& twist, const Vector3d& q) {
  const Matrix3d r = link_rotation(s, link);
  return r.transpose() * (twist.head<3>() + twist.tail<3>().cross(q));
}

TEST(BodyJacobian, RigidWithBaseWhenJointsLocked) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const auto s = random_shape(rng);
    const Vector6d xi0 = random_vector<6>(rng);
    Eigen::Matrix<double, 10, 1> q;
    q << xi0, Eigen::Vector4d::Zero();
    for (int link = 1; link <= 2; ++link) {
      const Vector6d xi = body_jacobian(link, s, kL) * q;
      // The joint point is shared by base and link.
      const Vector3d joint(link_side(link) * kL, 0, 0);
      const Vector3d c = link_center(s, link, kL);
      const Vector3d q_link = link_rotation(s, link) * (joint - c);
      const Vector3d from_base = xi0.head<3>() + xi0.tail<3>().cross(joint);
      EXPECT_LT((point_velocity(s, link, xi, q_link) - from_base).norm(), 1e-13);
    }
  }
}

TEST(BodyJacobian, JointColumnsMatchFiniteDifferenceOfGeometry) {
  std::mt19937_64 rng(12);
  const double eps = 1e-6;
  for (int i = 0; i < 50; ++i) {
    const auto s = random_shape(rng);
    const Eigen::Vector4d rdot = random_vector<4>(rng);
    Eigen::Matrix<double, 10, 1> q;
    q << Vector6d::Zero(), rdot;
    const RestrictedShape<double> sp(Eigen::Vector4d(s.angles + eps * rdot));
    const RestrictedShape<double> sm(Eigen::Vector4d(s.angles - eps * rdot));
    for (int link = 1; link <= 2; ++link) {
      const Vector3d q_link = random_vector<3>(rng, 0.1);  // body-fixed point, link frame
      auto position = [&](const RestrictedShape<double>& x) {
        return Vector3d(link_center(x, link, kL) + link_rotation(x, link).transpose() * q_link);
      };
      const Vector3d fd = (position(sp) - position(sm)) / (2 * eps);
      const Vector6d xi = body_jacobian(link, s, kL) * q;
      EXPECT_LT((point_velocity(s, link, xi, q_link) - fd).norm(), 1e-8);
    }
  }
}

TEST(WrenchToBase, CollinearArmAndIdentityRotation) {
  const RestrictedShape<double> s;
  EXPECT_TRUE(link_center(s, 1, kL).isApprox(Vector3d(2 * kL, 0, 0)));
  EXPECT_TRUE(link_center(s, 2, kL).isApprox(Vector3d(-2 * kL, 0, 0)));
  Matrix6d expected = Matrix6d::Identity();
  expected.bottomLeftCorner<3, 3>() = hat(Vector3d(2 * kL, 0, 0));
  EXPECT_TRUE(wrench_to_base(1, s, kL).isApprox(expected));
}

TEST(WrenchToBase, MomentEqualsDirectCrossProduct) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 100; ++i) {
    const auto s = random_shape(rng);
    const Vector3d f_link = random_vector<3>(rng);
    Vector6d w;
    w << f_link, Vector3d::Zero();
    const Vector6d base = wrench_to_base(1, s, kL) * w;
    const Vector3d f_base = link_rotation(s, 1).transpose() * f_link;
    EXPECT_LT((base.head<3>() - f_base).norm(), 1e-10);
    EXPECT_LT((base.tail<3>() - link_center(s, 1, kL).cross(f_base)).norm(), 1e-10);
  }
}

TEST(ForceBalance, ResistanceIsSymmetricPositiveDefinite) {
  std::mt19937_64 rng(14);
  const DragModel drag = default_drag();
  for (int i = 0; i < 100; ++i) {
    const auto fb = assemble_force_balance(random_shape(rng), drag);
    EXPECT_LT((fb.resistance - fb.resistance.transpose()).cwiseAbs().maxCoeff(), 1e-9);
    const Eigen::SelfAdjointEigenSolver<Matrix6d> eig(fb.resistance);
    EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0);
  }
}

TEST(ForceBalance, LinearInViscosity) {
  std::mt19937_64 rng(15);
  const DragModel drag = default_drag();
  const auto s = random_shape(rng);
  const auto a = assemble_force_balance(s, drag);
  const auto b = assemble_force_balance(s, drag.scaled(3.0));
  EXPECT_TRUE(b.resistance.isApprox(3.0 * a.resistance, 1e-14));
  EXPECT_TRUE(b.coupling.isApprox(3.0 * a.coupling, 1e-14));
  EXPECT_LT((local_connection(s, drag.scaled(2.0)).matrix - local_connection(s, drag).matrix).cwiseAbs().maxCoeff(),
            1e-12);
}

TEST(LocalConnection, NetWrenchVanishes) {
  std::mt19937_64 rng(16);
  const DragModel drag = default_drag();
  for (int i = 0; i < 1000; ++i) {
    const auto s = random_shape(rng);
    const Eigen::Vector4d rdot = random_vector<4>(rng);
    const Vector6d xi0 = local_connection(s, drag).body_velocity(rdot);
    EXPECT_LT(net_wrench(s, drag, xi0, rdot).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(LocalConnection, CollinearRankAndStructure) {
  const auto a = local_connection(RestrictedShape<double>{}, default_drag()).matrix;
  Eigen::JacobiSVD<Eigen::Matrix<double, 6, 4>> svd(a);
  EXPECT_EQ((svd.singularValues().array() > 1e-9 * svd.singularValues()(0)).count(), 4);
  // Axial translation and roll are not driven from the straight configuration.
  EXPECT_TRUE(a.row(0).isZero(1e-15));
  EXPECT_TRUE(a.row(3).isZero(1e-15));
}

TEST(LocalConnection, PlanarShapesKeepThetaMotionInPlane) {
  std::mt19937_64 rng(17);
  const DragModel drag = default_drag();
  for (int i = 0; i < 50; ++i) {
    auto s = random_shape(rng);
    s.angles(1) = s.angles(3) = 0.0;
    const auto a = local_connection(s, drag).matrix;
    for (int col : {0, 2}) {
      for (int row : {2, 3, 4}) {
        EXPECT_LT(std::abs(a(row, col)), 1e-12) << "row " << row << " col " << col;
      }
    }
  }
}

TEST(LocalConnection, RestrictedEqualsFullThroughJointMap) {
  std::mt19937_64 rng(18);
  const DragModel drag = default_drag();
  for (int i = 0; i < 50; ++i) {
    const auto s = random_shape(rng);
    const Matrix6d full = local_connection(to_full(s), drag).matrix;
    Eigen::Matrix<double, 6, 4> expected;
    expected.leftCols<2>() = full.leftCols<3>() * joint_rate_map(s, 1);
    expected.rightCols<2>() = full.rightCols<3>() * joint_rate_map(s, 2);
    EXPECT_LT((local_connection(s, drag).matrix - expected).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(LocalConnection, FullShapeNetWrenchVanishes) {
  std::mt19937_64 rng(19);
  const DragModel drag = default_drag();
  for (int i = 0; i < 100; ++i) {
    const FullShape<double> s{random_rotation(rng), random_rotation(rng)};
    const Vector6d rates = random_vector<6>(rng);
    const Vector6d xi0 = local_connection(s, drag).body_velocity(rates);
    EXPECT_LT(net_wrench(s, drag, xi0, rates).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(LocalConnection, SingularResistanceIsReported) {
  DragModel drag = default_drag();
  drag.coefficients = {0.0, 0.0, 0.0};
  EXPECT_THROW((void)local_connection(RestrictedShape<double>{}, drag), SingularResistance);
}

TEST(Mirror, CollinearIsFixedPoint) {
  const auto r = mirror_symmetry_check(RestrictedShape<double>{}, default_drag());
  EXPECT_TRUE(r.self_mirrored);
  EXPECT_LT(r.max_deviation, 1e-14);
}

TEST(Mirror, SignedPermutationRelation) {
  std::mt19937_64 rng(20);
  for (int i = 0; i < 100; ++i) {
    const auto r = mirror_symmetry_check(random_shape(rng), default_drag());
    EXPECT_FALSE(r.self_mirrored);
    EXPECT_LT(r.max_deviation, 1e-10);
  }
}

TEST(LocalConnection, WorksWithLongDouble) {
  const RestrictedShape<long double> s(0.3L, -0.2L, 0.1L, 0.4L);
  const auto a = local_connection(s, default_drag()).matrix;
  const auto b = local_connection(RestrictedShape<double>(0.3, -0.2, 0.1, 0.4), default_drag()).matrix;
  EXPECT_LT((a.cast<double>() - b).cwiseAbs().maxCoeff(), 1e-13);
}

}  // namespace
}  // namespace microswim
