#include "microswim/drag.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace microswim {
namespace {

TEST(DragCoefficients, GlycerinOperatingPoint) {
  const auto c = drag_coefficients(FluidParams{}, LinkGeometry::from_slenderness(0.1, 0.1));
  EXPECT_NEAR(c.c_par, 2.0 * std::numbers::pi * 0.95 / std::log(20.0), 1e-14);
  EXPECT_NEAR(c.c_par, 1.9925, 1e-4);
  EXPECT_DOUBLE_EQ(c.c_perp / c.c_par, 2.0);
  EXPECT_NEAR(c.k_spin, 4.0 * std::numbers::pi * 0.95 * 1e-4, 1e-15);
}

TEST(DragCoefficients, LinearInViscosity) {
  const LinkGeometry geom;
  const auto a = drag_coefficients({0.95, 1260}, geom);
  const auto b = drag_coefficients({1.9, 1260}, geom);
  EXPECT_NEAR(b.c_par, 2 * a.c_par, 1e-14);
  EXPECT_NEAR(b.c_perp, 2 * a.c_perp, 1e-14);
  EXPECT_NEAR(b.k_spin, 2 * a.k_spin, 1e-18);
}

TEST(DragCoefficients, AnisotropyIsTwoEverywhere) {
  for (double mu : {1e-3, 0.95, 40.0}) {
    for (double sr : {0.001, 0.05, 0.15}) {
      const auto c = drag_coefficients({mu, 1000}, LinkGeometry::from_slenderness(0.3, sr));
      EXPECT_DOUBLE_EQ(c.c_perp / c.c_par, 2.0);
    }
  }
}

TEST(DragCoefficients, SpinOverride) {
  const auto c = drag_coefficients(FluidParams{}, LinkGeometry{}, 0.25);
  EXPECT_DOUBLE_EQ(c.k_spin, 0.25);
  EXPECT_THROW((void)drag_coefficients(FluidParams{}, LinkGeometry{}, -1.0), std::invalid_argument);
}

TEST(DragCoefficients, RejectsBadInput) {
  EXPECT_THROW((void)drag_coefficients({0.0, 1000}, LinkGeometry{}), std::invalid_argument);
  EXPECT_THROW((void)drag_coefficients({-1.0, 1000}, LinkGeometry{}), std::invalid_argument);
  EXPECT_THROW((void)drag_coefficients(FluidParams{}, {0.1, 0.0}), std::invalid_argument);
  // ln(2L/a) <= 1: too stubby for slender-body drag.
  EXPECT_THROW((void)drag_coefficients(FluidParams{}, {0.1, 0.08}), std::invalid_argument);
  EXPECT_THROW((void)make_drag_model(FluidParams{}, LinkGeometry{}, std::nullopt, 0.0), std::invalid_argument);
}

TEST(LinkDragMatrix, DiagonalStructure) {
  const DragModel m = make_drag_model(FluidParams{}, LinkGeometry{});
  const Matrix6d h = link_drag_matrix(m);
  EXPECT_TRUE(Matrix6d(h.diagonal().asDiagonal()).isApprox(h));
  EXPECT_DOUBLE_EQ(h(1, 1), 2 * h(0, 0));
  EXPECT_DOUBLE_EQ(h(2, 2), h(1, 1));
  const double l = m.geometry.half_length;
  // Translational rows integrate c * u over the link length 2L.
  EXPECT_NEAR(h(0, 0), 2 * l * m.coefficients.c_par, 1e-15);
  // Tumbling rows integrate c_perp s^2 over [-L, L].
  EXPECT_NEAR(h(4, 4), 2.0 / 3.0 * m.coefficients.c_perp * l * l * l, 1e-16);
  EXPECT_DOUBLE_EQ(h(5, 5), h(4, 4));
  EXPECT_NEAR(h(3, 3), 2 * l * m.coefficients.k_spin, 1e-18);
}

TEST(LinkDragMatrix, ScalesWithForceScale) {
  DragModel m = make_drag_model(FluidParams{}, LinkGeometry{});
  const Matrix6d h2 = link_drag_matrix(m);
  m.force_scale = 1.0;
  EXPECT_TRUE(h2.isApprox(2.0 * link_drag_matrix(m)));
}

TEST(Reynolds, Formula) {
  const FluidParams glycerin;
  EXPECT_DOUBLE_EQ(reynolds_number(0.0, 0.2, glycerin), 0.0);
  EXPECT_NEAR(reynolds_number(2e-3, 0.2, glycerin), 2 * reynolds_number(1e-3, 0.2, glycerin), 1e-15);
  // 0.5 deg/s at the tip of a 0.2 m link.
  const double tip = 0.5 * std::numbers::pi / 180.0 * 0.2;
  EXPECT_NEAR(reynolds_number(tip, 0.2, glycerin), 1260 * tip * 0.2 / 0.95, 1e-15);
  EXPECT_THROW((void)reynolds_number(-1.0, 0.2, glycerin), std::invalid_argument);
  EXPECT_THROW((void)reynolds_number(1.0, 0.0, glycerin), std::invalid_argument);
}

}  // namespace
}  // namespace microswim
