#include "microswim/simulator.hpp"
#include "microswim/trajectory_io.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <numbers>

namespace microswim {
namespace {

using testing::default_drag;

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kPeriod = 2 * std::numbers::pi * 40.0;

double pose_distance(const Pose<double>& a, const Pose<double>& b) {
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

TEST(Gait, PaperGaitAtZero) {
  const auto g = gait_eval(paper_gait(), 0.0);
  EXPECT_NEAR(g.shape.angles(0), 0.0, 1e-15);
  EXPECT_NEAR(g.shape.angles(1), 5 * kDeg, 1e-15);
  EXPECT_NEAR(g.shape.angles(2), 0.0, 1e-15);
  EXPECT_NEAR(g.shape.angles(3), 0.0, 1e-15);
  EXPECT_NEAR(g.rates(0), 0.5 * kDeg, 1e-15);
  EXPECT_NEAR(g.rates(1), 0.0, 1e-15);
  EXPECT_NEAR(g.rates(2), -0.5 * kDeg, 1e-15);
  EXPECT_NEAR(g.rates(3), 0.125 * kDeg, 1e-15);
  EXPECT_NEAR(paper_gait().max_joint_speed(), 0.5 * kDeg, 1e-15);
}

TEST(Gait, Periodic) {
  const auto g = paper_gait();
  for (double t : {0.0, 13.0, 100.0}) {
    EXPECT_LT((gait_eval(g, t + kPeriod).shape.angles - gait_eval(g, t).shape.angles).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Gait, RatesAreDerivatives) {
  const auto g = paper_gait();
  for (double t : {1.0, 57.0, 200.0}) {
    double prev = 0;
    for (double h : {1.0, 0.5}) {
      const Eigen::Vector4d fd = (gait_eval(g, t + h).shape.angles - gait_eval(g, t - h).shape.angles) / (2 * h);
      const double err = (fd - gait_eval(g, t).rates).cwiseAbs().maxCoeff();
      if (prev > 0) {
        EXPECT_NEAR(prev / err, 4.0, 0.05);
      }
      prev = err;
    }
  }
  EXPECT_THROW((void)gait_eval(g, -1.0), std::invalid_argument);
}

TEST(Gait, ReynoldsWarning) {
  const SinusoidGait slow = paper_gait();
  FluidParams honey{100.0, 1400};
  EXPECT_TRUE(slow.warnings(honey, LinkGeometry{}).empty());
  EXPECT_FALSE(slow.warnings(FluidParams{0.95, 1260}, LinkGeometry{}).empty());
}

TEST(Step, ZeroGaitLeavesPoseAlone) {
  const GaitFunction still = [](double) { return GaitSample{RestrictedShape<double>(0.3, 0.2, -0.1, 0.5), Eigen::Vector4d::Zero()}; };
  const auto traj = simulate(still, default_drag(), 10.0, 0.5);
  ASSERT_EQ(traj.samples.size(), 21U);
  EXPECT_TRUE(traj.samples.back().state.pose.matrix().isIdentity());
}

TEST(Step, RejectsBadStep) {
  const auto s = initial_state(paper_gait(), default_drag());
  EXPECT_THROW((void)step(s, paper_gait(), default_drag(), 0.0), std::invalid_argument);
  EXPECT_THROW((void)simulate(paper_gait(), default_drag(), 1.0, 0.3), std::invalid_argument);
}

TEST(Simulate, ZeroDurationIsInitialState) {
  const auto traj = simulate(paper_gait(), default_drag(), 0.0, 0.1);
  ASSERT_EQ(traj.samples.size(), 1U);
  EXPECT_EQ(traj.samples[0].state.t, 0.0);
  EXPECT_TRUE(traj.samples[0].state.pose.matrix().isIdentity());
}

TEST(Simulate, PlanarGaitStaysPlanar) {
  const auto traj = simulate(planar_gait(), default_drag(), 200.0, 0.1);
  for (const auto& s : traj.samples) {
    EXPECT_LT(std::abs(s.state.pose.translation.z()), 1e-9);
    EXPECT_LT(std::abs(s.euler.alpha), 1e-9);
    EXPECT_LT(std::abs(s.euler.beta), 1e-9);
  }
  EXPECT_GT(traj.samples.back().state.pose.translation.head<2>().norm(), 1e-3);
}

TEST(Simulate, SecondOrder) {
  const DragModel drag = default_drag();
  std::vector<Pose<double>> finals;
  for (double dt : {0.8, 0.4, 0.2}) {
    finals.push_back(simulate(paper_gait(), drag, 200.0, dt).samples.back().state.pose);
  }
  const double ratio = pose_distance(finals[0], finals[1]) / pose_distance(finals[1], finals[2]);
  EXPECT_NEAR(ratio, 4.0, 0.5);
}

TEST(Simulate, LeftInvariant) {
  const DragModel drag = default_drag();
  Vector6d xi;
  xi << 0.3, -0.1, 0.2, 0.5, -0.4, 1.0;
  const Pose<double> g0 = se3_exp(xi, 1.0);
  const auto a = simulate(paper_gait(), drag, 50.0, 0.5);
  const auto b = simulate(paper_gait(), drag, 50.0, 0.5, g0);
  EXPECT_LT(pose_distance(g0 * a.samples.back().state.pose, b.samples.back().state.pose), 1e-12);
}

TEST(Simulate, RetracingAGaitReturnsHome) {
  const DragModel drag = default_drag();
  const double duration = 120.0;
  const SinusoidGait gait = paper_gait();
  const auto forward = simulate(gait, drag, duration, 0.25);
  const GaitFunction backward = [&](double t) {
    GaitSample s = gait_eval(gait, duration - t);
    s.rates = -s.rates;
    return s;
  };
  const auto back = simulate(backward, drag, duration, 0.25, forward.samples.back().state.pose);
  EXPECT_GT(forward.samples.back().state.pose.translation.norm(), 1e-4);
  EXPECT_LT(pose_distance(back.samples.back().state.pose, Pose<double>::Identity()), 1e-12);
}

TEST(Simulate, RotationStaysOrthonormal) {
  const auto traj = simulate(paper_gait(), default_drag(), 840.0, 0.1);
  for (std::size_t i = 0; i < traj.samples.size(); i += 100) {
    EXPECT_LT(traj.samples[i].state.pose.orthonormality_error(), 1e-9);
  }
}

TEST(Simulate, EulerAnglesDescribeTransposedPose) {
  const auto traj = simulate(paper_gait(), default_drag(), 100.0, 0.5);
  for (const auto& s : traj.samples) {
    const Matrix3d r = euler_zyx_compose(s.euler.gamma, s.euler.beta, s.euler.alpha);
    EXPECT_LT((r - s.state.pose.rotation.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Centroid, StraightSwimmerAtBaseCenter) {
  EXPECT_TRUE(body_centroid(RestrictedShape<double>{}, 0.1).isZero());
}

TEST(TrajectoryCsv, HeaderAndPrecision) {
  const auto traj = simulate(paper_gait(), default_drag(), 1.0, 0.5);
  const std::string csv = trajectory_csv(traj);
  const auto first_newline = csv.find('\n');
  EXPECT_EQ(csv.substr(0, first_newline), "t,x,y,z,alpha,beta,gamma,vx,vy,vz,wx,wy,wz,theta1,phi1,theta2,phi2");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  // phi1 at t = 0 printed with 17 significant digits.
  EXPECT_NE(csv.find("0.087266462599716474"), std::string::npos);
  EXPECT_EQ(csv, trajectory_csv(simulate(paper_gait(), default_drag(), 1.0, 0.5)));
}

TEST(TrajectoryCsv, ValuesRoundTrip) {
  const auto traj = simulate(paper_gait(), default_drag(), 5.0, 0.5);
  const std::string csv = trajectory_csv(traj);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  for (const auto& sample : traj.samples) {
    std::getline(in, line);
    std::istringstream row(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(row, cell, ',')) {
      values.push_back(std::stod(cell));
    }
    ASSERT_EQ(values.size(), 17U);
    EXPECT_EQ(values[0], sample.state.t);
    EXPECT_EQ(values[1], sample.state.pose.translation.x());
    EXPECT_EQ(values[4], sample.euler.alpha);
    EXPECT_EQ(values[12], sample.state.body_velocity(5));
    EXPECT_EQ(values[16], sample.state.shape.angles(3));
  }
}

TEST(TrajectorySvg, SixFigures) {
  const auto traj = simulate(paper_gait(), default_drag(), 20.0, 0.5);
  const auto figs = trajectory_svg(traj);
  ASSERT_EQ(figs.size(), 6U);
  for (const auto& f : figs) {
    EXPECT_EQ(f.content.rfind("<svg", 0), 0U) << f.name;
    EXPECT_NE(f.content.find("<polyline"), std::string::npos) << f.name;
    EXPECT_NE(f.content.find("</svg>"), std::string::npos) << f.name;
  }
  EXPECT_THROW((void)trajectory_svg(traj, {100, 100}), std::invalid_argument);
}

}  // namespace
}  // namespace microswim
