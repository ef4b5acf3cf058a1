#pragma once

#include "microswim/connection.hpp"
#include "microswim/drag.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace microswim {

/// angle(t) = offset + amplitude * sin(frequency * t + phase), radians and rad/s.
struct JointSinusoid {
  double amplitude{0};
  double frequency{0};
  double phase{0};
  double offset{0};

  [[nodiscard]] double angle(double t) const;
  [[nodiscard]] double rate(double t) const;
  [[nodiscard]] double max_rate() const;
};

struct GaitSample {
  RestrictedShape<double> shape;
  Eigen::Vector4d rates = Eigen::Vector4d::Zero();
};

/// Any prescribed shape trajectory t -> (r, rdot).
using GaitFunction = std::function<GaitSample(double)>;

/// Four independent sinusoids in (theta1, phi1, theta2, phi2) order.
struct SinusoidGait {
  std::array<JointSinusoid, 4> joints{};

  [[nodiscard]] GaitSample evaluate(double t) const;
  [[nodiscard]] double max_joint_speed() const;

  /// Reynolds number from the fastest joint, tip speed over a link length 2L.
  [[nodiscard]] double implied_reynolds(const FluidParams& fluid, const LinkGeometry& geom) const;

  /// Non-fatal regime warnings (Reynolds number above 1e-2).
  [[nodiscard]] std::vector<std::string> warnings(const FluidParams& fluid, const LinkGeometry& geom) const;

  [[nodiscard]] operator GaitFunction() const;  // NOLINT(google-explicit-constructor)
};

inline constexpr double kMaxReynolds = 1e-2;

/// Joint angles and exact analytic derivatives at t >= 0.
[[nodiscard]] GaitSample gait_eval(const SinusoidGait& gait, double t);

/// theta1 = 20 sin(t/40) deg, phi1 = 5 cos(t/40) deg, theta2 = 20 sin(-t/40) deg,
/// phi2 = 5 sin(t/40) deg.
[[nodiscard]] SinusoidGait paper_gait();

/// Same amplitudes as paper_gait but every joint follows sin(t/40): the shape moves back and
/// forth along one curve, so the loop encloses no area.
[[nodiscard]] SinusoidGait reciprocal_gait();

/// Classic planar Purcell stroke: theta amplitudes of paper_gait, link 2 a quarter period
/// out of phase, phi held at zero. Motion stays in the base's x-y plane.
[[nodiscard]] SinusoidGait planar_gait();

}  // namespace microswim
