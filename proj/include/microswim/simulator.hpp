#pragma once

#include "microswim/connection.hpp"
#include "microswim/gait.hpp"
#include "microswim/liegroup.hpp"

#include <vector>

namespace microswim {

struct SwimmerState {
  double t{0};
  Pose<double> pose;
  RestrictedShape<double> shape;
  Eigen::Vector4d shape_rate = Eigen::Vector4d::Zero();
  // Body velocity of the base at time t, -A(r(t)) rdot(t).
  Vector6d body_velocity = Vector6d::Zero();
};

struct TrajectorySample {
  SwimmerState state;
  // Euler angles of the inertial->base coordinate map (pose rotation transposed):
  // gamma = yaw, beta = pitch, alpha = roll.
  EulerZYX<double> euler;
};

struct Trajectory {
  double dt{0};
  std::vector<TrajectorySample> samples;
};

// Re-orthonormalize the pose rotation once |R^T R - I| exceeds this.
inline constexpr double kOrthonormalityDrift = 1e-9;

[[nodiscard]] SwimmerState initial_state(const GaitFunction& gait, const DragModel& drag,
                                         const Pose<double>& pose = Pose<double>::Identity());

/// One midpoint Lie-group step: A and rdot are taken at t + dt/2, g <- g exp(dt xi_mid).
[[nodiscard]] SwimmerState step(const SwimmerState& state, const GaitFunction& gait, const DragModel& drag,
                                double dt);

/// Fixed-step run over [0, duration]; duration must be an integer multiple of dt.
/// Produces duration/dt + 1 samples.
[[nodiscard]] Trajectory simulate(const GaitFunction& gait, const DragModel& drag, double duration, double dt,
                                  const Pose<double>& initial_pose = Pose<double>::Identity());

/// Length-weighted centroid of the three links in base coordinates.
[[nodiscard]] Vector3d body_centroid(const RestrictedShape<double>& shape, double half_length);

/// World position of the centroid for a state.
[[nodiscard]] Vector3d world_centroid(const SwimmerState& state, double half_length);

}  // namespace microswim
