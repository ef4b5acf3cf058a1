#include "microswim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace microswim {

namespace {

Vector6d body_velocity_at(const GaitSample& g, const DragModel& drag) {
  return local_connection(g.shape, drag).body_velocity(g.rates);
}

SwimmerState advance(const SwimmerState& state, const GaitFunction& gait, const DragModel& drag, double t_next) {
  const double dt = t_next - state.t;
  const GaitSample mid = gait(state.t + 0.5 * dt);
  const Vector6d xi_mid = body_velocity_at(mid, drag);

  SwimmerState next;
  next.t = t_next;
  next.pose = state.pose * se3_exp(xi_mid, dt);
  if (next.pose.orthonormality_error() > kOrthonormalityDrift) {
    next.pose.rotation = project_to_so3(next.pose.rotation);
  }
  const GaitSample end = gait(t_next);
  next.shape = end.shape;
  next.shape_rate = end.rates;
  next.body_velocity = body_velocity_at(end, drag);
  return next;
}

TrajectorySample sample_of(const SwimmerState& s) {
  return {s, euler_zyx_extract(s.pose.rotation.transpose())};
}

}  // namespace

SwimmerState initial_state(const GaitFunction& gait, const DragModel& drag, const Pose<double>& pose) {
  const GaitSample g = gait(0.0);
  SwimmerState s;
  s.pose = pose;
  s.shape = g.shape;
  s.shape_rate = g.rates;
  s.body_velocity = body_velocity_at(g, drag);
  return s;
}

SwimmerState step(const SwimmerState& state, const GaitFunction& gait, const DragModel& drag, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("time step must be positive");
  }
  return advance(state, gait, drag, state.t + dt);
}

Trajectory simulate(const GaitFunction& gait, const DragModel& drag, double duration, double dt,
                    const Pose<double>& initial_pose) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("time step must be positive");
  }
  if (!(duration >= 0.0) || !std::isfinite(duration)) {
    throw std::invalid_argument("duration must be non-negative");
  }
  const double ratio = duration / dt;
  const long long steps = std::llround(ratio);
  if (std::abs(ratio - static_cast<double>(steps)) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument("duration " + std::to_string(duration) + " is not a multiple of dt " +
                                std::to_string(dt));
  }

  Trajectory traj;
  traj.dt = dt;
  traj.samples.reserve(static_cast<std::size_t>(steps) + 1);
  SwimmerState state = initial_state(gait, drag, initial_pose);
  traj.samples.push_back(sample_of(state));
  for (long long k = 1; k <= steps; ++k) {
    state = advance(state, gait, drag, static_cast<double>(k) * dt);
    traj.samples.push_back(sample_of(state));
  }
  return traj;
}

Vector3d body_centroid(const RestrictedShape<double>& shape, double half_length) {
  // Base link centroid is the origin; all three links have equal length.
  return (link_center(shape, 1, half_length) + link_center(shape, 2, half_length)) / 3.0;
}

Vector3d world_centroid(const SwimmerState& state, double half_length) {
  return state.pose.act(body_centroid(state.shape, half_length));
}

}  // namespace microswim
