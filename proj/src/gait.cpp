#include "microswim/gait.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace microswim {

namespace {
constexpr double kDeg = std::numbers::pi / 180.0;
}

double JointSinusoid::angle(double t) const { return offset + amplitude * std::sin(frequency * t + phase); }

double JointSinusoid::rate(double t) const { return amplitude * frequency * std::cos(frequency * t + phase); }

double JointSinusoid::max_rate() const { return std::abs(amplitude * frequency); }

GaitSample SinusoidGait::evaluate(double t) const { return gait_eval(*this, t); }

double SinusoidGait::max_joint_speed() const {
  double m = 0.0;
  for (const auto& j : joints) {
    m = std::max(m, j.max_rate());
  }
  return m;
}

double SinusoidGait::implied_reynolds(const FluidParams& fluid, const LinkGeometry& geom) const {
  const double link_length = 2.0 * geom.half_length;
  return reynolds_number(max_joint_speed() * link_length, link_length, fluid);
}

std::vector<std::string> SinusoidGait::warnings(const FluidParams& fluid, const LinkGeometry& geom) const {
  std::vector<std::string> out;
  const double re = implied_reynolds(fluid, geom);
  if (re > kMaxReynolds) {
    std::ostringstream msg;
    msg << "implied Reynolds number " << re << " exceeds " << kMaxReynolds
        << "; the viscous (Stokes) drag model is outside its regime";
    out.push_back(msg.str());
  }
  return out;
}

SinusoidGait::operator GaitFunction() const {
  return [gait = *this](double t) { return gait_eval(gait, t); };
}

GaitSample gait_eval(const SinusoidGait& gait, double t) {
  if (!(t >= 0.0)) {
    throw std::invalid_argument("gait time must be non-negative");
  }
  GaitSample s;
  for (int j = 0; j < 4; ++j) {
    s.shape.angles(j) = gait.joints[j].angle(t);
    s.rates(j) = gait.joints[j].rate(t);
  }
  return s;
}

SinusoidGait paper_gait() {
  constexpr double w = 1.0 / 40.0;
  SinusoidGait g;
  g.joints[0] = {20.0 * kDeg, w, 0.0, 0.0};
  g.joints[1] = {5.0 * kDeg, w, std::numbers::pi / 2, 0.0};  // 5 cos(t/40)
  g.joints[2] = {20.0 * kDeg, -w, 0.0, 0.0};
  g.joints[3] = {5.0 * kDeg, w, 0.0, 0.0};
  return g;
}

SinusoidGait reciprocal_gait() {
  constexpr double w = 1.0 / 40.0;
  SinusoidGait g;
  g.joints[0] = {20.0 * kDeg, w, 0.0, 0.0};
  g.joints[1] = {5.0 * kDeg, w, 0.0, 0.0};
  g.joints[2] = {-20.0 * kDeg, w, 0.0, 0.0};
  g.joints[3] = {5.0 * kDeg, w, 0.0, 0.0};
  return g;
}

SinusoidGait planar_gait() {
  SinusoidGait g = paper_gait();
  g.joints[1] = {};
  g.joints[3] = {};
  // A single theta pair in antiphase is reciprocal; shift link 2 by a quarter period.
  g.joints[2].phase = std::numbers::pi / 2;
  return g;
}

}  // namespace microswim
