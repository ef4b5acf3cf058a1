#pragma once

// Cox slender-body / resistive-force drag for a single straight link.
//
// Force convention: c_par and c_perp are drag per unit length per unit speed; k_spin is
// torque per unit length per unit spin rate. The 6x6 link matrix keeps the aggregated
// layout k_T L, 2 k_T L, ..., (2/3) k_T L^3 (k_T = c_par) and multiplies it by one global
// scale `force_scale`. With force_scale = 2 the matrix equals the exact integral of the
// per-length drag over a link of length 2L, which is what the segment-sum oracle measures
// (see oracle::calibrate_force_scale). The connection form is independent of this scale.

#include "microswim/liegroup.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

namespace microswim {

struct FluidParams {
  double viscosity{0.95};  // Pa s
  double density{1260.0};  // kg/m^3, only used for Reynolds-number reporting
};

struct LinkGeometry {
  double half_length{0.1};  // L, m (link length is 2L)
  double radius{0.01};      // a, m

  [[nodiscard]] double slenderness_ratio() const { return radius / half_length; }

  [[nodiscard]] static LinkGeometry from_slenderness(double half_length, double ratio) {
    return {half_length, ratio * half_length};
  }
};

struct DragCoefficients {
  double c_par{0};   // longitudinal, N s / m^2
  double c_perp{0};  // lateral, N s / m^2
  double k_spin{0};  // spin about the link axis, N s
};

/// Everything the connection needs to build per-link drag matrices.
struct DragModel {
  DragCoefficients coefficients;
  LinkGeometry geometry;
  double force_scale{2.0};

  [[nodiscard]] double anisotropy() const { return coefficients.c_perp / coefficients.c_par; }

  /// Same model with every coefficient multiplied by `factor` (as if viscosity were scaled).
  [[nodiscard]] DragModel scaled(double factor) const {
    DragModel m = *this;
    m.coefficients.c_par *= factor;
    m.coefficients.c_perp *= factor;
    m.coefficients.k_spin *= factor;
    return m;
  }
};

inline void validate(const FluidParams& fluid) {
  if (!(fluid.viscosity > 0.0) || !std::isfinite(fluid.viscosity)) {
    throw std::invalid_argument("fluid viscosity must be positive, got " + std::to_string(fluid.viscosity));
  }
}

inline void validate(const LinkGeometry& geom) {
  if (!(geom.half_length > 0.0) || !(geom.radius > 0.0) || !(geom.radius < geom.half_length)) {
    throw std::invalid_argument("link geometry requires 0 < radius < half_length");
  }
  // Cox theory needs ln(2L/a) > 1.
  if (!(std::log(2.0 * geom.half_length / geom.radius) > 1.0)) {
    throw std::invalid_argument("link is not slender: ln(2L/a) must exceed 1");
  }
}

/// Per-length Cox coefficients: c_par = 2 pi mu / ln(2L/a), c_perp = 2 c_par,
/// k_spin = 4 pi mu a^2 unless overridden.
[[nodiscard]] inline DragCoefficients drag_coefficients(const FluidParams& fluid, const LinkGeometry& geom,
                                                        std::optional<double> spin_override = std::nullopt) {
  validate(fluid);
  validate(geom);
  DragCoefficients c;
  c.c_par = 2.0 * std::numbers::pi * fluid.viscosity / std::log(2.0 * geom.half_length / geom.radius);
  c.c_perp = 2.0 * c.c_par;
  c.k_spin = spin_override.value_or(4.0 * std::numbers::pi * fluid.viscosity * geom.radius * geom.radius);
  if (!(c.k_spin > 0.0)) {
    throw std::invalid_argument("spin drag coefficient must be positive");
  }
  return c;
}

[[nodiscard]] inline DragModel make_drag_model(const FluidParams& fluid, const LinkGeometry& geom,
                                               std::optional<double> spin_override = std::nullopt,
                                               double force_scale = 2.0) {
  if (!(force_scale > 0.0)) {
    throw std::invalid_argument("force scale must be positive");
  }
  return {drag_coefficients(fluid, geom, spin_override), geom, force_scale};
}

/// Diagonal H with wrench = H * twist for a link moving with body twist (v; w) about its center.
template <typename Scalar = double>
[[nodiscard]] Mat6<Scalar> link_drag_matrix(const DragModel& model) {
  const Scalar l = model.geometry.half_length;
  const Scalar s = model.force_scale;
  const auto& c = model.coefficients;
  Vec6<Scalar> d;
  // (c_perp = 2 k_T)
  d << Scalar(c.c_par) * l, Scalar(c.c_perp) * l, Scalar(c.c_perp) * l, Scalar(c.k_spin) * l,
      Scalar(c.c_perp) * l * l * l / Scalar(3), Scalar(c.c_perp) * l * l * l / Scalar(3);
  return (s * d).asDiagonal();
}

/// rho u l / mu
[[nodiscard]] inline double reynolds_number(double speed, double length, const FluidParams& fluid) {
  if (speed < 0.0 || !(length > 0.0)) {
    throw std::invalid_argument("reynolds_number needs speed >= 0 and length > 0");
  }
  validate(fluid);
  return fluid.density * speed * length / fluid.viscosity;
}

}  // namespace microswim
