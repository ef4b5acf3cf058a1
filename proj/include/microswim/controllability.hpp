#pragma once

// Numerical local (weak) controllability of the restricted swimmer.
//
// The filtration is built from vector-valued functions on shape space:
//
//   h1 = { A(x) X }
//   h2 = { DA(x)(X, Y) },        DA(X, Y) = d_X(A Y) - d_Y(A X) - [A X, A Y]
//   hk = { L_X xi - [A X, xi],  [eta, xi] : xi in h(k-1), eta in h2 + ... + h(k-1) }   (k >= 3)
//
// with X, Y ranging over the coordinate directions of the actuated joints. Derivatives are
// central differences; spans are accumulated with an SVD and a relative cutoff.

#include "microswim/connection.hpp"
#include "microswim/drag.hpp"

#include <array>
#include <string>
#include <vector>

namespace microswim::controllability {

/// Lie bracket on se(3) through the 4x4 commutator, twist order (v; w).
[[nodiscard]] Vector6d se3_bracket(const Vector6d& a, const Vector6d& b);

/// Numerical rank of A(shape): singular values above tol * sigma_max.
[[nodiscard]] int connection_rank(const RestrictedShape<double>& shape, const DragModel& drag, double tol = 1e-9);

/// Curvature DA(X, Y) at `shape` for shape tangent vectors X, Y, central differences of step h.
[[nodiscard]] Vector6d curvature(const RestrictedShape<double>& shape, const Eigen::Vector4d& x,
                                 const Eigen::Vector4d& y, const DragModel& drag, double h = 1e-5);

inline constexpr int kMaxFiltrationDepth = 4;

struct FiltrationOptions {
  int depth{3};
  double span_tolerance{1e-8};       // relative singular-value cutoff
  double fd_step{1e-5};              // step inside DA
  double lie_step{1e-3};             // step of the outer Lie derivatives (h3 and deeper)
  double direction_tolerance{1e-6};  // residual below which a coordinate axis counts as reachable
  // Level k generators carry roundoff of about eps |A| / (fd_step lie_step^(k-2)); singular values
  // below roundoff_factor times that are dropped regardless of span_tolerance.
  double roundoff_factor{1e3};
  std::vector<int> actuated{0, 1, 2, 3};  // indices into (theta1, phi1, theta2, phi2)
};

inline constexpr std::array<const char*, 6> kAxisNames = {"vx", "vy", "vz", "wx", "wy", "wz"};

/// "translation x,y,z; rotation x,z" for the marked axes.
[[nodiscard]] std::string describe_axes(const std::array<bool, 6>& axes);

struct FiltrationReport {
  RestrictedShape<double> shape;
  std::vector<int> actuated;
  int depth{0};
  double span_tolerance{0};
  // cumulative_dims[k] = dim(h1 + ... + h(k+1)); cumulative_dims[0] = dim h1.
  std::vector<int> cumulative_dims;
  // Number of generators evaluated at each level.
  std::vector<int> generators;
  // Singular values of the accumulated generator matrix after each level.
  std::vector<std::vector<double>> singular_values;
  // Absolute singular-value cutoff applied at each level.
  std::vector<double> cutoffs;
  Eigen::MatrixXd basis;  // 6 x dim, orthonormal
  std::array<bool, 6> reachable{};
  bool spans_algebra{false};

  [[nodiscard]] int dim() const { return cumulative_dims.empty() ? 0 : cumulative_dims.back(); }
  [[nodiscard]] std::vector<std::string> reachable_names() const;
  /// Plain-language summary, e.g. "translation x,y,z; rotation y,z".
  [[nodiscard]] std::string verdict() const;
};

[[nodiscard]] FiltrationReport filtration(const RestrictedShape<double>& shape, const DragModel& drag,
                                          const FiltrationOptions& options = {});

struct PlanarDecomposition {
  FiltrationReport theta_actuation;  // phi rates off: limbs sweep the base x-y plane
  FiltrationReport phi_actuation;    // theta rates off: limbs sweep the base x-z plane
  std::array<bool, 6> union_reachable{};
  int union_dim{0};

  [[nodiscard]] std::vector<std::string> union_names() const;
};

/// Filtrations with only the theta joints and only the phi joints actuated, and their union.
[[nodiscard]] PlanarDecomposition planar_decomposition_report(const RestrictedShape<double>& shape,
                                                              const DragModel& drag,
                                                              FiltrationOptions options = {});

}  // namespace microswim::controllability
