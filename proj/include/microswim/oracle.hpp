#pragma once

// Brute-force reference for the connection form.
//
// Each link is cut into uniform segments (midpoint rule). Segment velocities come from the
// rigid base twist plus a central finite difference of the segment's position along the
// shape path r + eps * rdot; the local per-length drag is applied and forces/moments are
// summed about the base center. Nothing here touches the B / T / P / Q assembly in
// connection.hpp, so the two routes check each other.

#include "microswim/connection.hpp"
#include "microswim/drag.hpp"

#include <cstdint>
#include <vector>

namespace microswim::oracle {

struct DiscretizationParams {
  int segments_per_link{2000};
};

void validate(const DiscretizationParams& disc);

/// Resistive wrench (force; moment) about the base center, base frame. Opposes motion, so it
/// is the negative of the H-convention wrench used by the analytic path.
[[nodiscard]] Vector6d net_wrench_numeric(const RestrictedShape<double>& shape, const Vector6d& base_twist,
                                          const Eigen::Vector4d& rates, const DragModel& drag,
                                          const DiscretizationParams& disc = {});
[[nodiscard]] Vector6d net_wrench_numeric(const FullShape<double>& shape, const Vector6d& base_twist,
                                          const Vector6d& rates, const DragModel& drag,
                                          const DiscretizationParams& disc = {});

/// Numeric grand resistance matrix in the H convention (comparable to P).
[[nodiscard]] Matrix6d oracle_resistance(const RestrictedShape<double>& shape, const DragModel& drag,
                                         const DiscretizationParams& disc = {});

[[nodiscard]] Eigen::Matrix<double, 6, 4> oracle_connection(const RestrictedShape<double>& shape,
                                                            const DragModel& drag,
                                                            const DiscretizationParams& disc = {});
[[nodiscard]] Matrix6d oracle_connection(const FullShape<double>& shape, const DragModel& drag,
                                         const DiscretizationParams& disc = {});

/// Resistive wrench on a single isolated link, twist (v; w) about its center, link frame.
[[nodiscard]] Vector6d single_link_wrench(const Vector6d& twist, const DragModel& drag,
                                          const DiscretizationParams& disc = {});

/// Force scale s_F making link_drag_matrix agree with the segment sum for longitudinal
/// translation of one link.
[[nodiscard]] double calibrate_force_scale(const DragModel& drag, const DiscretizationParams& disc = {});

struct ConvergenceRow {
  int segments{0};
  double error{0};           // max |A_oracle - A_analytic|
  double observed_order{0};  // log2(previous error / error); 0 on the first row
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  // max |A_richardson - A_analytic| from the two finest levels, (4 A_2N - A_N) / 3.
  double richardson_error{0};
};

/// Segment counts are visited in the given order; each should double the previous one.
[[nodiscard]] ConvergenceStudy convergence_study(const RestrictedShape<double>& shape, const DragModel& drag,
                                                 const std::vector<int>& segment_counts);

struct ValidationOptions {
  int shapes{200};
  DiscretizationParams disc{};
  double tolerance{1e-6};
  // Relative tolerance on the drag-matrix calibration (catches a wrong force scale), on top of
  // a 2/n^2 quadrature allowance.
  double calibration_tolerance{1e-6};
  std::uint64_t seed{42};
  unsigned workers{0};  // 0: hardware concurrency
};

struct ShapeComparison {
  RestrictedShape<double> shape;
  double connection_error{0};  // max |A_analytic - A_oracle|
  double resistance_error{0};  // max |P - P_oracle| / max |P|
};

struct ValidationReport {
  std::vector<ShapeComparison> comparisons;
  double max_connection_error{0};
  double max_resistance_error{0};
  double calibrated_force_scale{0};
  double configured_force_scale{0};
  double drag_matrix_error{0};  // max relative deviation of H from the single-link segment sums
  bool passed{false};
};

/// Deterministic random restricted shapes: theta in [-pi, pi], phi in [-pi/2, pi/2].
[[nodiscard]] std::vector<RestrictedShape<double>> random_shapes(int count, std::uint64_t seed);

/// Compares the analytic path against the oracle on `options.shapes` random shapes, in parallel.
[[nodiscard]] ValidationReport validate_against_oracle(const DragModel& drag, const ValidationOptions& options);

}  // namespace microswim::oracle
