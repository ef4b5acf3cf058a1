#include "microswim/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

namespace microswim::oracle {

namespace {

// Step along the shape path for the velocity finite difference.
constexpr double kPathStep = 1e-6;

// Orientations (link -> base, active) of both outer links at path parameter eps.
using OrientationPath = std::function<std::array<Matrix3d, 2>(double eps)>;

struct Segments {
  int count;
  double width;
};

Segments segments_for(const DragModel& drag, const DiscretizationParams& disc) {
  validate(disc);
  return {disc.segments_per_link, 2.0 * drag.geometry.half_length / disc.segments_per_link};
}

// Resistive force on one segment with velocity v and unit tangent t.
Vector3d segment_force(const Vector3d& v, const Vector3d& t, const DragCoefficients& c, double width) {
  const Vector3d v_par = v.dot(t) * t;
  return -(c.c_par * v_par + c.c_perp * (v - v_par)) * width;
}

Vector6d wrench_along_path(const OrientationPath& path, const Vector6d& base_twist, const DragModel& drag,
                           const DiscretizationParams& disc) {
  const auto [n, ds] = segments_for(drag, disc);
  const double l = drag.geometry.half_length;
  const auto& c = drag.coefficients;
  const Vector3d v0 = base_twist.head<3>();
  const Vector3d w0 = base_twist.tail<3>();

  Vector3d force = Vector3d::Zero();
  Vector3d moment = Vector3d::Zero();

  // Base link along x.
  const Vector3d ex = Vector3d::UnitX();
  for (int k = 0; k < n; ++k) {
    const Vector3d p = (-l + (k + 0.5) * ds) * ex;
    const Vector3d f = segment_force(v0 + w0.cross(p), ex, c, ds);
    force += f;
    moment += p.cross(f);
  }
  moment -= c.k_spin * w0.dot(ex) * ex * (2.0 * l);

  const auto now = path(0.0);
  const auto ahead = path(kPathStep);
  const auto behind = path(-kPathStep);
  for (int i = 0; i < 2; ++i) {
    const double side = i == 0 ? 1.0 : -1.0;
    const Vector3d joint(side * l, 0.0, 0.0);
    const Vector3d t = now[i].col(0);
    const Vector3d t_rate = (ahead[i].col(0) - behind[i].col(0)) / (2.0 * kPathStep);
    // Relative angular velocity from dO/dt O^T.
    const Matrix3d spin_matrix = (ahead[i] - behind[i]) / (2.0 * kPathStep) * now[i].transpose();
    const Vector3d omega_rel(0.5 * (spin_matrix(2, 1) - spin_matrix(1, 2)),
                             0.5 * (spin_matrix(0, 2) - spin_matrix(2, 0)),
                             0.5 * (spin_matrix(1, 0) - spin_matrix(0, 1)));
    for (int k = 0; k < n; ++k) {
      const double s = (k + 0.5) * ds;
      const Vector3d p = joint + side * s * t;
      const Vector3d v = v0 + w0.cross(p) + side * s * t_rate;
      const Vector3d f = segment_force(v, t, c, ds);
      force += f;
      moment += p.cross(f);
    }
    moment -= c.k_spin * (w0 + omega_rel).dot(t) * t * (2.0 * l);
  }

  Vector6d w;
  w << force, moment;
  return w;
}

OrientationPath restricted_path(const RestrictedShape<double>& shape, const Eigen::Vector4d& rates) {
  return [shape, rates](double eps) {
    const Eigen::Vector4d a = shape.angles + eps * rates;
    return std::array<Matrix3d, 2>{link_rotation(a(0), a(1)).transpose(), link_rotation(a(2), a(3)).transpose()};
  };
}

OrientationPath full_path(const FullShape<double>& shape, const Vector6d& rates) {
  return [shape, rates](double eps) {
    // O = R^T and dO/dt = O hat(w) with w in the link frame.
    const Vector3d w1 = eps * rates.head<3>();
    const Vector3d w2 = eps * rates.tail<3>();
    return std::array<Matrix3d, 2>{shape.r1.transpose() * so3_exp(w1), shape.r2.transpose() * so3_exp(w2)};
  };
}

template <int Rates>
Eigen::Matrix<double, 6, Rates> solve_connection(const Matrix6d& resistance,
                                                 const Eigen::Matrix<double, 6, Rates>& coupling) {
  const Eigen::ColPivHouseholderQR<Matrix6d> qr(resistance);
  if (!qr.isInvertible()) {
    throw SingularResistance("numeric resistance matrix is singular (discretization failure)");
  }
  // W_xi xi0 + W_r rdot = 0 and xi0 = -A rdot.
  return qr.solve(coupling);
}

}  // namespace

void validate(const DiscretizationParams& disc) {
  if (disc.segments_per_link < 10) {
    throw std::invalid_argument("oracle needs at least 10 segments per link");
  }
}

Vector6d net_wrench_numeric(const RestrictedShape<double>& shape, const Vector6d& base_twist,
                            const Eigen::Vector4d& rates, const DragModel& drag, const DiscretizationParams& disc) {
  return wrench_along_path(restricted_path(shape, rates), base_twist, drag, disc);
}

Vector6d net_wrench_numeric(const FullShape<double>& shape, const Vector6d& base_twist, const Vector6d& rates,
                            const DragModel& drag, const DiscretizationParams& disc) {
  return wrench_along_path(full_path(shape, rates), base_twist, drag, disc);
}

Matrix6d oracle_resistance(const RestrictedShape<double>& shape, const DragModel& drag,
                           const DiscretizationParams& disc) {
  Matrix6d r;
  for (int k = 0; k < 6; ++k) {
    r.col(k) = -net_wrench_numeric(shape, Vector6d::Unit(k), Eigen::Vector4d::Zero(), drag, disc);
  }
  return r;
}

Eigen::Matrix<double, 6, 4> oracle_connection(const RestrictedShape<double>& shape, const DragModel& drag,
                                              const DiscretizationParams& disc) {
  Eigen::Matrix<double, 6, 4> coupling;
  for (int k = 0; k < 4; ++k) {
    coupling.col(k) = -net_wrench_numeric(shape, Vector6d::Zero(), Eigen::Vector4d::Unit(k), drag, disc);
  }
  return solve_connection<4>(oracle_resistance(shape, drag, disc), coupling);
}

Matrix6d oracle_connection(const FullShape<double>& shape, const DragModel& drag, const DiscretizationParams& disc) {
  Matrix6d resistance;
  Matrix6d coupling;
  for (int k = 0; k < 6; ++k) {
    resistance.col(k) = -net_wrench_numeric(shape, Vector6d::Unit(k), Vector6d::Zero(), drag, disc);
    coupling.col(k) = -net_wrench_numeric(shape, Vector6d::Zero(), Vector6d::Unit(k), drag, disc);
  }
  return solve_connection<6>(resistance, coupling);
}

Vector6d single_link_wrench(const Vector6d& twist, const DragModel& drag, const DiscretizationParams& disc) {
  const auto [n, ds] = segments_for(drag, disc);
  const double l = drag.geometry.half_length;
  const auto& c = drag.coefficients;
  const Vector3d ex = Vector3d::UnitX();
  const Vector3d v0 = twist.head<3>();
  const Vector3d w0 = twist.tail<3>();
  Vector3d force = Vector3d::Zero();
  Vector3d moment = Vector3d::Zero();
  for (int k = 0; k < n; ++k) {
    const Vector3d p = (-l + (k + 0.5) * ds) * ex;
    const Vector3d f = segment_force(v0 + w0.cross(p), ex, c, ds);
    force += f;
    moment += p.cross(f);
  }
  moment -= c.k_spin * w0.dot(ex) * ex * (2.0 * l);
  Vector6d w;
  w << force, moment;
  return w;
}

double calibrate_force_scale(const DragModel& drag, const DiscretizationParams& disc) {
  const double longitudinal = -single_link_wrench(Vector6d::Unit(0), drag, disc)(0);
  // link_drag_matrix(0, 0) = s_F * c_par * L
  return longitudinal / (drag.coefficients.c_par * drag.geometry.half_length);
}

ConvergenceStudy convergence_study(const RestrictedShape<double>& shape, const DragModel& drag,
                                   const std::vector<int>& segment_counts) {
  ConvergenceStudy study;
  const Eigen::Matrix<double, 6, 4> analytic = local_connection(shape, drag).matrix;
  std::vector<Eigen::Matrix<double, 6, 4>> levels;
  for (const int n : segment_counts) {
    levels.push_back(oracle_connection(shape, drag, {n}));
    ConvergenceRow row;
    row.segments = n;
    row.error = (levels.back() - analytic).cwiseAbs().maxCoeff();
    if (!study.rows.empty() && row.error > 0.0) {
      row.observed_order = std::log2(study.rows.back().error / row.error);
    }
    study.rows.push_back(row);
  }
  if (levels.size() >= 2) {
    const auto& coarse = levels[levels.size() - 2];
    const auto& fine = levels.back();
    study.richardson_error = ((4.0 * fine - coarse) / 3.0 - analytic).cwiseAbs().maxCoeff();
  }
  return study;
}

std::vector<RestrictedShape<double>> random_shapes(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> theta(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> phi(-std::numbers::pi / 2, std::numbers::pi / 2);
  std::vector<RestrictedShape<double>> shapes;
  shapes.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    const double t1 = theta(rng);
    const double p1 = phi(rng);
    const double t2 = theta(rng);
    const double p2 = phi(rng);
    shapes.emplace_back(t1, p1, t2, p2);
  }
  return shapes;
}

ValidationReport validate_against_oracle(const DragModel& drag, const ValidationOptions& options) {
  validate(options.disc);
  ValidationReport report;
  report.configured_force_scale = drag.force_scale;
  report.calibrated_force_scale = calibrate_force_scale(drag, options.disc);

  // Every diagonal entry of H against the single-link segment sum.
  const Matrix6d h = link_drag_matrix(drag);
  for (int k = 0; k < 6; ++k) {
    const double numeric = -single_link_wrench(Vector6d::Unit(k), drag, options.disc)(k);
    report.drag_matrix_error = std::max(report.drag_matrix_error, std::abs(h(k, k) - numeric) / numeric);
  }

  const auto shapes = random_shapes(options.shapes, options.seed);
  report.comparisons.resize(shapes.size());

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = std::max(1u, std::min<unsigned>(options.workers == 0 ? hw : options.workers,
                                                           static_cast<unsigned>(shapes.size())));
  auto work = [&](unsigned begin) {
    for (std::size_t i = begin; i < shapes.size(); i += workers) {
      const auto& s = shapes[i];
      const auto fb = assemble_force_balance(s, drag);
      const Matrix6d numeric_p = oracle_resistance(s, drag, options.disc);
      auto& cmp = report.comparisons[i];
      cmp.shape = s;
      cmp.connection_error =
          (local_connection(s, drag).matrix - oracle_connection(s, drag, options.disc)).cwiseAbs().maxCoeff();
      cmp.resistance_error =
          (fb.resistance - numeric_p).cwiseAbs().maxCoeff() / numeric_p.cwiseAbs().maxCoeff();
    }
  };
  if (workers == 1 || shapes.empty()) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back(work, w);
    }
  }

  for (const auto& c : report.comparisons) {
    report.max_connection_error = std::max(report.max_connection_error, c.connection_error);
    report.max_resistance_error = std::max(report.max_resistance_error, c.resistance_error);
  }
  // The midpoint rule misses the second moment of each link by 1/n^2 relative; that part is
  // quadrature, not a calibration fault.
  const double n = static_cast<double>(options.disc.segments_per_link);
  const double calibration_bound = options.calibration_tolerance + 2.0 / (n * n);
  report.passed = report.max_connection_error < options.tolerance &&
                  report.max_resistance_error < calibration_bound && report.drag_matrix_error < calibration_bound;
  return report;
}

}  // namespace microswim::oracle
