#include "microswim/controllability.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>

namespace microswim::controllability {

namespace {

using Coords = Eigen::Vector4d;
using Connection = Eigen::Matrix<double, 6, 4>;
using Field = std::function<Vector6d(const Coords&)>;

// A(x) with memoization; the nested differences revisit the same points many times.
class ConnectionCache {
 public:
  explicit ConnectionCache(DragModel drag) : drag_(std::move(drag)) {}

  const Connection& at(const Coords& x) {
    const std::array<double, 4> key{x(0), x(1), x(2), x(3)};
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      it = cache_.emplace(key, local_connection(RestrictedShape<double>(x), drag_).matrix).first;
    }
    return it->second;
  }

 private:
  DragModel drag_;
  std::map<std::array<double, 4>, Connection> cache_;
};

struct SpanResult {
  int rank{0};
  std::vector<double> singular_values;
  Eigen::MatrixXd basis;
};

SpanResult span_of(const std::vector<Vector6d>& vectors, double tol, double floor = 0.0) {
  SpanResult r;
  if (vectors.empty()) {
    r.basis = Eigen::MatrixXd(6, 0);
    return r;
  }
  Eigen::MatrixXd m(6, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    m.col(static_cast<Eigen::Index>(i)) = vectors[i];
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  r.singular_values.assign(sv.data(), sv.data() + sv.size());
  const double cutoff = std::max(floor, sv.size() > 0 ? tol * sv(0) : 0.0);
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff && sv(i) > 0.0) {
      ++r.rank;
    }
  }
  r.basis = svd.matrixU().leftCols(r.rank);
  return r;
}

std::array<bool, 6> reachable_axes(const Eigen::MatrixXd& basis, double tol) {
  std::array<bool, 6> out{};
  for (int k = 0; k < 6; ++k) {
    const Vector6d e = Vector6d::Unit(k);
    const Vector6d residual = e - basis * (basis.transpose() * e);
    out[static_cast<std::size_t>(k)] = residual.norm() < tol;
  }
  return out;
}

std::vector<std::string> names_of(const std::array<bool, 6>& axes) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < 6; ++k) {
    if (axes[k]) {
      out.emplace_back(kAxisNames[k]);
    }
  }
  return out;
}

void validate(const FiltrationOptions& o) {
  if (o.depth < 1 || o.depth > kMaxFiltrationDepth) {
    throw std::invalid_argument("filtration depth must be in [1, " + std::to_string(kMaxFiltrationDepth) + "]");
  }
  if (!(o.fd_step > 0.0) || !(o.lie_step > 0.0) || !(o.span_tolerance > 0.0) || !(o.direction_tolerance > 0.0) ||
      !(o.roundoff_factor >= 0.0)) {
    throw std::invalid_argument("filtration steps and tolerances must be positive");
  }
  if (o.actuated.empty()) {
    throw std::invalid_argument("at least one joint must be actuated");
  }
  for (int j : o.actuated) {
    if (j < 0 || j > 3) {
      throw std::invalid_argument("actuated joint index out of range [0, 3]");
    }
  }
}

}  // namespace

Vector6d se3_bracket(const Vector6d& a, const Vector6d& b) {
  const Eigen::Matrix4d ma = twist_matrix(a);
  const Eigen::Matrix4d mb = twist_matrix(b);
  return twist_vector(Eigen::Matrix4d(ma * mb - mb * ma));
}

int connection_rank(const RestrictedShape<double>& shape, const DragModel& drag, double tol) {
  const Connection a = local_connection(shape, drag).matrix;
  const Eigen::JacobiSVD<Connection> svd(a);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) {
    return 0;
  }
  return static_cast<int>((sv.array() > tol * sv(0)).count());
}

Vector6d curvature(const RestrictedShape<double>& shape, const Eigen::Vector4d& x, const Eigen::Vector4d& y,
                   const DragModel& drag, double h) {
  if (!(h > 0.0)) {
    throw std::invalid_argument("finite-difference step must be positive");
  }
  const Coords c = shape.angles;
  auto a_at = [&](const Coords& p) { return local_connection(RestrictedShape<double>(p), drag).matrix; };
  const Vector6d dx_ay = (a_at(c + h * x) * y - a_at(c - h * x) * y) / (2.0 * h);
  const Vector6d dy_ax = (a_at(c + h * y) * x - a_at(c - h * y) * x) / (2.0 * h);
  const Connection a = a_at(c);
  return dx_ay - dy_ax - se3_bracket(a * x, a * y);
}

std::vector<std::string> FiltrationReport::reachable_names() const { return names_of(reachable); }

std::string describe_axes(const std::array<bool, 6>& axes) {
  std::string trans;
  std::string rot;
  const char* axis = "xyz";
  for (std::size_t k = 0; k < 3; ++k) {
    if (axes[k]) {
      trans += (trans.empty() ? "" : ",") + std::string(1, axis[k]);
    }
    if (axes[k + 3]) {
      rot += (rot.empty() ? "" : ",") + std::string(1, axis[k]);
    }
  }
  return "translation " + (trans.empty() ? std::string("none") : trans) + "; rotation " +
         (rot.empty() ? std::string("none") : rot);
}

std::string FiltrationReport::verdict() const {
  std::string out = describe_axes(reachable);
  if (spans_algebra) {
    out += " (spans se(3))";
  }
  return out;
}

FiltrationReport filtration(const RestrictedShape<double>& shape, const DragModel& drag,
                            const FiltrationOptions& options) {
  validate(options);
  auto cache = std::make_shared<ConnectionCache>(drag);
  const Coords x0 = shape.angles;
  const double h = options.fd_step;
  const double s = options.lie_step;

  std::vector<Coords> dirs;
  for (int j : options.actuated) {
    dirs.push_back(Coords::Unit(j));
  }

  std::vector<Field> a_fields;  // A(x) X
  for (const Coords& d : dirs) {
    a_fields.push_back([cache, d](const Coords& x) -> Vector6d { return cache->at(x) * d; });
  }

  FiltrationReport report;
  report.shape = shape;
  report.actuated = options.actuated;
  report.depth = options.depth;
  report.span_tolerance = options.span_tolerance;

  const double a_norm = cache->at(x0).cwiseAbs().maxCoeff();
  auto roundoff = [&](int level) {
    double divisor = 1.0;
    if (level >= 2) {
      divisor = h * std::pow(s, level - 2);
    }
    return options.roundoff_factor * std::numeric_limits<double>::epsilon() * a_norm / divisor;
  };

  std::vector<Vector6d> accumulated;
  int level_index = 1;
  auto close_level = [&](const std::vector<Field>& level) {
    for (const auto& f : level) {
      accumulated.push_back(f(x0));
    }
    const double floor = roundoff(level_index++);
    const SpanResult span = span_of(accumulated, options.span_tolerance, floor);
    report.cutoffs.push_back(std::max(floor, span.singular_values.empty()
                                                 ? 0.0
                                                 : options.span_tolerance * span.singular_values.front()));
    report.cumulative_dims.push_back(span.rank);
    report.generators.push_back(static_cast<int>(level.size()));
    report.singular_values.push_back(span.singular_values);
    report.basis = span.basis;
    return span.rank;
  };

  int dim = close_level(a_fields);

  std::vector<Field> previous;   // h(k-1)
  std::vector<Field> higher;     // h2 + ... + h(k-1)
  for (int level = 2; level <= options.depth; ++level) {
    std::vector<Field> current;
    if (dim == 6) {
      // Already all of se(3); deeper levels cannot add anything.
      report.cumulative_dims.push_back(6);
      report.generators.push_back(0);
      report.singular_values.push_back(report.singular_values.back());
      report.cutoffs.push_back(report.cutoffs.back());
      ++level_index;
      continue;
    }
    if (level == 2) {
      for (std::size_t i = 0; i < dirs.size(); ++i) {
        for (std::size_t j = i + 1; j < dirs.size(); ++j) {
          const Coords di = dirs[i];
          const Coords dj = dirs[j];
          const Field ai = a_fields[i];
          const Field aj = a_fields[j];
          current.push_back([=](const Coords& x) -> Vector6d {
            const Vector6d dx_ay = (aj(x + h * di) - aj(x - h * di)) / (2.0 * h);
            const Vector6d dy_ax = (ai(x + h * dj) - ai(x - h * dj)) / (2.0 * h);
            return dx_ay - dy_ax - se3_bracket(ai(x), aj(x));
          });
        }
      }
    } else {
      for (const Field& xi : previous) {
        for (std::size_t k = 0; k < dirs.size(); ++k) {
          const Coords d = dirs[k];
          const Field ak = a_fields[k];
          current.push_back([=](const Coords& x) -> Vector6d {
            const Vector6d lie = (xi(x + s * d) - xi(x - s * d)) / (2.0 * s);
            return lie - se3_bracket(ak(x), xi(x));
          });
        }
      }
      // [eta, xi] with eta from lower levels, then unordered pairs within h(k-1).
      const std::size_t lower = higher.size() - previous.size();
      for (std::size_t e = 0; e < lower; ++e) {
        for (const Field& xi : previous) {
          const Field eta = higher[e];
          current.push_back([=](const Coords& x) -> Vector6d { return se3_bracket(eta(x), xi(x)); });
        }
      }
      for (std::size_t p = 0; p < previous.size(); ++p) {
        for (std::size_t q = p + 1; q < previous.size(); ++q) {
          const Field eta = previous[p];
          const Field xi = previous[q];
          current.push_back([=](const Coords& x) -> Vector6d { return se3_bracket(eta(x), xi(x)); });
        }
      }
    }
    dim = close_level(current);
    higher.insert(higher.end(), current.begin(), current.end());
    previous = std::move(current);
  }

  report.reachable = reachable_axes(report.basis, options.direction_tolerance);
  report.spans_algebra = report.dim() == 6;
  return report;
}

std::vector<std::string> PlanarDecomposition::union_names() const { return names_of(union_reachable); }

PlanarDecomposition planar_decomposition_report(const RestrictedShape<double>& shape, const DragModel& drag,
                                                FiltrationOptions options) {
  PlanarDecomposition out;
  options.actuated = {0, 2};
  out.theta_actuation = filtration(shape, drag, options);
  options.actuated = {1, 3};
  out.phi_actuation = filtration(shape, drag, options);

  std::vector<Vector6d> both;
  for (const auto* r : {&out.theta_actuation, &out.phi_actuation}) {
    for (Eigen::Index c = 0; c < r->basis.cols(); ++c) {
      both.emplace_back(r->basis.col(c));
    }
  }
  const SpanResult span = span_of(both, options.span_tolerance);
  out.union_dim = span.rank;
  out.union_reachable = reachable_axes(span.basis, options.direction_tolerance);
  return out;
}

}  // namespace microswim::controllability
