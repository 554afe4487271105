#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "sasaki/evolution.hpp"
#include "sasaki/structures.hpp"

namespace sasaki {

using Matrix5d = Eigen::Matrix<double, 5, 5>;
using Vector5d = Eigen::Matrix<double, 5, 1>;

/// dt^2 + sum_i eta^i (x) eta^i over the basis (e1, e2, e3, e4, dt).
Matrix5d metric_from_frame(const IdStructure& eta);

/// 2(108A + 1 - 3y^2 + 2y^3) / (1 - y). Throws at y = 1.
double wq(double A, double y);

/// Precision used for finite-difference curvature.
using Quad = boost::multiprecision::cpp_bin_float_quad;
using QuadPoint = std::array<Quad, 5>;
using QuadMatrix = std::array<std::array<Quad, 5>, 5>;

/// A coordinate patch with a metric given in closed form.
class Chart {
 public:
  virtual ~Chart() = default;
  virtual std::array<std::string, 5> coordinate_names() const = 0;
  /// Metric matrix at a point, in extended precision.
  virtual QuadMatrix metric(const QuadPoint& x) const = 0;
  /// Distance from x to the boundary of the admissible region (infinite if none).
  virtual double boundary_distance(const Vector5d& x) const = 0;

  Matrix5d metric(const Vector5d& x) const;
};

/// The local form of the metrics on (theta, phi, y, beta, psi):
/// (1-y)/6 (dtheta^2 + sin^2 theta dphi^2) + dy^2/wq + wq/36 (dbeta + cos theta dphi)^2
///   + 1/9 (dpsi - cos theta dphi + y (dbeta + cos theta dphi))^2.
class YpqChart : public Chart {
 public:
  /// Requires -1/108 < A <= 0. C labels the family; the chart does not depend on it.
  YpqChart(double A, double C);

  double A() const { return A_; }
  double C() const { return C_; }
  /// Admissible y-range (1 - 6 Delta_+, 1 - 6 Delta_-).
  double y_min() const { return y_min_; }
  double y_max() const { return y_max_; }

  std::array<std::string, 5> coordinate_names() const override;
  QuadMatrix metric(const QuadPoint& x) const override;
  double boundary_distance(const Vector5d& x) const override;
  using Chart::metric;

  /// Throws if the point is outside theta in (0, pi), y in (y_min, y_max).
  void require_inside(const Vector5d& x) const;

  /// Deterministic interior sample; `margin` is the fraction of each range kept clear.
  std::vector<Vector5d> sample_points(int count, std::uint64_t seed, double margin = 0.1) const;

 private:
  double A_, C_;
  double y_min_, y_max_;
};

/// Constant diagonal metric (diagnostic).
class FlatTorusChart : public Chart {
 public:
  explicit FlatTorusChart(const std::array<double, 5>& lengths = {1, 1, 1, 1, 1});
  std::array<std::string, 5> coordinate_names() const override;
  QuadMatrix metric(const QuadPoint& x) const override;
  double boundary_distance(const Vector5d&) const override;
  using Chart::metric;

 private:
  std::array<double, 5> lengths_;
};

/// Round metric on the unit 5-sphere in hyperspherical coordinates (oracle).
class RoundSphereChart : public Chart {
 public:
  std::array<std::string, 5> coordinate_names() const override;
  QuadMatrix metric(const QuadPoint& x) const override;
  double boundary_distance(const Vector5d& x) const override;
  using Chart::metric;
};

struct CurvatureReport {
  Vector5d point = Vector5d::Zero();
  double fd_step = 0.0;
  double lambda = 4.0;
  Matrix5d metric = Matrix5d::Zero();
  Matrix5d ricci = Matrix5d::Zero();
  /// ||Ric - lambda g||_F / ||g||_F
  double einstein_residual = 0.0;
  /// ||Ric - Ric^T||_F
  double ricci_asymmetry = 0.0;
  double sectional_min = 0.0;
  double sectional_max = 0.0;
  double sectional_spread() const { return sectional_max - sectional_min; }
};

/// Christoffel symbols by fourth-order central differences of the metric and
/// Riemann/Ricci by the same differences of the Christoffel symbols, all in
/// extended precision. Sectional curvatures are sampled on the coordinate
/// planes of an orthonormal frame plus `random_planes` seeded planes.
CurvatureReport ricci_fd(const Chart& chart, const Vector5d& point, double fd_step = 1e-3,
                         double lambda = 4.0, int random_planes = 20, std::uint64_t seed = 7);

/// Rows (e1, e2, e3, e4, dt) in terms of (dtheta, dphi, dy, dbeta, dpsi) for
/// case-ii data with m = 0: Euler angles on SU(2), e4 = (dbeta + dpsi)/C and
/// dt = -h dy / (6 sqrt(A + h^4 - 4h^6)).
Matrix5d frame_to_chart_jacobian(const CaseIIState& state, double theta, double psi);

/// The case-ii frame metric expressed in chart coordinates, J^T G J.
Matrix5d frame_metric_in_chart(const CaseIIState& state, double theta, double psi);

}  // namespace sasaki
