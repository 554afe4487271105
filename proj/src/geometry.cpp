#include "sasaki/geometry.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "sasaki/moduli.hpp"

namespace sasaki {

using boost::multiprecision::cos;
using boost::multiprecision::sin;
using boost::multiprecision::sqrt;

Matrix5d metric_from_frame(const IdStructure& s) {
  Matrix5d g = Matrix5d::Zero();
  g.topLeftCorner<4, 4>() = s.eta.transpose() * s.eta;
  g(4, 4) = 1.0;
  return g;
}

double wq(double A, double y) {
  if (y == 1.0) throw Error("wq is undefined at y = 1");
  return 2.0 * (108.0 * A + 1.0 - 3.0 * y * y + 2.0 * y * y * y) / (1.0 - y);
}

Matrix5d Chart::metric(const Vector5d& x) const {
  QuadPoint q;
  for (int i = 0; i < 5; ++i) q[i] = Quad(x[i]);
  QuadMatrix m = metric(q);
  Matrix5d out;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) out(i, j) = static_cast<double>(m[i][j]);
  return out;
}

// ---- Y^{p,q} chart -----------------------------------------------------

YpqChart::YpqChart(double A, double C) : A_(A), C_(C) {
  if (!(A > -1.0 / 108.0) || A > 0.0) throw Error("A outside (-1/108, 0]");
  CubicRoots roots = cubic_roots(A);
  if (roots.delta_plus <= roots.delta_minus) throw Error("A has no two distinct roots");
  y_min_ = 1.0 - 6.0 * roots.delta_plus;
  y_max_ = 1.0 - 6.0 * roots.delta_minus;
}

std::array<std::string, 5> YpqChart::coordinate_names() const {
  return {"theta", "phi", "y", "beta", "psi"};
}

QuadMatrix YpqChart::metric(const QuadPoint& x) const {
  const Quad& theta = x[0];
  const Quad& y = x[2];
  Quad A(A_);
  Quad one(1);
  Quad w = 2 * (108 * A + one - 3 * y * y + 2 * y * y * y) / (one - y);
  Quad ct = cos(theta), st = sin(theta);
  // 1-forms over (dtheta, dphi, dy, dbeta, dpsi).
  std::array<Quad, 5> B{Quad(0), ct, Quad(0), one, Quad(0)};
  std::array<Quad, 5> P{Quad(0), y * ct - ct, Quad(0), y, one};
  QuadMatrix g{};
  Quad base = (one - y) / 6;
  g[0][0] = base;
  g[1][1] = base * st * st;
  g[2][2] = one / w;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) g[i][j] += w / 36 * B[i] * B[j] + P[i] * P[j] / 9;
  return g;
}

double YpqChart::boundary_distance(const Vector5d& x) const {
  return std::min({x[0], M_PI - x[0], x[2] - y_min_, y_max_ - x[2]});
}

void YpqChart::require_inside(const Vector5d& x) const {
  if (!(x[0] > 0.0 && x[0] < M_PI) || !(x[2] > y_min_ && x[2] < y_max_))
    throw Error("point outside the admissible box");
}

std::vector<Vector5d> YpqChart::sample_points(int count, std::uint64_t seed, double margin) const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto inside = [&](double lo, double hi) {
    double span = hi - lo;
    return lo + span * (margin + (1.0 - 2.0 * margin) * unit(rng));
  };
  std::vector<Vector5d> points;
  for (int i = 0; i < count; ++i) {
    Vector5d p;
    p[0] = inside(0.0, M_PI);
    p[1] = inside(0.0, 2.0 * M_PI);
    p[2] = inside(y_min_, y_max_);
    p[3] = inside(0.0, 2.0 * M_PI);
    p[4] = inside(0.0, 2.0 * M_PI);
    points.push_back(p);
  }
  return points;
}

// ---- diagnostic charts ------------------------------------------------

FlatTorusChart::FlatTorusChart(const std::array<double, 5>& lengths) : lengths_(lengths) {}

std::array<std::string, 5> FlatTorusChart::coordinate_names() const {
  return {"x1", "x2", "x3", "x4", "x5"};
}

QuadMatrix FlatTorusChart::metric(const QuadPoint&) const {
  QuadMatrix g{};
  for (int i = 0; i < 5; ++i) g[i][i] = Quad(lengths_[i]) * Quad(lengths_[i]);
  return g;
}

double FlatTorusChart::boundary_distance(const Vector5d&) const {
  return std::numeric_limits<double>::infinity();
}

std::array<std::string, 5> RoundSphereChart::coordinate_names() const {
  return {"chi1", "chi2", "chi3", "chi4", "chi5"};
}

QuadMatrix RoundSphereChart::metric(const QuadPoint& x) const {
  QuadMatrix g{};
  Quad factor(1);
  for (int i = 0; i < 5; ++i) {
    g[i][i] = factor;
    Quad s = sin(x[i]);
    factor *= s * s;
  }
  return g;
}

double RoundSphereChart::boundary_distance(const Vector5d& x) const {
  double d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) d = std::min({d, x[i], M_PI - x[i]});
  return d;
}

// ---- curvature --------------------------------------------------------

namespace {

using Gamma = std::array<QuadMatrix, 5>;  // Gamma[k][i][j] = Gamma^k_ij

QuadMatrix inverse(const QuadMatrix& m) {
  QuadMatrix a = m;
  QuadMatrix inv{};
  for (int i = 0; i < 5; ++i) inv[i][i] = Quad(1);
  for (int col = 0; col < 5; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 5; ++r)
      if (abs(a[r][col]) > abs(a[pivot][col])) pivot = r;
    if (a[pivot][col] == 0) throw Error("singular metric at stencil point");
    std::swap(a[col], a[pivot]);
    std::swap(inv[col], inv[pivot]);
    Quad p = a[col][col];
    for (int j = 0; j < 5; ++j) {
      a[col][j] /= p;
      inv[col][j] /= p;
    }
    for (int r = 0; r < 5; ++r) {
      if (r == col) continue;
      Quad f = a[r][col];
      if (f == 0) continue;
      for (int j = 0; j < 5; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

QuadPoint shifted(const QuadPoint& x, int dir, const Quad& amount) {
  QuadPoint y = x;
  y[dir] += amount;
  return y;
}

// Fourth-order central difference of a matrix-valued function.
template <class F>
auto central_difference(F&& f, const QuadPoint& x, int dir, const Quad& h) {
  auto fp1 = f(shifted(x, dir, h));
  auto fm1 = f(shifted(x, dir, -h));
  auto fp2 = f(shifted(x, dir, 2 * h));
  auto fm2 = f(shifted(x, dir, -2 * h));
  auto out = fp1;
  Quad scale = 1 / (12 * h);
  // Works for QuadMatrix and Gamma by flattening through references.
  auto combine = [&](auto& o, const auto& a1, const auto& b1, const auto& a2, const auto& b2,
                     auto&& self) -> void {
    using T = std::decay_t<decltype(o)>;
    if constexpr (std::is_same_v<T, Quad>) {
      o = (8 * (a1 - b1) - (a2 - b2)) * scale;
    } else {
      for (std::size_t i = 0; i < o.size(); ++i) self(o[i], a1[i], b1[i], a2[i], b2[i], self);
    }
  };
  combine(out, fp1, fm1, fp2, fm2, combine);
  return out;
}

Gamma christoffel(const Chart& chart, const QuadPoint& x, const Quad& h) {
  QuadMatrix g = chart.metric(x);
  QuadMatrix ginv = inverse(g);
  std::array<QuadMatrix, 5> dg;  // dg[l][i][j] = d_l g_ij
  for (int l = 0; l < 5; ++l)
    dg[l] = central_difference([&](const QuadPoint& p) { return chart.metric(p); }, x, l, h);
  Gamma G{};
  for (int k = 0; k < 5; ++k)
    for (int i = 0; i < 5; ++i)
      for (int j = i; j < 5; ++j) {
        Quad sum(0);
        for (int l = 0; l < 5; ++l) sum += ginv[k][l] * (dg[i][l][j] + dg[j][l][i] - dg[l][i][j]);
        G[k][i][j] = G[k][j][i] = sum / 2;
      }
  return G;
}

}  // namespace

CurvatureReport ricci_fd(const Chart& chart, const Vector5d& point, double fd_step, double lambda,
                         int random_planes, std::uint64_t seed) {
  if (!(fd_step > 0)) throw Error("fd_step must be positive");
  if (chart.boundary_distance(point) <= 4.0 * fd_step)
    throw Error("point too close to the chart boundary for the stencil");
  QuadPoint x;
  for (int i = 0; i < 5; ++i) x[i] = Quad(point[i]);
  Quad h(fd_step);

  QuadMatrix g = chart.metric(x);
  Gamma G = christoffel(chart, x, h);
  std::array<Gamma, 5> dG;  // dG[l] = d_l Gamma
  for (int l = 0; l < 5; ++l)
    dG[l] = central_difference([&](const QuadPoint& p) { return christoffel(chart, p, h); }, x, l, h);

  // R^i_{jkl} = d_k Gamma^i_{lj} - d_l Gamma^i_{kj} + Gamma^i_{km} Gamma^m_{lj} - Gamma^i_{lm} Gamma^m_{kj}
  std::array<std::array<QuadMatrix, 5>, 5> R{};
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      for (int k = 0; k < 5; ++k)
        for (int l = 0; l < 5; ++l) {
          Quad v = dG[k][i][l][j] - dG[l][i][k][j];
          for (int m = 0; m < 5; ++m) v += G[i][k][m] * G[m][l][j] - G[i][l][m] * G[m][k][j];
          R[i][j][k][l] = v;
        }

  CurvatureReport rep;
  rep.point = point;
  rep.fd_step = fd_step;
  rep.lambda = lambda;
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) {
      Quad ric(0);
      for (int i = 0; i < 5; ++i) ric += R[i][a][i][b];
      rep.ricci(a, b) = static_cast<double>(ric);
      rep.metric(a, b) = static_cast<double>(g[a][b]);
    }
  Quad num(0), den(0);
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) {
      Quad ric(0);
      for (int i = 0; i < 5; ++i) ric += R[i][a][i][b];
      Quad d = ric - Quad(lambda) * g[a][b];
      num += d * d;
      den += g[a][b] * g[a][b];
    }
  rep.einstein_residual = static_cast<double>(sqrt(num / den));
  rep.ricci_asymmetry = (rep.ricci - rep.ricci.transpose()).norm();

  // Sectional curvature K(X, Y) = g(R(X,Y)Y, X) / (|X|^2 |Y|^2 - g(X,Y)^2).
  auto sectional = [&](const Vector5d& X, const Vector5d& Y) {
    double top = 0.0;
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        for (int k = 0; k < 5; ++k)
          for (int l = 0; l < 5; ++l) {
            double Xi = 0.0;
            for (int q = 0; q < 5; ++q) Xi += rep.metric(i, q) * X[q];
            top += static_cast<double>(R[i][j][k][l]) * Y[j] * X[k] * Y[l] * Xi;
          }
    double xx = X.dot(rep.metric * X), yy = Y.dot(rep.metric * Y), xy = X.dot(rep.metric * Y);
    return top / (xx * yy - xy * xy);
  };
  Eigen::LLT<Matrix5d> llt(rep.metric);
  if (llt.info() != Eigen::Success) throw Error("metric is not positive definite");
  // Columns of L^{-T} form a g-orthonormal frame.
  Matrix5d frame = llt.matrixL().transpose().solve(Matrix5d::Identity());
  rep.sectional_min = std::numeric_limits<double>::infinity();
  rep.sectional_max = -std::numeric_limits<double>::infinity();
  auto account = [&](double K) {
    rep.sectional_min = std::min(rep.sectional_min, K);
    rep.sectional_max = std::max(rep.sectional_max, K);
  };
  for (int a = 0; a < 5; ++a)
    for (int b = a + 1; b < 5; ++b) account(sectional(frame.col(a), frame.col(b)));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int n = 0; n < random_planes; ++n) {
    Vector5d cx, cy;
    for (int i = 0; i < 5; ++i) {
      cx[i] = normal(rng);
      cy[i] = normal(rng);
    }
    account(sectional(frame * cx, frame * cy));
  }
  return rep;
}

// ---- frame/chart ------------------------------------------------------

Matrix5d frame_to_chart_jacobian(const CaseIIState& s, double theta, double psi) {
  if (s.m != 0) throw Error("the chart assumes m = 0");
  if (s.C == 0.0) throw Error("the chart change needs C != 0");
  double A = s.invariant_A();
  double h2 = s.h * s.h;
  double rad = A + h2 * h2 - 4.0 * h2 * h2 * h2;
  if (!(rad > 0)) throw Error("frame/chart change is singular at a turning point");
  double ct = std::cos(theta), st = std::sin(theta), cp = std::cos(psi), sp = std::sin(psi);
  Matrix5d J = Matrix5d::Zero();  // columns: theta, phi, y, beta, psi
  J(0, 1) = ct;
  J(0, 4) = -1.0;
  J(1, 0) = cp;
  J(1, 1) = -sp * st;
  J(2, 0) = sp;
  J(2, 1) = cp * st;
  J(3, 3) = 1.0 / s.C;
  J(3, 4) = 1.0 / s.C;
  J(4, 2) = -s.h / (6.0 * std::sqrt(rad));
  return J;
}

Matrix5d frame_metric_in_chart(const CaseIIState& s, double theta, double psi) {
  Matrix5d J = frame_to_chart_jacobian(s, theta, psi);
  return J.transpose() * metric_from_frame(s.structure()) * J;
}

}  // namespace sasaki
