#include <gtest/gtest.h>

#include <cmath>

#include "sasaki/evolution.hpp"
#include "sasaki/geometry.hpp"

using namespace sasaki;

TEST(Geometry, MetricFromFrame) {
  IdStructure id;
  EXPECT_LE((metric_from_frame(id) - Matrix5d::Identity()).norm(), 0.0);
  Matrix5d g = metric_from_frame(homogeneous_structure());
  EXPECT_DOUBLE_EQ(g(0, 0), 1.0 / 9.0);
  EXPECT_DOUBLE_EQ(g(0, 3), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(g(3, 3), 2.0);
  EXPECT_DOUBLE_EQ(g(1, 1), 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(g(4, 4), 1.0);
}

TEST(Geometry, CaseIIFrameMetricBlock) {
  // The e2/e3 block equals Delta times the identity and dt is orthogonal to the orbit.
  CaseIIState s = case_ii_from_A(0.35, -9.0 / 2197.0, 6.0, 0);
  Matrix5d g = metric_from_frame(s.structure());
  double D = s.h * s.h;
  EXPECT_NEAR(g(1, 1), D, 1e-15);
  EXPECT_NEAR(g(2, 2), D, 1e-15);
  EXPECT_NEAR(g(1, 2), 0.0, 1e-15);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(g(i, 4), 0.0);
  Eigen::Matrix2d block;
  block << g(0, 0), g(0, 3), g(0, 3), g(3, 3);
  EXPECT_GT(block.determinant(), 0.0);
}

TEST(Geometry, WqExamples) {
  EXPECT_DOUBLE_EQ(wq(0.0, 0.0), 2.0);
  for (double y : {-0.3, 0.2, 0.7}) EXPECT_NEAR(wq(0.0, y), 2 * (1 - y) * (1 + 2 * y), 1e-14);
  EXPECT_NEAR(wq(0.0, -0.5), 0.0, 1e-15);
  EXPECT_NEAR(wq(-9.0 / 2197.0, 1.0 - 6.0 / 13.0), 0.0, 1e-15);
  EXPECT_NEAR(wq(-9.0 / 2197.0, 1.0 - 18.0 / 13.0), 0.0, 1e-15);
  EXPECT_THROW(wq(0.0, 1.0), Error);
}

TEST(Geometry, ChartMetricAtSpherePoint) {
  YpqChart chart(0.0, 1.0);
  Vector5d x;
  x << M_PI / 2, 0.3, 0.0, 0.2, 0.1;
  Matrix5d g = chart.metric(x);
  EXPECT_NEAR(g(0, 0), 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(g(1, 1), 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(g(2, 2), 0.5, 1e-15);
  EXPECT_NEAR(g(3, 3), 1.0 / 18.0, 1e-15);
  EXPECT_NEAR(g(4, 4), 1.0 / 9.0, 1e-15);
  EXPECT_NEAR(g(3, 4), 0.0, 1e-15);
  EXPECT_LE((g - g.transpose()).norm(), 0.0);
  EXPECT_EQ(g.llt().info(), Eigen::Success);
}

TEST(Geometry, OrbitBlockDegeneratesAtBoxEnds) {
  YpqChart chart(-9.0 / 2197.0, 6.0);
  Vector5d x;
  x << 1.0, 0.3, 0.0, 0.2, 0.1;
  // wq has a simple zero. The orbit block (all but y) degenerates linearly, while
  // g_yy = 1/wq compensates so the full determinant tends to a positive limit.
  std::vector<double> orbit, full;
  for (double eps : {1e-2, 1e-4, 1e-6}) {
    x[2] = chart.y_max() - eps;
    Matrix5d g = chart.metric(x);
    Eigen::Matrix4d o;
    const int idx[4] = {0, 1, 3, 4};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) o(i, j) = g(idx[i], idx[j]);
    orbit.push_back(o.determinant());
    full.push_back(g.determinant());
    EXPECT_GT(orbit.back(), 0.0);
  }
  EXPECT_NEAR(orbit[1] / orbit[0], 1e-2, 2e-3);
  EXPECT_NEAR(orbit[2] / orbit[1], 1e-2, 2e-5);
  EXPECT_NEAR(full[2] / full[1], 1.0, 1e-3);
  EXPECT_GT(full[2], 0.0);
  x[2] = chart.y_max() + 0.01;
  EXPECT_THROW(chart.require_inside(x), Error);
}

TEST(Geometry, FlatTorusHasZeroRicci) {
  FlatTorusChart torus({1.0, 2.0, 0.5, 3.0, 1.5});
  Vector5d x = Vector5d::Constant(0.3);
  CurvatureReport r = ricci_fd(torus, x, 1e-3, 0.0);
  EXPECT_LE(r.ricci.cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Geometry, RoundSphereOracle) {
  RoundSphereChart sphere;
  Vector5d x;
  x << 0.9, 1.1, 0.7, 0.4, 0.2;
  CurvatureReport r = ricci_fd(sphere, x, 1e-3);
  EXPECT_LE(r.einstein_residual, 1e-4);
  EXPECT_NEAR(r.sectional_min, 1.0, 1e-3);
  EXPECT_NEAR(r.sectional_max, 1.0, 1e-3);
}

TEST(Geometry, EinsteinOnChartsWithConvergence) {
  for (auto [A, C] : {std::pair{0.0, 1.0}, std::pair{-9.0 / 2197.0, 6.0}}) {
    YpqChart chart(A, C);
    for (const Vector5d& x : chart.sample_points(3, 99)) {
      CurvatureReport r = ricci_fd(chart, x, 1e-3);
      CurvatureReport r2 = ricci_fd(chart, x, 5e-4);
      EXPECT_LE(r.einstein_residual, 1e-4);
      EXPECT_GE(r.einstein_residual / r2.einstein_residual, 8.0);
      EXPECT_LE(r.ricci_asymmetry, 1e-8);
    }
  }
  // Sphere chart has unit sectional curvature.
  YpqChart sphere(0.0, 1.0);
  CurvatureReport r = ricci_fd(sphere, sphere.sample_points(1, 4)[0], 1e-3);
  EXPECT_LE(r.sectional_spread(), 1e-3);
  EXPECT_NEAR(r.sectional_min, 1.0, 1e-3);
}

TEST(Geometry, FrameMatchesChart) {
  const double A = -9.0 / 2197.0, C = 6.0;
  YpqChart chart(A, C);
  for (const Vector5d& x : chart.sample_points(10, 5)) {
    CaseIIState s = case_ii_from_A(std::sqrt((1.0 - x[2]) / 6.0), A, C, 0);
    EXPECT_LE((frame_metric_in_chart(s, x[0], x[4]) - chart.metric(x)).cwiseAbs().maxCoeff(), 1e-9);
  }
}
