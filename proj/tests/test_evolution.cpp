#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sasaki/evolution.hpp"

using namespace sasaki;

TEST(Evolution, CaseIClosedFormAtOrigin) {
  IdStructure eta = closed_form_case_i(1.0, 0, 0.0);
  EXPECT_DOUBLE_EQ(eta.eta(0, 0), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(eta.eta(0, 3), 1.0);
  EXPECT_EQ(eta.eta.row(1).norm(), 0.0);
  EXPECT_DOUBLE_EQ(eta.eta(2, 1), 1.0 / std::sqrt(6.0));
  EXPECT_DOUBLE_EQ(eta.eta(3, 2), 1.0 / std::sqrt(6.0));
}

TEST(Evolution, CaseIDerivativeAndHypo) {
  for (int m : {0, 2}) {
    for (int i = 0; i < 50; ++i) {
      double t = -2.0 + 0.1 * i;
      EXPECT_LE(residual_hypo(closed_form_case_i(1.3, m, t)).max(), 1e-12);
      // d eta0/dt = 2 eta1, checked by central difference.
      double h = 1e-5;
      Eigen::Matrix4d fd = (closed_form_case_i(1.3, m, t + h).eta - closed_form_case_i(1.3, m, t - h).eta) / (2 * h);
      EXPECT_LE((fd.row(0) - 2.0 * closed_form_case_i(1.3, m, t).eta.row(1)).norm(), 1e-8);
      EXPECT_LE((fd - closed_form_case_i_derivative(1.3, m, t)).cwiseAbs().maxCoeff(), 1e-8);
    }
  }
}

TEST(Evolution, GeneralFlowFromHomogeneousDataMatchesCaseI) {
  IdStructure eta0 = homogeneous_structure();
  CaseIFit fit = fit_case_i(eta0);
  FlowResult flow = evolve_general(eta0, 0.0, 1.0);
  ASSERT_EQ(flow.reason, StopReason::Completed);
  double worst = 0.0;
  for (const FlowSample& s : flow.samples)
    worst = std::max(worst, (s.eta.eta - closed_form_case_i(fit.k, 0, s.t + fit.shift).eta).cwiseAbs().maxCoeff());
  EXPECT_LE(worst, 1e-8);
  EXPECT_LE(flow.max_lsq_residual(), 1e-9);
}

TEST(Evolution, GeneralFlowStaysInCaseII) {
  CaseIIState s0 = case_ii_from_A(0.35, -9.0 / 2197.0, 6.0, 0);
  IntegratorConfig cfg;
  cfg.sample_every = 100;
  FlowResult general = evolve_general(s0.structure(), 0.0, 0.2, cfg);
  FlowResult direct = evolve_case_ii(s0, 0.0, 0.2, cfg);
  ASSERT_EQ(general.samples.size(), direct.samples.size());
  for (std::size_t i = 0; i < general.samples.size(); ++i) {
    const auto& g = general.samples[i].eta.eta;
    EXPECT_LE(std::abs(g(2, 0)) + std::abs(g(2, 2)) + std::abs(g(2, 3)), 1e-9);
    EXPECT_LE(std::abs(g(3, 0)) + std::abs(g(3, 1)) + std::abs(g(3, 3)), 1e-9);
    EXPECT_LE((g - direct.samples[i].eta.eta).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Evolution, StationaryPoint) {
  CaseIIState s0;
  s0.h = 1.0 / std::sqrt(6.0);
  s0.a = 0.0;
  s0.C = 1.0;
  EXPECT_NEAR(s0.invariant_A(), -1.0 / 108.0, 1e-17);
  FlowResult general = evolve_general(s0.structure(), 0.0, 0.5);
  for (const FlowSample& s : general.samples)
    EXPECT_LE((s.eta.eta - s0.structure().eta).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Evolution, GeneralFlowRejectsNonSolution) {
  IdStructure eta = homogeneous_structure();
  eta.eta.row(2) *= 2.0;
  FlowResult flow = evolve_general(eta, 0.0, 0.1);
  EXPECT_EQ(flow.reason, StopReason::ConstraintIncompatible);
}

TEST(Evolution, TurningPoints) {
  TurningPoints zero = turning_points(0.0);
  ASSERT_EQ(zero.h.size(), 1u);
  EXPECT_NEAR(zero.h[0], 0.5, 1e-15);
  TurningPoints ypq = turning_points(-9.0 / 2197.0);
  ASSERT_EQ(ypq.h.size(), 2u);
  EXPECT_NEAR(ypq.h[0], std::sqrt(1.0 / 13.0), 1e-14);
  EXPECT_NEAR(ypq.h[1], std::sqrt(3.0 / 13.0), 1e-14);
  TurningPoints dbl = turning_points(-1.0 / 108.0);
  ASSERT_EQ(dbl.h.size(), 1u);
  EXPECT_NEAR(dbl.h[0], 1.0 / std::sqrt(6.0), 1e-7);
  EXPECT_EQ(dbl.multiplicity[0], 2);
  EXPECT_THROW(turning_points(-0.01), Error);
}

TEST(Evolution, CaseIIMonotoneTowardUpperTurningPoint) {
  CaseIIState s0 = case_ii_from_A(0.3, -9.0 / 2197.0, 6.0, 0);
  CaseIIInterval iv = maximal_case_ii(s0);
  EXPECT_EQ(iv.forward.reason, StopReason::TurningPoint);
  double prev = 0.0;
  for (const FlowSample& s : iv.forward.samples) {
    EXPECT_GE(s.state[0], prev);
    prev = s.state[0];
  }
  EXPECT_NEAR(prev, std::sqrt(3.0 / 13.0), 1e-6);
  // Quadrature oracle: Delta' = a with a^2 Delta = A + Delta^2 - 4 Delta^3, so
  // dt = sqrt(Delta) dDelta / sqrt(A + Delta^2 - 4 Delta^3); substitute Delta = D+ - s^2.
  const double A = -9.0 / 2197.0, Dp = 3.0 / 13.0, D0 = 0.09;
  double smax = std::sqrt(Dp - D0), sum = 0.0;
  int n = 20000;
  for (int i = 0; i < n; ++i) {
    double s = (i + 0.5) * smax / n, D = Dp - s * s;
    sum += 2 * s * std::sqrt(D) / std::sqrt(A + D * D - 4 * D * D * D) * (smax / n);
  }
  EXPECT_NEAR(iv.t_plus, sum, 1e-5);
}

TEST(Evolution, CaseIIConservesA) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> hu(0.3, 0.45), Au(-0.009, -0.001);
  for (int trial = 0; trial < 5; ++trial) {
    CaseIIState s0 = case_ii_from_A(hu(rng), Au(rng), 1.0, 0);
    FlowResult f = evolve_case_ii(s0, 0.0, 1.0);
    double A0 = s0.invariant_A();
    for (const FlowSample& s : f.samples) EXPECT_LE(s.drift[0], 1e-8);
    CaseIIState last;
    last.h = f.samples.back().state[0];
    last.a = f.samples.back().state[1];
    EXPECT_LE(std::abs(last.invariant_A() - A0) / std::abs(A0), 1e-8);
  }
}

TEST(Evolution, CaseIIIPreconditionAndConservation) {
  CaseIIIState disguised;
  disguised.h = disguised.k = 0.4;
  disguised.a = 0.2;
  EXPECT_TRUE(disguised.is_case_ii_in_disguise());
  EXPECT_THROW(evolve_case_iii(disguised, 0.0, 1.0), Error);

  CaseIIIState s;
  s.h = 0.4;
  s.k = 0.3;
  s.b = 0.0;
  s.c = 0.1;
  s.a = 0.2;
  s.m = 1;
  CaseIIIInterval iv = maximal_case_iii(s);
  for (const FlowResult* f : {&iv.backward, &iv.forward}) {
    ASSERT_GT(f->samples.size(), 10u);
    for (const FlowSample& x : f->samples) {
      EXPECT_LE(x.drift[0], 1e-8);
      EXPECT_LE(x.drift[1], 1e-8);
      EXPECT_GT(x.state[0] * x.state[1] - x.state[2] * x.state[3], 0.0);
    }
  }
  // d Delta / dt = a along the flow.
  const auto& fw = iv.forward.samples;
  for (std::size_t i = 1; i + 1 < std::min<std::size_t>(fw.size(), 200); ++i) {
    auto delta = [&](std::size_t j) {
      return fw[j].state[0] * fw[j].state[1] - fw[j].state[2] * fw[j].state[3];
    };
    // Three-point derivative on the non-uniform sample grid.
    double h1 = fw[i].t - fw[i - 1].t, h2 = fw[i + 1].t - fw[i].t;
    double d = -h2 / (h1 * (h1 + h2)) * delta(i - 1) + (h2 - h1) / (h1 * h2) * delta(i) +
               h1 / (h2 * (h1 + h2)) * delta(i + 1);
    // The stencil itself is second order in the spacing.
    EXPECT_NEAR(d, fw[i].state[4], 1e-8 + std::max(h1, h2) * std::max(h1, h2));
  }
}

TEST(Evolution, SignChangeReversesTime) {
  CaseIIState s0 = case_ii_from_A(0.35, -9.0 / 2197.0, 6.0, 0);
  IntegratorConfig cfg;
  cfg.sample_every = 200;
  FlowResult fwd = evolve_general(s0.structure(), 0.0, 0.2, cfg);
  FlowResult bwd = evolve_general(sign_change(s0.structure()), 0.0, -0.2, cfg);
  ASSERT_EQ(fwd.samples.size(), bwd.samples.size());
  const std::size_t n = fwd.samples.size();  // backward samples are stored in ascending t
  for (std::size_t i = 0; i < n; ++i) {
    const FlowSample& b = bwd.samples[n - 1 - i];
    EXPECT_NEAR(b.t, -fwd.samples[i].t, 1e-12);
    EXPECT_LE((sign_change(fwd.samples[i].eta).eta - b.eta.eta).cwiseAbs().maxCoeff(), 1e-9);
  }
}
