#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sasaki/boundary.hpp"
#include "sasaki/evolution.hpp"
#include "sasaki/moduli.hpp"

using namespace sasaki;

namespace {

// Closed-form rule for tau = r^j: sigma | n, j >= |n/sigma| and j - |n/sigma| even.
bool monomial_rule(int j, int sigma, int n) {
  if (n % sigma != 0) return false;
  int w = std::abs(n / sigma);
  return j >= w && (j - w) % 2 == 0;
}

TaylorData monomial(int j, int sigma, int n, int order) {
  TaylorData d;
  d.coefficients.assign(order + 1, 0.0);
  d.coefficients[j] = 1.0;
  d.sigma = sigma;
  d.n = n;
  return d;
}

const Condition* find(const ExtensionReport& r, const std::string& name) {
  for (const Condition& c : r.conditions)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace

TEST(KazdanWarner, Examples) {
  EXPECT_TRUE(kw_extends(monomial(2, 1, 2, 6)).extends);
  KwResult one = kw_extends(monomial(0, 1, 2, 6));
  EXPECT_FALSE(one.extends);
  EXPECT_EQ(one.failing_index, 0);
  EXPECT_TRUE(kw_extends(monomial(3, 2, 2, 6)).extends);
  EXPECT_THROW(kw_extends(monomial(1, 0, 2, 6)), Error);
  EXPECT_THROW(kw_extends(monomial(1, -1, 2, 6)), Error);
  EXPECT_THROW(kw_extends(monomial(1, 1, 6, 6)), Error);  // N < |n/sigma| + 2
}

TEST(KazdanWarner, RandomMonomialsMatchRule) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> jd(0, 9), sd(1, 4), nd(-8, 8);
  for (int trial = 0; trial < 40; ++trial) {
    int j = jd(rng), s = sd(rng), n = nd(rng);
    int order = std::max(j, std::abs(n) + 2);
    KwResult r = kw_extends(monomial(j, s, n, order));
    EXPECT_EQ(r.extends, monomial_rule(j, s, n)) << "j=" << j << " sigma=" << s << " n=" << n;
  }
}

TEST(KazdanWarner, MonotoneUnderEvenPowers) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> jd(0, 6), sd(1, 3), nd(-6, 6);
  for (int trial = 0; trial < 20; ++trial) {
    int j = jd(rng), s = sd(rng), n = nd(rng);
    int order = std::abs(n) + 2 + 12;
    if (!kw_extends(monomial(j, s, n, order)).extends) continue;
    for (int extra : {2, 4, 6}) EXPECT_TRUE(kw_extends(monomial(j + extra, s, n, order)).extends);
  }
}

TEST(ParityDetector, Monomials) {
  RadialGrid grid;
  auto r = grid.radii();
  for (int j = 0; j <= 8; ++j) {
    std::vector<double> f;
    for (double x : r) f.push_back(std::pow(x, j));
    EXPECT_EQ(is_even(r, f, 1e-9), j % 2 == 0) << "j=" << j;
  }
}

TEST(ParityDetector, ErrorOnTooFewSamples) {
  std::vector<double> r{1e-3, 2e-3, 4e-3}, f{1, 1, 1};
  EXPECT_THROW(fit_series(r, f, 8), Error);
}

TEST(RoundBranch, SphereEnd) {
  EndProfile p = case_ii_end_profile(0.0, EndSide::Minus);
  ExtensionReport rep = check_round_branch(p);
  EXPECT_TRUE(rep.applicable);
  EXPECT_TRUE(rep.pass()) << rep.obstruction;
  const Condition* lim = find(rep, "round.delta_over_r2.limit");
  ASSERT_NE(lim, nullptr);
  EXPECT_NEAR(lim->measured, 0.25, 1e-6);
  // Oracle: h = sin(r)/2 solves h' = sqrt(1/4 - h^2), h(0) = 0.
  for (const EndSample& s : p.samples) EXPECT_NEAR(s.h, 0.5 * std::sin(s.r), 1e-12);
}

TEST(RoundBranch, InapplicableForNegativeA) {
  EndProfile p = case_ii_end_profile(-9.0 / 2197.0, EndSide::Minus);
  ExtensionReport rep = check_round_branch(p);
  EXPECT_FALSE(rep.applicable);
  EXPECT_FALSE(rep.pass());
}

TEST(CircleBranch, YpqEndsWithClassifiedIntegers) {
  Verdict v = classify_A(Rational(-9, 2197), Rational(6), 0);
  FamilyExtension ext = check_family(v);
  EXPECT_TRUE(ext.minus.pass()) << ext.minus.obstruction;
  EXPECT_TRUE(ext.plus.pass()) << ext.plus.obstruction;
  const Condition* dd = find(ext.plus, "circle.delta_dd.witness");
  ASSERT_NE(dd, nullptr);
  EXPECT_NEAR(dd->target, 5.0 / 13.0, 1e-15);
  const Condition* d0 = find(ext.plus, "circle.delta0.witness");
  ASSERT_NE(d0, nullptr);
  EXPECT_NEAR(d0->measured, 3.0 / 13.0, 1e-9);
}

TEST(CircleBranch, SphereFamilyBothEnds) {
  FamilyExtension ext = check_family(classify_A(Rational(0), Rational(8), 1));
  EXPECT_EQ(ext.minus.branch, ExtensionBranch::RoundSU2);
  EXPECT_TRUE(ext.pass());
}

TEST(CircleBranch, DegenerateDeltaSixth) {
  EndProfile p;
  p.family = "synthetic";
  for (double r : RadialGrid{}.radii()) {
    EndSample s;
    s.r = r;
    s.delta = 1.0 / 6.0;
    p.samples.push_back(s);
  }
  ExtensionReport rep = check_circle_branch(p, std::nullopt);
  EXPECT_FALSE(rep.pass());
  const Condition* c = find(rep, "circle.delta_dd.nondegenerate");
  ASSERT_NE(c, nullptr);
  EXPECT_FALSE(c->pass);
}

TEST(CircleBranch, WitnessSignError) {
  EndProfile p = case_ii_end_profile(-9.0 / 2197.0, EndSide::Plus);
  CircleWitness w;
  w.q = 3;
  w.sigma = 1;
  w.C = Rational(-10);
  w.m = 0;  // p + qC = 1 - 30 < 0
  EXPECT_THROW(check_circle_branch(p, w), Error);
}

TEST(EndpointIdentity, FiniteDifferenceSecondDerivative) {
  // Delta'' at the turning points from the flow samples versus 1 - 6 Delta.
  for (double A : {-9.0 / 2197.0, -0.004, -0.008}) {
    CaseIIState s0 = case_ii_from_A(std::sqrt(cubic_roots(A).delta_minus + 0.02), A, 1.0, 0);
    CaseIIInterval iv = maximal_case_ii(s0);
    for (const FlowResult* f : {&iv.forward, &iv.backward}) {
      const double tend = f->stop_time;
      // Least-squares quartic in (t - t_end) over the last 0.02 of samples.
      std::vector<std::pair<double, double>> pts;
      for (const FlowSample& x : f->samples)
        if (std::abs(x.t - tend) <= 0.02) pts.emplace_back(x.t - tend, x.state[0] * x.state[0]);
      ASSERT_GT(pts.size(), 50u);
      Eigen::MatrixXd V(pts.size(), 6);
      Eigen::VectorXd y(pts.size());
      for (std::size_t i = 0; i < pts.size(); ++i) {
        double s = pts[i].first / 0.02;
        for (int k = 0; k < 6; ++k) V(i, k) = std::pow(s, k);
        y[i] = pts[i].second;
      }
      Eigen::VectorXd c = V.colPivHouseholderQr().solve(y);
      double delta_end = c[0], dd = 2 * c[2] / (0.02 * 0.02);
      EXPECT_NEAR(dd, 1 - 6 * delta_end, 1e-6) << "A=" << A;
    }
  }
}

TEST(EndProfile, CaseIIProfileMatchesFlow) {
  const double A = -9.0 / 2197.0;
  CaseIIState s0 = case_ii_from_A(0.3, A, 6.0, 0);
  CaseIIInterval iv = maximal_case_ii(s0);
  EndProfile p = case_ii_end_profile(A, EndSide::Plus);
  const auto& fs = iv.forward.samples;
  for (const EndSample& e : p.samples) {
    double t = iv.t_plus - e.r;
    auto it = std::lower_bound(fs.begin(), fs.end(), t, [](const FlowSample& x, double v) { return x.t < v; });
    ASSERT_TRUE(it != fs.begin() && it != fs.end());
    const FlowSample& hi = *it;
    const FlowSample& lo = *(it - 1);
    double w = (t - lo.t) / (hi.t - lo.t);
    double D = (1 - w) * lo.state[0] * lo.state[0] + w * hi.state[0] * hi.state[0];
    EXPECT_NEAR(e.delta, D, 1e-8) << "r=" << e.r;
  }
}

TEST(CaseIIIRejection, ExampleFlow) {
  CaseIIIState s;
  s.h = 0.4;
  s.k = 0.3;
  s.b = 0.0;
  s.c = 0.1;
  s.a = 0.2;
  s.m = 1;
  CaseIIIRejection rej = reject_case_iii(s);
  EXPECT_EQ(rej.report.branch, ExtensionBranch::Reject);
  EXPECT_FALSE(rej.report.obstruction.empty());
  ASSERT_EQ(rej.ends.size(), 4u);
  // The forced value under the round hypothesis is reported at the backward end.
  {
    const Condition* forced = find(rej.ends[0], "round.rVr_over_V.forced");
    ASSERT_NE(forced, nullptr);
    EXPECT_EQ(forced->target, -3.0);
  }
  // Both branches fail at the backward end.
  EXPECT_FALSE(rej.ends[0].pass());
  EXPECT_FALSE(rej.ends[1].pass());

  CaseIIIState disguised;
  disguised.h = disguised.k = 0.4;
  disguised.a = 0.2;
  EXPECT_THROW(reject_case_iii(disguised), Error);
}
