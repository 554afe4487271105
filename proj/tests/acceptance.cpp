// One line per acceptance criterion; exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "sasaki/boundary.hpp"
#include "sasaki/evolution.hpp"
#include "sasaki/geometry.hpp"
#include "sasaki/moduli.hpp"

using namespace sasaki;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void run(int id, const std::string& title, double limit_seconds, const std::function<Outcome()>& body) {
  auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool in_time = secs <= limit_seconds;
  bool ok = o.pass && in_time;
  if (!ok) ++failures;
  std::printf("[%s] criterion %d: %s | %s | %.2f s (limit %.0f s)%s\n", ok ? "PASS" : "FAIL", id, title.c_str(),
              o.detail.c_str(), secs, limit_seconds, in_time ? "" : " TOO SLOW");
  std::fflush(stdout);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// Admissible case-ii start: A in (-1/108, 0), h strictly between the turning points.
CaseIIState random_case_ii(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> Au(-1.0 / 108.0 + 1e-4, -1e-4), w(0.1, 0.9);
  double A = Au(rng);
  CubicRoots r = cubic_roots(A);
  double D = r.delta_minus + w(rng) * (r.delta_plus - r.delta_minus);
  return case_ii_from_A(std::sqrt(D), A, 1.0, 0);
}

Outcome criterion1() {
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) worst = std::max(worst, residual_hypo(closed_form_case_i(1.0, 0, 0.05 * i)).max());
  double worst_i = worst;
  CaseIIState s0 = case_ii_from_A(0.3, -9.0 / 2197.0, 6.0, 0);
  IntegratorConfig cfg;
  cfg.sample_every = 10;
  FlowResult f = evolve_case_ii(s0, 0.0, 0.1, cfg);  // 101 samples at step 1e-4
  int used = 0;
  for (const FlowSample& s : f.samples) {
    if (used == 100) break;
    worst = std::max(worst, residual_hypo(s.eta).max());
    ++used;
  }
  return {worst <= 1e-9 && used == 100,
          "case i max " + fmt(worst_i) + ", overall max " + fmt(worst) + " over 100+" + std::to_string(used) + " times"};
}

Outcome criterion2() {
  std::mt19937_64 rng(101);
  double worst = 0.0;
  int accepted = 0, drawn = 0;
  while (accepted < 10 && drawn < 1000) {
    ++drawn;
    CaseIIState s0 = random_case_ii(rng);
    IntegratorConfig cfg;
    cfg.step = 1e-4;
    FlowResult f = evolve_case_ii(s0, 0.0, 1.0, cfg);
    // Only starts that flow for the whole unit time count.
    if (f.reason != StopReason::Completed) continue;
    ++accepted;
    for (const FlowSample& s : f.samples) worst = std::max(worst, s.drift[0]);
  }
  return {accepted == 10 && worst <= 1e-8, "max relative A drift " + fmt(worst) + " over " +
                                               std::to_string(accepted) + " unit-time flows (" +
                                               std::to_string(drawn) + " starts drawn)"};
}

Outcome criterion3() {
  FamilyTag tag = ypq_family(0.42, 0.3, 0.8, 0);
  IntegratorConfig cfg;
  cfg.step = 1e-4;
  cfg.sample_every = 10;
  FlowResult f = evolve_general(tag.structure(), 0.0, 1.0, cfg);
  double span = f.samples.back().t;
  bool ok = f.max_hypo_residual() <= 1e-7 && f.max_lsq_residual() <= 1e-9 && f.reason == StopReason::Completed;
  return {ok, "hypo max " + fmt(f.max_hypo_residual()) + ", lsq max " + fmt(f.max_lsq_residual()) + ", span " +
                  fmt(span) + ", " + to_string(f.reason)};
}

Outcome criterion4() {
  bool ok = true;
  std::ostringstream d;
  for (auto [A, C, name] : {std::tuple{0.0, 1.0, "A=0"}, std::tuple{-9.0 / 2197.0, 6.0, "A=-9/2197"}}) {
    YpqChart chart(A, C);
    double worst = 0.0, worst_ratio = 1e300;
    for (const Vector5d& x : chart.sample_points(10, 20240611)) {
      CurvatureReport r = ricci_fd(chart, x, 1e-3);
      CurvatureReport r2 = ricci_fd(chart, x, 5e-4);
      worst = std::max(worst, r.einstein_residual);
      worst_ratio = std::min(worst_ratio, r.einstein_residual / r2.einstein_residual);
    }
    ok = ok && worst <= 1e-4 && worst_ratio >= 8.0;
    d << name << ": max residual " << fmt(worst) << ", min halving ratio " << fmt(worst_ratio) << "; ";
  }
  return {ok, d.str()};
}

Outcome criterion5() {
  ExactCubicRoots r = cubic_roots_exact(Rational(-1, 108));
  bool dbl = r.rational && r.roots.size() == 2 && r.roots[1] == Rational(1, 6) && r.multiplicity[1] == 2 &&
             cubic_value(Rational(-1, 108), Rational(1, 6)) == 0;
  bool found = false;
  for (const YpqFamily& f : enumerate_rational_families(13))
    if (f.delta_minus == Rational(1, 13) && f.delta_plus == Rational(3, 13) && f.A == Rational(-9, 2197) &&
        cubic_value(f.A, f.delta_minus) == 0 && cubic_value(f.A, f.delta_plus) == 0)
      found = true;
  return {dbl && found, std::string("double root 1/6 ") + (dbl ? "exact" : "missing") + ", (1/13,3/13,-9/2197) " +
                            (found ? "emitted with zero remainder" : "missing")};
}

Outcome criterion6() {
  std::mt19937_64 rng(606);
  std::uniform_int_distribution<int> qd(-15, 15), sd(1, 12), md(-2, 2);
  int agree = 0, total = 0, connected = 0;
  while (total < 50) {
    int qm = qd(rng), qp = qd(rng), sm = sd(rng), sp = sd(rng), m = md(rng);
    // p + qC = 0 has no isotropy circle; such candidates are not families.
    if (qm == 0 || qp == 0 || qm * (m + 1) + sm == 0 || qp * (m + 1) + sp == 0) continue;
    EndData em = end_data(Rational(qm, sm), Rational(1), m), ep = end_data(Rational(qp, sp), Rational(1), m);
    GroupDiagram d = build_diagram(em, ep, m);
    bool expect = gcd(em.q, ep.q) == 1;
    agree += (d.simply_connected == expect);
    connected += expect;
    ++total;
  }
  return {agree == total, std::to_string(agree) + "/" + std::to_string(total) + " agree (" +
                              std::to_string(connected) + " coprime)"};
}

Outcome criterion7() {
  auto mono = [](int j, int s, int n, int order) {
    TaylorData d;
    d.coefficients.assign(order + 1, 0.0);
    d.coefficients[j] = 1.0;
    d.sigma = s;
    d.n = n;
    return d;
  };
  int ok = 0;
  ok += kw_extends(mono(2, 1, 2, 6)).extends;
  KwResult f = kw_extends(mono(0, 1, 2, 6));
  ok += !f.extends && f.failing_index == 0;
  ok += kw_extends(mono(3, 2, 2, 6)).extends;
  std::mt19937_64 rng(707);
  std::uniform_int_distribution<int> jd(0, 9), sd(1, 4), nd(-8, 8), cd(-3, 3);
  int random_ok = 0;
  for (int i = 0; i < 20; ++i) {
    // A random polynomial: the verdict must follow the rule on its support.
    int s = sd(rng), n = nd(rng);
    int order = std::max(9, std::abs(n) + 2);
    TaylorData d = mono(0, s, n, order);
    d.coefficients[0] = 0.0;
    int terms = 1 + i % 3;
    for (int t = 0; t < terms; ++t) {
      int j = jd(rng);
      double c = cd(rng);
      if (c == 0) c = 1;
      d.coefficients[j] += c;
    }
    bool expect = n % s == 0;
    int w = expect ? std::abs(n / s) : 0;
    for (int k = 0; k <= order && expect; ++k)
      if (d.coefficients[k] != 0.0 && (k < w || (k - w) % 2 != 0)) expect = false;
    random_ok += kw_extends(d).extends == expect;
  }
  return {ok == 3 && random_ok == 20,
          std::to_string(ok) + "/3 examples, " + std::to_string(random_ok) + "/20 randomized cases"};
}

Outcome criterion8() {
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> hk(0.1, 0.6), cu(-0.3, 0.3), au(0.05, 0.55);
  int rejected = 0, forced_reported = 0, forward_forced = 0, tried = 0;
  std::string first;
  while (tried < 20) {
    CaseIIIState s;
    s.h = hk(rng);
    s.k = hk(rng);
    s.b = 0.0;
    s.c = cu(rng);
    s.a = au(rng);
    s.m = 1;
    if (s.delta() <= 0.01 || s.is_case_ii_in_disguise()) continue;
    ++tried;
    CaseIIIRejection rej = reject_case_iii(s);
    if (rej.report.branch == ExtensionBranch::Reject && !rej.report.obstruction.empty()) ++rejected;
    if (first.empty()) first = rej.report.obstruction;
    // The -3 check needs resolvable V; at forward circle ends V can underflow.
    auto has_forced = [&](int i) {
      for (const Condition& c : rej.ends[i].conditions)
        if (c.name == "round.rVr_over_V.forced") return true;
      return false;
    };
    forced_reported += has_forced(0);
    forward_forced += has_forced(2);
  }
  return {rejected == 20 && forced_reported == 20,
          std::to_string(rejected) + "/20 rejected, -3 check at the backward end " +
              std::to_string(forced_reported) + "/20 (forward end " + std::to_string(forward_forced) +
              "/20); e.g. " + first};
}

Outcome criterion9() {
  const double A = -9.0 / 2197.0, C = 6.0;
  YpqChart chart(A, C);
  double worst = 0.0;
  for (const Vector5d& x : chart.sample_points(10, 909)) {
    CaseIIState s = case_ii_from_A(std::sqrt((1.0 - x[2]) / 6.0), A, C, 0);
    worst = std::max(worst, (frame_metric_in_chart(s, x[0], x[4]) - chart.metric(x)).cwiseAbs().maxCoeff());
  }
  return {worst <= 1e-9, "max entrywise difference " + fmt(worst) + " at 10 points"};
}

}  // namespace

int main() {
  run(1, "structure equations hold on case i and case ii", 1, criterion1);
  run(2, "A conserved along case ii", 10, criterion2);
  run(3, "general flow propagates constraints", 30, criterion3);
  run(4, "Einstein residual and fd convergence", 60, criterion4);
  run(5, "exact cubic roots and the 1/13 family", 60, criterion5);
  run(6, "simply connected iff gcd(q+,q-)=1", 60, criterion6);
  run(7, "Kazdan-Warner rule", 60, criterion7);
  run(8, "case iii flows rejected", 60, criterion8);
  run(9, "frame metric matches chart metric", 60, criterion9);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
