#include "sasaki/moduli.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace sasaki {

namespace {

const Rational kMinA(-1, 108);

Integer abs_int(const Integer& x) { return x < 0 ? Integer(-x) : x; }

Integer gcd_int(const Integer& a, const Integer& b) {
  return boost::multiprecision::gcd(abs_int(a), abs_int(b));
}

double bisect(double A, double lo, double hi) {
  auto g = [A](double d) { return A + d * d - 4.0 * d * d * d; };
  double glo = g(lo);
  for (int i = 0; i < 200 && hi - lo > 0; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    double gm = g(mid);
    if ((gm < 0) == (glo < 0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// All real roots of A + D^2 - 4D^3 in floating point, ascending.
std::vector<double> real_roots_float(double A) {
  std::vector<double> out;
  if (A > 0) {
    double hi = 1.0;
    while (A + hi * hi - 4 * hi * hi * hi > 0) hi *= 2;
    out.push_back(bisect(A, 0.25, hi));
    return out;
  }
  if (A == 0) return {0.0, 0.0, 0.25};
  // Negative root: g(0) = A < 0, g -> +inf as D -> -inf.
  double lo = -1.0;
  while (A + lo * lo - 4 * lo * lo * lo < 0) lo *= 2;
  out.push_back(bisect(A, lo, 0.0));
  if (A >= -1.0 / 108.0) {
    out.push_back(bisect(A, 0.0, 1.0 / 6.0));
    out.push_back(bisect(A, 1.0 / 6.0, 0.25));
  }
  return out;
}

}  // namespace

CubicRoots cubic_roots(double A) {
  CubicRoots out;
  constexpr double kMin = -1.0 / 108.0;
  if (A < kMin && std::abs(A - kMin) > 1e-16) {
    throw Error("no compact family: A < -1/108 leaves no positive root");
  }
  if (std::abs(A - kMin) <= 1e-16) {
    out.roots = {1.0 / 6.0};
    out.multiplicity = {2};
    out.delta_minus = out.delta_plus = 1.0 / 6.0;
    return out;
  }
  if (A == 0.0) {
    out.roots = {0.0, 0.25};
    out.multiplicity = {2, 1};
    out.delta_minus = 0.0;
    out.delta_plus = 0.25;
    return out;
  }
  if (A > 0) {
    out.roots = {real_roots_float(A)[0]};
    out.multiplicity = {1};
    out.delta_plus = out.roots[0];
    return out;
  }
  out.delta_minus = bisect(A, 0.0, 1.0 / 6.0);
  out.delta_plus = bisect(A, 1.0 / 6.0, 0.25);
  out.roots = {out.delta_minus, out.delta_plus};
  out.multiplicity = {1, 1};
  out.two_distinct_positive = true;
  return out;
}

Rational cubic_value(const Rational& A, const Rational& d) { return A + d * d - 4 * d * d * d; }

ExactCubicRoots cubic_roots_exact(const Rational& A) {
  ExactCubicRoots out;
  out.approximate = real_roots_float(to_double(A));
  std::vector<Rational> found;
  if (A == 0) {
    found = {Rational(0), Rational(0), Rational(1, 4)};
  } else if (A == kMinA) {
    found = {Rational(-1, 12), Rational(1, 6), Rational(1, 6)};
  } else {
    // Rational roots have denominators dividing 4 den(A).
    Integer bound = 4 * denominator_of(A);
    const Integer cap = 10'000'000;
    if (bound > cap) bound = cap;
    std::optional<Rational> root;
    for (double x : out.approximate) {
      Rational r = rationalize(x, bound);
      if (cubic_value(A, r) == 0) {
        root = r;
        break;
      }
    }
    if (root) {
      Rational r = *root;
      found.push_back(r);
      // 4D^3 - D^2 - A = (D - r)(4D^2 + (4r - 1)D + (4r - 1)r).
      Rational beta = 4 * r - 1, gamma = beta * r;
      Rational disc = beta * beta - 16 * gamma;
      if (disc == 0) {
        found.push_back(-beta / 8);
        found.push_back(-beta / 8);
      } else if (disc > 0) {
        if (auto s = rational_sqrt(disc)) {
          found.push_back((-beta - *s) / 8);
          found.push_back((-beta + *s) / 8);
        } else {
          out.rational = false;
          return out;
        }
      }
    } else {
      out.rational = false;
      return out;
    }
  }
  std::sort(found.begin(), found.end());
  for (const Rational& r : found) {
    if (!out.roots.empty() && out.roots.back() == r) {
      ++out.multiplicity.back();
    } else {
      out.roots.push_back(r);
      out.multiplicity.push_back(1);
    }
  }
  out.rational = true;
  return out;
}

double ratio_from_root(double delta, double C, int m) {
  if (delta == 1.0 / 6.0) throw Error("ratio_from_root: Delta = 1/6");
  if (C + m == 0.0) throw Error("ratio_from_root: C + m = 0");
  return 6.0 * delta / ((1.0 - 6.0 * delta) * (C + m));
}

Rational ratio_from_root(const Rational& delta, const Rational& C, int m) {
  if (delta == Rational(1, 6)) throw Error("ratio_from_root: Delta = 1/6");
  if (C + m == 0) throw Error("ratio_from_root: C + m = 0");
  return 6 * delta / ((1 - 6 * delta) * (C + m));
}

EndData end_data(const Rational& ratio, const Rational& C, int m) {
  EndData e;
  e.ratio = ratio;
  Integer a = numerator_of(ratio), b = denominator_of(ratio);
  Integer k = ((a * m + b) % 2 == 0) ? 1 : 2;
  e.q = k * a;
  e.sigma = k * b;
  e.p = e.q * m + e.sigma;
  e.half_integral = (e.p % 2 == 0);
  e.coprime = e.half_integral && gcd_int(e.q, e.p / 2) == 1;
  Rational orient = Rational(e.p) + Rational(e.q) * C;
  if (orient == 0) throw Error("p + qC = 0: the isotropy generator is degenerate");
  e.xi_p = orient > 0 ? e.p : Integer(-e.p);
  e.xi_q = orient > 0 ? e.q : Integer(-e.q);
  return e;
}

YpqFamily make_family(const Rational& A, const Rational& dm, const Rational& dp, const Rational& C,
                      int m) {
  YpqFamily f;
  f.A = A;
  f.C = C;
  f.m = m;
  f.delta_minus = dm;
  f.delta_plus = dp;
  f.S = dm + dp;
  f.delta_third = Rational(1, 4) - f.S;
  f.minus = end_data(ratio_from_root(dm, C, m), C, m);
  f.plus = end_data(ratio_from_root(dp, C, m), C, m);
  f.quasi_regular = true;
  f.valid = f.minus.coprime && f.plus.coprime && dm != dp;
  f.simply_connected = gcd_int(f.minus.q, f.plus.q) == 1;
  return f;
}

std::vector<YpqFamily> enumerate_rational_families(int bound, const EnumerateOptions& options) {
  std::vector<YpqFamily> out;
  for (int d = 2; d <= bound; ++d) {
    for (int n = d / 4; 3 * n < d; ++n) {
      if (4 * n <= d || std::gcd(n, d) != 1) continue;
      long long x = static_cast<long long>(n) * (d - 3 * n);
      auto r = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(x))));
      while (r * r > x) --r;
      while ((r + 1) * (r + 1) <= x) ++r;
      if (r * r != x) continue;
      Rational S(n, d), root(r, d);
      Rational dm = (S - root) / 2, dp = (S + root) / 2;
      Rational A = 4 * dp * dm * (Rational(1, 4) - S);
      std::optional<YpqFamily> chosen;
      for (int c = 1; c <= options.c_search_bound; ++c) {
        if (c + options.m == 0) continue;
        try {
          YpqFamily f = make_family(A, dm, dp, Rational(c), options.m);
          if (f.valid && f.simply_connected) {
            chosen = f;
            break;
          }
          if (!chosen) chosen = f;
        } catch (const Error&) {
          continue;
        }
      }
      if (chosen) out.push_back(*chosen);
    }
  }
  std::sort(out.begin(), out.end(), [](const YpqFamily& a, const YpqFamily& b) { return a.S < b.S; });
  return out;
}

// ---- group diagrams ---------------------------------------------------

Rational mod_one(const Rational& x) {
  Integer num = numerator_of(x), den = denominator_of(x);
  Integer fl = num / den;
  if (num < 0 && fl * den != num) fl -= 1;
  return x - Rational(fl);
}

bool CircleSubgroup::contains(const TorusPoint& x) const {
  Rational v = Rational(Q) * x.first - Rational(P) * x.second;
  return denominator_of(v) == 1;
}

namespace {

TorusPoint generator_for(const EndData& e) {
  return {mod_one(Rational(e.p, 2 * e.sigma)), mod_one(Rational(e.q, e.sigma))};
}

std::vector<TorusPoint> closure(const std::vector<TorusPoint>& gens) {
  std::set<TorusPoint> seen{{Rational(0), Rational(0)}};
  std::vector<TorusPoint> frontier{{Rational(0), Rational(0)}};
  while (!frontier.empty()) {
    std::vector<TorusPoint> next;
    for (const auto& x : frontier)
      for (const auto& g : gens) {
        TorusPoint y{mod_one(x.first + g.first), mod_one(x.second + g.second)};
        if (seen.insert(y).second) next.push_back(y);
      }
    if (seen.size() > 4'000'000) throw Error("K is too large to enumerate");
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

void require_valid(const EndData& e, const char* which) {
  if (e.sigma <= 0) throw Error(std::string("sigma_") + which + " must be positive");
  if (!e.half_integral)
    throw Error(std::string("q_") + which + " m + sigma_" + which + " is odd");
  if (!e.coprime)
    throw Error(std::string("q_") + which + " and (q_" + which + " m + sigma_" + which +
                ")/2 are not coprime");
}

}  // namespace

std::vector<Integer> smith_invariant_factors(std::vector<std::vector<Integer>> a, int cols) {
  const int rows = static_cast<int>(a.size());
  std::vector<Integer> factors;
  int t = 0;
  for (; t < std::min(rows, cols); ++t) {
    for (;;) {
      // Pivot: smallest nonzero |entry| in the remaining block.
      int pr = -1, pc = -1;
      for (int i = t; i < rows; ++i)
        for (int j = t; j < cols; ++j)
          if (a[i][j] != 0 && (pr < 0 || abs_int(a[i][j]) < abs_int(a[pr][pc]))) {
            pr = i;
            pc = j;
          }
      if (pr < 0) {
        for (int k = t; k < std::min(rows, cols); ++k) factors.push_back(0);
        return factors;
      }
      std::swap(a[t], a[pr]);
      for (auto& row : a) std::swap(row[t], row[pc]);
      bool clean = true;
      for (int i = t + 1; i < rows; ++i) {
        Integer qt = a[i][t] / a[t][t];
        for (int j = t; j < cols; ++j) a[i][j] -= qt * a[t][j];
        if (a[i][t] != 0) clean = false;
      }
      for (int j = t + 1; j < cols; ++j) {
        Integer qt = a[t][j] / a[t][t];
        for (int i = t; i < rows; ++i) a[i][j] -= qt * a[i][t];
        if (a[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      // Divisibility of the rest of the block.
      bool divides = true;
      for (int i = t + 1; i < rows && divides; ++i)
        for (int j = t + 1; j < cols; ++j)
          if (a[i][j] % a[t][t] != 0) {
            for (int k = t; k < cols; ++k) a[t][k] += a[i][k];
            divides = false;
            break;
          }
      if (divides) break;
    }
    factors.push_back(abs_int(a[t][t]));
  }
  for (; t < cols; ++t) factors.push_back(0);
  return factors;
}

std::optional<Integer> pi1_order(const Integer& qm, const Integer& sm, const Integer& qp,
                                 const Integer& sp) {
  // Generators (gamma_+, gamma_-, gamma_4).
  std::vector<std::vector<Integer>> rel{
      {sp, 0, -qp}, {0, sm, -qm}, {1, 0, 0}, {0, 1, 0}};
  Integer order = 1;
  for (const Integer& d : smith_invariant_factors(rel, 3)) {
    if (d == 0) return std::nullopt;
    order *= d;
  }
  return order;
}

GroupDiagram build_diagram(const EndData& minus, const EndData& plus, int m) {
  require_valid(minus, "-");
  require_valid(plus, "+");
  GroupDiagram g;
  g.generators = {generator_for(plus), generator_for(minus)};
  g.elements = closure(g.generators);
  g.h_minus = CircleSubgroup{minus.p / 2, minus.q};
  g.h_plus = CircleSubgroup{plus.p / 2, plus.q};
  g.sigma_minus = minus.sigma;
  g.sigma_plus = plus.sigma;
  for (const auto& x : g.elements) {
    if (g.h_minus->contains(x)) ++g.intersect_minus;
    if (g.h_plus->contains(x)) ++g.intersect_plus;
  }
  g.orders_match = Integer(g.intersect_minus) == minus.sigma && Integer(g.intersect_plus) == plus.sigma;
  std::vector<std::vector<Integer>> rel{
      {plus.sigma, 0, -plus.q}, {0, minus.sigma, -minus.q}, {1, 0, 0}, {0, 1, 0}};
  g.invariant_factors = smith_invariant_factors(rel, 3);
  g.pi1_order = pi1_order(minus.q, minus.sigma, plus.q, plus.sigma);
  g.simply_connected = g.pi1_order && *g.pi1_order == 1;
  (void)m;
  return g;
}

GroupDiagram build_diagram(const YpqFamily& f) { return build_diagram(f.minus, f.plus, f.m); }

GroupDiagram build_round_diagram(const EndData& plus, int) {
  require_valid(plus, "+");
  GroupDiagram g;
  g.generators = {generator_for(plus)};
  g.elements = closure(g.generators);
  g.h_plus = CircleSubgroup{plus.p / 2, plus.q};
  g.sigma_plus = plus.sigma;
  for (const auto& x : g.elements)
    if (g.h_plus->contains(x)) ++g.intersect_plus;
  g.orders_match = Integer(g.intersect_plus) == plus.sigma;
  return g;
}

// ---- verdicts -------------------------------------------------------------

std::string to_string(Branch b) {
  switch (b) {
    case Branch::RoundSphereBranch: return "RoundSphereBranch";
    case Branch::YpqBranch: return "YpqBranch";
    case Branch::NoCompactExtension: return "NoCompactExtension";
  }
  return "unknown";
}

Verdict classify_A(const Rational& A, const Rational& C, int m, const ClassifyOptions& options) {
  Verdict v;
  v.A = A;
  v.C = C;
  v.m = m;
  auto fail = [&](std::string why) {
    v.branch = Branch::NoCompactExtension;
    v.reason = std::move(why);
    return v;
  };
  if (C + m == 0) return fail("C + m = 0");
  if (A < kMinA) return fail("A < -1/108: no positive root");
  if (A == kMinA) return fail("A = -1/108: double root 1/6, the two roots are not distinct");
  if (A > 0) return fail("A > 0: a single positive root, no second special orbit");

  if (A == 0) {
    v.delta_minus = Rational(0);
    v.delta_plus = Rational(1, 4);
    v.ratio_plus = ratio_from_root(*v.delta_plus, C, m);
    try {
      v.plus = end_data(*v.ratio_plus, C, m);
      v.diagram = build_round_diagram(*v.plus, m);
    } catch (const Error& e) {
      return fail(e.what());
    }
    v.branch = Branch::RoundSphereBranch;
    v.reason = "A = 0: round SU(2) end at Delta = 0, circle end at Delta = 1/4";
    return v;
  }

  ExactCubicRoots roots;
  if (options.exact_roots) roots = cubic_roots_exact(A);
  Rational dm, dp;
  if (roots.rational) {
    std::vector<Rational> positive;
    for (const auto& r : roots.roots)
      if (r > 0) positive.push_back(r);
    if (positive.size() != 2) return fail("cubic does not have two distinct positive roots");
    dm = positive[0];
    dp = positive[1];
    v.ratio_minus = ratio_from_root(dm, C, m);
    v.ratio_plus = ratio_from_root(dp, C, m);
  } else {
    v.exact = false;
    CubicRoots fr = cubic_roots(to_double(A));
    double C_d = to_double(C);
    double rm = ratio_from_root(fr.delta_minus, C_d, m), rp = ratio_from_root(fr.delta_plus, C_d, m);
    Rational qm = rationalize(rm, Integer(options.max_denominator));
    Rational qp = rationalize(rp, Integer(options.max_denominator));
    auto close = [](double x, const Rational& r) {
      return std::abs(x - to_double(r)) <= 1e-14 * std::max(1.0, std::abs(x));
    };
    if (!close(rm, qm) || !close(rp, qp))
      return fail("roots are irrational and no rational ratio q/sigma within the denominator bound");
    dm = rationalize(fr.delta_minus, Integer(options.max_denominator));
    dp = rationalize(fr.delta_plus, Integer(options.max_denominator));
    v.ratio_minus = qm;
    v.ratio_plus = qp;
  }
  v.delta_minus = dm;
  v.delta_plus = dp;
  try {
    v.minus = end_data(*v.ratio_minus, C, m);
    v.plus = end_data(*v.ratio_plus, C, m);
    v.diagram = build_diagram(*v.minus, *v.plus, m);
  } catch (const Error& e) {
    return fail(e.what());
  }
  v.branch = Branch::YpqBranch;
  v.reason = "-1/108 < A < 0 with integer data at both circle ends";
  return v;
}

}  // namespace sasaki
