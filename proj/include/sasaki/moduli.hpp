#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sasaki/rational.hpp"

namespace sasaki {

/// Nonnegative real roots of A + D^2 - 4D^3 = 0, ascending.
struct CubicRoots {
  std::vector<double> roots;
  std::vector<int> multiplicity;
  /// Endpoints of the admissible interval: the two largest nonnegative roots
  /// (0 and 1/4 when A = 0). Zero when absent.
  double delta_minus = 0.0;
  double delta_plus = 0.0;
  /// -1/108 < A < 0: two distinct positive roots.
  bool two_distinct_positive = false;
};

/// Float mode: bisection on [0, 1/6] and [1/6, 1/4]; the double root at
/// A = -1/108 and A = 0 are detected exactly. Throws for A < -1/108.
CubicRoots cubic_roots(double A);

struct ExactCubicRoots {
  /// All real roots (any sign), ascending, with multiplicity. Rational when
  /// `rational` is set; otherwise only the float approximations are meaningful.
  std::vector<Rational> roots;
  std::vector<int> multiplicity;
  bool rational = false;
  std::vector<double> approximate;
};

/// The value of A + D^2 - 4D^3.
Rational cubic_value(const Rational& A, const Rational& delta);

/// Rational mode: reconstructs a rational root from the float roots by
/// continued fractions, verifies it exactly and deflates to a quadratic,
/// which is solved exactly when its discriminant is a rational square.
ExactCubicRoots cubic_roots_exact(const Rational& A);

/// (1/(C+m)) 6D/(1-6D). Throws at D = 1/6 or C + m = 0.
double ratio_from_root(double delta, double C, int m);
Rational ratio_from_root(const Rational& delta, const Rational& C, int m);

/// Integer data of one circle end.
struct EndData {
  Rational ratio;   ///< q / sigma
  Integer q = 0;    ///< with sigma > 0
  Integer sigma = 0;
  Integer p = 0;    ///< q m + sigma
  /// Generator xi = p e1 + q e4 of the isotropy algebra, oriented so p + qC > 0.
  Integer xi_p = 0;
  Integer xi_q = 0;
  bool coprime = false;  ///< gcd(q, (qm + sigma)/2) == 1
  bool half_integral = false;  ///< qm + sigma even
};

/// Smallest sigma > 0 with q/sigma = ratio and (qm + sigma)/2 an integer.
EndData end_data(const Rational& ratio, const Rational& C, int m);

struct YpqFamily {
  Rational S;  ///< Delta_+ + Delta_-
  Rational A;
  Rational C;
  int m = 0;
  Rational delta_minus, delta_plus, delta_third;
  EndData minus, plus;
  bool quasi_regular = true;
  bool simply_connected = false;
  /// Both ends pass the coprimality condition.
  bool valid = false;
};

/// Builds the family for exact roots (Delta_- < Delta_+) and given C, m.
YpqFamily make_family(const Rational& A, const Rational& delta_minus, const Rational& delta_plus,
                      const Rational& C, int m);

struct EnumerateOptions {
  int m = 0;
  /// C is searched over 1..c_search_bound for the first simply-connected family.
  int c_search_bound = 64;
};

/// All S = n/d in (1/4, 1/3) with d <= bound and n(d - 3n) a perfect square,
/// ordered by S.
std::vector<YpqFamily> enumerate_rational_families(int denominator_bound,
                                                   const EnumerateOptions& options = {});

// ---- group diagrams -----------------------------------------------------

/// A point of T^2 = (R/Z)^2 with exact rational phases in [0, 1).
using TorusPoint = std::pair<Rational, Rational>;

struct CircleSubgroup {
  Integer P;  ///< first slope, (sigma + m q)/2
  Integer Q;  ///< second slope, q
  bool contains(const TorusPoint& x) const;
};

struct GroupDiagram {
  std::vector<TorusPoint> generators;  ///< of K
  std::vector<TorusPoint> elements;    ///< all of K
  std::optional<CircleSubgroup> h_minus;  ///< empty: H_- = (SU(2) x {1}) K
  std::optional<CircleSubgroup> h_plus;
  Integer sigma_minus = 0, sigma_plus = 0;
  std::size_t intersect_minus = 0, intersect_plus = 0;  ///< |K cap (H_pm)_0|
  bool orders_match = false;
  std::vector<Integer> invariant_factors;  ///< of pi_1; 0 means a free factor
  std::optional<Integer> pi1_order;        ///< empty when infinite or not computed
  bool simply_connected = false;
};

/// Reduces a phase to [0, 1).
Rational mod_one(const Rational& x);

/// K = <g_+, g_->, g_pm = (p_pm / (2 sigma_pm), q_pm / sigma_pm) (for m = 0,
/// (1/2, q/sigma)); H_pm = circle of slopes ((sigma + mq)/2, q) times K. Throws
/// naming the failed condition if an end violates coprimality.
GroupDiagram build_diagram(const EndData& minus, const EndData& plus, int m);
GroupDiagram build_diagram(const YpqFamily& family);
/// Round branch: H_- = (SU(2) x {1}) K with K = <g_+>.
GroupDiagram build_round_diagram(const EndData& plus, int m);

/// Invariant factors of the integer matrix (rows are relations), by Smith normal form.
std::vector<Integer> smith_invariant_factors(std::vector<std::vector<Integer>> rows, int columns);

/// pi_1 = Z gamma_4 / <q_+ gamma_4, q_- gamma_4>, from the relations of the
/// theorem via Smith normal form. Empty when infinite.
std::optional<Integer> pi1_order(const Integer& q_minus, const Integer& sigma_minus,
                                 const Integer& q_plus, const Integer& sigma_plus);

// ---- verdicts -------------------------------------------------------------

enum class Branch { RoundSphereBranch, YpqBranch, NoCompactExtension };
std::string to_string(Branch branch);

struct Verdict {
  Branch branch = Branch::NoCompactExtension;
  std::string reason;
  Rational A, C;
  int m = 0;
  std::optional<Rational> delta_minus, delta_plus;
  std::optional<Rational> ratio_minus, ratio_plus;
  std::optional<EndData> minus, plus;
  std::optional<GroupDiagram> diagram;
  /// Ratios and integers are exact (false when recovered from float roots).
  bool exact = true;
};

struct ClassifyOptions {
  /// Denominator bound when a ratio is only known in floating point.
  long long max_denominator = 1'000'000;
  /// Float mode skips the exact root search and always rationalizes ratios.
  bool exact_roots = true;
};

Verdict classify_A(const Rational& A, const Rational& C, int m, const ClassifyOptions& options = {});

}  // namespace sasaki
