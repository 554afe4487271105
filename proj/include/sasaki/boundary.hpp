#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sasaki/evolution.hpp"
#include "sasaki/moduli.hpp"

namespace sasaki {

// ---- Kazdan-Warner criterion ------------------------------------------

/// Taylor coefficients c_0..c_N at r = 0 of a map [0, inf) -> V_n, with the
/// slice representation V_sigma.
struct TaylorData {
  std::vector<double> coefficients;
  int sigma = 1;
  int n = 0;
  int order() const { return static_cast<int>(coefficients.size()) - 1; }
};

struct KwResult {
  bool extends = false;
  /// First k whose coefficient should vanish but does not.
  std::optional<int> failing_index;
  std::string reason;
};

/// True iff sigma | n and c_k = 0 (|c_k| <= tol) for k < |n/sigma| and for
/// k = |n/sigma| + 1, + 3, ... up to N. Throws for sigma <= 0 or, when
/// sigma | n, for N < |n/sigma| + 2.
KwResult kw_extends(const TaylorData& data, double tol = 0.0);

// ---- one-sided series at an end ----------------------------------------

/// Geometric radius grid r_min * ratio^j, j = 0..points-1.
struct RadialGrid {
  double r_min = 1e-3;
  double ratio = 1.189207115002721;  // 2^(1/4)
  int points = 24;
  int degree = 8;

  std::vector<double> radii() const;
  double r_max() const;
  /// The same grid shrunk so that r_max <= limit.
  RadialGrid fitted_to(double limit) const;
};

/// Least-squares polynomial fit f(r) ~ sum c_j r^j on a geometric grid;
/// c_0 is the extrapolated limit at r = 0.
struct SeriesFit {
  std::vector<double> c;
  double r_max = 0.0;
  double scale = 0.0;  ///< max |f| on the grid

  /// max over odd j of |c_j| r_max^j / scale.
  double odd_defect() const;
  /// max over j < order of |c_j| r_max^j / max(scale, 1).
  double low_order_defect(int order) const;
  double derivative(int k) const;
};

SeriesFit fit_series(const std::vector<double>& r, const std::vector<double>& f, int degree);

/// Evenness verdict for samples of a one-sided function.
bool is_even(const std::vector<double>& r, const std::vector<double>& f, double tol = 1e-9,
             int degree = 8);

enum class EndSide { Minus, Plus };
std::string to_string(EndSide side);

/// Profile of the ansatz data at distance r from an end of the interval,
/// r = t - t_- at the minus end and r = t_+ - t at the plus end.
struct EndSample {
  double r = 0.0;
  double h = 0.0, k = 0.0, b = 0.0, c = 0.0;
  double delta = 0.0;
  double delta_dr = 0.0;
  double V = 0.0;
  double V_dr = 0.0;
  double V_log_dr = 0.0;  ///< (dV/dr)/V
};

struct EndProfile {
  std::string family;
  EndSide side = EndSide::Plus;
  double t_end = 0.0;
  StopReason reason = StopReason::Completed;
  bool has_V = false;  ///< case iii data with V not identically zero
  std::vector<EndSample> samples;
};

/// Case-ii profile at an end of the maximal interval for the given A,
/// integrated outwards from the exact endpoint: (h^2, ah) from the turning
/// point (h^2 = Delta_-, Delta_+) or, for A = 0 at the minus end, h from 0.
EndProfile case_ii_end_profile(double A, EndSide side, const RadialGrid& grid = {});

/// Case-iii profile at the end reached by `flow` (a run of evolve_case_iii
/// towards that end), re-integrated from the start of the flow onto the grid.
EndProfile case_iii_end_profile(const FlowResult& flow, EndSide side, const RadialGrid& grid = {},
                                const IntegratorConfig& cfg = {});

// ---- extension reports ---------------------------------------------------

enum class ExtensionBranch { RoundSU2, CircleU1, Reject };
std::string to_string(ExtensionBranch branch);

struct Condition {
  std::string name;
  double measured = 0.0;
  double target = 0.0;
  double tol = 0.0;
  bool pass = false;
};

struct ExtensionReport {
  ExtensionBranch branch = ExtensionBranch::Reject;
  std::string end;
  std::vector<Condition> conditions;
  /// False when the branch hypothesis does not apply to the end at all.
  bool applicable = true;
  /// True when the passed conditions are also sufficient for extension.
  bool sufficient = false;
  std::string note;
  /// Name of the first failed condition, if any.
  std::string obstruction;

  bool pass() const;
};

struct ExtensionTolerances {
  double even = 1e-6;
  double limit = 1e-6;
  double zero = 1e-8;
  /// Looser limits for profiles that come from a singular end of case iii.
  double singular_limit = 1e-3;
};

/// H_0 = SU(2) x {1}: Delta/r^2, (h^2+c^2)/r^2, (k^2+b^2)/r^2 even with value 1/4
/// and (hb+ck)/r^4 even. With V data, also evaluates the limit of r V_r / V
/// against the value -3 that the hypothesis forces.
ExtensionReport check_round_branch(const EndProfile& profile, const ExtensionTolerances& tol = {});

/// Integer witnesses for a circle end.
struct CircleWitness {
  Integer q = 0;
  Integer sigma = 1;
  Rational C = 0;
  int m = 0;
};

/// H_0 = U(1) generated by p e1 + q e4 with p = qm + sigma. Throws when
/// p + qC <= 0. Without a witness only the integer-free conditions are tested:
/// Delta even and non-zero, |Delta''(0)| = |1 - 6 Delta(0)|, and for V data
/// the vanishing of hb+ck and h^2+c^2-b^2-k^2 at the origin plus the sign of
/// (dV/dr)/V.
ExtensionReport check_circle_branch(const EndProfile& profile,
                                    const std::optional<CircleWitness>& witness,
                                    const ExtensionTolerances& tol = {});

struct CaseIIIRejection {
  ExtensionReport report;             ///< overall, branch Reject when some end fails both
  std::vector<ExtensionReport> ends;  ///< round and circle reports at minus, then plus
  StopReason minus_reason = StopReason::Completed;
  StopReason plus_reason = StopReason::Completed;
};

/// Both branch checks at both ends of the maximal interval through the flow.
/// Throws when the flow is case ii in disguise (V identically zero).
CaseIIIRejection reject_case_iii(const FlowResult& flow, const RadialGrid& grid = {},
                                 const ExtensionTolerances& tol = {});
CaseIIIRejection reject_case_iii(const CaseIIIState& start, const RadialGrid& grid = {},
                                 const ExtensionTolerances& tol = {});

/// Extension reports for both ends of a classified case-ii family.
struct FamilyExtension {
  ExtensionReport minus;
  ExtensionReport plus;
  bool pass() const { return minus.pass() && plus.pass(); }
};
FamilyExtension check_family(const Verdict& verdict, const RadialGrid& grid = {},
                             const ExtensionTolerances& tol = {});

}  // namespace sasaki
