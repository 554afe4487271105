#include "sasaki/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace sasaki {

// ---- Kazdan-Warner ------------------------------------------------------

KwResult kw_extends(const TaylorData& data, double tol) {
  if (data.sigma <= 0) throw Error("kw_extends: sigma must be positive");
  KwResult out;
  if (data.n % data.sigma != 0) {
    out.reason = "sigma does not divide n";
    return out;
  }
  const int weight = std::abs(data.n / data.sigma);
  if (data.order() < weight + 2)
    throw Error("kw_extends: need Taylor order >= |n/sigma| + 2 for a verdict");
  for (int k = 0; k <= data.order(); ++k) {
    bool must_vanish = k < weight || (k > weight && (k - weight) % 2 == 1);
    if (must_vanish && std::abs(data.coefficients[k]) > tol) {
      out.failing_index = k;
      out.reason = "coefficient c_" + std::to_string(k) + " must vanish";
      return out;
    }
  }
  out.extends = true;
  return out;
}

// ---- series -------------------------------------------------------------

std::vector<double> RadialGrid::radii() const {
  if (points < degree + 2) throw Error("radial grid needs more points than the fit degree");
  std::vector<double> r(points);
  for (int j = 0; j < points; ++j) r[j] = r_min * std::pow(ratio, j);
  return r;
}

double RadialGrid::r_max() const { return r_min * std::pow(ratio, points - 1); }

RadialGrid RadialGrid::fitted_to(double limit) const {
  RadialGrid g = *this;
  if (g.r_max() > limit) g.r_min *= limit / g.r_max();
  return g;
}

double SeriesFit::odd_defect() const {
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t j = 1; j < c.size(); j += 2)
    worst = std::max(worst, std::abs(c[j]) * std::pow(r_max, static_cast<double>(j)) / scale);
  return worst;
}

double SeriesFit::low_order_defect(int order) const {
  double worst = 0.0;
  for (int j = 0; j < order && j < static_cast<int>(c.size()); ++j)
    worst = std::max(worst, std::abs(c[j]) * std::pow(r_max, j) / std::max(scale, 1.0));
  return worst;
}

double SeriesFit::derivative(int k) const {
  if (k < 0 || k >= static_cast<int>(c.size())) return 0.0;
  return std::tgamma(k + 1.0) * c[k];
}

SeriesFit fit_series(const std::vector<double>& r, const std::vector<double>& f, int degree) {
  if (r.size() != f.size() || static_cast<int>(r.size()) <= degree)
    throw Error("fit_series: insufficient samples near 0");
  SeriesFit fit;
  fit.r_max = *std::max_element(r.begin(), r.end());
  const int n = static_cast<int>(r.size());
  Eigen::MatrixXd V(n, degree + 1);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    double x = r[i] / fit.r_max, p = 1.0;
    for (int j = 0; j <= degree; ++j, p *= x) V(i, j) = p;
    y[i] = f[i];
    fit.scale = std::max(fit.scale, std::abs(f[i]));
  }
  Eigen::VectorXd a = V.colPivHouseholderQr().solve(y);
  fit.c.resize(degree + 1);
  for (int j = 0; j <= degree; ++j) fit.c[j] = a[j] / std::pow(fit.r_max, j);
  return fit;
}

bool is_even(const std::vector<double>& r, const std::vector<double>& f, double tol, int degree) {
  return fit_series(r, f, degree).odd_defect() <= tol;
}

std::string to_string(EndSide side) { return side == EndSide::Minus ? "minus" : "plus"; }

// ---- profiles -------------------------------------------------------------

EndProfile case_ii_end_profile(double A, EndSide side, const RadialGrid& grid) {
  if (!(A > -1.0 / 108.0) || A > 0.0) throw Error("case-ii ends need -1/108 < A <= 0");
  CubicRoots roots = cubic_roots(A);
  EndProfile out;
  out.family = "case_ii";
  out.side = side;
  const std::vector<double> radii = grid.radii();
  const double s = side == EndSide::Minus ? 1.0 : -1.0;  // d/dr = s d/dt
  const double max_step = 1e-4;

  if (side == EndSide::Minus && A == 0.0) {
    // Round end: h(0) = 0 and dh/dr = sqrt(1 - 4h^2)/2.
    out.reason = StopReason::Collapse;
    auto f = [](double h) { return 0.5 * std::sqrt(std::max(0.0, 1.0 - 4.0 * h * h)); };
    double r = 0.0, h = 0.0;
    for (double target : radii) {
      while (r < target) {
        double dr = std::min(max_step, target - r);
        double k1 = f(h), k2 = f(h + 0.5 * dr * k1), k3 = f(h + 0.5 * dr * k2), k4 = f(h + dr * k3);
        h += dr / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
        r = target - r <= dr ? target : r + dr;
      }
      EndSample e;
      e.r = target;
      e.h = e.k = h;
      e.delta = h * h;
      e.delta_dr = 2.0 * h * f(h);
      out.samples.push_back(e);
    }
    return out;
  }

  // Turning point: (H, P) = (h^2, ah) from (Delta_end, 0).
  out.reason = StopReason::TurningPoint;
  using V2 = Eigen::Vector2d;
  auto f = [s](const V2& y) {
    double sh = std::sqrt(y[0]);
    return V2(s * y[1] / sh, s * sh * (1.0 - 6.0 * y[0]));
  };
  V2 y(side == EndSide::Minus ? roots.delta_minus : roots.delta_plus, 0.0);
  double r = 0.0;
  for (double target : radii) {
    while (r < target) {
      double dr = std::min(max_step, target - r);
      V2 k1 = f(y), k2 = f(y + 0.5 * dr * k1), k3 = f(y + 0.5 * dr * k2), k4 = f(y + dr * k3);
      y += dr / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
      r = target - r <= dr ? target : r + dr;
    }
    if (!(y[0] > 0.0) || y[1] < 0.0) throw Error("radial grid extends past the interval");
    EndSample e;
    e.r = target;
    e.h = e.k = std::sqrt(y[0]);
    e.delta = y[0];
    e.delta_dr = f(y)[0];
    out.samples.push_back(e);
  }
  return out;
}

namespace {

CaseIIIState state_of(const FlowSample& sample) {
  if (sample.state.size() != 5) throw Error("expected case-iii samples (h, k, b, c, a)");
  CaseIIIState s;
  s.h = sample.state[0];
  s.k = sample.state[1];
  s.b = sample.state[2];
  s.c = sample.state[3];
  s.a = sample.state[4];
  s.m = sample.eta.m;
  return s;
}

EndSample end_sample(const CaseIIIPoint& p, double r, double sign) {
  CaseIIIState s = p.state();
  EndSample e;
  e.r = r;
  e.h = s.h;
  e.k = s.k;
  e.b = s.b;
  e.c = s.c;
  e.delta = p.delta();
  e.delta_dr = sign * p.delta_dt();
  e.V = p.V();
  e.V_log_dr = sign * p.V_log_dt();
  e.V_dr = e.V * e.V_log_dr;
  return e;
}

}  // namespace

EndProfile case_iii_end_profile(const FlowResult& flow, EndSide side, const RadialGrid& grid,
                                const IntegratorConfig& cfg) {
  if (flow.samples.size() < 2) throw Error("insufficient samples near 0");
  if (flow.reason == StopReason::Completed) throw Error("flow did not reach an end of its interval");
  EndProfile out;
  out.family = "case_iii";
  out.side = side;
  out.reason = flow.reason;
  const auto& samples = flow.samples;
  out.t_end = side == EndSide::Plus ? samples.back().t : samples.front().t;
  const double far = side == EndSide::Plus ? samples.front().t : samples.back().t;
  const RadialGrid g = grid.fitted_to(0.25 * std::abs(out.t_end - far));
  const double sign = side == EndSide::Minus ? 1.0 : -1.0;
  const FlowSample& start = side == EndSide::Plus ? samples.front() : samples.back();
  std::vector<double> radii = g.radii();
  std::reverse(radii.begin(), radii.end());
  std::vector<double> times;
  for (double r : radii) times.push_back(out.t_end + sign * r);
  std::vector<CaseIIIPoint> points = case_iii_points(state_of(start), start.t, times, cfg);
  for (std::size_t i = points.size(); i-- > 0;) out.samples.push_back(end_sample(points[i], radii[i], sign));
  double vmax = 0.0;
  for (const auto& e : out.samples) vmax = std::max(vmax, std::abs(e.V));
  out.has_V = vmax > 1e-12;
  return out;
}

// ---- reports ----------------------------------------------------------------

std::string to_string(ExtensionBranch branch) {
  switch (branch) {
    case ExtensionBranch::RoundSU2: return "RoundSU2";
    case ExtensionBranch::CircleU1: return "CircleU1";
    case ExtensionBranch::Reject: return "Reject";
  }
  return "unknown";
}

bool ExtensionReport::pass() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const Condition& c) { return c.pass; });
}

namespace {

struct Columns {
  std::vector<double> r, delta, h2c2, k2b2, hbck, h2c2_b2k2, squares, rVr_over_V, Vr_over_V;
};

Columns columns(const EndProfile& p) {
  if (p.samples.size() < 4) throw Error("insufficient samples near 0");
  Columns c;
  for (const auto& e : p.samples) {
    c.r.push_back(e.r);
    c.delta.push_back(e.delta);
    c.h2c2.push_back(e.h * e.h + e.c * e.c);
    c.k2b2.push_back(e.k * e.k + e.b * e.b);
    c.hbck.push_back(e.h * e.b + e.c * e.k);
    c.h2c2_b2k2.push_back(e.h * e.h + e.c * e.c - e.b * e.b - e.k * e.k);
    c.squares.push_back(e.h * e.h + e.k * e.k + e.b * e.b + e.c * e.c);
    if (p.has_V) {
      c.rVr_over_V.push_back(e.r * e.V_log_dr);
      c.Vr_over_V.push_back(e.V_log_dr);
    }
  }
  return c;
}

Condition within(std::string name, double measured, double target, double tol) {
  bool ok = std::isfinite(measured) && std::abs(measured - target) <= tol;
  return {std::move(name), measured, target, tol, ok};
}

Condition at_most(std::string name, double measured, double tol) {
  return {std::move(name), measured, 0.0, tol, std::isfinite(measured) && measured <= tol};
}

void finish(ExtensionReport& rep) {
  for (const auto& c : rep.conditions)
    if (!c.pass) {
      rep.obstruction = c.name;
      break;
    }
}

}  // namespace

ExtensionReport check_round_branch(const EndProfile& profile, const ExtensionTolerances& tol) {
  ExtensionReport rep;
  rep.branch = ExtensionBranch::RoundSU2;
  rep.end = to_string(profile.side);
  Columns col = columns(profile);
  const int deg = std::min<int>(8, static_cast<int>(col.r.size()) - 2);
  const double lim_tol = profile.has_V ? tol.singular_limit : tol.limit;

  // f / r^2 even with value 1/4  <=>  c0 = 0, odd c_j = 0, c2 = 1/4.
  auto quarter = [&](const std::string& name, const std::vector<double>& f) {
    SeriesFit fit = fit_series(col.r, f, deg);
    rep.conditions.push_back(within(name + ".origin", fit.c[0], 0.0, tol.zero));
    rep.conditions.push_back(at_most(name + ".odd_defect", fit.odd_defect(), tol.even));
    rep.conditions.push_back(within(name + ".limit", fit.c[2], 0.25, lim_tol));
    return fit;
  };
  SeriesFit d = quarter("round.delta_over_r2", col.delta);
  quarter("round.h2c2_over_r2", col.h2c2);
  quarter("round.k2b2_over_r2", col.k2b2);

  SeriesFit x = fit_series(col.r, col.hbck, deg);
  rep.conditions.push_back(
      within("round.hb_ck_over_r4.order", std::max(std::abs(x.c[0]), std::abs(x.c[2])), 0.0, lim_tol));
  rep.conditions.push_back(at_most("round.hb_ck_over_r4.odd_defect", x.odd_defect(), tol.even));

  if (profile.has_V) {
    // Under the hypothesis the structure equations force r V_r / V -> -3,
    // while V > 0 on r > 0 with V(0) = 0 needs the limit to be >= 0.
    SeriesFit g = fit_series(col.r, col.rVr_over_V, deg);
    rep.conditions.push_back(within("round.rVr_over_V.forced", g.c[0], -3.0, tol.singular_limit));
    rep.conditions.push_back({"round.rVr_over_V.nonnegative", g.c[0], 0.0, tol.singular_limit,
                              g.c[0] >= -tol.singular_limit});
  }

  if (std::abs(d.c[0]) > tol.zero) {
    rep.applicable = false;
    rep.note = "branch inapplicable: Delta is bounded away from 0 at this end (Delta(0) = " +
               std::to_string(d.c[0]) + ")";
  }
  rep.sufficient = rep.pass();
  finish(rep);
  return rep;
}

ExtensionReport check_circle_branch(const EndProfile& profile,
                                    const std::optional<CircleWitness>& witness,
                                    const ExtensionTolerances& tol) {
  ExtensionReport rep;
  rep.branch = ExtensionBranch::CircleU1;
  rep.end = to_string(profile.side);
  bool p_nonzero = true;
  Rational pc;
  if (witness) {
    Integer p = witness->q * witness->m + witness->sigma;
    pc = Rational(p) + Rational(witness->q) * witness->C;
    if (pc <= 0) throw Error("p + qC must be positive (replace xi by -xi)");
    p_nonzero = p != 0;
  }
  Columns col = columns(profile);
  const int deg = std::min<int>(8, static_cast<int>(col.r.size()) - 2);
  const double lim_tol = profile.has_V ? tol.singular_limit : tol.limit;

  SeriesFit d = fit_series(col.r, col.delta, deg);
  const double d0 = d.c[0];
  const double identity = std::abs(1.0 - 6.0 * d0);
  rep.conditions.push_back(at_most("circle.delta.odd_defect", d.odd_defect(), tol.even));
  rep.conditions.push_back({"circle.delta0.nonzero", d0, 0.0, tol.zero, std::abs(d0) > tol.zero});
  rep.conditions.push_back(
      {"circle.delta_dd.nondegenerate", identity, 0.0, tol.zero, identity > tol.zero});
  rep.conditions.push_back(within("circle.endpoint_identity", std::abs(d.derivative(2)), identity, lim_tol));
  if (witness) {
    double target0 = to_double(Rational(witness->q) * (witness->C + witness->m) / (6 * pc));
    Integer abs_sigma = witness->sigma < 0 ? Integer(-witness->sigma) : witness->sigma;
    double target2 = to_double(Rational(abs_sigma) / pc);
    rep.conditions.push_back(within("circle.delta0.witness", d0, target0, lim_tol));
    rep.conditions.push_back(within("circle.delta_dd.witness", identity, target2, lim_tol));
  }
  SeriesFit sq = fit_series(col.r, col.squares, deg);
  rep.conditions.push_back(at_most("circle.squares.odd_defect", sq.odd_defect(), tol.even));

  SeriesFit x = fit_series(col.r, col.hbck, deg);
  SeriesFit y = fit_series(col.r, col.h2c2_b2k2, deg);
  if (p_nonzero) {
    rep.conditions.push_back(within("circle.hb_ck.origin", x.c[0], 0.0, lim_tol));
    rep.conditions.push_back(within("circle.h2c2_b2k2.origin", y.c[0], 0.0, lim_tol));
  }
  if (profile.has_V) {
    // V(0) = 0 with V != 0 for r > 0 forces (dV/dr)/V >= 0 near the origin.
    double g = col.Vr_over_V.front();
    rep.conditions.push_back({"circle.dVdr_over_V.sign", g, 0.0, 0.0, std::isfinite(g) && g >= 0.0});
  }

  double xmax = 0.0, ymax = 0.0;
  for (double v : col.hbck) xmax = std::max(xmax, std::abs(v));
  for (double v : col.h2c2_b2k2) ymax = std::max(ymax, std::abs(v));
  if (rep.pass()) {
    rep.sufficient = xmax <= tol.zero && ymax <= tol.zero;
    rep.note = rep.sufficient ? "sufficient: hb+ck and h^2+c^2-b^2-k^2 vanish identically"
                              : "necessary conditions pass";
  }
  finish(rep);
  return rep;
}

// ---- case iii -------------------------------------------------------------

CaseIIIRejection reject_case_iii(const CaseIIIState& start, const RadialGrid& grid,
                                 const ExtensionTolerances& tol) {
  if (start.is_case_ii_in_disguise())
    throw Error("V vanishes identically: the flow is case ii in disguise");
  CaseIIIInterval interval = maximal_case_iii(start);
  CaseIIIRejection out;
  out.minus_reason = interval.backward.reason;
  out.plus_reason = interval.forward.reason;
  out.report.branch = ExtensionBranch::Reject;
  out.report.end = "both";

  std::vector<std::string> obstructions;
  bool passing_end_branch_round[2] = {false, false};
  bool rejected = false;
  int index = 0;
  for (auto [flow, side] : {std::pair{&interval.backward, EndSide::Minus},
                            std::pair{&interval.forward, EndSide::Plus}}) {
    EndProfile prof = case_iii_end_profile(*flow, side, grid);
    ExtensionReport round = check_round_branch(prof, tol);
    ExtensionReport circle = check_circle_branch(prof, std::nullopt, tol);
    const std::string end = to_string(side);
    if (!round.pass() && !circle.pass()) {
      rejected = true;
      obstructions.push_back(end + " end (" + to_string(flow->reason) + "): round fails " +
                             round.obstruction + ", circle fails " + circle.obstruction);
    }
    passing_end_branch_round[index++] = round.pass();
    for (const ExtensionReport* r : {&round, &circle})
      for (Condition c : r->conditions) {
        c.name = end + "." + c.name;
        out.report.conditions.push_back(c);
      }
    out.ends.push_back(std::move(round));
    out.ends.push_back(std::move(circle));
  }
  if (rejected) {
    out.report.obstruction = obstructions.front();
    for (std::size_t i = 1; i < obstructions.size(); ++i) out.report.note += obstructions[i] + "; ";
    out.report.note += "no compact extension";
  } else {
    // Not expected: report the passing branches only, so that pass() holds.
    out.report.branch = passing_end_branch_round[0] ? ExtensionBranch::RoundSU2 : ExtensionBranch::CircleU1;
    out.report.conditions.clear();
    for (std::size_t e = 0; e < out.ends.size(); e += 2) {
      const ExtensionReport& ok = out.ends[e].pass() ? out.ends[e] : out.ends[e + 1];
      for (Condition c : ok.conditions) {
        c.name = ok.end + "." + c.name;
        out.report.conditions.push_back(c);
      }
    }
    out.report.note = "no obstruction found at either end";
  }
  return out;
}

CaseIIIRejection reject_case_iii(const FlowResult& flow, const RadialGrid& grid,
                                 const ExtensionTolerances& tol) {
  if (flow.samples.empty()) throw Error("empty flow");
  return reject_case_iii(state_of(flow.samples.front()), grid, tol);
}

// ---- families ---------------------------------------------------------------

FamilyExtension check_family(const Verdict& verdict, const RadialGrid& grid,
                             const ExtensionTolerances& tol) {
  auto witness_of = [&](const EndData& e) {
    // The oriented generator xi = p e1 + q e4 with p + qC > 0; sigma = p - qm.
    CircleWitness w;
    w.q = e.xi_q;
    w.sigma = e.xi_p - e.xi_q * verdict.m;
    w.C = verdict.C;
    w.m = verdict.m;
    return w;
  };
  const double A = to_double(verdict.A);
  FamilyExtension out;
  switch (verdict.branch) {
    case Branch::YpqBranch:
      out.minus = check_circle_branch(case_ii_end_profile(A, EndSide::Minus, grid), witness_of(*verdict.minus), tol);
      out.plus = check_circle_branch(case_ii_end_profile(A, EndSide::Plus, grid), witness_of(*verdict.plus), tol);
      break;
    case Branch::RoundSphereBranch:
      out.minus = check_round_branch(case_ii_end_profile(A, EndSide::Minus, grid), tol);
      out.plus = check_circle_branch(case_ii_end_profile(A, EndSide::Plus, grid), witness_of(*verdict.plus), tol);
      break;
    case Branch::NoCompactExtension:
      throw Error("no compact extension: " + verdict.reason);
  }
  return out;
}

}  // namespace sasaki
