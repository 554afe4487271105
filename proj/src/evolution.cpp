#include "sasaki/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sasaki {

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::Completed: return "completed";
    case StopReason::DegenerateCoframe: return "degenerate_coframe";
    case StopReason::TurningPoint: return "turning_point";
    case StopReason::Collapse: return "collapse";
    case StopReason::AxisCrossing: return "axis_crossing";
    case StopReason::BlowUp: return "blow_up";
    case StopReason::ConstraintIncompatible: return "constraints_incompatible";
  }
  return "unknown";
}

double FlowResult::max_hypo_residual() const {
  double best = 0.0;
  for (const auto& s : samples) best = std::max(best, s.hypo.max());
  return best;
}

double FlowResult::max_lsq_residual() const {
  double best = 0.0;
  for (const auto& s : samples) best = std::max(best, s.lsq_residual);
  return best;
}

double FlowResult::max_drift() const {
  double best = 0.0;
  for (const auto& s : samples)
    for (double d : s.drift) best = std::max(best, std::abs(d));
  return best;
}

namespace {

Eigen::Matrix<double, 16, 1> flatten(const Eigen::Matrix4d& m) {
  Eigen::Matrix<double, 16, 1> v;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) v[4 * i + j] = m(i, j);
  return v;
}

Eigen::Matrix4d unflatten(const State& v) {
  Eigen::Matrix4d m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = v[4 * i + j];
  return m;
}

// The six 2-form components over e1..e4, in serialization order.
const std::vector<Monomial>& spatial_two_monomials() {
  static const std::vector<Monomial> list = [] {
    std::vector<Monomial> out;
    for (Monomial m : monomials(2))
      if (!(m & basis_bit(kDtIndex))) out.push_back(m);
    return out;
  }();
  return list;
}

void put(Eigen::VectorXd& target, int block, const RealForm& f) {
  const auto& mons = spatial_two_monomials();
  for (std::size_t i = 0; i < mons.size(); ++i) target[6 * block + static_cast<int>(i)] = f[mons[i]];
}

void finish_ascending(FlowResult& result) {
  if (result.samples.size() >= 2 && result.samples.front().t > result.samples.back().t)
    std::reverse(result.samples.begin(), result.samples.end());
}

}  // namespace

// ---- general flow -----------------------------------------------------

GeneralRhs general_rhs(const IdStructure& s) {
  RealForm n[4];
  for (int i = 0; i < 4; ++i) n[i] = s.row(i);
  RealForm e4 = RealForm::monomial(basis_bit(3), static_cast<double>(s.m));

  Eigen::Matrix<double, 18, 12> A;
  Eigen::VectorXd column(18);
  for (int r = 1; r <= 3; ++r) {
    for (int c = 0; c < 4; ++c) {
      std::array<double, kBasisSize> coeff{};
      coeff[c] = 1.0;
      RealForm delta = RealForm::one_form(coeff);
      RealForm zero(2);
      RealForm p23 = r == 2 ? wedge(delta, n[3]) : (r == 3 ? wedge(n[2], delta) : zero);
      RealForm p31 = r == 3 ? wedge(delta, n[1]) : (r == 1 ? wedge(n[3], delta) : zero);
      RealForm p12 = r == 1 ? wedge(delta, n[2]) : (r == 2 ? wedge(n[1], delta) : zero);
      put(column, 0, p23);
      put(column, 1, p31);
      put(column, 2, p12);
      A.col(4 * (r - 1) + c) = column;
    }
  }
  Eigen::VectorXd b(18);
  put(b, 0, -d_invariant(n[1]));
  put(b, 1, 3.0 * wedge(n[0], n[3]) - d_invariant(n[2]) + wedge(e4, n[3]));
  put(b, 2, -3.0 * wedge(n[0], n[2]) - wedge(e4, n[2]) - d_invariant(n[3]));

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
  Eigen::VectorXd x = cod.solve(b);

  GeneralRhs out;
  out.rank = static_cast<int>(cod.rank());
  out.lsq_residual = (A * x - b).norm();
  out.eta_dot.setZero();
  out.eta_dot.row(0) = 2.0 * s.eta.row(1);
  for (int r = 1; r <= 3; ++r)
    for (int c = 0; c < 4; ++c) out.eta_dot(r, c) = x[4 * (r - 1) + c];
  return out;
}

FlowResult evolve_general(const IdStructure& eta0, double t0, double t1,
                          const IntegratorConfig& cfg) {
  FlowResult result;
  result.family = "general";
  const int m = eta0.m;
  Rhs f = [m](double, const State& y) -> State {
    IdStructure s{unflatten(y), m};
    return flatten(general_rhs(s).eta_dot);
  };

  long steps = static_cast<long>(std::ceil(std::abs(t1 - t0) / cfg.step - 1e-9));
  double h = steps > 0 ? (t1 - t0) / static_cast<double>(steps) : 0.0;
  State y = flatten(eta0.eta);
  double t = t0;

  auto record = [&](double time, const IdStructure& s, double lsq) {
    FlowSample sample;
    sample.t = time;
    sample.eta = s;
    sample.hypo = residual_hypo(s);
    sample.lsq_residual = lsq;
    result.samples.push_back(std::move(sample));
  };

  for (long i = 0;; ++i) {
    IdStructure s{unflatten(y), m};
    if (std::abs(s.determinant()) < cfg.degenerate_det) {
      if (result.samples.empty() || result.samples.back().t != t) record(t, s, general_rhs(s).lsq_residual);
      result.reason = StopReason::DegenerateCoframe;
      result.message = "coframe degenerates; boundary of the interval";
      break;
    }
    GeneralRhs rhs = general_rhs(s);
    bool last = (i == steps);
    if (last || i % std::max(1, cfg.sample_every) == 0) record(t, s, rhs.lsq_residual);
    if (rhs.lsq_residual > cfg.lsq_tol) {
      if (result.samples.back().t != t) record(t, s, rhs.lsq_residual);
      result.reason = StopReason::ConstraintIncompatible;
      result.message = "constraints incompatible: least-squares residual " +
                       std::to_string(rhs.lsq_residual);
      result.stop_time = t;
      finish_ascending(result);
      return result;
    }
    if (last) {
      result.reason = StopReason::Completed;
      break;
    }
    y = rk4_step(f, t, y, h);
    t = t0 + static_cast<double>(i + 1) * h;
  }
  result.stop_time = t;
  finish_ascending(result);
  return result;
}

// ---- case i -----------------------------------------------------------

IdStructure closed_form_case_i(double k, int m, double t) {
  IdStructure s;
  s.m = m;
  s.eta.setZero();
  s.eta(0, 0) = 1.0 / 3.0;
  s.eta(0, 3) = k * std::cos(kEpsilon * t) - m / 3.0;
  s.eta(1, 3) = -0.5 * k * kEpsilon * std::sin(kEpsilon * t);
  s.eta(2, 1) = 1.0 / kEpsilon;
  s.eta(3, 2) = 1.0 / kEpsilon;
  return s;
}

Eigen::Matrix4d closed_form_case_i_derivative(double k, int, double t) {
  Eigen::Matrix4d d = Eigen::Matrix4d::Zero();
  d(0, 3) = -k * kEpsilon * std::sin(kEpsilon * t);
  d(1, 3) = -0.5 * k * 6.0 * std::cos(kEpsilon * t);
  return d;
}

CaseIFit fit_case_i(const IdStructure& s) {
  double x = s.eta(0, 3) + s.m / 3.0;
  double y = -2.0 * s.eta(1, 3) / kEpsilon;
  CaseIFit fit;
  fit.k = std::hypot(x, y);
  fit.shift = std::atan2(y, x) / kEpsilon;
  return fit;
}

IdStructure homogeneous_structure() {
  IdStructure s;
  s.eta.setZero();
  s.eta(0, 0) = 1.0 / 3.0;
  s.eta(0, 3) = 1.0;
  s.eta(1, 3) = 1.0;
  s.eta(2, 1) = 1.0 / kEpsilon;
  s.eta(3, 2) = 1.0 / kEpsilon;
  return s;
}

// ---- case ii ----------------------------------------------------------

double CaseIIState::invariant_A() const {
  double h2 = h * h;
  return 4.0 * h2 * h2 * h2 - h2 * h2 + (a * h) * (a * h);
}

IdStructure CaseIIState::structure() const {
  IdStructure s;
  s.m = m;
  s.eta.setZero();
  s.eta(0, 0) = 2.0 * h * h;
  s.eta(0, 3) = 2.0 * C * h * h - (C + m) / 3.0;
  s.eta(1, 0) = a;
  s.eta(1, 3) = a * C;
  s.eta(2, 1) = h;
  s.eta(3, 2) = h;
  return s;
}

Eigen::Matrix4d CaseIIState::structure_derivative() const {
  // h' = a / (2h), a' = ((ah)' - a h') / h.
  double hd = a / (2.0 * h);
  double ad = (h - 6.0 * h * h * h - a * hd) / h;
  Eigen::Matrix4d d = Eigen::Matrix4d::Zero();
  d(0, 0) = 2.0 * a;
  d(0, 3) = 2.0 * C * a;
  d(1, 0) = ad;
  d(1, 3) = ad * C;
  d(2, 1) = hd;
  d(3, 2) = hd;
  return d;
}

CaseIIState case_ii_from_A(double h, double A, double C, int m) {
  if (h <= 0) throw Error("case ii requires h > 0");
  double h2 = h * h;
  double rad = A + h2 * h2 - 4.0 * h2 * h2 * h2;
  if (rad < 0) throw Error("no real a for this (h, A): A + h^4 - 4h^6 < 0");
  return CaseIIState{h, std::sqrt(rad) / h, C, m};
}

TurningPoints turning_points(double A) {
  constexpr double kMin = -1.0 / 108.0;
  if (A < kMin - 1e-15) throw Error("turning_points: A must be at least -1/108");
  TurningPoints out;
  // Roots in D = h^2 of 4D^3 - D^2 - A = 0 with D > 0.
  auto g = [A](double d) { return 4.0 * d * d * d - d * d - A; };
  auto bisect = [&](double lo, double hi) {
    double glo = g(lo);
    for (int i = 0; i < 200; ++i) {
      double mid = 0.5 * (lo + hi);
      double gm = g(mid);
      if ((gm < 0) == (glo < 0)) {
        lo = mid;
        glo = gm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };
  if (std::abs(A - kMin) <= 1e-15) {
    out.h.push_back(std::sqrt(1.0 / 6.0));
    out.multiplicity.push_back(2);
    return out;
  }
  if (A < 0) {
    out.h.push_back(std::sqrt(bisect(0.0, 1.0 / 6.0)));
    out.multiplicity.push_back(1);
  }
  // g is increasing beyond 1/6 and g(1/6) < 0 for A > -1/108.
  double hi = 0.25;
  while (g(hi) < 0) hi *= 2.0;
  out.h.push_back(std::sqrt(bisect(1.0 / 6.0, hi)));
  out.multiplicity.push_back(1);
  return out;
}

namespace {

// Variables (H, P) = (h^2, a h).
State case_ii_rhs(double, const State& y) {
  double rh = std::sqrt(y[0]);
  State d(2);
  d[0] = y[1] / rh;
  d[1] = rh - 6.0 * y[0] * rh;
  return d;
}

bool case_ii_valid(const State& y) { return y.allFinite() && y[0] > 0.0; }

}  // namespace

FlowResult evolve_case_ii(const CaseIIState& s0, double t0, double t1,
                          const IntegratorConfig& cfg) {
  if (s0.h <= 0 || s0.a * s0.h <= 0) throw Error("evolve_case_ii requires h > 0 and a h > 0");
  FlowResult result;
  result.family = "case_ii";
  result.state_names = {"h", "a"};
  result.drift_names = {"A_relative"};
  const double A0 = s0.invariant_A();

  auto record = [&](double t, const State& y) {
    CaseIIState s = s0;
    s.h = std::sqrt(y[0]);
    s.a = y[1] / s.h;
    FlowSample sample;
    sample.t = t;
    sample.eta = s.structure();
    sample.state = {s.h, s.a};
    sample.hypo = residual_hypo(sample.eta);
    double A = s.invariant_A();
    sample.drift = {A0 != 0.0 ? (A - A0) / std::abs(A0) : A - A0};
    result.samples.push_back(std::move(sample));
  };

  State y(2);
  y << s0.h * s0.h, s0.a * s0.h;
  double dir = t1 >= t0 ? 1.0 : -1.0;
  double t = t0;
  double base = cfg.step;
  long count = 0;
  bool on_grid = true;  // times stay t0 + n step until the first halving
  record(t, y);
  result.reason = StopReason::Completed;
  while (dir * (t1 - t) > 1e-15) {
    double remaining = std::abs(t1 - t);
    // Absorb a rounding sliver into the last full step.
    double h = remaining < base * (1.0 + 1e-9) ? remaining : base;
    bool last = h == remaining;
    int halvings = 0;
    State next;
    bool ok = false;
    while (halvings <= cfg.max_halvings) {
      next = rk4_step(case_ii_rhs, t, y, dir * h);
      if (case_ii_valid(next) && next[1] > 0.0) {
        ok = true;
        break;
      }
      h *= 0.5;
      ++halvings;
    }
    if (!ok) {
      // The end is bracketed to within the smallest step; classify it.
      result.reason = y[0] > 1e-8 ? StopReason::TurningPoint : StopReason::Collapse;
      break;
    }
    ++count;
    if (halvings > 0) on_grid = false;
    if (halvings == 0 && last) {
      t = t1;
    } else if (on_grid) {
      t = t0 + dir * static_cast<double>(count) * base;
    } else {
      t += dir * h;
    }
    y = next;
    if (halvings > 0 || count % std::max(1, cfg.sample_every) == 0 || dir * (t1 - t) <= 1e-15)
      record(t, y);
  }
  if (result.samples.back().t != t) record(t, y);
  result.stop_time = t;
  if (result.reason == StopReason::TurningPoint) result.message = "a -> 0 at a turning point";
  if (result.reason == StopReason::Collapse) result.message = "h -> 0";
  finish_ascending(result);
  return result;
}

CaseIIInterval maximal_case_ii(const CaseIIState& s0, const IntegratorConfig& cfg) {
  CaseIIInterval out;
  constexpr double kFar = 1e3;
  out.forward = evolve_case_ii(s0, 0.0, kFar, cfg);
  out.backward = evolve_case_ii(s0, 0.0, -kFar, cfg);
  out.t_plus = out.forward.stop_time;
  out.t_minus = out.backward.stop_time;
  return out;
}

// ---- case iii ---------------------------------------------------------

double CaseIIIState::U() const {
  double l = lambda();
  return std::sqrt(1.0 + l * l) * u() / 2.0;
}

double CaseIIIState::V() const {
  double mm = mu();
  return std::sqrt(1.0 + mm * mm) * v() / 2.0;
}

IdStructure CaseIIIState::structure() const {
  IdStructure s;
  s.m = m;
  s.eta.setZero();
  s.eta(0, 0) = 2.0 * delta();
  s.eta(0, 3) = -m / 3.0;
  s.eta(1, 0) = a;
  s.eta(2, 1) = h;
  s.eta(2, 2) = b;
  s.eta(3, 1) = c;
  s.eta(3, 2) = k;
  return s;
}

namespace {

double case_iii_N(double h, double k, double b, double c, double a) {
  double d = h * k - b * c;
  return h * h + k * k + b * b + c * c - 12.0 * d * d - a * a;
}

// Regular parametrization d/ds = Delta a d/dt in the variables
// (u, v, z, w, a, t) = (h+k, h-k, b+c, b-c, a, t). Each of u, v, z, w, a obeys
// a multiplicative equation, so w/u and z/v are kept to relative precision
// even where v and z decay to zero.
State case_iii_rhs_s(double, const State& y) {
  double u = y[0], v = y[1], z = y[2], w = y[3], a = y[4];
  double d = 0.25 * (u * u - v * v + w * w - z * z);
  double half_n = 0.5 * (0.5 * (u * u + v * v + z * z + w * w) - 12.0 * d * d - a * a);
  double grow = d * (1.0 - 6.0 * d) - half_n;
  double shrink = -d * (1.0 + 6.0 * d) - half_n;
  State out(6);
  out[0] = u * grow;
  out[1] = v * shrink;
  out[2] = z * shrink;
  out[3] = w * grow;
  out[4] = a * half_n;
  out[5] = d * a;
  return out;
}

}  // namespace

std::array<double, 5> CaseIIIState::derivative() const {
  double d = delta();
  double ad = 0.5 * case_iii_N(h, k, b, c, a) / d;
  auto x = [&](double val, double rhs) { return (rhs - ad * val) / a; };
  return {x(h, -6.0 * h * d + k), x(k, -6.0 * k * d + h), x(b, -6.0 * b * d - c),
          x(c, -6.0 * c * d - b), ad};
}

bool CaseIIIState::is_case_ii_in_disguise(double tol) const {
  return std::abs(h - k) <= tol && std::abs(b + c) <= tol;
}

CaseIIIState prepare_case_iii(CaseIIIState s) {
  if (!(s.a > 0)) throw Error("case iii requires a > 0");
  if (!(s.delta() > 0)) throw Error("case iii requires hk - bc > 0");
  if (s.is_case_ii_in_disguise())
    throw Error("case iii data with h = k and b = -c reduce to case ii");
  // A phase rotation by theta acts on (u, w) and (v, z) as rotations by theta and -theta.
  if (std::abs(s.u()) < 1e-12 || std::abs(s.v()) < 1e-12) {
    const double theta = 0.5;
    double cs = std::cos(theta), sn = std::sin(theta);
    IdStructure rotated = phase_rotate(s.structure(), cs, sn);
    s.h = rotated.eta(2, 1);
    s.b = rotated.eta(2, 2);
    s.c = rotated.eta(3, 1);
    s.k = rotated.eta(3, 2);
  }
  return s;
}

FlowResult evolve_case_iii(const CaseIIIState& input, double t0, double t1,
                           const IntegratorConfig& cfg) {
  CaseIIIState s0 = prepare_case_iii(input);
  FlowResult result;
  result.family = "case_iii";
  result.state_names = {"h", "k", "b", "c", "a"};
  result.drift_names = {"lambda", "mu", "delta_minus_U2_plus_V2"};
  const double lam0 = s0.lambda(), mu0 = s0.mu();
  const double u_sign = s0.u() > 0 ? 1.0 : -1.0, v_sign = s0.v() > 0 ? 1.0 : -1.0;
  const double dir = t1 >= t0 ? 1.0 : -1.0;

  State y(6);
  y << s0.u(), s0.v(), s0.z(), s0.w(), s0.a, t0;
  result.reason = StopReason::Completed;

  auto to_state = [&](const State& v) {
    CaseIIIState s = s0;
    s.h = 0.5 * (v[0] + v[1]);
    s.k = 0.5 * (v[0] - v[1]);
    s.b = 0.5 * (v[2] + v[3]);
    s.c = 0.5 * (v[2] - v[3]);
    s.a = v[4];
    return s;
  };
  auto delta_of = [](const State& v) {
    return 0.25 * (v[0] * v[0] - v[1] * v[1] + v[3] * v[3] - v[2] * v[2]);
  };

  long count = 0;
  bool stopped = false;
  auto observer = [&](double, const State& v) {
    CaseIIIState s = to_state(v);
    double scale = std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2]), std::abs(v[3])});
    double d = delta_of(v);
    if (v[0] * u_sign <= 0 || v[1] * v_sign <= 0) {
      result.reason = StopReason::AxisCrossing;
      stopped = true;
    } else if (scale > 1e5) {
      result.reason = StopReason::BlowUp;
      stopped = true;
    } else if (v[4] < 1e-10) {
      result.reason = StopReason::TurningPoint;
      stopped = true;
    } else if (d < 1e-13 || v[4] > 1e9) {
      result.reason = StopReason::Collapse;
      stopped = true;
    } else if (std::abs(v[5] - t1) < 1e-13) {
      stopped = true;
    }
    if (stopped || count % std::max(1, cfg.sample_every) == 0) {
      FlowSample sample;
      sample.t = v[5];
      sample.eta = s.structure();
      sample.state = {s.h, s.k, s.b, s.c, s.a};
      sample.hypo = residual_hypo(sample.eta);
      double lam = v[3] / v[0], mu = v[2] / v[1];
      double U2 = (1.0 + lam * lam) * v[0] * v[0] / 4.0;
      double V2 = (1.0 + mu * mu) * v[1] * v[1] / 4.0;
      sample.drift = {lam - lam0, mu - mu0, (d - (U2 - V2)) / (U2 + V2)};
      result.samples.push_back(std::move(sample));
    }
    ++count;
    return !stopped;
  };
  auto domain = [&](const State& v) {
    return dir * (v[5] - t1) <= 0.0 && v[4] > 0.0 && delta_of(v) > 0.0;
  };

  AdaptiveConfig ac = cfg.adaptive;
  ac.max_step = std::max(ac.max_step, 1.0);
  ac.max_steps = std::max<long>(ac.max_steps, 200000);
  ac.atol_components = {1e-300, 1e-300, 1e-300, 1e-300, 1e-300, ac.atol};
  // s runs in the direction of t since dt/ds = Delta a > 0.
  integrate_adaptive(case_iii_rhs_s, 0.0, y, dir * 1e6, ac, observer, domain);
  if (!result.samples.empty()) result.stop_time = result.samples.back().t;
  if (!stopped && std::abs(result.stop_time - t1) > 1e-9) {
    // The integrator gave up before t1: the step collapsed at a finite-s singularity.
    const auto& last = result.samples.back().state;
    double scale = std::max({std::abs(last[0]), std::abs(last[1]), std::abs(last[2]), std::abs(last[3])});
    result.reason = scale > 1e2 ? StopReason::BlowUp
                    : last[4] < 1e-6 ? StopReason::TurningPoint
                                     : StopReason::Collapse;
  }
  result.message = to_string(result.reason);
  finish_ascending(result);
  return result;
}

namespace {

double point_grow(const CaseIIIPoint& p) {
  State y(6);
  y << p.u, p.v, p.z, p.w, p.a, p.t;
  return case_iii_rhs_s(0.0, y)[0] / p.u;
}

double point_shrink(const CaseIIIPoint& p) {
  State y(6);
  y << p.u, p.v, p.z, p.w, p.a, p.t;
  return case_iii_rhs_s(0.0, y)[1] / p.v;
}

}  // namespace

CaseIIIState CaseIIIPoint::state() const {
  CaseIIIState s;
  s.h = 0.5 * (u + v);
  s.k = 0.5 * (u - v);
  s.b = 0.5 * (z + w);
  s.c = 0.5 * (z - w);
  s.a = a;
  s.m = m;
  return s;
}

double CaseIIIPoint::delta() const { return 0.25 * (u * u - v * v + w * w - z * z); }

double CaseIIIPoint::delta_dt() const {
  double ds = 0.5 * ((u * u + w * w) * point_grow(*this) - (v * v + z * z) * point_shrink(*this));
  return ds / (delta() * a);
}

double CaseIIIPoint::V() const { return (v >= 0 ? 0.5 : -0.5) * std::hypot(v, z); }

double CaseIIIPoint::V_log_dt() const { return point_shrink(*this) / (delta() * a); }

std::vector<CaseIIIPoint> case_iii_points(const CaseIIIState& input, double t0,
                                          const std::vector<double>& times,
                                          const IntegratorConfig& cfg) {
  CaseIIIState s0 = prepare_case_iii(input);
  std::vector<CaseIIIPoint> out;
  if (times.empty()) return out;
  const double dir = times.front() >= t0 ? 1.0 : -1.0;
  State y(6);
  y << s0.u(), s0.v(), s0.z(), s0.w(), s0.a, t0;
  double s = 0.0;
  AdaptiveConfig ac = cfg.adaptive;
  ac.max_step = std::max(ac.max_step, 1.0);
  ac.max_steps = std::max<long>(ac.max_steps, 200000);
  ac.atol_components = {1e-300, 1e-300, 1e-300, 1e-300, 1e-300, ac.atol};
  auto delta_of = [](const State& v) {
    return 0.25 * (v[0] * v[0] - v[1] * v[1] + v[3] * v[3] - v[2] * v[2]);
  };
  for (double target : times) {
    if (dir * (target - y[5]) < 0) throw Error("case_iii_points: times must be monotone");
    bool reached = std::abs(y[5] - target) < 1e-13;
    if (!reached) {
      State last = y;
      double s_last = s;
      auto observer = [&](double ss, const State& v) {
        last = v;
        s_last = ss;
        reached = std::abs(v[5] - target) < 1e-13;
        return !reached;
      };
      auto domain = [&](const State& v) {
        return dir * (v[5] - target) <= 0.0 && v[4] > 0.0 && delta_of(v) > 0.0;
      };
      integrate_adaptive(case_iii_rhs_s, s, y, s + dir * 1e6, ac, observer, domain);
      y = last;
      s = s_last;
    }
    if (!reached) throw Error("case_iii_points: the interval ends before t = " + std::to_string(target));
    out.push_back({target, y[0], y[1], y[2], y[3], y[4], s0.m});
  }
  return out;
}

CaseIIIInterval maximal_case_iii(const CaseIIIState& s0, const IntegratorConfig& cfg) {
  CaseIIIInterval out;
  constexpr double kFar = 1e3;
  out.forward = evolve_case_iii(s0, 0.0, kFar, cfg);
  out.backward = evolve_case_iii(s0, 0.0, -kFar, cfg);
  return out;
}

}  // namespace sasaki
