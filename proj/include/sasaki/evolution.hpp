#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sasaki/integrators.hpp"
#include "sasaki/structures.hpp"

namespace sasaki {

struct IntegratorConfig {
  double step = 1e-4;
  /// Least-squares residual above which the general flow aborts.
  double lsq_tol = 1e-9;
  /// |det eta| below which the coframe counts as degenerate.
  double degenerate_det = 1e-10;
  /// Step halvings allowed when bracketing a boundary event.
  int max_halvings = 60;
  /// Record every n-th step (the last state is always recorded).
  int sample_every = 1;
  AdaptiveConfig adaptive{};
};

enum class StopReason {
  Completed,            ///< reached the end of the requested span
  DegenerateCoframe,    ///< |det eta| fell below threshold
  TurningPoint,         ///< a -> 0 (case ii, ends where A + h^4 - 4h^6 = 0)
  Collapse,             ///< h -> 0 or Delta -> 0
  AxisCrossing,         ///< u or v vanished (case iii)
  BlowUp,               ///< variables diverged (case iii end)
  ConstraintIncompatible
};

std::string to_string(StopReason reason);

struct FlowSample {
  double t = 0.0;
  IdStructure eta;
  /// Ansatz coordinates: case ii (h, a), case iii (h, k, b, c, a); empty otherwise.
  std::vector<double> state;
  Residuals hypo;
  double lsq_residual = 0.0;
  /// Conserved-quantity drift; names in FlowResult::drift_names.
  std::vector<double> drift;
};

struct FlowResult {
  std::string family;
  std::vector<FlowSample> samples;
  std::vector<std::string> state_names;
  std::vector<std::string> drift_names;
  StopReason reason = StopReason::Completed;
  double stop_time = 0.0;
  std::string message;

  double max_hypo_residual() const;
  double max_lsq_residual() const;
  /// Largest |drift| over all samples and components.
  double max_drift() const;
};

class ConstraintError : public Error {
 public:
  using Error::Error;
};

// ---- general flow -----------------------------------------------------

struct GeneralRhs {
  Eigen::Matrix4d eta_dot;
  double lsq_residual = 0.0;
  int rank = 0;
};

/// d(eta)/dt from the 18 product-rule equations in the 12 unknowns
/// d(eta^1..3)/dt, solved by minimum-norm least squares.
GeneralRhs general_rhs(const IdStructure& eta);

/// Fixed-step RK4 on the 16 coefficients from t0 to t1 (either direction).
/// Stops at coframe degeneration; aborts with ConstraintIncompatible when the
/// least-squares residual exceeds cfg.lsq_tol.
FlowResult evolve_general(const IdStructure& eta0, double t0, double t1,
                          const IntegratorConfig& cfg = {});

// ---- case i -----------------------------------------------------------

inline const double kEpsilon = std::sqrt(6.0);

/// eta0 = e1/3 + (k cos(eps t) - m/3) e4, eta1 = -(k eps/2) sin(eps t) e4,
/// eta2 = e2/eps, eta3 = e3/eps.
IdStructure closed_form_case_i(double k, int m, double t);
/// d/dt of the closed form.
Eigen::Matrix4d closed_form_case_i_derivative(double k, int m, double t);

struct CaseIFit {
  double k = 0.0;
  double shift = 0.0;  ///< closed_form_case_i(k, m, t + shift) matches the input at t = 0
};
/// Amplitude and time shift of a case-i structure (eta2, eta3 = e2/eps, e3/eps).
CaseIFit fit_case_i(const IdStructure& eta);

/// The homogeneous structure eta0 = e1/3 + e4, eta1 = e4, eta2 = e2/eps, eta3 = e3/eps.
IdStructure homogeneous_structure();

// ---- case ii ----------------------------------------------------------

struct CaseIIState {
  double h = 0.0;
  double a = 0.0;
  double C = 0.0;
  int m = 0;

  double invariant_A() const;
  IdStructure structure() const;
  Eigen::Matrix4d structure_derivative() const;
};

/// Start with given h > 0 and A, taking a > 0. Throws if A + h^4 - 4h^6 < 0.
CaseIIState case_ii_from_A(double h, double A, double C, int m);

/// Integrates (h^2)' = a, (ah)' = h - 6h^3 by RK4 in the variables
/// (h^2, ah), halving the step to locate a -> 0 or h -> 0.
FlowResult evolve_case_ii(const CaseIIState& s0, double t0, double t1,
                          const IntegratorConfig& cfg = {});

struct TurningPoints {
  std::vector<double> h;          ///< positive h with A + h^4 - 4h^6 = 0, ascending
  std::vector<int> multiplicity;  ///< as roots in Delta = h^2
};
/// Throws for A < -1/108.
TurningPoints turning_points(double A);

/// Both turning-point ends of the maximal interval through s0 (sampled).
struct CaseIIInterval {
  FlowResult backward;  ///< from t = 0 towards t_-
  FlowResult forward;   ///< from t = 0 towards t_+
  double t_minus = 0.0;
  double t_plus = 0.0;
};
CaseIIInterval maximal_case_ii(const CaseIIState& s0, const IntegratorConfig& cfg = {});

// ---- case iii ---------------------------------------------------------

struct CaseIIIState {
  double h = 0.0, k = 0.0, b = 0.0, c = 0.0, a = 0.0;
  int m = 0;

  double delta() const { return h * k - b * c; }
  double u() const { return h + k; }
  double v() const { return h - k; }
  double z() const { return b + c; }
  double w() const { return b - c; }
  double lambda() const { return w() / u(); }
  double mu() const { return z() / v(); }
  double U() const;
  double V() const;
  IdStructure structure() const;
  /// d/dt of (h, k, b, c, a); singular where a = 0 or Delta = 0.
  std::array<double, 5> derivative() const;
  /// True when the data reduce to case ii (h = k and b = -c).
  bool is_case_ii_in_disguise(double tol = 1e-12) const;
};

/// Throws unless a > 0, Delta > 0 and the data are not case ii in disguise.
/// If u or v vanishes the data are rotated by a phase first.
CaseIIIState prepare_case_iii(CaseIIIState s);

/// Integrates the case-iii system. The flow is carried in a regular parameter
/// s with dt/ds = Delta a, adaptive Dormand-Prince, until t reaches t1 or an
/// end of the maximal interval is met.
FlowResult evolve_case_iii(const CaseIIIState& s0, double t0, double t1,
                           const IntegratorConfig& cfg = {});

/// Case-iii data in the variables (u, v, z, w) = (h+k, h-k, b+c, b-c), which
/// keep v and z to relative precision where they decay to zero.
struct CaseIIIPoint {
  double t = 0.0, u = 0.0, v = 0.0, z = 0.0, w = 0.0, a = 0.0;
  int m = 0;

  CaseIIIState state() const;
  double delta() const;
  double delta_dt() const;
  /// sqrt(1 + mu^2) v / 2.
  double V() const;
  /// V'/V, exact in these variables.
  double V_log_dt() const;
};

/// Case-iii states at the given times, which must be monotone and on one side
/// of t0. Throws if an end of the interval is met first.
std::vector<CaseIIIPoint> case_iii_points(const CaseIIIState& s0, double t0,
                                          const std::vector<double>& times,
                                          const IntegratorConfig& cfg = {});

struct CaseIIIInterval {
  FlowResult backward;
  FlowResult forward;
};
/// Runs in both directions until the ends of the maximal interval.
CaseIIIInterval maximal_case_iii(const CaseIIIState& s0, const IntegratorConfig& cfg = {});

}  // namespace sasaki
