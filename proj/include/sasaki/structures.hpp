#pragma once

#include <array>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "sasaki/exterior.hpp"

namespace sasaki {

/// Four left-invariant 1-forms on SU(2)xU(1). Row i of `eta` holds the
/// coefficients of eta^i over (e1, e2, e3, e4). `m` is the weight of the
/// phase with dgamma = m e4.
struct IdStructure {
  Eigen::Matrix4d eta = Eigen::Matrix4d::Identity();
  int m = 0;

  RealForm row(int i) const;
  double determinant() const { return eta.determinant(); }
  bool is_coframe(double tol = 1e-12) const { return std::abs(determinant()) > tol; }
};

/// Three residual norms of a constraint system; all nonnegative.
struct Residuals {
  std::array<double, 3> values{};
  double max() const;
};

/// Norms of d eta0 + 2 eta23, d eta31 - 3 eta012 - m e4^eta12,
/// d eta12 + 3 eta031 + m e4^eta31.
Residuals residual_hypo(const IdStructure& eta);

/// SU(2)-structure forms on the 5-manifold M x interval, over (e1..e4, dt),
/// evaluated at the identity of the group (where the phase e^{i gamma} is 1).
struct Su2StructureForms {
  RealForm alpha{1};
  RealForm omega1{2};
  RealForm omega2{2};
  RealForm omega3{2};
  int m = 0;
};

/// alpha = eta0, omega1 = eta23 + eta1^dt, omega2 = eta31 + eta2^dt,
/// omega3 = eta12 + eta3^dt. Throws on a degenerate coframe.
Su2StructureForms assemble_su2_forms(const IdStructure& eta);

/// t-derivatives of the assembled forms given d(eta)/dt.
Su2StructureForms su2_form_derivatives(const IdStructure& eta, const Eigen::Matrix4d& eta_dot);

/// Norms of d alpha + 2 omega1, d omega2 - 3 alpha^omega3, d omega3 + 3 alpha^omega2
/// where d includes the dt ^ d/dt term and, for m != 0, the phase twist.
Residuals residual_es(const Su2StructureForms& forms, const Su2StructureForms& forms_dot);

/// Pointwise algebraic check: alpha^omega1^omega1 != 0 and
/// omega_i ^ omega_j = delta_ij * (common positive 4-form).
bool is_su2_structure(const Su2StructureForms& forms, double tol = 1e-9);

// ---- equivalences ------------------------------------------------------

/// Adjoint action of SU(2) (an SO(3) rotation of e1,e2,e3), a U(1) phase
/// rotation of (eta2, eta3), and optionally flipping the sign of eta1
/// (orientation reversal composed with the phase rotation by pi).
struct Equivalence {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  double phase_cos = 1.0;
  double phase_sin = 0.0;
  bool flip_eta1 = false;

  bool orientation_reversed() const { return flip_eta1; }
  bool is_identity(double tol = 1e-12) const;
};

IdStructure apply(const Equivalence& g, const IdStructure& eta);

IdStructure adjoint_rotate(const IdStructure& eta, const Eigen::Matrix3d& rotation);
IdStructure phase_rotate(const IdStructure& eta, double c, double s);
/// (eta0, eta1, eta2, eta3) -> (eta0, -eta1, -eta2, -eta3).
IdStructure sign_change(const IdStructure& eta);

// ---- classification ---------------------------------------------------

enum class FamilyVariant { GoGivingNothing, GoGivingYpq };

std::string to_string(FamilyVariant variant);

struct FamilyTag {
  FamilyVariant variant = FamilyVariant::GoGivingYpq;
  double h = 0.0;
  // GoGivingNothing
  double k = 0.0;
  double a = 0.0;
  double c = 0.0;
  // GoGivingYpq
  double a1 = 0.0;
  double a4 = 0.0;
  double mu = 0.0;
  int m = 0;

  /// 3 a1 mu - (6 h^2 a4 - a4 - a1 m), zero for valid GoGivingYpq data.
  double ypq_constraint_defect() const;
  IdStructure structure() const;
};

/// eta0 = 2h^2 e1 + mu e4, eta1 = a1 e1 + a4 e4, eta2 = h e2, eta3 = h e3, with
/// mu solved from 3 a1 mu = 6 h^2 a4 - a4 - a1 m (requires a1 != 0).
FamilyTag ypq_family(double h, double a1, double a4, int m);
/// Same family with mu given; a1 may be zero provided the constraint holds.
FamilyTag ypq_family_with_mu(double h, double a1, double a4, double mu, int m);
/// eta0 = 2hk e1 - (m/3) e4, eta1 = a e1, eta2 = h e2, eta3 = c e2 + k e3.
FamilyTag nothing_family(double h, double k, double a, double c, int m);

struct NormalFormResult {
  FamilyTag tag;
  Equivalence group_element;  ///< apply(group_element, input) == tag.structure()
  Residuals input_residuals;
};

class NotASolution : public Error {
 public:
  using Error::Error;
};

/// Brings an invariant solution of the structure equations to one of the two
/// canonical families. Throws NotASolution if the residual exceeds `tol`.
NormalFormResult normal_form(const IdStructure& eta, double tol = 1e-9);

}  // namespace sasaki
