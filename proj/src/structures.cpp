#include "sasaki/structures.hpp"

#include <cmath>

namespace sasaki {
namespace {

RealForm dt_form() { return RealForm::monomial(basis_bit(kDtIndex)); }
RealForm e4_form() { return RealForm::monomial(basis_bit(3)); }

RealForm row_form(const Eigen::Matrix4d& eta, int i) {
  std::array<double, kBasisSize> c{eta(i, 0), eta(i, 1), eta(i, 2), eta(i, 3), 0.0};
  return RealForm::one_form(c);
}

// d on M x I applied to a t-dependent form given its value and t-derivative.
RealForm d5(const RealForm& form, const RealForm& form_dot) {
  return d_invariant(form) + wedge(dt_form(), form_dot);
}

}  // namespace

RealForm IdStructure::row(int i) const { return row_form(eta, i); }

double Residuals::max() const { return std::max({values[0], values[1], values[2]}); }

Residuals residual_hypo(const IdStructure& s) {
  RealForm n0 = s.row(0), n1 = s.row(1), n2 = s.row(2), n3 = s.row(3);
  RealForm me4 = static_cast<double>(s.m) * e4_form();
  RealForm n23 = wedge(n2, n3), n31 = wedge(n3, n1), n12 = wedge(n1, n2);
  Residuals r;
  r.values[0] = (d_invariant(n0) + 2.0 * n23).norm();
  r.values[1] = (d_invariant(n31) - 3.0 * wedge(n0, n12) - wedge(me4, n12)).norm();
  r.values[2] = (d_invariant(n12) + 3.0 * wedge(n0, n31) + wedge(me4, n31)).norm();
  return r;
}

Su2StructureForms assemble_su2_forms(const IdStructure& s) {
  if (!s.is_coframe()) throw Error("eta is not a coframe");
  RealForm n0 = s.row(0), n1 = s.row(1), n2 = s.row(2), n3 = s.row(3);
  RealForm dt = dt_form();
  Su2StructureForms f;
  f.alpha = n0;
  f.omega1 = wedge(n2, n3) + wedge(n1, dt);
  f.omega2 = wedge(n3, n1) + wedge(n2, dt);
  f.omega3 = wedge(n1, n2) + wedge(n3, dt);
  f.m = s.m;
  return f;
}

Su2StructureForms su2_form_derivatives(const IdStructure& s, const Eigen::Matrix4d& eta_dot) {
  RealForm n[4], v[4];
  for (int i = 0; i < 4; ++i) {
    n[i] = s.row(i);
    v[i] = row_form(eta_dot, i);
  }
  auto dpair = [&](int i, int j) { return wedge(v[i], n[j]) + wedge(n[i], v[j]); };
  RealForm dt = dt_form();
  Su2StructureForms f;
  f.alpha = v[0];
  f.omega1 = dpair(2, 3) + wedge(v[1], dt);
  f.omega2 = dpair(3, 1) + wedge(v[2], dt);
  f.omega3 = dpair(1, 2) + wedge(v[3], dt);
  f.m = s.m;
  return f;
}

Residuals residual_es(const Su2StructureForms& f, const Su2StructureForms& fd) {
  RealForm me4 = static_cast<double>(f.m) * e4_form();
  Residuals r;
  r.values[0] = (d5(f.alpha, fd.alpha) + 2.0 * f.omega1).norm();
  r.values[1] =
      (d5(f.omega2, fd.omega2) - wedge(me4, f.omega3) - 3.0 * wedge(f.alpha, f.omega3)).norm();
  r.values[2] =
      (d5(f.omega3, fd.omega3) + wedge(me4, f.omega2) + 3.0 * wedge(f.alpha, f.omega2)).norm();
  return r;
}

bool is_su2_structure(const Su2StructureForms& f, double tol) {
  const RealForm* w[3] = {&f.omega1, &f.omega2, &f.omega3};
  RealForm vol = wedge(f.omega1, f.omega1);
  double scale = vol.norm();
  if (scale < tol) return false;
  if (wedge(f.alpha, vol).norm() < tol) return false;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      RealForm p = wedge(*w[i], *w[j]);
      RealForm target = (i == j) ? vol : RealForm(4);
      if ((p - target).norm() > tol * std::max(1.0, scale)) return false;
    }
  }
  return true;
}

// ---- equivalences ------------------------------------------------------

bool Equivalence::is_identity(double tol) const {
  return (rotation - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < tol &&
         std::abs(phase_cos - 1.0) < tol && std::abs(phase_sin) < tol && !flip_eta1;
}

IdStructure adjoint_rotate(const IdStructure& s, const Eigen::Matrix3d& rotation) {
  Eigen::Matrix4d b = Eigen::Matrix4d::Identity();
  b.topLeftCorner<3, 3>() = rotation;
  IdStructure out = s;
  out.eta = s.eta * b;
  return out;
}

IdStructure phase_rotate(const IdStructure& s, double c, double sn) {
  IdStructure out = s;
  out.eta.row(2) = c * s.eta.row(2) + sn * s.eta.row(3);
  out.eta.row(3) = -sn * s.eta.row(2) + c * s.eta.row(3);
  return out;
}

IdStructure sign_change(const IdStructure& s) {
  IdStructure out = s;
  out.eta.bottomRows<3>() *= -1.0;
  return out;
}

IdStructure apply(const Equivalence& g, const IdStructure& s) {
  IdStructure out = phase_rotate(adjoint_rotate(s, g.rotation), g.phase_cos, g.phase_sin);
  if (g.flip_eta1) out = sign_change(phase_rotate(out, -1.0, 0.0));
  return out;
}

// ---- families ---------------------------------------------------------

std::string to_string(FamilyVariant v) {
  return v == FamilyVariant::GoGivingNothing ? "GoGivingNothing" : "GoGivingYpq";
}

double FamilyTag::ypq_constraint_defect() const {
  return 3.0 * a1 * mu - (6.0 * h * h * a4 - a4 - a1 * m);
}

IdStructure FamilyTag::structure() const {
  IdStructure s;
  s.m = m;
  s.eta.setZero();
  if (variant == FamilyVariant::GoGivingNothing) {
    s.eta(0, 0) = 2.0 * h * k;
    s.eta(0, 3) = -static_cast<double>(m) / 3.0;
    s.eta(1, 0) = a;
    s.eta(2, 1) = h;
    s.eta(3, 1) = c;
    s.eta(3, 2) = k;
  } else {
    s.eta(0, 0) = 2.0 * h * h;
    s.eta(0, 3) = mu;
    s.eta(1, 0) = a1;
    s.eta(1, 3) = a4;
    s.eta(2, 1) = h;
    s.eta(3, 2) = h;
  }
  return s;
}

FamilyTag ypq_family(double h, double a1, double a4, int m) {
  if (a1 == 0.0) throw Error("ypq_family: a1 must be nonzero to solve for mu");
  FamilyTag t;
  t.variant = FamilyVariant::GoGivingYpq;
  t.h = t.k = h;
  t.a1 = a1;
  t.a4 = a4;
  t.m = m;
  t.mu = (6.0 * h * h * a4 - a4 - a1 * m) / (3.0 * a1);
  return t;
}

FamilyTag ypq_family_with_mu(double h, double a1, double a4, double mu, int m) {
  FamilyTag t;
  t.variant = FamilyVariant::GoGivingYpq;
  t.h = t.k = h;
  t.a1 = a1;
  t.a4 = a4;
  t.mu = mu;
  t.m = m;
  return t;
}

FamilyTag nothing_family(double h, double k, double a, double c, int m) {
  FamilyTag t;
  t.variant = FamilyVariant::GoGivingNothing;
  t.h = h;
  t.k = k;
  t.a = a;
  t.c = c;
  t.m = m;
  return t;
}

// ---- normal form ------------------------------------------------------

namespace {

// Rotation R in SO(3) with R e1 = u (u a unit vector), the smallest such.
Eigen::Matrix3d rotation_taking_e1_to(const Eigen::Vector3d& u) {
  Eigen::Vector3d e1 = Eigen::Vector3d::UnitX();
  double cosang = std::clamp(e1.dot(u), -1.0, 1.0);
  Eigen::Vector3d axis = e1.cross(u);
  if (axis.norm() < 1e-14) {
    if (cosang > 0) return Eigen::Matrix3d::Identity();
    return Eigen::AngleAxisd(M_PI, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  }
  return Eigen::AngleAxisd(std::acos(cosang), axis.normalized()).toRotationMatrix();
}

}  // namespace

NormalFormResult normal_form(const IdStructure& input, double tol) {
  NormalFormResult out;
  out.input_residuals = residual_hypo(input);
  double scale = std::max(1.0, input.eta.cwiseAbs().maxCoeff());
  if (out.input_residuals.max() > tol * scale * scale) {
    throw NotASolution("input does not satisfy the structure equations (residual " +
                       std::to_string(out.input_residuals.max()) + ")");
  }
  if (!input.is_coframe(tol)) throw NotASolution("input is not a coframe");

  Equivalence g;
  // Align the su(2) part of eta0 with +e1.
  Eigen::Vector3d v = input.eta.block<1, 3>(0, 0).transpose();
  if (v.norm() < tol) throw NotASolution("eta0 has no su(2) component");
  g.rotation = rotation_taking_e1_to(v.normalized());
  IdStructure s = adjoint_rotate(input, g.rotation);

  // Phase rotation making eta2 = h e2 with h > 0.
  double m01 = s.eta(2, 2), m11 = s.eta(3, 2);
  double n = std::hypot(m01, m11);
  if (n < tol) throw NotASolution("eta2, eta3 have no e3 component");
  double c = m11 / n, sn = -m01 / n;
  if (c * s.eta(2, 1) + sn * s.eta(3, 1) < 0) {
    c = -c;
    sn = -sn;
  }
  g.phase_cos = c;
  g.phase_sin = sn;
  s = phase_rotate(s, c, sn);

  FamilyTag tag;
  tag.m = input.m;
  tag.h = s.eta(2, 1);
  double d31 = d_invariant(wedge(s.row(3), s.row(1))).norm();
  if (d31 <= tol * scale * scale) {
    tag.variant = FamilyVariant::GoGivingNothing;
    if (s.eta(1, 0) < 0) {
      g.flip_eta1 = true;
      s = sign_change(phase_rotate(s, -1.0, 0.0));
    }
    tag.k = s.eta(3, 2);
    tag.c = s.eta(3, 1);
    tag.a = s.eta(1, 0);
  } else {
    tag.variant = FamilyVariant::GoGivingYpq;
    if (s.eta(1, 3) < 0) {
      g.flip_eta1 = true;
      s = sign_change(phase_rotate(s, -1.0, 0.0));
    }
    tag.k = s.eta(3, 2);
    tag.a1 = s.eta(1, 0);
    tag.a4 = s.eta(1, 3);
    tag.mu = s.eta(0, 3);
  }
  out.tag = tag;
  out.group_element = g;
  return out;
}

}  // namespace sasaki
