#pragma once

// Constant-coefficient differential forms on su(2) + u(1) extended by the
// interval direction dt. The basis 1-forms are e1, e2, e3, e4 (left-invariant,
// de1 = -e23, de2 = -e31, de3 = -e12, de4 = 0) and dt, stored as bits 0..4 of a
// monomial mask.

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "sasaki/rational.hpp"

namespace sasaki {

inline constexpr int kBasisSize = 5;
inline constexpr int kDtIndex = 4;

using Monomial = std::uint8_t;

constexpr Monomial basis_bit(int index) { return static_cast<Monomial>(1u << index); }
constexpr int monomial_degree(Monomial mask) { return std::popcount(static_cast<unsigned>(mask)); }

/// Monomials of the given degree in lexicographic order on (1,2,3,4,t).
const std::vector<Monomial>& monomials(int degree);

/// "1", "23", "14t", ... ; the empty monomial is "".
std::string monomial_label(Monomial mask);
Monomial parse_monomial(const std::string& label);

/// Sign of e^a ∧ e^b relative to e^{a|b}; 0 when they share a factor.
constexpr int wedge_sign(Monomial a, Monomial b) {
  if (a & b) return 0;
  int swaps = 0;
  for (int i = 0; i < kBasisSize; ++i) {
    if (a & basis_bit(i)) swaps += std::popcount(static_cast<unsigned>(b & (basis_bit(i) - 1u)));
  }
  return (swaps % 2 == 0) ? 1 : -1;
}

inline double abs_value(double x) { return std::abs(x); }
inline double abs_value(const Rational& x) { return to_double(x < 0 ? Rational(-x) : x); }

template <class Scalar>
class Form {
 public:
  Form() : Form(0) {}
  explicit Form(int degree) : degree_(degree) {
    if (degree < 0 || degree > kBasisSize) throw Error("form degree out of range");
    coeffs_.fill(Scalar(0));
  }

  static Form constant(const Scalar& value) {
    Form f(0);
    f.coeffs_[0] = value;
    return f;
  }

  static Form monomial(Monomial mask, const Scalar& coefficient = Scalar(1)) {
    Form f(monomial_degree(mask));
    f.coeffs_[mask] = coefficient;
    return f;
  }

  static Form from_terms(int degree, std::initializer_list<std::pair<Monomial, Scalar>> terms) {
    Form f(degree);
    for (const auto& [mask, value] : terms) f.add_term(mask, value);
    return f;
  }

  /// Builds a 1-form from its coefficients over (e1, e2, e3, e4, dt).
  static Form one_form(const std::array<Scalar, kBasisSize>& coefficients) {
    Form f(1);
    for (int i = 0; i < kBasisSize; ++i) f.coeffs_[basis_bit(i)] = coefficients[i];
    return f;
  }

  int degree() const { return degree_; }

  const Scalar& operator[](Monomial mask) const { return coeffs_[mask]; }

  /// Coefficients in serialization order.
  std::vector<Scalar> coefficients() const {
    std::vector<Scalar> out;
    for (Monomial m : monomials(degree_)) out.push_back(coeffs_[m]);
    return out;
  }

  bool is_zero() const {
    for (Monomial m : monomials(degree_)) {
      if (coeffs_[m] != Scalar(0)) return false;
    }
    return true;
  }

  /// Euclidean norm of the coefficient vector.
  double norm() const {
    double sum = 0.0;
    for (Monomial m : monomials(degree_)) {
      double c = to_double(coeffs_[m]);
      sum += c * c;
    }
    return std::sqrt(sum);
  }

  double max_abs() const {
    double best = 0.0;
    for (Monomial m : monomials(degree_)) best = std::max(best, abs_value(coeffs_[m]));
    return best;
  }

  Form operator-() const {
    Form f(degree_);
    for (Monomial m : monomials(degree_)) f.coeffs_[m] = -coeffs_[m];
    return f;
  }

  friend Form operator+(const Form& a, const Form& b) {
    a.require_same_degree(b);
    Form f(a.degree_);
    for (Monomial m : monomials(a.degree_)) f.coeffs_[m] = a.coeffs_[m] + b.coeffs_[m];
    return f;
  }

  friend Form operator-(const Form& a, const Form& b) {
    a.require_same_degree(b);
    Form f(a.degree_);
    for (Monomial m : monomials(a.degree_)) f.coeffs_[m] = a.coeffs_[m] - b.coeffs_[m];
    return f;
  }

  friend Form operator*(const Scalar& s, const Form& a) {
    Form f(a.degree_);
    for (Monomial m : monomials(a.degree_)) f.coeffs_[m] = s * a.coeffs_[m];
    return f;
  }

  friend bool operator==(const Form& a, const Form& b) {
    if (a.degree_ != b.degree_) return false;
    for (Monomial m : monomials(a.degree_)) {
      if (a.coeffs_[m] != b.coeffs_[m]) return false;
    }
    return true;
  }

  template <class Other>
  Form<Other> cast() const {
    Form<Other> f(degree_);
    for (Monomial m : monomials(degree_)) {
      if constexpr (std::is_same_v<Other, double>) {
        f = f + Form<Other>::monomial(m, to_double(coeffs_[m]));
      } else {
        f = f + Form<Other>::monomial(m, Other(coeffs_[m]));
      }
    }
    return f;
  }

 private:
  void add_term(Monomial mask, const Scalar& value) {
    if (monomial_degree(mask) != degree_) throw Error("monomial degree does not match form degree");
    coeffs_[mask] += value;
  }

  void require_same_degree(const Form& other) const {
    if (degree_ != other.degree_) throw Error("adding forms of different degree");
  }

  template <class S>
  friend Form<S> wedge(const Form<S>& a, const Form<S>& b);

  int degree_;
  std::array<Scalar, 32> coeffs_{};
};

template <class Scalar>
Form<Scalar> wedge(const Form<Scalar>& a, const Form<Scalar>& b) {
  int degree = a.degree() + b.degree();
  if (degree > kBasisSize) throw Error("wedge product exceeds top degree");
  Form<Scalar> out(degree);
  for (Monomial ma : monomials(a.degree())) {
    if (a.coeffs_[ma] == Scalar(0)) continue;
    for (Monomial mb : monomials(b.degree())) {
      int sign = wedge_sign(ma, mb);
      if (sign == 0 || b.coeffs_[mb] == Scalar(0)) continue;
      Scalar term = a.coeffs_[ma] * b.coeffs_[mb];
      if (sign > 0) {
        out.coeffs_[ma | mb] += term;
      } else {
        out.coeffs_[ma | mb] -= term;
      }
    }
  }
  return out;
}

namespace detail {

/// d of a single basis 1-form e^i, with the su(2) structure constants.
template <class Scalar>
Form<Scalar> d_basis(int index) {
  switch (index) {
    case 0: return Form<Scalar>::monomial(basis_bit(1) | basis_bit(2), Scalar(-1));  // -e23
    case 1: return Form<Scalar>::monomial(basis_bit(0) | basis_bit(2), Scalar(1));   // -e31
    case 2: return Form<Scalar>::monomial(basis_bit(0) | basis_bit(1), Scalar(-1));  // -e12
    default: return Form<Scalar>(2);
  }
}

template <class Scalar>
Form<Scalar> d_monomial(Monomial mask) {
  int degree = monomial_degree(mask);
  Form<Scalar> out(degree + (degree < kBasisSize ? 1 : 0));
  if (degree == 0 || degree == kBasisSize) return out;
  // Leibniz over the ordered factors: d(e^I) = sum_j (-1)^j e^{i_1..} d e^{i_j} e^{..i_k}.
  int position = 0;
  for (int i = 0; i < kBasisSize; ++i) {
    if (!(mask & basis_bit(i))) continue;
    Monomial before = static_cast<Monomial>(mask & (basis_bit(i) - 1u));
    Monomial after = static_cast<Monomial>(mask & ~(basis_bit(i) | (basis_bit(i) - 1u)));
    Form<Scalar> term = wedge(wedge(Form<Scalar>::monomial(before), d_basis<Scalar>(i)),
                              Form<Scalar>::monomial(after));
    out = (position % 2 == 0) ? out + term : out - term;
    ++position;
  }
  return out;
}

}  // namespace detail

/// Exterior derivative of a constant-coefficient form (d(dt) = 0).
template <class Scalar>
Form<Scalar> d_invariant(const Form<Scalar>& a) {
  if (a.degree() == kBasisSize) return Form<Scalar>(kBasisSize);
  Form<Scalar> out(a.degree() + 1);
  for (Monomial m : monomials(a.degree())) {
    if (a[m] == Scalar(0)) continue;
    out = out + a[m] * detail::d_monomial<Scalar>(m);
  }
  return out;
}

using RealForm = Form<double>;
using ExactForm = Form<Rational>;

/// Shorthands for basis monomials, e.g. e(1) = e^1, e(2,3) = e^{23}; 5 means dt.
template <class Scalar = double>
Form<Scalar> e(std::initializer_list<int> indices, const Scalar& coefficient = Scalar(1)) {
  Form<Scalar> out = Form<Scalar>::constant(coefficient);
  for (int idx : indices) {
    if (idx < 1 || idx > kBasisSize) throw Error("basis index out of range");
    out = wedge(out, Form<Scalar>::monomial(basis_bit(idx - 1)));
  }
  return out;
}

}  // namespace sasaki
