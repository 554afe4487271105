#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "sasaki/exterior.hpp"

using namespace sasaki;

namespace {

RealForm random_form(int degree, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RealForm f(degree);
  for (Monomial m : monomials(degree)) f = f + RealForm::monomial(m, u(rng));
  return f;
}

ExactForm random_exact(int degree, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
  ExactForm f(degree);
  for (Monomial m : monomials(degree)) f = f + ExactForm::monomial(m, Rational(num(rng), den(rng)));
  return f;
}

// Wedge of basis monomials by sorting the concatenated index list and counting
// transpositions; independent of the bit-counting implementation.
int permutation_sign(std::vector<int> idx) {
  int sign = 1;
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j + 1 < idx.size() - i; ++j)
      if (idx[j] > idx[j + 1]) {
        std::swap(idx[j], idx[j + 1]);
        sign = -sign;
      } else if (idx[j] == idx[j + 1]) {
        return 0;
      }
  for (std::size_t i = 0; i + 1 < idx.size(); ++i)
    if (idx[i] == idx[i + 1]) return 0;
  return sign;
}

std::vector<int> indices(Monomial m) {
  std::vector<int> out;
  for (int i = 0; i < kBasisSize; ++i)
    if (m & basis_bit(i)) out.push_back(i);
  return out;
}

}  // namespace

TEST(Exterior, MonomialCountsAndLabels) {
  for (int d = 0; d <= 5; ++d) {
    int expected = 1;
    for (int i = 0; i < d; ++i) expected = expected * (5 - i) / (i + 1);
    EXPECT_EQ(static_cast<int>(monomials(d).size()), expected);
  }
  EXPECT_EQ(monomial_label(basis_bit(1) | basis_bit(2)), "23");
  EXPECT_EQ(monomial_label(basis_bit(0) | basis_bit(3) | basis_bit(4)), "14t");
  EXPECT_EQ(parse_monomial("14t"), basis_bit(0) | basis_bit(3) | basis_bit(4));
  // lexicographic order with dt last
  EXPECT_EQ(monomial_label(monomials(2).front()), "12");
  EXPECT_EQ(monomial_label(monomials(2).back()), "4t");
}

TEST(Exterior, WedgeExamples) {
  EXPECT_EQ(wedge(e({1}), e({2})), e({1, 2}));
  EXPECT_TRUE(wedge(e({1}), e({1})).is_zero());
  RealForm lhs = wedge(e({1}) + e({4}), e({2, 3}));
  EXPECT_EQ(lhs, e({1, 2, 3}) + e({4, 2, 3}));
  EXPECT_EQ(e({4, 2, 3}), e({2, 3, 4}));
  EXPECT_THROW(wedge(e({1, 2, 3}), e({4, 5, 1})), Error);
}

TEST(Exterior, WedgeMatchesPermutationOracle) {
  for (int da = 0; da <= 5; ++da)
    for (int db = 0; da + db <= 5; ++db)
      for (Monomial a : monomials(da))
        for (Monomial b : monomials(db)) {
          std::vector<int> cat = indices(a);
          auto ib = indices(b);
          cat.insert(cat.end(), ib.begin(), ib.end());
          int sign = permutation_sign(cat);
          RealForm w = wedge(RealForm::monomial(a), RealForm::monomial(b));
          if (sign == 0) {
            EXPECT_TRUE(w.is_zero());
          } else {
            EXPECT_EQ(w, RealForm::monomial(a | b, sign));
          }
        }
}

TEST(Exterior, DerivativeExamples) {
  EXPECT_EQ(d_invariant(e({1})), e({2, 3}, -1.0));
  EXPECT_EQ(d_invariant(e({2})), e({3, 1}, -1.0));
  EXPECT_EQ(d_invariant(e({3})), e({1, 2}, -1.0));
  EXPECT_TRUE(d_invariant(e({4})).is_zero());
  EXPECT_TRUE(d_invariant(e({5})).is_zero());
  EXPECT_TRUE(d_invariant(e({2, 3})).is_zero());
  ExactForm x = e<Rational>({1}, Rational(1, 3)) + e<Rational>({4});
  EXPECT_EQ(d_invariant(x), e<Rational>({2, 3}, Rational(-1, 3)));
}

TEST(Exterior, DSquaredVanishesExactly) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial)
    for (int d = 0; d <= 3; ++d) {
      EXPECT_TRUE(d_invariant(d_invariant(random_exact(d, rng))).is_zero());
      EXPECT_LE(d_invariant(d_invariant(random_form(d, rng))).max_abs(), 1e-15);
    }
}

TEST(Exterior, LeibnizRule) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial)
    for (int da = 0; da <= 3; ++da)
      for (int db = 0; da + db <= 4; ++db) {
        ExactForm a = random_exact(da, rng), b = random_exact(db, rng);
        ExactForm lhs = d_invariant(wedge(a, b));
        ExactForm rhs = wedge(d_invariant(a), b);
        ExactForm second = wedge(a, d_invariant(b));
        rhs = (da % 2 == 0) ? rhs + second : rhs - second;
        EXPECT_EQ(lhs, rhs);
      }
}

TEST(Exterior, GradedAntisymmetry) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial)
    for (int da = 0; da <= 5; ++da)
      for (int db = 0; da + db <= 5; ++db) {
        ExactForm a = random_exact(da, rng), b = random_exact(db, rng);
        ExactForm ab = wedge(a, b), ba = wedge(b, a);
        EXPECT_EQ(ab, (da * db) % 2 == 0 ? ba : -ba);
      }
}

TEST(Exterior, Associativity) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    ExactForm a = random_exact(1, rng), b = random_exact(2, rng), c = random_exact(1, rng);
    EXPECT_EQ(wedge(wedge(a, b), c), wedge(a, wedge(b, c)));
  }
}

TEST(Exterior, DegreeErrors) {
  EXPECT_THROW(RealForm(6), Error);
  EXPECT_THROW(e({1}) + e({1, 2}), Error);
  EXPECT_THROW(e({6}), Error);
}
