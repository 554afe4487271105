#include "sasaki/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>

namespace sasaki {

namespace {

Integer parse_integer(std::string_view text) {
  if (text.empty()) throw Error("empty integer literal");
  std::size_t pos = 0;
  bool negative = false;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    pos = 1;
  }
  if (pos == text.size()) throw Error("malformed integer literal");
  Integer value = 0;
  for (; pos < text.size(); ++pos) {
    if (!std::isdigit(static_cast<unsigned char>(text[pos]))) {
      throw Error("malformed number: '" + std::string(text) + "'");
    }
    value = value * 10 + (text[pos] - '0');
  }
  return negative ? Integer(-value) : value;
}

Integer pow10(long exponent) {
  Integer result = 1;
  for (long i = 0; i < exponent; ++i) result *= 10;
  return result;
}

Rational parse_decimal(std::string_view text) {
  std::size_t exp_pos = text.find_first_of("eE");
  long exponent = 0;
  std::string_view mantissa = text;
  if (exp_pos != std::string_view::npos) {
    exponent = static_cast<long>(to_int64(parse_integer(text.substr(exp_pos + 1))));
    mantissa = text.substr(0, exp_pos);
  }
  bool negative = false;
  if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
    negative = mantissa[0] == '-';
    mantissa.remove_prefix(1);
  }
  std::string digits;
  long fraction_digits = 0;
  bool seen_point = false;
  for (char ch : mantissa) {
    if (ch == '.') {
      if (seen_point) throw Error("malformed number: '" + std::string(text) + "'");
      seen_point = true;
    } else {
      digits.push_back(ch);
      if (seen_point) ++fraction_digits;
    }
  }
  if (digits.empty()) throw Error("malformed number: '" + std::string(text) + "'");
  Rational value(parse_integer(digits));
  long shift = exponent - fraction_digits;
  if (shift >= 0) {
    value *= Rational(pow10(shift));
  } else {
    value /= Rational(pow10(-shift));
  }
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw Error("empty number");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(text.substr(0, slash));
    Integer den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw Error("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }
  if (text.find_first_of(".eE") != std::string_view::npos) return parse_decimal(text);
  return Rational(parse_integer(text));
}

std::string to_string(const Rational& value) {
  Integer num = numerator_of(value);
  Integer den = denominator_of(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Integer numerator_of(const Rational& value) {
  return boost::multiprecision::numerator(value);
}

Integer denominator_of(const Rational& value) {
  return boost::multiprecision::denominator(value);
}

std::int64_t to_int64(const Integer& value) {
  if (value > std::numeric_limits<std::int64_t>::max() ||
      value < std::numeric_limits<std::int64_t>::min()) {
    throw Error("integer out of 64-bit range: " + value.str());
  }
  return value.convert_to<std::int64_t>();
}

Rational rationalize(double value, const Integer& max_denominator) {
  if (!std::isfinite(value)) throw Error("cannot rationalize a non-finite value");
  // Exact binary expansion of the double, then Stern-Brocot style convergents.
  int exp = 0;
  double mant = std::frexp(value, &exp);
  auto scaled = static_cast<long long>(std::ldexp(mant, 53));
  Rational exact(scaled);
  if (exp - 53 >= 0) {
    exact *= Rational(Integer(1) << (exp - 53));
  } else {
    exact /= Rational(Integer(1) << (53 - exp));
  }

  Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  Rational x = exact;
  Rational best(0);
  for (int iter = 0; iter < 200; ++iter) {
    Integer num = numerator_of(x), den = denominator_of(x);
    Integer a = num / den;
    if (num < 0 && a * den != num) a -= 1;  // floor
    Integer p2 = a * p1 + p0;
    Integer q2 = a * q1 + q0;
    if (q2 > max_denominator) {
      // Best semiconvergent within the bound.
      Integer k = (max_denominator - q0) / q1;
      Rational semi(k * p1 + p0, k * q1 + q0);
      Rational conv(p1, q1);
      Rational d_semi = semi - exact, d_conv = conv - exact;
      if (d_semi < 0) d_semi = -d_semi;
      if (d_conv < 0) d_conv = -d_conv;
      return (k > 0 && d_semi < d_conv) ? semi : conv;
    }
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    best = Rational(p1, q1);
    Rational frac = x - Rational(a);
    if (frac == 0) return best;
    x = 1 / frac;
  }
  return best;
}

std::optional<Rational> rational_sqrt(const Rational& value) {
  if (value < 0) return std::nullopt;
  Integer num = numerator_of(value), den = denominator_of(value);
  Integer rn = boost::multiprecision::sqrt(num);
  Integer rd = boost::multiprecision::sqrt(den);
  if (rn * rn != num || rd * rd != den) return std::nullopt;
  return Rational(rn, rd);
}

}  // namespace sasaki
