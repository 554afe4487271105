#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace sasaki {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses "p/q", an integer, or a decimal literal ("-0.125", "1e-3") exactly.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& value);

inline double to_double(const Rational& value) {
  return value.convert_to<double>();
}

inline double to_double(double value) { return value; }

/// Best rational approximation whose denominator does not exceed
/// `max_denominator` (continued-fraction convergents and semiconvergents).
Rational rationalize(double value, const Integer& max_denominator);

std::int64_t to_int64(const Integer& value);

Integer numerator_of(const Rational& value);
Integer denominator_of(const Rational& value);

/// Exact square root of a nonnegative rational, if it is a rational square.
std::optional<Rational> rational_sqrt(const Rational& value);

}  // namespace sasaki
