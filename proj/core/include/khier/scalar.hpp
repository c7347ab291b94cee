#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace khier {

namespace mp = boost::multiprecision;

using Rational = mp::mpq_rational;
using Integer = mp::mpz_int;
// 256-bit mantissa; the exponent range of cpp_bin_float is far beyond 2^4096.
using Real = mp::number<mp::cpp_bin_float<256, mp::digit_base_2>, mp::et_off>;

// "p/q" or "p", optional leading '-'. Throws Error(ParseError).
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

Real to_real(const Rational& q);
// Exact value of a binary float.
Rational exact_rational(const Real& x);

// Decimal string with the given number of significant digits.
std::string to_string(const Real& x, int digits = 40);

// Best continued-fraction convergent p/q with q <= max_den and
// |x - p/q| <= tol * max(1, |x|); nullopt if none qualifies.
std::optional<Rational> rationalize(const Real& x, const Real& tol, const Integer& max_den);

// The decimal value printed with `digits` significant digits, as an exact rational.
Rational decimal_rational(const Real& x, int digits = 40);

}  // namespace khier
