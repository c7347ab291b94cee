#include "khier/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "khier/error.hpp"

namespace khier {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::InvalidStructure: return "INVALID_STRUCTURE";
    case ErrorCode::NumericallyAmbiguous: return "NUMERICALLY_AMBIGUOUS";
    case ErrorCode::NotPartiallyStrict: return "NOT_PARTIALLY_STRICT";
    case ErrorCode::ScaleTooSmall: return "SCALE_TOO_SMALL";
    case ErrorCode::VerificationFail: return "VERIFICATION_FAIL";
  }
  return "UNKNOWN";
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den))
    throw Error(ErrorCode::ParseError, "malformed rational \"" + std::string(text) + "\"");
  Integer p{std::string(num)}, q{std::string(den)};
  if (q == 0) throw Error(ErrorCode::ParseError, "zero denominator in \"" + std::string(text) + "\"");
  if (negative) p = -p;
  return Rational(p, q);
}

std::string to_string(const Rational& q) { return q.str(); }

Real to_real(const Rational& q) {
  return Real(numerator(q)) / Real(denominator(q));
}

Rational exact_rational(const Real& x) {
  if (x == 0) return Rational(0);
  int e = 0;
  Real f = frexp(x, &e);  // x = f * 2^e, 0.5 <= |f| < 1
  constexpr int bits = std::numeric_limits<Real>::digits;
  Real scaled = ldexp(f, bits);  // integral
  std::string digits = scaled.str(0, std::ios_base::fixed);
  Integer mant(digits.substr(0, digits.find('.')));
  int shift = e - bits;
  Rational r(mant);
  if (shift > 0) r *= Rational(Integer(1) << shift);
  if (shift < 0) r /= Rational(Integer(1) << -shift);
  return r;
}

std::string to_string(const Real& x, int digits) {
  // str() counts digits after the point in scientific mode
  return x.str(std::max(digits, 1) - 1, std::ios_base::scientific);
}

Rational decimal_rational(const Real& x, int digits) {
  if (x == 0) return Rational(0);
  std::string s = x.str(std::max(digits, 1) - 1, std::ios_base::scientific);
  auto epos = s.find('e');
  std::string mant = s.substr(0, epos);
  int exp10 = std::stoi(s.substr(epos + 1));
  bool negative = !mant.empty() && mant[0] == '-';
  std::string dig;
  int frac = 0;
  bool seen_point = false;
  for (char c : mant) {
    if (c == '.') {
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      dig.push_back(c);
      if (seen_point) ++frac;
    }
  }
  Integer m(dig);
  if (negative) m = -m;
  int p = exp10 - frac;
  Integer ten = mp::pow(Integer(10), unsigned(p < 0 ? -p : p));
  return p >= 0 ? Rational(m * ten) : Rational(m, ten);
}

std::optional<Rational> rationalize(const Real& x, const Real& tol, const Integer& max_den) {
  Real bound = tol * (abs(x) > 1 ? Real(abs(x)) : Real(1));
  Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  Real rem = x;
  for (int iter = 0; iter < 200; ++iter) {
    Real a_real = floor(rem);
    Integer a = numerator(exact_rational(a_real));
    Integer p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > max_den) break;
    Rational cand(p2, q2);
    if (abs(x - to_real(cand)) <= bound) return cand;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    Real f = rem - a_real;
    if (f == 0) break;
    rem = 1 / f;
  }
  return std::nullopt;
}

}  // namespace khier
