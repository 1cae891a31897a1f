#pragma once

// Exact rational scalars (GMP) plus the conversions used throughout the
// library: parsing "num/den" / decimal strings, exact import of binary
// floating point values, and directed rounding back to long double.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include "oscillabound/error.hpp"

namespace oscillabound {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "num/den", a plain integer, or a decimal literal such as "-0.125"
/// or "3e-4". The result is exact.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto fail = [&] { throw ValidationError("malformed rational literal '" + s + "'"); };
  if (s.empty()) fail();
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    Integer num, den;
    if (num.set_str(s.substr(0, slash), 10) != 0) fail();
    if (den.set_str(s.substr(slash + 1), 10) != 0) fail();
    if (den == 0) throw ValidationError("zero denominator in '" + s + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  // Decimal with optional exponent.
  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
  std::string digits;
  long exponent = 0;
  bool seen_digit = false, seen_point = false;
  for (; pos < s.size(); ++pos) {
    const char c = s[pos];
    if (c >= '0' && c <= '9') {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) --exponent;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c == 'e' || c == 'E') {
      ++pos;
      break;
    } else {
      fail();
    }
  }
  if (!seen_digit) fail();
  if (pos < s.size() || (pos == s.size() && (s.back() == 'e' || s.back() == 'E'))) {
    std::size_t used = 0;
    long e = 0;
    try {
      e = std::stol(s.substr(pos), &used);
    } catch (...) {
      fail();
    }
    if (used != s.size() - pos) fail();
    exponent += e;
  }
  Integer mantissa(digits, 10);
  if (negative) mantissa = -mantissa;
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  Rational q = exponent >= 0 ? Rational(mantissa * scale) : Rational(mantissa, scale);
  q.canonicalize();
  return q;
}

/// "num/den" with a positive denominator; integers keep the "/1".
inline std::string to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// Exact conversion of a finite long double.
inline Rational to_rational(long double x) {
  if (!std::isfinite(x)) throw ValidationError("non-finite value cannot be made rational");
  if (x == 0.0L) return Rational(0);
  int exp2 = 0;
  long double frac = std::frexp(x, &exp2);  // x = frac * 2^exp2, |frac| in [0.5, 1)
  const bool negative = frac < 0;
  if (negative) frac = -frac;
  // 64 mantissa bits cover the x87 extended format exactly.
  const auto mant = static_cast<std::uint64_t>(std::ldexp(frac, 64));
  Integer num;
  mpz_import(num.get_mpz_t(), 1, 1, sizeof(mant), 0, 0, &mant);
  if (negative) num = -num;
  Rational q(num);
  const long shift = static_cast<long>(exp2) - 64;
  if (shift >= 0) {
    mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(shift));
  } else {
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-shift));
  }
  return q;
}

inline Rational to_rational(double x) { return to_rational(static_cast<long double>(x)); }

/// Nearest long double (at most one ulp off; use the directed variants when
/// the rounding direction matters).
inline long double to_long_double(const Rational& q) {
  if (q == 0) return 0.0L;
  // Scale so that numerator / denominator has ~80 significant bits.
  const long nbits = static_cast<long>(mpz_sizeinbase(q.get_num_mpz_t(), 2));
  const long dbits = static_cast<long>(mpz_sizeinbase(q.get_den_mpz_t(), 2));
  const long shift = 80 - (nbits - dbits);
  Integer scaled = q.get_num();
  if (shift >= 0) {
    mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
  }
  Integer quotient;
  if (shift >= 0) {
    mpz_tdiv_q(quotient.get_mpz_t(), scaled.get_mpz_t(), q.get_den_mpz_t());
  } else {
    Integer den = q.get_den();
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(-shift));
    mpz_tdiv_q(quotient.get_mpz_t(), scaled.get_mpz_t(), den.get_mpz_t());
  }
  // quotient has about 80 bits; split into two 64-bit limbs worth of value.
  long double value = 0.0L;
  Integer rest = abs(quotient);
  long bit = 0;
  while (rest != 0) {
    const unsigned long chunk = mpz_get_ui(rest.get_mpz_t()) & 0xffffffffUL;
    value += std::ldexp(static_cast<long double>(chunk), static_cast<int>(bit));
    rest >>= 32;
    bit += 32;
  }
  if (quotient < 0) value = -value;
  return std::ldexp(value, static_cast<int>(-shift));
}

inline long double round_down(const Rational& q) {
  long double x = to_long_double(q);
  while (to_rational(x) > q) x = std::nextafter(x, -std::numeric_limits<long double>::infinity());
  return x;
}

inline long double round_up(const Rational& q) {
  long double x = to_long_double(q);
  while (to_rational(x) < q) x = std::nextafter(x, std::numeric_limits<long double>::infinity());
  return x;
}

inline Rational rational_pow(const Rational& base, unsigned exponent) {
  Rational result(1);
  Rational b = base;
  while (exponent != 0) {
    if (exponent & 1U) result *= b;
    b *= b;
    exponent >>= 1U;
  }
  return result;
}

inline Integer integer_pow(unsigned long base, unsigned long exponent) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exponent);
  return r;
}

}  // namespace oscillabound
