#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "oscillabound/rational.hpp"

namespace oscillabound {

/// Dense univariate polynomial with exact rational coefficients a_0..a_n.
/// Trailing zeros are always trimmed, so degree() is the index of the last
/// nonzero coefficient and the zero polynomial has degree -1.
class RationalPoly {
 public:
  RationalPoly() = default;
  explicit RationalPoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }
  RationalPoly(std::initializer_list<Rational> coeffs) : coeffs_(coeffs) { trim(); }

  static RationalPoly constant(const Rational& c) { return RationalPoly({c}); }
  static RationalPoly monomial(std::size_t degree, const Rational& c = Rational(1)) {
    std::vector<Rational> v(degree + 1);
    v[degree] = c;
    return RationalPoly(std::move(v));
  }

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  const std::vector<Rational>& coeffs() const noexcept { return coeffs_; }

  /// Coefficient of x^j (zero beyond the degree).
  Rational operator[](std::size_t j) const { return j < coeffs_.size() ? coeffs_[j] : Rational(0); }
  const Rational& leading() const { return coeffs_.back(); }

  Rational operator()(const Rational& x) const {
    Rational acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  int sign_at(const Rational& x) const { return sgn((*this)(x)); }

  template <class Real>
  Real evaluate(Real x) const {
    Real acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + static_cast<Real>(to_long_double(*it));
    return acc;
  }

  RationalPoly derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<Rational> d(coeffs_.size() - 1);
    for (std::size_t j = 1; j < coeffs_.size(); ++j) d[j - 1] = coeffs_[j] * static_cast<unsigned long>(j);
    return RationalPoly(std::move(d));
  }

  RationalPoly& operator+=(const RationalPoly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) coeffs_[j] += o.coeffs_[j];
    trim();
    return *this;
  }
  RationalPoly& operator-=(const RationalPoly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) coeffs_[j] -= o.coeffs_[j];
    trim();
    return *this;
  }
  RationalPoly& operator*=(const Rational& c) {
    if (c == 0) {
      coeffs_.clear();
      return *this;
    }
    for (auto& a : coeffs_) a *= c;
    return *this;
  }
  friend RationalPoly operator+(RationalPoly a, const RationalPoly& b) { return a += b; }
  friend RationalPoly operator-(RationalPoly a, const RationalPoly& b) { return a -= b; }
  friend RationalPoly operator*(RationalPoly a, const Rational& c) { return a *= c; }
  friend RationalPoly operator*(const Rational& c, RationalPoly a) { return a *= c; }
  friend RationalPoly operator-(RationalPoly a) { return a *= Rational(-1); }
  friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> r(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) r[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return RationalPoly(std::move(r));
  }
  friend bool operator==(const RationalPoly& a, const RationalPoly& b) { return a.coeffs_ == b.coeffs_; }

  /// Euclidean division: *this = q * d + r with deg r < deg d.
  std::pair<RationalPoly, RationalPoly> divmod(const RationalPoly& d) const {
    if (d.is_zero()) throw ValidationError("polynomial division by zero");
    std::vector<Rational> rem = coeffs_;
    const int dd = d.degree();
    if (degree() < dd) return {RationalPoly{}, *this};
    std::vector<Rational> q(static_cast<std::size_t>(degree() - dd + 1));
    for (int k = degree() - dd; k >= 0; --k) {
      const Rational c = rem[static_cast<std::size_t>(k + dd)] / d.leading();
      q[static_cast<std::size_t>(k)] = c;
      if (c == 0) continue;
      for (int j = 0; j <= dd; ++j) rem[static_cast<std::size_t>(k + j)] -= c * d.coeffs_[static_cast<std::size_t>(j)];
    }
    rem.resize(static_cast<std::size_t>(dd));
    return {RationalPoly(std::move(q)), RationalPoly(std::move(rem))};
  }

  RationalPoly monic() const {
    if (is_zero()) return {};
    return *this * (Rational(1) / leading());
  }

  /// Divides out the positive content so coefficients stay small; sign of the
  /// polynomial is preserved (Sturm sequences rely on that).
  RationalPoly primitive() const {
    if (is_zero()) return {};
    Integer num_gcd(0), den_lcm(1);
    for (const auto& c : coeffs_) {
      if (c == 0) continue;
      mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num_mpz_t());
      mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
    }
    return *this * Rational(den_lcm, num_gcd);
  }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }
  std::vector<Rational> coeffs_;
};

/// Monic gcd (zero if both are zero).
inline RationalPoly gcd(RationalPoly a, RationalPoly b) {
  while (!b.is_zero()) {
    auto r = a.divmod(b).second;
    a = std::move(b);
    b = r.primitive();
  }
  return a.monic();
}

inline RationalPoly square_free_part(const RationalPoly& p) {
  if (p.degree() <= 0) return p;
  const RationalPoly g = gcd(p, p.derivative());
  return p.divmod(g).first;
}

inline std::ostream& operator<<(std::ostream& os, const RationalPoly& p) {
  if (p.is_zero()) return os << "0";
  bool first = true;
  for (int j = p.degree(); j >= 0; --j) {
    const Rational& c = p.coeffs()[static_cast<std::size_t>(j)];
    if (c == 0) continue;
    if (!first) os << (c > 0 ? " + " : " - ");
    else if (c < 0) os << "-";
    first = false;
    const Rational a = abs(c);
    if (j == 0 || a != 1) os << a.get_str();
    if (j >= 1) os << "x";
    if (j >= 2) os << "^" << j;
  }
  return os;
}

}  // namespace oscillabound
