#pragma once

// p-adic side: scalars, the Tate character, exact ball and sphere integrals
// of psi(F(s)) for rational polynomials F, mu_hat over Q_p and its certified
// floor.
//
// Ball integrals are exact. With s = p^k u the integrand on Z_p becomes
// zeta^{G(u)} for an integer polynomial G taken mod p^D, zeta = e^{2 pi i/p^D}.
// Z_p is split into residue classes u0 + p^l Z_p until G restricted to a
// class is affine in the local variable; an affine character integrates to
// either 0 or its constant term. The result is a finite sum of roots of
// unity with rational weights.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "oscillabound/linalg.hpp"
#include "oscillabound/polycore.hpp"
#include "oscillabound/quadrature.hpp"

namespace oscillabound {

inline bool is_prime(unsigned long p) {
  if (p < 2) return false;
  for (unsigned long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

inline void require_prime(unsigned long p) {
  if (!is_prime(p)) throw ValidationError(std::to_string(p) + " is not a prime");
}

/// v_p(x) of a nonzero integer.
inline long integer_valuation(const Integer& x, unsigned long p) {
  if (x == 0) throw ValidationError("valuation of zero");
  Integer y = abs(x);
  long v = 0;
  while (mpz_divisible_ui_p(y.get_mpz_t(), p)) {
    mpz_divexact_ui(y.get_mpz_t(), y.get_mpz_t(), p);
    ++v;
  }
  return v;
}

/// v_p(q); nullopt for q = 0.
inline std::optional<long> padic_valuation(const Rational& q, unsigned long p) {
  if (q == 0) return std::nullopt;
  return integer_valuation(q.get_num(), p) - integer_valuation(q.get_den(), p);
}

/// p^e for integer e (negative allowed).
inline Rational rational_power(unsigned long p, long e) {
  const Integer pe = integer_pow(p, static_cast<unsigned long>(e < 0 ? -e : e));
  return e >= 0 ? Rational(pe) : Rational(Integer(1), pe);
}

/// q * p^shift as an integer mod p^digits; requires v_p(q) + shift >= 0.
inline Integer padic_residue(const Rational& q, unsigned long p, long shift, unsigned digits) {
  const Integer mod = integer_pow(p, digits);
  if (q == 0) return 0;
  const long v = *padic_valuation(q, p);
  if (v + shift < 0) throw PrecisionError("p-adic residue of a non-integral value");
  Integer num = q.get_num(), den = q.get_den();
  const long vn = integer_valuation(num, p), vd = integer_valuation(den, p);
  num /= integer_pow(p, static_cast<unsigned long>(vn));
  den /= integer_pow(p, static_cast<unsigned long>(vd));
  const long e = v + shift;
  if (static_cast<unsigned long>(e) >= digits) return 0;
  Integer inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
  Integer r = num * inv * integer_pow(p, static_cast<unsigned long>(e));
  mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), mod.get_mpz_t());
  return r;
}

/// x = p^v * u with u a unit known modulo p^precision. Zero has no valuation.
class PadicScalar {
 public:
  static constexpr unsigned default_precision = 64;

  explicit PadicScalar(unsigned long p, unsigned precision = default_precision) : p_(p), precision_(precision) {
    require_prime(p);
  }

  static PadicScalar from_rational(const Rational& q, unsigned long p, unsigned precision = default_precision) {
    PadicScalar x(p, precision);
    if (q == 0) return x;
    x.valuation_ = *padic_valuation(q, p);
    x.unit_ = padic_residue(q, p, -*x.valuation_, precision);
    return x;
  }

  static PadicScalar from_parts(unsigned long p, long valuation, const Integer& unit,
                                unsigned precision = default_precision) {
    PadicScalar x(p, precision);
    if (mpz_divisible_ui_p(unit.get_mpz_t(), p)) throw ValidationError("p-adic unit divisible by p");
    x.valuation_ = valuation;
    x.unit_ = unit;
    mpz_fdiv_r(x.unit_.get_mpz_t(), x.unit_.get_mpz_t(), integer_pow(p, precision).get_mpz_t());
    return x;
  }

  unsigned long prime() const noexcept { return p_; }
  unsigned precision() const noexcept { return precision_; }
  bool is_zero() const noexcept { return !valuation_.has_value(); }
  /// Throws for zero (valuation +infinity).
  long valuation() const {
    if (!valuation_) throw ValidationError("valuation of zero");
    return *valuation_;
  }
  const Integer& unit() const noexcept { return unit_; }

  /// ||x||_p = p^{-v}.
  Rational norm() const { return is_zero() ? Rational(0) : rational_power(p_, -*valuation_); }

  /// p^v * u: equals x modulo p^{v + precision}; exact for inputs built from
  /// rationals whose unit part is an integer below p^precision.
  Rational representative() const { return is_zero() ? Rational(0) : rational_power(p_, *valuation_) * Rational(unit_); }

  friend PadicScalar operator-(const PadicScalar& x) {
    PadicScalar r = x;
    if (!r.is_zero()) {
      r.unit_ = integer_pow(x.p_, x.precision_) - x.unit_;
    }
    return r;
  }

  friend PadicScalar operator+(const PadicScalar& x, const PadicScalar& y) {
    check_same_prime(x, y);
    if (x.is_zero()) return y;
    if (y.is_zero()) return x;
    const PadicScalar& lo = *x.valuation_ <= *y.valuation_ ? x : y;
    const PadicScalar& hi = *x.valuation_ <= *y.valuation_ ? y : x;
    const unsigned long gap = static_cast<unsigned long>(*hi.valuation_ - *lo.valuation_);
    // Absolute precision of the sum, counted from p^{v_lo}.
    const unsigned prec = static_cast<unsigned>(std::min<unsigned long>(lo.precision_, hi.precision_ + gap));
    const Integer mod = integer_pow(x.p_, prec);
    Integer s = lo.unit_ + hi.unit_ * integer_pow(x.p_, gap);
    mpz_fdiv_r(s.get_mpz_t(), s.get_mpz_t(), mod.get_mpz_t());
    PadicScalar r(x.p_, prec);
    if (s == 0) return r;  // cancelled below the working precision
    const long t = integer_valuation(s, x.p_);
    r.precision_ = prec - static_cast<unsigned>(t);
    r.valuation_ = *lo.valuation_ + t;
    r.unit_ = s / integer_pow(x.p_, static_cast<unsigned long>(t));
    return r;
  }

  friend PadicScalar operator-(const PadicScalar& x, const PadicScalar& y) { return x + (-y); }

  friend PadicScalar operator*(const PadicScalar& x, const PadicScalar& y) {
    check_same_prime(x, y);
    const unsigned prec = std::min(x.precision_, y.precision_);
    PadicScalar r(x.p_, prec);
    if (x.is_zero() || y.is_zero()) return r;
    r.valuation_ = *x.valuation_ + *y.valuation_;
    r.unit_ = x.unit_ * y.unit_;
    mpz_fdiv_r(r.unit_.get_mpz_t(), r.unit_.get_mpz_t(), integer_pow(x.p_, prec).get_mpz_t());
    return r;
  }

  /// Equal as p-adic numbers up to the common precision.
  friend bool operator==(const PadicScalar& x, const PadicScalar& y) {
    if (x.p_ != y.p_) return false;
    if (x.is_zero() || y.is_zero()) return x.is_zero() && y.is_zero();
    if (*x.valuation_ != *y.valuation_) return false;
    const Integer mod = integer_pow(x.p_, std::min(x.precision_, y.precision_));
    Integer d = x.unit_ - y.unit_;
    mpz_fdiv_r(d.get_mpz_t(), d.get_mpz_t(), mod.get_mpz_t());
    return d == 0;
  }

 private:
  static void check_same_prime(const PadicScalar& x, const PadicScalar& y) {
    if (x.p_ != y.p_) throw ValidationError("p-adic arithmetic across different primes");
  }

  unsigned long p_;
  unsigned precision_;
  std::optional<long> valuation_;
  Integer unit_{0};
};

/// psi(x) = exp(2 pi i r_x / p^{n_x}), kernel Z_p.
inline Complex tate_character(const PadicScalar& x) {
  if (x.is_zero() || x.valuation() >= 0) return {1.0L, 0.0L};
  const unsigned long n = static_cast<unsigned long>(-x.valuation());
  if (n > x.precision()) throw PrecisionError("Tate character needs " + std::to_string(n) + " digits of the unit");
  const Integer mod = integer_pow(x.prime(), n);
  Integer r = x.unit();
  mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), mod.get_mpz_t());
  return unit_phase(to_long_double(Rational(r, mod)));
}

inline Complex tate_character(const Rational& x, unsigned long p) {
  return tate_character(PadicScalar::from_rational(x, p, std::max<unsigned>(PadicScalar::default_precision, 8)));
}

/// max{0, v(a_n) - v(a_i)} over nonzero a_i, i < n.
inline long ess_part(const RationalPoly& f, unsigned long p) {
  if (f.degree() < 1) throw ValidationError("essential part needs degree >= 1");
  const long vn = *padic_valuation(f.leading(), p);
  long e = 0;
  for (int i = 0; i < f.degree(); ++i) {
    const Rational& a = f.coeffs()[static_cast<std::size_t>(i)];
    if (a != 0) e = std::max(e, vn - *padic_valuation(a, p));
  }
  return e;
}

inline long ess_part(const CurveFamily& family, unsigned long p) {
  long e = 0;
  for (const auto& f : family.polys()) e = std::max(e, ess_part(f, p));
  return e;
}

struct EchelonForm {
  /// reduced = B * original (as column vectors of polynomials).
  RationalMatrix B;
  CurveFamily reduced;
};

/// Row reduction on the columns x^n .. x^1 so that degrees strictly drop.
inline EchelonForm echelon_reduce(const CurveFamily& family) {
  const std::size_t m = family.m(), n = family.n();
  std::vector<RationalPoly> rows = family.polys();
  RationalMatrix B = RationalMatrix::identity(m);
  std::size_t r = 0;
  for (std::size_t col = n; col >= 1 && r < m; --col) {
    std::size_t piv = r;
    while (piv < m && rows[piv][col] == 0) ++piv;
    if (piv == m) continue;
    if (piv != r) {
      std::swap(rows[piv], rows[r]);
      for (std::size_t j = 0; j < m; ++j) std::swap(B(piv, j), B(r, j));
    }
    for (std::size_t i = r + 1; i < m; ++i) {
      if (rows[i][col] == 0) continue;
      const Rational f = rows[i][col] / rows[r][col];
      rows[i] -= rows[r] * f;
      for (std::size_t j = 0; j < m; ++j) B(i, j) -= f * B(r, j);
    }
    ++r;
  }
  for (const auto& row : rows) {
    if (row.degree() < 1) throw ValidationError("independence violation: echelon form has a constant row");
  }
  return {std::move(B), CurveFamily(std::move(rows))};
}

/// sum_e w_e zeta^e, zeta = e^{2 pi i / p^level}, with rational weights.
/// normalize() rewrites it in the basis {zeta^e : e < (p-1) p^{level-1}}
/// of Q(zeta), so the value is rational iff only e = 0 survives.
class CyclotomicSum {
 public:
  explicit CyclotomicSum(unsigned long p = 2, unsigned level = 0) : p_(p), level_(level) {}

  unsigned long prime() const noexcept { return p_; }
  unsigned level() const noexcept { return level_; }
  const std::map<std::uint64_t, Rational>& terms() const noexcept { return terms_; }

  void add(std::uint64_t exponent, unsigned level, const Rational& weight) {
    if (weight == 0) return;
    if (level > level_) lift(level);
    const std::uint64_t scale = ipow(p_, level_ - level);
    const std::uint64_t e = (exponent % ipow(p_, level)) * scale;
    auto [it, inserted] = terms_.emplace(e, weight);
    if (!inserted) {
      it->second += weight;
      if (it->second == 0) terms_.erase(it);
    }
  }

  void lift(unsigned level) {
    if (level <= level_) return;
    if (ipow_checked(p_, level) == 0) throw PrecisionError("cyclotomic level exceeds 64-bit exponents");
    const std::uint64_t scale = ipow(p_, level - level_);
    std::map<std::uint64_t, Rational> next;
    for (auto& [e, w] : terms_) next.emplace(e * scale, std::move(w));
    terms_ = std::move(next);
    level_ = level;
  }

  CyclotomicSum& operator+=(const CyclotomicSum& o) {
    if (o.p_ != p_ && !o.terms_.empty() && !terms_.empty()) throw ValidationError("cyclotomic sums over different primes");
    if (terms_.empty()) p_ = o.p_;
    for (const auto& [e, w] : o.terms_) add(e, o.level_, w);
    return *this;
  }

  CyclotomicSum& operator*=(const Rational& c) {
    if (c == 0) terms_.clear();
    for (auto& [e, w] : terms_) w *= c;
    return *this;
  }

  CyclotomicSum conjugate() const {
    CyclotomicSum r(p_, level_);
    const std::uint64_t mod = ipow(p_, level_);
    for (const auto& [e, w] : terms_) r.add((mod - e) % mod, level_, w);
    return r;
  }

  /// Canonical coordinates in the power basis of Q(zeta_{p^level}).
  void normalize() {
    if (level_ == 0) return;
    const std::uint64_t step = ipow(p_, level_ - 1);
    const std::uint64_t top = (p_ - 1) * step;
    std::vector<std::pair<std::uint64_t, Rational>> high;
    for (auto it = terms_.lower_bound(top); it != terms_.end();) {
      high.emplace_back(it->first - top, it->second);
      it = terms_.erase(it);
    }
    // zeta^{e + (p-1) step} = -sum_{s < p-1} zeta^{e + s step}.
    for (const auto& [e, w] : high)
      for (std::uint64_t s = 0; s + 1 < p_; ++s) add(e + s * step, level_, -w);
  }

  std::optional<Rational> as_rational() const {
    CyclotomicSum c = *this;
    c.normalize();
    if (c.terms_.empty()) return Rational(0);
    if (c.terms_.size() == 1 && c.terms_.begin()->first == 0) return c.terms_.begin()->second;
    return std::nullopt;
  }

  Complex value() const {
    Complex acc{0.0L, 0.0L};
    const long double mod = static_cast<long double>(ipow(p_, level_));
    for (const auto& [e, w] : terms_) acc += unit_phase(static_cast<long double>(e) / mod) * to_long_double(w);
    return acc;
  }

  static std::uint64_t ipow(unsigned long p, unsigned e) {
    std::uint64_t r = 1;
    for (unsigned i = 0; i < e; ++i) r *= p;
    return r;
  }

 private:
  /// p^e, or 0 if it does not fit in 62 bits.
  static std::uint64_t ipow_checked(unsigned long p, unsigned e) {
    unsigned __int128 r = 1;
    for (unsigned i = 0; i < e; ++i) {
      r *= p;
      if (r > (static_cast<unsigned __int128>(1) << 62)) return 0;
    }
    return static_cast<std::uint64_t>(r);
  }

  unsigned long p_;
  unsigned level_;
  std::map<std::uint64_t, Rational> terms_;
};

/// The ball integral p^{-k} p^{-D} sum_e count_e zeta_{p^D}^e.
struct BallIntegral {
  unsigned long p = 2;
  long k = 0;
  unsigned D = 0;
  std::vector<std::pair<std::uint64_t, std::int64_t>> leaves;  // (exponent, count)
  std::size_t nodes = 0;

  Rational scale() const { return rational_power(p, -k - static_cast<long>(D)); }

  Complex value() const {
    const long double mod = static_cast<long double>(CyclotomicSum::ipow(p, D));
    Complex acc{0.0L, 0.0L};
    for (const auto& [e, c] : leaves) acc += unit_phase(static_cast<long double>(e) / mod) * static_cast<long double>(c);
    return acc * to_long_double(scale());
  }

  CyclotomicSum exact() const {
    CyclotomicSum s(p, D);
    const Rational w = scale();
    for (const auto& [e, c] : leaves) s.add(e, D, w * Rational(static_cast<long>(c)));
    return s;
  }
};

namespace detail {

using u128 = unsigned __int128;

struct ModPoly {
  std::vector<std::uint64_t> c;  // coefficients mod `mod`
};

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t mod) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % mod);
}

/// Q(w) = P(d + p w) mod `mod`.
inline ModPoly shift_scale(const ModPoly& P, std::uint64_t d, std::uint64_t p, std::uint64_t mod) {
  ModPoly Q = P;
  const std::size_t n = Q.c.size();
  // Taylor shift by d: repeated synthetic division.
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = n - 1; j > i; --j) Q.c[j - 1] = (Q.c[j - 1] + mulmod(Q.c[j], d, mod)) % mod;
  std::uint64_t pw = 1;
  for (std::size_t i = 0; i < n; ++i) {
    Q.c[i] = mulmod(Q.c[i], pw, mod);
    pw = mulmod(pw, p, mod);
  }
  return Q;
}

inline void ball_recurse(const ModPoly& P, unsigned level, unsigned D, std::uint64_t p, std::uint64_t mod,
                         std::uint64_t weight, BallIntegral& out) {
  ++out.nodes;
  bool affine = true;
  for (std::size_t i = 2; i < P.c.size(); ++i) affine = affine && P.c[i] == 0;
  if (affine) {
    if (P.c.size() < 2 || P.c[1] == 0) out.leaves.emplace_back(P.c.empty() ? 0 : P.c[0], static_cast<std::int64_t>(weight));
    return;
  }
  if (level >= D) throw ConsistencyError("ball recursion passed the residue depth");
  for (std::uint64_t d = 0; d < p; ++d) ball_recurse(shift_scale(P, d, p, mod), level + 1, D, p, mod, weight / p, out);
}

}  // namespace detail

/// Largest p^D allowed for ball integrals.
inline constexpr std::uint64_t max_ball_modulus = std::uint64_t{1} << 62;

/// int over p^k Z_p of psi(F(s)) ds.
inline BallIntegral ball_integral(const RationalPoly& F, long k, unsigned long p) {
  BallIntegral out;
  out.p = p;
  out.k = k;
  // h_j = F_j p^{jk}; D = max(0, -min v(h_j)).
  long D = 0;
  for (int j = 0; j <= F.degree(); ++j) {
    const Rational& c = F.coeffs()[static_cast<std::size_t>(j)];
    if (c == 0) continue;
    D = std::max(D, -(*padic_valuation(c, p) + j * k));
  }
  std::uint64_t mod = 1;
  for (long i = 0; i < D; ++i) {
    if (mod > max_ball_modulus / p) throw PrecisionError("ball integral needs p^" + std::to_string(D) + " > 2^62");
    mod *= p;
  }
  out.D = static_cast<unsigned>(D);
  detail::ModPoly G;
  for (int j = 0; j <= std::max(F.degree(), 0); ++j) {
    const Rational& c = F[static_cast<std::size_t>(j)];
    const Integer r = padic_residue(c, p, D + j * k, out.D);
    G.c.push_back(r.get_ui());
  }
  detail::ball_recurse(G, 0, out.D, p, mod, mod, out);
  return out;
}

struct SphereSum {
  long r = 0;
  Complex value{0.0L, 0.0L};
  std::optional<CyclotomicSum> exact;
};

/// int over C_r = {||s|| = p^r} of psi(F(s)) ds.
inline SphereSum sphere_character_sum(const RationalPoly& F, long r, unsigned long p, bool exact = false) {
  const BallIntegral outer = ball_integral(F, -r, p);
  const BallIntegral inner = ball_integral(F, -(r - 1), p);
  SphereSum s;
  s.r = r;
  s.value = outer.value() - inner.value();
  if (exact) {
    CyclotomicSum e = outer.exact();
    CyclotomicSum i = inner.exact();
    i *= Rational(-1);
    e += i;
    s.exact = std::move(e);
  }
  return s;
}

inline SphereSum sphere_character_sum(const RationalPoly& f, const Rational& lambda, long r, unsigned long p,
                                      bool exact = false) {
  return sphere_character_sum(f * lambda, r, p, exact);
}

struct PadicWindow {
  long a = 1;
  long T = 2;
  unsigned long p = 2;

  /// L = 2 (T - a + 1)(1 - 1/p).
  Rational normalization() const {
    return Rational(2 * (T - a + 1)) * (Rational(1) - Rational(1, static_cast<unsigned long>(p)));
  }

  void validate(const CurveFamily& family) const {
    require_prime(p);
    if (!(T > a)) throw ValidationError("p-adic window requires T > a");
    const long ess = ess_part(family, p);
    if (!(a > ess)) {
      throw ValidationError("p-adic window start a = " + std::to_string(a) + " must exceed max Ess = " +
                            std::to_string(ess));
    }
  }
};

struct PadicMuHat {
  long double value = 1.0L;
  /// Set when the value was computed exactly and is rational.
  std::optional<Rational> exact;
  std::size_t nodes = 0;
};

/// Combined phase sum_i lambda_i f_i(s).
inline RationalPoly combined_phase(const CurveFamily& family, std::span<const Rational> lambda) {
  if (lambda.size() != family.m()) throw ValidationError("frequency dimension mismatch");
  RationalPoly F;
  for (std::size_t i = 0; i < family.m(); ++i) F += family[i] * lambda[i];
  return F;
}

/// (1/L) sum_{r=a}^{T} p^{-r} 2 Re(int_{C_r} psi(F)).
inline PadicMuHat mu_hat_padic(const CurveFamily& family, const PadicWindow& w, std::span<const Rational> lambda,
                               bool exact = true) {
  w.validate(family);
  const RationalPoly F = combined_phase(family, lambda);
  const Rational L = w.normalization();
  PadicMuHat out;
  // Balls p^k Z_p for k = -T .. -(a-1); sphere r = ball(-r) - ball(-(r-1)).
  std::vector<BallIntegral> balls;
  for (long k = -w.T; k <= -(w.a - 1); ++k) {
    balls.push_back(ball_integral(F, k, w.p));
    out.nodes += balls.back().nodes;
  }
  auto ball = [&](long k) -> const BallIntegral& { return balls[static_cast<std::size_t>(k + w.T)]; };
  Complex acc{0.0L, 0.0L};
  CyclotomicSum total(w.p, 0);
  for (long r = w.a; r <= w.T; ++r) {
    const Rational pr = rational_power(w.p, -r);
    acc += (ball(-r).value() - ball(-(r - 1)).value()) * to_long_double(pr);
    if (exact) {
      CyclotomicSum s = ball(-r).exact();
      CyclotomicSum inner = ball(-(r - 1)).exact();
      inner *= Rational(-1);
      s += inner;
      s *= pr;
      total += s;
    }
  }
  out.value = std::clamp(2.0L * acc.real() / to_long_double(L), -1.0L, 1.0L);
  if (exact) {
    CyclotomicSum re = total;
    re += total.conjugate();  // 2 Re
    re *= Rational(1) / L;
    out.exact = re.as_rational();
    if (out.exact) out.value = to_long_double(*out.exact);
  }
  return out;
}

/// lambda_i given p-adically; the representatives must agree with lambda_i
/// to enough digits that psi(lambda f(s)) is unaffected on the window.
inline PadicMuHat mu_hat_padic(const CurveFamily& family, const PadicWindow& w, std::span<const PadicScalar> lambda,
                               bool exact = true) {
  std::vector<Rational> q;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    const PadicScalar& x = lambda[i];
    if (x.prime() != w.p) throw ValidationError("frequency prime differs from the window prime");
    if (!x.is_zero() && i < family.m()) {
      // Error term (lambda - rep) f_i(s) has valuation >= v + N + min_j(v(a_ij) - j T).
      long worst = 0;
      for (int j = 0; j <= family[i].degree(); ++j) {
        const Rational& a = family[i].coeffs()[static_cast<std::size_t>(j)];
        if (a != 0) worst = std::min(worst, *padic_valuation(a, w.p) - j * w.T);
      }
      if (x.valuation() + static_cast<long>(x.precision()) + worst < 0) {
        throw PrecisionError("p-adic frequency precision too low for the window");
      }
    }
    q.push_back(x.representative());
  }
  return mu_hat_padic(family, w, std::span<const Rational>(q), exact);
}

struct VdcCheck {
  long double lhs = 0.0L;
  long double rhs = 0.0L;
  bool ok = false;
};

/// |int over p^r Z_p of psi(lambda f)| against 2 p^n / ||lambda a_n||^{1/n}.
inline VdcCheck padic_vdc_check(const RationalPoly& f, const Rational& lambda, long r, unsigned long p) {
  require_prime(p);
  const RationalPoly F = f * lambda;
  if (F.degree() < 1) throw ValidationError("van der Corput check needs a nonconstant phase");
  const long n = F.degree();
  VdcCheck c;
  c.lhs = std::abs(ball_integral(F, r, p).value());
  const long v = *padic_valuation(F.leading(), p);
  c.rhs = 2.0L * std::pow(static_cast<long double>(p), static_cast<long double>(n) + static_cast<long double>(v) / n);
  c.ok = c.lhs <= c.rhs + 1e-9L;
  return c;
}

struct PadicCertificate {
  /// 16 sum_i p^{deg f'_i} over the echelon-reduced family.
  Integer bound;
  /// -bound / L.
  Rational floor;
  EchelonForm echelon;
  long ess = 0;
};

inline PadicCertificate certified_bound_padic(const CurveFamily& family, const PadicWindow& w) {
  require_prime(w.p);
  require_independent(family);
  PadicCertificate c{Integer(0), Rational(0), echelon_reduce(family), 0};
  c.ess = std::max(ess_part(c.echelon.reduced, w.p), ess_part(family, w.p));
  if (!(w.T > w.a)) throw ValidationError("p-adic window requires T > a");
  if (!(w.a > c.ess)) {
    throw ValidationError("p-adic window start a = " + std::to_string(w.a) + " must exceed max Ess = " +
                          std::to_string(c.ess));
  }
  for (const auto& f : c.echelon.reduced.polys()) c.bound += integer_pow(w.p, static_cast<unsigned long>(f.degree()));
  c.bound *= 16;
  c.floor = -Rational(c.bound) / w.normalization();
  return c;
}

/// Per-axis frequency values {0} and p^v u for v in [vmin, vmax], 0 < u < p^unit_digits, p does not divide u.
inline std::vector<Rational> padic_axis_lattice(unsigned long p, long vmin = -6, long vmax = 2, unsigned unit_digits = 2) {
  require_prime(p);
  std::vector<Rational> out{Rational(0)};
  const unsigned long top = CyclotomicSum::ipow(p, unit_digits);
  for (long v = vmin; v <= vmax; ++v)
    for (unsigned long u = 1; u < top; ++u)
      if (u % p != 0) out.push_back(rational_power(p, v) * Rational(u));
  return out;
}

}  // namespace oscillabound
