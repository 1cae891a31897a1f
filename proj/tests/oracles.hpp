#pragma once

// Reference computations that share no code path with the library's fast
// algorithms: composite Simpson on a fixed grid for real integrals and
// exhaustive residue enumeration for p-adic ball and sphere integrals.

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "oscillabound/polycore.hpp"

namespace oracle {

using oscillabound::Rational;
using oscillabound::RationalPoly;
using Cx = std::complex<long double>;

inline constexpr long double two_pi = 2.0L * std::numbers::pi_v<long double>;

/// Composite Simpson with `panels` (even) subintervals.
template <class F>
long double simpson(F&& f, long double a, long double b, std::size_t panels) {
  if (panels % 2) ++panels;
  const long double h = (b - a) / static_cast<long double>(panels);
  long double acc = f(a) + f(b);
  for (std::size_t i = 1; i < panels; ++i) acc += (i % 2 ? 4.0L : 2.0L) * f(a + h * static_cast<long double>(i));
  return acc * h / 3.0L;
}

/// Phi(t) = sum_i lambda_i f_i(e^t), evaluated directly from the polynomials.
inline long double phase(const std::vector<RationalPoly>& f, const std::vector<long double>& lambda, long double t) {
  const long double s = std::exp(t);
  long double acc = 0.0L;
  for (std::size_t i = 0; i < f.size(); ++i) acc += lambda[i] * f[i].evaluate(s);
  return acc;
}

/// (1/(T-a)) int_a^T cos(2 pi Phi(t)) dt by Simpson.
inline long double mu_hat_simpson(const std::vector<RationalPoly>& f, const std::vector<long double>& lambda,
                                  long double a, long double T, std::size_t panels) {
  return simpson([&](long double t) { return std::cos(two_pi * phase(f, lambda, t)); }, a, T, panels) / (T - a);
}

inline long valuation(mpz_class x, unsigned long p) {
  long v = 0;
  while (x != 0 && mpz_divisible_ui_p(x.get_mpz_t(), p)) {
    x /= p;
    ++v;
  }
  return v;
}

inline long valuation(const Rational& q, unsigned long p) {
  return valuation(mpz_class(q.get_num()), p) - valuation(mpz_class(q.get_den()), p);
}

inline mpz_class power(unsigned long p, unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), p, e);
  return r;
}

/// exp(2 pi i r_x / p^n): write x = a / (p^n d) with p not dividing d and
/// take r_x = a d^{-1} mod p^n.
inline Cx tate(const Rational& x, unsigned long p) {
  if (x == 0) return {1.0L, 0.0L};
  const long v = valuation(x, p);
  if (v >= 0) return {1.0L, 0.0L};
  const mpz_class pn = power(p, static_cast<unsigned long>(-v));
  mpz_class den = x.get_den();
  den /= pn;
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), pn.get_mpz_t());
  mpz_class r = mpz_class(x.get_num()) * inv;
  mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), pn.get_mpz_t());
  const long double angle = two_pi * r.get_d() / pn.get_d();
  return {std::cos(angle), std::sin(angle)};
}

/// Residue modulus p^K large enough that G(u) = F(p^{shift} u) mod Z_p only
/// depends on u mod p^K: K >= max_j -(v(a_j) + shift j).
inline long needed_digits(const RationalPoly& F, long shift, unsigned long p) {
  long k = 0;
  for (int j = 0; j <= F.degree(); ++j) {
    const Rational& a = F.coeffs()[static_cast<std::size_t>(j)];
    if (a != 0 && j > 0) k = std::max(k, -(valuation(a, p) + shift * j));
  }
  return k;
}

/// sum over u mod p^K (units only when units_only) of psi(F(p^{shift} u)).
/// psi is additive, so the phase of each monomial is tabulated once as an
/// integer modulo p^K and summed per residue.
inline Cx residue_sum(const RationalPoly& F, long shift, unsigned long p, unsigned K, bool units_only) {
  const mpz_class modz = power(p, K);
  const std::uint64_t mod = modz.get_ui();
  std::vector<std::uint64_t> c(static_cast<std::size_t>(F.degree()) + 1, 0);
  long double constant_angle = 0.0L;
  for (int j = 0; j <= F.degree(); ++j) {
    Rational b = F.coeffs()[static_cast<std::size_t>(j)];
    if (b == 0) continue;
    if (shift >= 0) b *= Rational(power(p, static_cast<unsigned long>(shift * j)));
    else b /= Rational(power(p, static_cast<unsigned long>(-shift * j)));
    if (j == 0) {
      constant_angle = std::arg(tate(b, p));
      continue;
    }
    // b u^j contributes r / p^k with k = -v(b) <= K; rescale to modulus p^K.
    const long v = valuation(b, p);
    if (v >= 0) continue;
    const mpz_class pk = power(p, static_cast<unsigned long>(-v));
    mpz_class den = b.get_den();
    den /= pk;
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), pk.get_mpz_t());
    mpz_class r = mpz_class(b.get_num()) * inv;
    mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), pk.get_mpz_t());
    r *= modz / pk;
    c[static_cast<std::size_t>(j)] = r.get_ui();
  }
  using u128 = unsigned __int128;
  Cx acc{0.0L, 0.0L};
  for (std::uint64_t u = 0; u < mod; ++u) {
    if (units_only && u % p == 0) continue;
    std::uint64_t phase = 0, pw = 1;
    for (std::size_t j = 1; j < c.size(); ++j) {
      pw = static_cast<std::uint64_t>(static_cast<u128>(pw) * u % mod);
      phase = static_cast<std::uint64_t>((phase + static_cast<u128>(c[j]) * pw) % mod);
    }
    const long double angle = two_pi * static_cast<long double>(phase) / static_cast<long double>(mod) + constant_angle;
    acc += Cx(std::cos(angle), std::sin(angle));
  }
  return acc;
}

/// int over C_r = {||s|| = p^r} of psi(F(s)) ds = p^r p^{-K} sum_{u unit mod p^K} psi(F(p^{-r} u)).
inline Cx sphere_bruteforce(const RationalPoly& F, long r, unsigned long p, unsigned K) {
  const long double measure = std::pow(static_cast<long double>(p), static_cast<long double>(r) - K);
  return residue_sum(F, -r, p, K, true) * measure;
}

/// int over p^k Z_p of psi(F(s)) ds.
inline Cx ball_bruteforce(const RationalPoly& F, long k, unsigned long p, unsigned K) {
  const long double measure = std::pow(static_cast<long double>(p), -static_cast<long double>(k) - K);
  return residue_sum(F, k, p, K, false) * measure;
}

/// (1/L) sum_{r=a}^T p^{-r} 2 Re int_{C_r} psi(F), with L = 2 (T - a + 1)(1 - 1/p).
inline long double mu_hat_padic_bruteforce(const RationalPoly& F, long a, long T, unsigned long p, unsigned extra = 2) {
  long double acc = 0.0L;
  for (long r = a; r <= T; ++r) {
    const unsigned K = static_cast<unsigned>(std::max(1L, needed_digits(F, -r, p)) + extra);
    acc += std::pow(static_cast<long double>(p), -static_cast<long double>(r)) * 2.0L *
           sphere_bruteforce(F, r, p, K).real();
  }
  const long double L = 2.0L * static_cast<long double>(T - a + 1) * (1.0L - 1.0L / static_cast<long double>(p));
  return acc / L;
}

}  // namespace oracle
