#pragma once

// Curve families t -> (f_1(t), ..., f_m(t)), exponential polynomials
// Phi(t) = sum_j c_j e^{jt}, and the interpolation constants that drive the
// low/high frequency estimates.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "oscillabound/linalg.hpp"
#include "oscillabound/roots.hpp"

namespace oscillabound {

/// m >= 2 non-constant polynomials with rational coefficients.
class CurveFamily {
 public:
  explicit CurveFamily(std::vector<RationalPoly> polys) : polys_(std::move(polys)) {
    if (polys_.size() < 2) throw ValidationError("a curve family needs at least two polynomials");
    for (std::size_t i = 0; i < polys_.size(); ++i) {
      if (polys_[i].degree() < 1) {
        throw ValidationError("f_" + std::to_string(i + 1) + " is constant; 1, f_1, ..., f_m cannot be independent");
      }
      n_ = std::max(n_, static_cast<std::size_t>(polys_[i].degree()));
    }
  }

  std::size_t m() const noexcept { return polys_.size(); }
  /// Maximal degree.
  std::size_t n() const noexcept { return n_; }
  const std::vector<RationalPoly>& polys() const noexcept { return polys_; }
  const RationalPoly& operator[](std::size_t i) const { return polys_[i]; }

  /// a_{ij}, j = 0..n.
  Rational coeff(std::size_t i, std::size_t j) const { return polys_[i][j]; }

  /// The m x n matrix (a_{ij}) restricted to j >= 1.
  RationalMatrix coefficient_matrix() const {
    RationalMatrix a(m(), n_);
    for (std::size_t i = 0; i < m(); ++i)
      for (std::size_t j = 1; j <= n_; ++j) a(i, j - 1) = coeff(i, j);
    return a;
  }

  /// Rows f_1..f_m then the constant 1, columns x^n..x^1, 1.
  RationalMatrix augmented_matrix() const {
    RationalMatrix a(m() + 1, n_ + 1);
    for (std::size_t i = 0; i < m(); ++i)
      for (std::size_t j = 0; j <= n_; ++j) a(i, n_ - j) = coeff(i, j);
    a(m(), n_) = 1;
    return a;
  }

  std::vector<Rational> constant_terms() const {
    std::vector<Rational> c;
    c.reserve(m());
    for (const auto& f : polys_) c.push_back(f[0]);
    return c;
  }

  friend bool operator==(const CurveFamily&, const CurveFamily&) = default;

 private:
  std::vector<RationalPoly> polys_;
  std::size_t n_ = 0;
};

struct IndependenceResult {
  bool independent;
  std::size_t rank;
};

/// 1, f_1, ..., f_m are linearly independent iff the augmented matrix has
/// rank m + 1.
inline IndependenceResult check_independence(const CurveFamily& family) {
  const std::size_t r = family.augmented_matrix().rank();
  return {r == family.m() + 1, r};
}

inline void require_independent(const CurveFamily& family) {
  if (!check_independence(family).independent) {
    throw ValidationError("independence violation: 1, f_1, ..., f_m are linearly dependent");
  }
}

/// Finite sum sum_j c_j e^{jt} with integer exponents j >= 0.
template <class Scalar>
class BasicExpPoly {
 public:
  using Terms = std::map<unsigned, Scalar>;

  BasicExpPoly() = default;
  explicit BasicExpPoly(Terms terms) : terms_(std::move(terms)) { prune(); }

  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  Scalar coefficient(unsigned j) const {
    auto it = terms_.find(j);
    return it == terms_.end() ? Scalar(0) : it->second;
  }
  unsigned max_exponent() const noexcept { return terms_.empty() ? 0 : terms_.rbegin()->first; }

  /// k-th derivative in t: c_j -> c_j j^k.
  BasicExpPoly derivative(unsigned k = 1) const {
    Terms d;
    for (const auto& [j, c] : terms_) {
      if (j == 0 && k > 0) continue;
      Scalar f = c;
      for (unsigned r = 0; r < k; ++r) f *= Scalar(j);
      d.emplace(j, f);
    }
    return BasicExpPoly(std::move(d));
  }

  long double operator()(long double t) const {
    long double acc = 0.0L;
    for (const auto& [j, c] : terms_) acc += to_ld(c) * std::exp(static_cast<long double>(j) * t);
    return acc;
  }

  /// The polynomial g with Phi(t) = g(e^t).
  RationalPoly as_polynomial() const
    requires std::is_same_v<Scalar, Rational>
  {
    std::vector<Rational> c(max_exponent() + 1);
    for (const auto& [j, v] : terms_) c[j] = v;
    return RationalPoly(std::move(c));
  }

  friend bool operator==(const BasicExpPoly&, const BasicExpPoly&) = default;

 private:
  static long double to_ld(const Scalar& c) {
    if constexpr (std::is_same_v<Scalar, Rational>) return to_long_double(c);
    else return static_cast<long double>(c);
  }
  void prune() {
    for (auto it = terms_.begin(); it != terms_.end();) it = it->second == Scalar(0) ? terms_.erase(it) : std::next(it);
  }
  Terms terms_;
};

/// Exact phases: built from rational (or exactly imported binary) frequencies.
using ExpPoly = BasicExpPoly<Rational>;

/// Phi(t) = sum_i lambda_i f_i(e^t), with c_j = sum_i lambda_i a_{ij}.
inline ExpPoly phi_from_frequency(const CurveFamily& family, std::span<const Rational> lambda) {
  if (lambda.size() != family.m()) {
    throw ValidationError("frequency has " + std::to_string(lambda.size()) + " components, family has " +
                          std::to_string(family.m()));
  }
  ExpPoly::Terms terms;
  for (std::size_t j = 0; j <= family.n(); ++j) {
    Rational c(0);
    for (std::size_t i = 0; i < family.m(); ++i) c += lambda[i] * family.coeff(i, j);
    terms.emplace(static_cast<unsigned>(j), c);
  }
  return ExpPoly(std::move(terms));
}

inline ExpPoly phi_from_frequency(const CurveFamily& family, std::span<const double> lambda) {
  std::vector<Rational> q;
  q.reserve(lambda.size());
  for (double x : lambda) q.push_back(to_rational(x));
  return phi_from_frequency(family, std::span<const Rational>(q));
}

inline ExpPoly exp_poly_derivative(const ExpPoly& phi, unsigned k) { return phi.derivative(k); }

/// Solves sum_{k=1}^n c_k j^k = target_j for j = 1..n (Vandermonde on nodes
/// 1..n, always invertible).
inline std::vector<Rational> vandermonde_interpolation(std::size_t n, std::span<const Rational> target) {
  if (n < 1) throw ValidationError("interpolation order must be at least 1");
  if (target.size() != n) throw ValidationError("interpolation target must have n entries");
  RationalMatrix v(n, n);
  for (std::size_t j = 1; j <= n; ++j) {
    Rational power(1);
    for (std::size_t k = 1; k <= n; ++k) {
      power *= static_cast<unsigned long>(j);
      v(j - 1, k - 1) = power;
    }
  }
  auto sol = v.solve(std::vector<Rational>(target.begin(), target.end()));
  if (!sol) throw ConsistencyError("Vandermonde matrix on 1..n reported singular");
  return *sol;
}

/// alpha with Phi = sum lambda_i f_i(0) + sum_k alpha_k Phi^{(k)}.
inline std::vector<Rational> low_frequency_weights(std::size_t n) {
  const std::vector<Rational> ones(n, Rational(1));
  return vandermonde_interpolation(n, ones);
}

/// beta with (sum_i lambda_i a_{i,ell}) e^{ell t} = sum_k beta_k Phi^{(k)}.
inline std::vector<Rational> high_frequency_weights(std::size_t n, std::size_t ell) {
  if (ell < 1 || ell > n) throw ValidationError("ell must lie in 1..n");
  std::vector<Rational> delta(n, Rational(0));
  delta[ell - 1] = 1;
  return vandermonde_interpolation(n, delta);
}

inline Rational max_abs(std::span<const Rational> v) {
  Rational m(0);
  for (const auto& x : v) m = std::max(m, Rational(abs(x)));
  return m;
}

inline std::vector<RootInterval> isolate_positive_roots(const RationalPoly& p, long double bound) {
  return isolate_positive_roots(p, to_rational(bound));
}

struct RealThreshold {
  /// max(0, ln s*) over the largest common root s* >= 1 of all f_i.
  long double a0 = 0.0L;
  /// Largest common positive root, when one exists.
  std::optional<long double> largest_common_root;
  /// All f_i(0) = 0 and 0 is the only common real root: the low-frequency
  /// argument alone applies and a_0 could be taken to be -infinity.
  bool minus_infinity_admissible = false;
};

inline RealThreshold compute_a0_real(const CurveFamily& family) {
  RationalPoly g = family[0];
  for (std::size_t i = 1; i < family.m(); ++i) g = gcd(g, family[i]);
  RealThreshold out;
  bool all_vanish_at_zero = true;
  for (const auto& c : family.constant_terms()) all_vanish_at_zero = all_vanish_at_zero && c == 0;
  // Strip the factor x^k so that only nonzero common roots remain.
  std::size_t low = 0;
  while (low < g.coeffs().size() && g.coeffs()[low] == 0) ++low;
  const RationalPoly g0(std::vector<Rational>(g.coeffs().begin() + static_cast<std::ptrdiff_t>(low), g.coeffs().end()));
  bool nonzero_common = false;
  if (g0.degree() >= 1) {
    const auto roots = isolate_real_roots(g0);
    nonzero_common = !roots.empty();
    for (const auto& r : roots) {
      if (r.hi <= 0) continue;
      // Upper end of the isolating interval: rounding a_0 upward is safe.
      const long double s = round_up(r.hi);
      if (!out.largest_common_root || s > *out.largest_common_root) out.largest_common_root = s;
    }
  }
  out.minus_infinity_admissible = all_vanish_at_zero && !nonzero_common;
  if (out.largest_common_root && *out.largest_common_root >= 1.0L) out.a0 = std::log(*out.largest_common_root);
  return out;
}

struct HighFreqConstants {
  std::size_t n = 0;
  std::size_t m = 0;
  /// max ||A^{-1}||_op over invertible m x m column submatrices, rounded up.
  long double M = 0.0L;
  /// (sum f_i(0)^2)^{1/2}, rounded up.
  long double L = 0.0L;
  /// 1 / (8 sqrt(m) L M), rounded down; empty when L = 0.
  std::optional<long double> epsilon;
  /// max |alpha_k| and max over ell of max |beta_k|.
  Rational H;
  Rational H_prime;
  std::vector<Rational> alpha;
  std::vector<std::vector<Rational>> beta;  // beta[ell - 1]
  std::size_t invertible_submatrices = 0;
};

namespace detail {

/// ||A^{-1}||_op = 1 / sqrt(lambda_min(A^T A)), with lambda_min isolated
/// exactly from the Gram characteristic polynomial and rounded down.
inline long double inverse_operator_norm_upper(const RationalMatrix& a) {
  const RationalMatrix gram = a.transpose() * a;
  const RationalPoly chi = gram.characteristic_polynomial();
  Rational trace(0);
  for (std::size_t i = 0; i < gram.rows(); ++i) trace += gram(i, i);
  auto roots = isolate_positive_roots(chi, trace + 1);
  if (roots.empty()) throw ConsistencyError("Gram matrix of an invertible block has no positive eigenvalue");
  RootInterval smallest = roots.front();
  refine_relative(chi, smallest, Rational(1, Integer(1) << 52));
  const Rational lower = smallest.lo;
  if (lower <= 0) throw PrecisionError("smallest singular value could not be separated from zero");
  long double s = std::sqrt(round_down(lower));
  s = std::nextafter(s, 0.0L);
  return std::nextafter(1.0L / s, std::numeric_limits<long double>::infinity());
}

inline void for_each_combination(std::size_t n, std::size_t k, auto&& fn) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(std::span<const std::size_t>(idx));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace detail

inline HighFreqConstants high_freq_constants(const CurveFamily& family) {
  require_independent(family);
  HighFreqConstants out;
  out.n = family.n();
  out.m = family.m();
  const RationalMatrix a = family.coefficient_matrix();
  detail::for_each_combination(out.n, out.m, [&](std::span<const std::size_t> cols) {
    RationalMatrix sub(out.m, out.m);
    for (std::size_t i = 0; i < out.m; ++i)
      for (std::size_t c = 0; c < out.m; ++c) sub(i, c) = a(i, cols[c]);
    if (sub.determinant() == 0) return;
    ++out.invertible_submatrices;
    out.M = std::max(out.M, detail::inverse_operator_norm_upper(sub));
  });
  if (out.invertible_submatrices == 0) throw ConsistencyError("independent family without an invertible m x m block");

  Rational sum_sq(0);
  for (const auto& c : family.constant_terms()) sum_sq += c * c;
  if (sum_sq > 0) {
    out.L = std::nextafter(std::sqrt(round_up(sum_sq)), std::numeric_limits<long double>::infinity());
    const long double denom = 8.0L * std::sqrt(static_cast<long double>(out.m)) * out.L * out.M;
    out.epsilon = std::nextafter(1.0L / std::nextafter(denom, std::numeric_limits<long double>::infinity()), 0.0L);
  }

  out.alpha = low_frequency_weights(out.n);
  out.H = max_abs(out.alpha);
  for (std::size_t ell = 1; ell <= out.n; ++ell) {
    out.beta.push_back(high_frequency_weights(out.n, ell));
    out.H_prime = std::max(out.H_prime, max_abs(out.beta.back()));
  }
  return out;
}

}  // namespace oscillabound
