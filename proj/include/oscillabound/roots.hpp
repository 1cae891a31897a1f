#pragma once

// Real root isolation over exact rationals with Sturm sequences, followed by
// sign-based bisection. Every returned interval (lo, hi] holds exactly one
// distinct real root; lo == hi marks a root hit exactly.

#include <cstddef>
#include <vector>

#include "oscillabound/poly.hpp"

namespace oscillabound {

struct RootInterval {
  Rational lo;
  Rational hi;

  Rational width() const { return hi - lo; }
  long double midpoint() const { return to_long_double((lo + hi) / 2); }
};

class SturmSequence {
 public:
  /// Built on the square-free part, so counts are of distinct roots.
  explicit SturmSequence(const RationalPoly& p) {
    if (p.is_zero()) throw ValidationError("Sturm sequence of the zero polynomial");
    RationalPoly a = square_free_part(p).primitive();
    seq_.push_back(a);
    if (a.degree() <= 0) return;
    RationalPoly b = a.derivative().primitive();
    while (!b.is_zero()) {
      seq_.push_back(b);
      RationalPoly r = -(a.divmod(b).second);
      a = std::move(b);
      b = r.primitive();
    }
  }

  const RationalPoly& square_free() const { return seq_.front(); }
  std::size_t length() const noexcept { return seq_.size(); }

  int sign_changes(const Rational& x) const {
    int changes = 0, last = 0;
    for (const auto& q : seq_) {
      const int s = q.sign_at(x);
      if (s == 0) continue;
      if (last != 0 && s != last) ++changes;
      last = s;
    }
    return changes;
  }

  /// Number of distinct roots in (lo, hi].
  int count(const Rational& lo, const Rational& hi) const {
    if (hi <= lo) return 0;
    return sign_changes(lo) - sign_changes(hi);
  }

 private:
  std::vector<RationalPoly> seq_;
};

/// Cauchy bound: every real root satisfies |x| < bound.
inline Rational cauchy_root_bound(const RationalPoly& p) {
  Rational m(0);
  for (int j = 0; j < p.degree(); ++j) {
    const Rational r = abs(p.coeffs()[static_cast<std::size_t>(j)] / p.leading());
    if (r > m) m = r;
  }
  return m + 1;
}

namespace detail {

inline void refine_root(const SturmSequence& sturm, RootInterval& iv, const Rational& width) {
  const RationalPoly& q = sturm.square_free();
  if (q.sign_at(iv.hi) == 0) {
    iv.lo = iv.hi;
    return;
  }
  // Move lo off an exact root of q (possible when lo is itself a root that
  // lies outside the half-open interval).
  while (q.sign_at(iv.lo) == 0) {
    const Rational mid = (iv.lo + iv.hi) / 2;
    if (q.sign_at(mid) == 0) {
      iv.lo = iv.hi = mid;
      return;
    }
    if (sturm.count(iv.lo, mid) == 1) iv.hi = mid;
    else iv.lo = mid;
  }
  int sign_lo = q.sign_at(iv.lo);
  while (iv.width() > width) {
    const Rational mid = (iv.lo + iv.hi) / 2;
    const int s = q.sign_at(mid);
    if (s == 0) {
      iv.lo = iv.hi = mid;
      return;
    }
    if (s != sign_lo) {
      iv.hi = mid;
    } else {
      iv.lo = mid;
      sign_lo = s;
    }
  }
}

inline void bisect_isolate(const SturmSequence& sturm, const Rational& lo, const Rational& hi, int count,
                           const Rational& width, std::vector<RootInterval>& out) {
  if (count == 0) return;
  if (count == 1) {
    RootInterval iv{lo, hi};
    refine_root(sturm, iv, width);
    out.push_back(iv);
    return;
  }
  const Rational mid = (lo + hi) / 2;
  const int left = sturm.count(lo, mid);
  bisect_isolate(sturm, lo, mid, left, width, out);
  bisect_isolate(sturm, mid, hi, count - left, width, out);
}

}  // namespace detail

/// Isolates every distinct real root of p in (lo, hi], sorted ascending, each
/// refined to width <= `width`.
inline std::vector<RootInterval> isolate_roots(const RationalPoly& p, const Rational& lo, const Rational& hi,
                                               const Rational& width = Rational(1L, 1000000000000L)) {
  if (p.is_zero()) throw ValidationError("root isolation of the zero polynomial");
  std::vector<RootInterval> out;
  if (p.degree() == 0 || hi <= lo) return out;
  const SturmSequence sturm(p);
  detail::bisect_isolate(sturm, lo, hi, sturm.count(lo, hi), width, out);
  return out;
}

/// All distinct real roots.
inline std::vector<RootInterval> isolate_real_roots(const RationalPoly& p,
                                                    const Rational& width = Rational(1L, 1000000000000L)) {
  if (p.is_zero()) throw ValidationError("root isolation of the zero polynomial");
  if (p.degree() <= 0) return {};
  const Rational b = cauchy_root_bound(p);
  return isolate_roots(p, -b, b, width);
}

/// Roots in (0, bound]; the workhorse for s = e^t breakpoints.
inline std::vector<RootInterval> isolate_positive_roots(const RationalPoly& p, const Rational& bound,
                                                        const Rational& width = Rational(1L, 1000000000000L)) {
  return isolate_roots(p, Rational(0), bound, width);
}

/// Number of distinct real roots in (lo, hi] without isolating them.
inline int count_roots(const RationalPoly& p, const Rational& lo, const Rational& hi) {
  if (p.degree() <= 0) return 0;
  return SturmSequence(p).count(lo, hi);
}

/// Shrinks an isolating interval until its width is at most
/// `relative * |lo|` (useful when the root is tiny and an absolute width is
/// too coarse). Requires lo > 0.
inline void refine_relative(const RationalPoly& p, RootInterval& iv, const Rational& relative) {
  const SturmSequence sturm(p);
  while (iv.lo != iv.hi && iv.width() > relative * abs(iv.lo)) {
    detail::refine_root(sturm, iv, iv.width() / 2);
  }
}

}  // namespace oscillabound
