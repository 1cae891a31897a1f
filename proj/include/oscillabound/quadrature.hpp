#pragma once

// Integrals of e^{2 pi i Phi(t)} for exponential-polynomial phases.
//
// [a, b] is cut at the zeros of Phi' and Phi'' (located exactly in s = e^t),
// so on every piece Phi is monotone and |Phi'| is monotone. Each piece is
// split once more at the point where |Phi'| reaches a threshold K:
//
//   * |Phi'| <= K: adaptive Gauss-Kronrod (7/15) with panels refined until the
//     phase turns by at most half a cycle and the embedded error is in budget.
//   * |Phi'| >= K: N-fold integration by parts,
//       int e^{i psi} = sum_k [e^{i psi} B_k] + int e^{i psi} A_N,
//     with psi = 2 pi Phi, A_0 = 1, B_k = A_k / (i psi'), A_{k+1} = -B_k'.
//     The remainder is bounded by int |A_N|, which is not oscillatory and is
//     integrated directly. K is raised until that bound fits the budget.
//
// The derivatives of B_k come from truncated Taylor arithmetic (jets), so no
// symbolic differentiation is involved.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include <mpfr.h>

#include "oscillabound/polycore.hpp"

namespace oscillabound {

using Complex = std::complex<long double>;

/// e^{2 pi i x}, reducing x modulo 1 first.
inline Complex unit_phase(long double x) {
  const long double frac = x - std::nearbyint(x);
  const long double angle = 2.0L * std::numbers::pi_v<long double> * frac;
  return {std::cos(angle), std::sin(angle)};
}

/// Evaluation of Phi and its t-derivatives. Derivatives are long double
/// (only relative accuracy matters for them); the phase modulo 1 switches to
/// MPFR once long double can no longer resolve it.
class PhaseEvaluator {
 public:
  /// Above this magnitude sum |c_j| e^{jt}, the phase is reduced in MPFR.
  static constexpr long double extended_above = 1.0e6L;

  explicit PhaseEvaluator(const ExpPoly& phi) {
    for (const auto& [j, c] : phi.terms()) {
      exponents_.push_back(static_cast<long double>(j));
      coeffs_.push_back(to_long_double(c));
      exact_.push_back(c);
    }
  }

  std::size_t size() const noexcept { return coeffs_.size(); }

  long double value(long double t) const {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) acc += coeffs_[i] * std::exp(exponents_[i] * t);
    return acc;
  }

  /// out[k] = Phi^{(k)}(t) for k = 0..out.size()-1.
  void derivatives(long double t, std::span<long double> out) const {
    std::fill(out.begin(), out.end(), 0.0L);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      long double term = coeffs_[i] * std::exp(exponents_[i] * t);
      for (auto& o : out) {
        o += term;
        term *= exponents_[i];
      }
    }
  }

  long double derivative(long double t, unsigned k) const {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      acc += coeffs_[i] * std::pow(exponents_[i], static_cast<long double>(k)) * std::exp(exponents_[i] * t);
    }
    return acc;
  }

  /// sum |c_j| e^{jt}: scale of the rounding error in value(t).
  long double magnitude(long double t) const {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) acc += std::fabs(coeffs_[i]) * std::exp(exponents_[i] * t);
    return acc;
  }

  /// Phi(t) - round(Phi(t)), in [-1/2, 1/2].
  long double reduced(long double t) const {
    const long double mag = magnitude(t);
    if (mag <= extended_above) {
      const long double v = value(t);
      return v - std::nearbyint(v);
    }
    return reduced_extended(t, mag);
  }

  /// Absolute error bound for reduced(t).
  long double reduced_error(long double t) const {
    const long double eps = std::numeric_limits<long double>::epsilon();
    const long double mag = magnitude(t);
    const long double n = static_cast<long double>(coeffs_.size() + 2);
    return mag <= extended_above ? 4.0L * n * eps * mag : 4.0L * n * eps * eps;
  }

  /// e^{2 pi i Phi(t)}.
  Complex phase(long double t) const { return unit_phase(reduced(t)); }

 private:
  long double reduced_extended(long double t, long double mag) const {
    const mpfr_prec_t prec = 2 * 64 + static_cast<mpfr_prec_t>(std::ceil(std::log2(mag)));
    mpfr_t x, term, acc;
    mpfr_inits2(prec, x, term, acc, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_ld(x, t, MPFR_RNDN);
    mpfr_set_ui(acc, 0, MPFR_RNDN);
    for (std::size_t i = 0; i < exact_.size(); ++i) {
      mpfr_mul_ui(term, x, static_cast<unsigned long>(exponents_[i]), MPFR_RNDN);
      mpfr_exp(term, term, MPFR_RNDN);
      mpfr_mul_q(term, term, exact_[i].get_mpq_t(), MPFR_RNDN);
      mpfr_add(acc, acc, term, MPFR_RNDN);
    }
    mpfr_rint(term, acc, MPFR_RNDN);
    mpfr_sub(acc, acc, term, MPFR_RNDN);
    const long double r = mpfr_get_ld(acc, MPFR_RNDN);
    mpfr_clears(x, term, acc, static_cast<mpfr_ptr>(nullptr));
    return r;
  }

  std::vector<long double> exponents_;
  std::vector<long double> coeffs_;
  std::vector<Rational> exact_;
};

namespace gk15 {
inline constexpr std::array<long double, 8> xgk = {
    0.991455371120812639206854697526329L, 0.949107912342758524526189684047851L,
    0.864864423359769072789712788640926L, 0.741531185599394439863864773280788L,
    0.586087235467691130294144845693013L, 0.405845151377397166906606412076961L,
    0.207784955007898467600689403773245L, 0.000000000000000000000000000000000L};
inline constexpr std::array<long double, 8> wgk = {
    0.022935322010529224963732008058970L, 0.063092092629978553290700663189204L,
    0.104790010322250183839876322541518L, 0.140653259715525918745189590510238L,
    0.169004726639267902826583426598550L, 0.190350578064785409913256402421014L,
    0.204432940075298892414161999234649L, 0.209482141084727828012999174891714L};
inline constexpr std::array<long double, 4> wg = {
    0.129484966168869693270611432679082L, 0.279705391489276667901467771423780L,
    0.381830050505118944950369775488975L, 0.417959183673469387755102040816327L};

/// One Gauss-Kronrod panel: returns {kronrod value, |kronrod - gauss|}.
template <class T, class F>
std::pair<T, long double> panel(F&& f, long double lo, long double hi) {
  const long double c = (lo + hi) / 2, h = (hi - lo) / 2;
  T kron = f(c) * wgk[7];
  T gauss = f(c) * wg[3];
  for (std::size_t i = 0; i < 7; ++i) {
    const T s = f(c - h * xgk[i]) + f(c + h * xgk[i]);
    kron += s * wgk[i];
    if (i % 2 == 1) gauss += s * wg[i / 2];
  }
  return {kron * h, std::abs(kron * h - gauss * h)};
}
}  // namespace gk15

struct QuadratureOptions {
  /// Absolute tolerance on the integral.
  long double tol = 1e-9L;
  unsigned max_depth = 48;
  std::size_t max_panels = 2'000'000;
  /// Integration-by-parts order in the asymptotic regime.
  unsigned asymptotic_terms = 6;
  /// Initial |Phi'| threshold separating direct and asymptotic treatment.
  long double initial_threshold = 32.0L;
  /// Cap on the phase cycles left to direct quadrature.
  long double max_direct_cycles = 4.0e6L;
};

struct OscillatoryIntegral {
  Complex value{0.0L, 0.0L};
  long double error = 0.0L;
  std::size_t evaluations = 0;
  std::size_t pieces = 0;
  std::size_t direct_panels = 0;
  std::size_t asymptotic_segments = 0;
  bool converged = true;
};

/// Adaptive Gauss-Kronrod for a smooth non-oscillatory real integrand.
/// Integration stops early, returning +infinity, once the running total exceeds
/// `abort_above` or the panel count reaches `max_panels`.
template <class F>
long double integrate_smooth(F&& f, long double lo, long double hi, long double abs_tol, long double rel_tol,
                             std::size_t* evaluations = nullptr,
                             long double abort_above = std::numeric_limits<long double>::infinity(),
                             std::size_t max_panels = 1'000'000) {
  if (!(hi > lo)) return 0.0L;
  struct Panel {
    long double lo, hi;
    unsigned depth;
  };
  auto whole = gk15::panel<long double>(f, lo, hi);
  if (evaluations) *evaluations += 15;
  const long double target = std::max(abs_tol, rel_tol * std::fabs(whole.first));
  if (!std::isfinite(whole.first) || whole.first > abort_above) return std::numeric_limits<long double>::infinity();
  long double total = 0.0L;
  std::size_t panels = 0;
  std::vector<Panel> stack{{lo, hi, 0}};
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    const auto [v, e] = gk15::panel<long double>(f, p.lo, p.hi);
    if (evaluations) *evaluations += 15;
    if (!std::isfinite(v) || ++panels > max_panels) return std::numeric_limits<long double>::infinity();
    if (e <= target * (p.hi - p.lo) / (hi - lo) || p.depth >= 40) {
      total += v + e;  // biased upward: used for error bounds
      if (total > abort_above) return std::numeric_limits<long double>::infinity();
      continue;
    }
    const long double mid = (p.lo + p.hi) / 2;
    stack.push_back({p.lo, mid, p.depth + 1});
    stack.push_back({mid, p.hi, p.depth + 1});
  }
  return total;
}

namespace detail {

/// Truncated Taylor series sum_r a_r h^r.
using Jet = std::vector<Complex>;

inline Jet jet_divide(const Jet& num, const Jet& den, std::size_t order) {
  Jet q(order + 1);
  for (std::size_t r = 0; r <= order; ++r) {
    Complex acc = r < num.size() ? num[r] : Complex{};
    for (std::size_t k = 1; k <= r && k < den.size(); ++k) acc -= den[k] * q[r - k];
    q[r] = acc / den[0];
  }
  return q;
}

inline Jet jet_derivative(const Jet& a) {
  Jet d(a.size() > 1 ? a.size() - 1 : 1);
  for (std::size_t r = 1; r < a.size(); ++r) d[r - 1] = a[r] * static_cast<long double>(r);
  return d;
}

struct AsymptoticPoint {
  Complex boundary;    // sum_k B_k(t)
  long double tail;    // |A_N(t)|
  long double b0;      // |B_0(t)| = 1 / |psi'(t)|
};

inline AsymptoticPoint asymptotic_terms(const PhaseEvaluator& phase, long double t, unsigned terms) {
  std::vector<long double> d(terms + 2);
  phase.derivatives(t, d);
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  Jet den(terms + 1);
  long double fact = 1.0L;
  for (std::size_t r = 0; r <= terms; ++r) {
    if (r > 0) fact *= static_cast<long double>(r);
    den[r] = Complex(0.0L, two_pi * d[r + 1] / fact);
  }
  Jet a{Complex(1.0L, 0.0L)};
  a.resize(terms + 1);
  AsymptoticPoint out{{0.0L, 0.0L}, 0.0L, 1.0L / std::abs(den[0])};
  std::size_t order = terms;
  for (unsigned k = 0; k < terms; ++k) {
    const Jet b = jet_divide(a, den, order);
    out.boundary += b[0];
    a = jet_derivative(b);
    for (auto& x : a) x = -x;
    --order;
  }
  out.tail = std::abs(a[0]);
  return out;
}

inline long double find_threshold_crossing(const PhaseEvaluator& phase, long double lo, long double hi,
                                           long double threshold) {
  // |Phi'| is monotone on [lo, hi] and crosses `threshold` inside.
  const bool increasing = std::fabs(phase.derivative(hi, 1)) > std::fabs(phase.derivative(lo, 1));
  for (int it = 0; it < 200 && hi - lo > 1e-17L * std::max(1.0L, std::fabs(lo)); ++it) {
    const long double mid = (lo + hi) / 2;
    const bool above = std::fabs(phase.derivative(mid, 1)) >= threshold;
    if (above == increasing) hi = mid;
    else lo = mid;
  }
  return (lo + hi) / 2;
}

/// Direct adaptive quadrature on a piece where |Phi'| is monotone, so the
/// phase turn over a panel is at most its width times max |Phi'| at the ends.
inline void integrate_direct(const PhaseEvaluator& phase, long double lo, long double hi, long double budget,
                             const QuadratureOptions& opt, OscillatoryIntegral& acc) {
  if (!(hi > lo)) return;
  struct Panel {
    long double lo, hi;
    unsigned depth;
  };
  auto f = [&](long double t) { return phase.phase(t); };
  const long double width = hi - lo;
  std::vector<Panel> stack{{lo, hi, 0}};
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    const long double slope = std::max(std::fabs(phase.derivative(p.lo, 1)), std::fabs(phase.derivative(p.hi, 1)));
    const long double turn = slope * (p.hi - p.lo);
    acc.evaluations += 2;
    bool split = turn > 0.5L;
    std::pair<Complex, long double> r{};
    if (!split) {
      r = gk15::panel<Complex>(f, p.lo, p.hi);
      acc.evaluations += 15;
      split = r.second > budget * (p.hi - p.lo) / width;
    }
    if (split && p.depth < opt.max_depth && acc.direct_panels + stack.size() < opt.max_panels) {
      const long double mid = (p.lo + p.hi) / 2;
      stack.push_back({mid, p.hi, p.depth + 1});
      stack.push_back({p.lo, mid, p.depth + 1});
      continue;
    }
    if (split) {
      if (turn > 0.5L) r = gk15::panel<Complex>(f, p.lo, p.hi);
      acc.converged = false;
      // A panel turning more than half a cycle can be off by its full length.
      if (turn > 0.5L) r.second = std::max(r.second, p.hi - p.lo);
    }
    acc.value += r.first;
    acc.error += r.second;
    ++acc.direct_panels;
  }
  // Phase rounding: |d e^{2 pi i x}| <= 2 pi |dx|; the magnitude grows with t.
  acc.error += 2.0L * std::numbers::pi_v<long double> * phase.reduced_error(hi) * width;
}

/// Integration by parts on [lo, hi] where |Phi'| >= threshold. The value is
/// committed only when the remainder bound fits the budget.
inline bool integrate_asymptotic(const PhaseEvaluator& phase, long double lo, long double hi, long double budget,
                                 const QuadratureOptions& opt, OscillatoryIntegral& acc) {
  if (!(hi > lo)) return true;
  std::size_t evals = 0;
  // |A_N| peaks where |Phi'| is smallest, which is an endpoint; the mesh is
  // graded geometrically toward it so a narrow peak cannot fall between nodes.
  const bool small_at_lo = std::fabs(phase.derivative(lo, 1)) <= std::fabs(phase.derivative(hi, 1));
  auto tail_at = [&](long double t) { return asymptotic_terms(phase, t, opt.asymptotic_terms).tail; };
  const long double width = hi - lo;
  const long double floor_width = 64.0L * std::numeric_limits<long double>::epsilon() * std::max(1.0L, std::fabs(lo));
  std::vector<long double> marks{0.0L};
  for (long double h = floor_width; h < width; h *= 4.0L) marks.push_back(h);
  marks.push_back(width);
  long double tail = 0.0L;
  for (std::size_t i = 0; i + 1 < marks.size() && tail <= budget; ++i) {
    const long double a = small_at_lo ? lo + marks[i] : hi - marks[i + 1];
    const long double b = small_at_lo ? lo + marks[i + 1] : hi - marks[i];
    tail += integrate_smooth(tail_at, a, b, budget * 1e-3L / static_cast<long double>(marks.size()), 1e-2L, &evals,
                             budget - tail, 20'000);
  }
  acc.evaluations += evals;
  const long double bound = tail * 1.1L;
  if (!(bound <= budget)) return false;
  const auto end_hi = asymptotic_terms(phase, hi, opt.asymptotic_terms);
  const auto end_lo = asymptotic_terms(phase, lo, opt.asymptotic_terms);
  acc.value += phase.phase(hi) * end_hi.boundary - phase.phase(lo) * end_lo.boundary;
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  acc.error += bound + two_pi * (phase.reduced_error(hi) * std::abs(end_hi.boundary) +
                                 phase.reduced_error(lo) * std::abs(end_lo.boundary));
  acc.evaluations += 2 * (opt.asymptotic_terms + 2);
  ++acc.asymptotic_segments;
  return true;
}

inline std::vector<long double> monotone_breakpoints(const ExpPoly& phi, long double lo, long double hi) {
  std::vector<long double> cuts;
  const Rational s_lo = to_rational(std::nextafter(std::exp(lo), 0.0L));
  const Rational s_hi = to_rational(std::nextafter(std::exp(hi), std::numeric_limits<long double>::infinity()));
  const Rational width = Rational(1L, 1000000000000L) * std::max(Rational(1), s_lo);
  for (unsigned order : {1U, 2U}) {
    // Phi^{(k)}(t) = s * q(s) with q(s) = sum_j j^k c_j s^{j-1}.
    const ExpPoly d = phi.derivative(order);
    if (d.is_zero()) continue;
    std::vector<Rational> q(d.max_exponent());
    for (const auto& [j, c] : d.terms()) q[j - 1] = c;
    const RationalPoly qp(std::move(q));
    if (qp.degree() <= 0) continue;
    for (const auto& r : isolate_roots(qp, s_lo, s_hi, width)) {
      const long double t = std::log(to_long_double((r.lo + r.hi) / 2));
      if (t > lo && t < hi) cuts.push_back(t);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

}  // namespace detail

/// int_lo^hi e^{2 pi i Phi(t)} dt with an error estimate.
inline OscillatoryIntegral oscillatory_integral(const ExpPoly& phi, long double lo, long double hi,
                                                const QuadratureOptions& opt = {}) {
  OscillatoryIntegral acc;
  if (!(hi > lo)) return acc;
  const PhaseEvaluator phase(phi);
  if (phi.max_exponent() == 0) {
    acc.value = phase.phase(lo) * (hi - lo);
    acc.pieces = 1;
    return acc;
  }
  std::vector<long double> nodes{lo};
  for (long double c : detail::monotone_breakpoints(phi, lo, hi)) nodes.push_back(c);
  nodes.push_back(hi);
  const long double total = hi - lo;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const long double p0 = nodes[i], p1 = nodes[i + 1];
    if (!(p1 > p0)) continue;
    ++acc.pieces;
    const long double budget = opt.tol * (p1 - p0) / total;
    const long double d0 = std::fabs(phase.derivative(p0, 1));
    const long double d1 = std::fabs(phase.derivative(p1, 1));
    long double threshold = opt.initial_threshold;
    while (true) {
      if (std::max(d0, d1) <= threshold) {
        detail::integrate_direct(phase, p0, p1, budget, opt, acc);
        break;
      }
      long double cut_lo = p0, cut_hi = p1;  // asymptotic part
      if (std::min(d0, d1) < threshold) {
        const long double cross = detail::find_threshold_crossing(phase, p0, p1, threshold);
        if (d0 < d1) cut_lo = cross;
        else cut_hi = cross;
      }
      const long double direct_width = (cut_lo - p0) + (p1 - cut_hi);
      if (direct_width * threshold > opt.max_direct_cycles) {
        // Neither regime is affordable: give up on this piece.
        acc.converged = false;
        acc.error += p1 - p0;
        break;
      }
      const long double share = budget * (cut_hi - cut_lo) / (p1 - p0);
      OscillatoryIntegral trial = acc;
      if (detail::integrate_asymptotic(phase, cut_lo, cut_hi, share, opt, trial)) {
        acc = trial;
        const long double direct_share = budget - share;
        if (cut_lo > p0) detail::integrate_direct(phase, p0, cut_lo, direct_share, opt, acc);
        if (cut_hi < p1) detail::integrate_direct(phase, cut_hi, p1, direct_share, opt, acc);
        break;
      }
      threshold *= 4.0L;
    }
  }
  if (acc.error > opt.tol) acc.converged = false;
  return acc;
}

}  // namespace oscillabound
