#pragma once

// Fourier transform of the logarithmic curve measure over the reals and the
// certified constant C with mu_hat_T(lambda) >= -C / (T - a).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "oscillabound/polycore.hpp"
#include "oscillabound/quadrature.hpp"

namespace oscillabound {

struct Window {
  long double a = 0.0L;
  long double T = 0.0L;

  long double length() const noexcept { return T - a; }

  /// T > a > a_0.
  void validate(const CurveFamily& family) const {
    if (!(T > a)) throw ValidationError("window requires T > a");
    const RealThreshold th = compute_a0_real(family);
    if (!(a > th.a0)) {
      throw ValidationError("window start a = " + std::to_string(static_cast<double>(a)) +
                            " must exceed a_0 = " + std::to_string(static_cast<double>(th.a0)));
    }
  }
};

struct MuHatResult {
  long double value = 1.0L;
  long double error = 0.0L;
  std::size_t evaluations = 0;
};

/// (1/(T-a)) int_a^T cos(2 pi Phi(t)) dt for an already assembled phase.
inline MuHatResult mu_hat_from_phase(const ExpPoly& phi, const Window& w, long double tol = 1e-9L) {
  if (!(tol > 0.0L) || tol > 1e-3L) throw ValidationError("tolerance must lie in (0, 1e-3]");
  if (!(w.T > w.a)) throw ValidationError("window requires T > a");
  if (phi.is_zero()) return {1.0L, 0.0L, 0};
  QuadratureOptions opt;
  opt.tol = tol * w.length();
  const OscillatoryIntegral r = oscillatory_integral(phi, w.a, w.T, opt);
  const long double v = r.value.real() / w.length();
  const long double e = r.error / w.length();
  if (!r.converged) throw ConvergenceError("mu_hat quadrature did not reach the requested tolerance",
                                           static_cast<double>(v), static_cast<double>(e));
  return {std::clamp(v, -1.0L, 1.0L), e, r.evaluations};
}

inline MuHatResult mu_hat_real(const CurveFamily& family, const Window& w, std::span<const Rational> lambda,
                               long double tol = 1e-9L) {
  w.validate(family);
  return mu_hat_from_phase(phi_from_frequency(family, lambda), w, tol);
}

inline MuHatResult mu_hat_real(const CurveFamily& family, const Window& w, std::span<const double> lambda,
                               long double tol = 1e-9L) {
  w.validate(family);
  return mu_hat_from_phase(phi_from_frequency(family, lambda), w, tol);
}

enum class FrequencyClass { Low, High };

inline const char* to_string(FrequencyClass c) { return c == FrequencyClass::Low ? "low" : "high"; }

/// Low iff |sum lambda_i f_i(0)| <= 1/8 (decided exactly).
inline FrequencyClass classify_frequency(const CurveFamily& family, std::span<const Rational> lambda) {
  if (lambda.size() != family.m()) throw ValidationError("frequency dimension mismatch");
  if (std::all_of(lambda.begin(), lambda.end(), [](const Rational& x) { return x == 0; })) {
    throw ValidationError("classification of the zero frequency");
  }
  Rational s(0);
  for (std::size_t i = 0; i < family.m(); ++i) s += lambda[i] * family.coeff(i, 0);
  return abs(s) <= Rational(1, 8) ? FrequencyClass::Low : FrequencyClass::High;
}

inline FrequencyClass classify_frequency(const CurveFamily& family, std::span<const double> lambda) {
  std::vector<Rational> q;
  for (double x : lambda) q.push_back(to_rational(x));
  return classify_frequency(family, std::span<const Rational>(q));
}

struct WitnessInterval {
  long double lo = 0.0L;
  long double hi = 0.0L;
  /// |Phi^{(k)}| >= eta on [lo, hi].
  unsigned k = 0;
  long double eta = 0.0L;
  /// Phi' is monotone on [lo, hi].
  bool monotone = true;

  long double length() const noexcept { return hi - lo; }
};

struct IntervalDecomposition {
  std::vector<WitnessInterval> intervals;

  std::size_t size() const noexcept { return intervals.size(); }
  bool empty() const noexcept { return intervals.empty(); }
  long double measure() const {
    long double m = 0.0L;
    for (const auto& iv : intervals) m += iv.length();
    return m;
  }
};

namespace detail {

/// A breakpoint t = ln s with s isolated in [s_lo, s_hi].
struct Breakpoint {
  long double lo;
  long double hi;
};

inline void add_exp_roots(const RationalPoly& q, const Rational& s_lo, const Rational& s_hi,
                          std::vector<Breakpoint>& out) {
  if (q.degree() <= 0) return;
  const Rational width = Rational(1L, 1000000000000L) * std::max(Rational(1), s_lo);
  for (const auto& r : isolate_roots(q, s_lo, s_hi, width)) {
    out.push_back({std::log(round_down(r.lo)), std::log(round_up(r.hi))});
  }
}

/// Polynomial q(s) = sum_j c_j s^{j-1} with Phi(t) = e^t q(e^t); Phi must
/// have no constant term.
inline RationalPoly divided_by_s(const ExpPoly& phi) {
  std::vector<Rational> q(phi.max_exponent());
  for (const auto& [j, c] : phi.terms()) q[j - 1] = c;
  return RationalPoly(std::move(q));
}

}  // namespace detail

/// {t in [a, T] : |g(t)| >= M} cut into intervals on which ref' is monotone
/// (ref defaults to g). Breakpoints are the zeros of g - M, g + M and ref''.
/// Each interval carries the witness (k, M).
inline IntervalDecomposition superlevel_decompose(const ExpPoly& g, const Rational& M, const Window& w,
                                                  const ExpPoly* ref = nullptr, unsigned witness_k = 0) {
  if (!(M > 0)) throw ValidationError("superlevel threshold must be positive");
  if (!(w.T > w.a)) throw ValidationError("window requires T > a");
  IntervalDecomposition out;
  if (g.is_zero()) return out;
  const Rational s_lo = to_rational(std::nextafter(std::exp(w.a), 0.0L));
  const Rational s_hi = to_rational(std::nextafter(std::exp(w.T), std::numeric_limits<long double>::infinity()));

  std::vector<detail::Breakpoint> cuts;
  const RationalPoly gp = g.as_polynomial();
  detail::add_exp_roots(gp - RationalPoly::constant(M), s_lo, s_hi, cuts);
  detail::add_exp_roots(gp + RationalPoly::constant(M), s_lo, s_hi, cuts);
  const ExpPoly second = (ref ? *ref : g).derivative(2);
  if (!second.is_zero()) detail::add_exp_roots(detail::divided_by_s(second), s_lo, s_hi, cuts);
  std::sort(cuts.begin(), cuts.end(), [](const auto& x, const auto& y) { return x.lo < y.lo; });

  const PhaseEvaluator eval(g);
  const long double m_ld = to_long_double(M);
  long double left = w.a;
  auto emit = [&](long double lo, long double hi) {
    lo = std::max(lo, w.a);
    hi = std::min(hi, w.T);
    if (!(hi > lo)) return;
    if (std::fabs(eval.value((lo + hi) / 2)) < m_ld) return;
    out.intervals.push_back({lo, hi, witness_k, round_down(M), true});
  };
  for (const auto& c : cuts) {
    emit(left, c.lo);
    left = std::max(left, c.hi);
  }
  emit(left, w.T);
  return out;
}

struct LabeledInterval {
  long double lo = 0.0L;
  long double hi = 0.0L;
};

struct MergedInterval {
  long double lo = 0.0L;
  long double hi = 0.0L;
  /// Containment witness: the interval lies inside sets[set][member].
  std::size_t set = 0;
  std::size_t member = 0;
};

/// Disjoint cover of the union of `sets`, each piece inside one input
/// interval. Greedy sweep over elementary segments: a run is extended while
/// some input interval contains all of it.
inline std::vector<MergedInterval> merge_intervals(const std::vector<std::vector<LabeledInterval>>& sets) {
  std::vector<long double> pts;
  for (const auto& s : sets)
    for (const auto& iv : s) {
      if (!(iv.hi >= iv.lo)) throw ValidationError("interval with hi < lo");
      pts.push_back(iv.lo);
      pts.push_back(iv.hi);
    }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  using Label = std::pair<std::size_t, std::size_t>;
  std::vector<MergedInterval> out;
  std::vector<Label> run;
  long double run_lo = 0.0L, run_hi = 0.0L;
  auto close = [&] {
    if (!run.empty()) out.push_back({run_lo, run_hi, run.front().first, run.front().second});
    run.clear();
  };
  for (std::size_t e = 0; e + 1 < pts.size(); ++e) {
    const long double x0 = pts[e], x1 = pts[e + 1];
    std::vector<Label> here;
    for (std::size_t s = 0; s < sets.size(); ++s)
      for (std::size_t i = 0; i < sets[s].size(); ++i)
        if (sets[s][i].lo <= x0 && x1 <= sets[s][i].hi) here.emplace_back(s, i);
    if (here.empty()) {
      close();
      continue;
    }
    if (!run.empty() && run_hi == x0) {
      std::vector<Label> both;
      std::set_intersection(run.begin(), run.end(), here.begin(), here.end(), std::back_inserter(both));
      if (!both.empty()) {
        run = std::move(both);
        run_hi = x1;
        continue;
      }
    }
    close();
    run = std::move(here);
    run_lo = x0;
    run_hi = x1;
  }
  close();
  return out;
}

/// 12k / eta^{1/k}: bound on |int e^{i psi}| when |psi^{(k)}| >= eta.
inline long double vdc_bound(unsigned k, long double eta) {
  if (k < 1) throw ValidationError("van der Corput order must be >= 1");
  if (!(eta > 0.0L)) throw ValidationError("van der Corput threshold must be positive");
  return 12.0L * static_cast<long double>(k) / std::pow(eta, 1.0L / static_cast<long double>(k));
}

struct CaseTotals {
  std::size_t interval_budget = 0;
  /// Derivative threshold for Phi, and the same threshold for psi = 2 pi Phi.
  long double eta_phi = 0.0L;
  long double eta_psi = 0.0L;
  /// max_k vdc_bound(k, eta_psi) and the maximizing k.
  long double per_interval = 0.0L;
  unsigned argmax_k = 0;
  long double total = 0.0L;
  bool vacuous = false;
};

struct CertifiedBound {
  long double C = 0.0L;
  CaseTotals low;
  CaseTotals high;
  HighFreqConstants constants;
};

/// kappa = 3n * 2 (3n)^4.
inline std::size_t interval_budget(std::size_t n) {
  const std::size_t t = 3 * n;
  return t * 2 * t * t * t * t;
}

namespace detail {

inline long double upward(long double x) { return x * (1.0L + 1e-15L); }

inline CaseTotals case_totals(std::size_t n, long double eta_phi) {
  CaseTotals c;
  c.interval_budget = interval_budget(n);
  c.eta_phi = eta_phi;
  c.eta_psi = 2.0L * std::numbers::pi_v<long double> * eta_phi;
  for (unsigned k = 1; k <= n; ++k) {
    const long double v = vdc_bound(k, c.eta_psi);
    if (v > c.per_interval) {
      c.per_interval = v;
      c.argmax_k = k;
    }
  }
  c.total = upward(static_cast<long double>(c.interval_budget) * c.per_interval);
  return c;
}

}  // namespace detail

inline CertifiedBound certified_constant_real(const CurveFamily& family) {
  CertifiedBound out;
  out.constants = high_freq_constants(family);
  const std::size_t n = out.constants.n;
  const long double H = round_up(out.constants.H);
  out.low = detail::case_totals(n, std::nextafter(1.0L / (8.0L * H * static_cast<long double>(n)), 0.0L));
  if (out.constants.epsilon) {
    const long double Hp = round_up(out.constants.H_prime);
    out.high = detail::case_totals(n, std::nextafter(*out.constants.epsilon / (static_cast<long double>(n) * Hp), 0.0L));
  } else {
    out.high.vacuous = true;
    out.high.interval_budget = interval_budget(n);
  }
  out.C = std::max(out.low.total, out.high.vacuous ? 0.0L : out.high.total);
  return out;
}

/// Fraction of `samples` interior points of each interval violating
/// |Phi^{(k)}| >= eta (relative slack 1e-9 for rounding).
inline std::size_t witness_failures(const ExpPoly& phi, const IntervalDecomposition& d, unsigned samples = 32) {
  const PhaseEvaluator eval(phi);
  std::size_t bad = 0;
  for (const auto& iv : d.intervals) {
    for (unsigned i = 0; i < samples; ++i) {
      const long double t = iv.lo + (static_cast<long double>(i) + 0.5L) / samples * iv.length();
      if (std::fabs(eval.derivative(t, iv.k)) < iv.eta * (1.0L - 1e-9L)) ++bad;
    }
  }
  return bad;
}

/// Per-frequency replay of the proof: the decomposition, the resulting bound
/// and checks that every step holds numerically.
struct ProofTrace {
  FrequencyClass cls = FrequencyClass::Low;
  long double constant_term = 0.0L;  // sum lambda_i f_i(0)
  IntervalDecomposition superlevel;  // {|Phi| >= 1/4} (low case only)
  IntervalDecomposition pieces;      // witness intervals fed to van der Corput
  std::size_t budget = 0;
  long double vdc_total = 0.0L;      // sum of vdc_bound(k, 2 pi eta) over pieces
  long double uncovered = 0.0L;      // measure the pieces fail to cover
  std::size_t witness_failures = 0;
  /// int over J = [a,T] \ {|Phi| >= 1/4} of cos(2 pi Phi) (low case only).
  long double low_set_integral = 0.0L;
};

namespace detail {

inline std::vector<LabeledInterval> as_labeled(const IntervalDecomposition& d) {
  std::vector<LabeledInterval> v;
  for (const auto& iv : d.intervals) v.push_back({iv.lo, iv.hi});
  return v;
}

inline IntervalDecomposition witness_cover(const ExpPoly& phi, const Rational& eta, const Window& w, std::size_t n,
                                           const IntervalDecomposition* restrict_to) {
  std::vector<IntervalDecomposition> sets;
  for (unsigned k = 1; k <= n; ++k) sets.push_back(superlevel_decompose(phi.derivative(k), eta, w, &phi, k));
  std::vector<std::vector<LabeledInterval>> labeled;
  for (const auto& s : sets) labeled.push_back(as_labeled(s));
  const auto merged = merge_intervals(labeled);
  IntervalDecomposition out;
  for (const auto& mi : merged) {
    const WitnessInterval& src = sets[mi.set].intervals[mi.member];
    if (!restrict_to) {
      out.intervals.push_back({mi.lo, mi.hi, src.k, src.eta, true});
      continue;
    }
    for (const auto& r : restrict_to->intervals) {
      const long double lo = std::max(mi.lo, r.lo), hi = std::min(mi.hi, r.hi);
      if (hi > lo) out.intervals.push_back({lo, hi, src.k, src.eta, true});
    }
  }
  std::sort(out.intervals.begin(), out.intervals.end(),
            [](const auto& x, const auto& y) { return x.lo < y.lo; });
  return out;
}

}  // namespace detail

inline ProofTrace trace_frequency(const CurveFamily& family, const Window& w, std::span<const Rational> lambda) {
  ProofTrace tr;
  tr.cls = classify_frequency(family, lambda);
  const HighFreqConstants hc = high_freq_constants(family);
  const std::size_t n = hc.n;
  tr.budget = interval_budget(n);
  const ExpPoly phi = phi_from_frequency(family, lambda);
  tr.constant_term = to_long_double(phi.coefficient(0));
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;

  if (tr.cls == FrequencyClass::Low) {
    tr.superlevel = superlevel_decompose(phi, Rational(1, 4), w);
    const Rational eta = Rational(1) / (8 * hc.H * static_cast<unsigned long>(n));
    tr.pieces = detail::witness_cover(phi, eta, w, n, &tr.superlevel);
    tr.uncovered = std::max(0.0L, tr.superlevel.measure() - tr.pieces.measure());
    // J is the complement of the superlevel set.
    const PhaseEvaluator eval(phi);
    long double left = w.a;
    auto integrate_cos = [&](long double lo, long double hi) {
      if (!(hi > lo)) return;
      tr.low_set_integral += integrate_smooth(
          [&](long double t) { return std::cos(two_pi * eval.value(t)); }, lo, hi, 1e-12L, 1e-12L);
    };
    for (const auto& iv : tr.superlevel.intervals) {
      integrate_cos(left, iv.lo);
      left = iv.hi;
    }
    integrate_cos(left, w.T);
  } else {
    if (!hc.epsilon) throw ConsistencyError("high frequency reached with L = 0");
    const Rational eta = to_rational(*hc.epsilon) / (hc.H_prime * static_cast<unsigned long>(n));
    tr.pieces = detail::witness_cover(phi, eta, w, n, nullptr);
    tr.uncovered = std::max(0.0L, w.length() - tr.pieces.measure());
  }
  for (const auto& iv : tr.pieces.intervals) tr.vdc_total += vdc_bound(iv.k, two_pi * iv.eta);
  tr.witness_failures = witness_failures(phi, tr.pieces);
  return tr;
}

inline void write_decomposition_csv(std::ostream& os, const IntervalDecomposition& d) {
  os << "lo,hi,k,eta,monotone\n";
  const auto old = os.precision(std::numeric_limits<long double>::max_digits10);
  for (const auto& iv : d.intervals) {
    os << iv.lo << ',' << iv.hi << ',' << iv.k << ',' << iv.eta << ',' << (iv.monotone ? 1 : 0) << '\n';
  }
  os.precision(old);
}

}  // namespace oscillabound
