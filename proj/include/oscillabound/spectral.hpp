#pragma once

// Hoffman-type bounds from the numerical range of the convolution operator,
// a search for inf mu_hat, and the end-to-end independence pipeline.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "oscillabound/padic.hpp"
#include "oscillabound/parallel.hpp"
#include "oscillabound/realosc.hpp"

namespace oscillabound {

/// -m / (1 - m), for m < 0.
template <class T>
T hoffman_ratio_bound(const T& m) {
  if (!(m < 0)) throw ValidationError("Hoffman bound requires m < 0");
  return T(-m / (T(1) - m));
}

/// (-m + 2 eps) / (R - m - eps), for R - m - eps > 0.
template <class T>
T operator_ratio_bound(const T& m, const T& R, const T& eps) {
  const T denom = R - m - eps;
  if (!(denom > 0)) throw ValidationError("hypothesis violation: R - m - eps must be positive");
  return T((-m + T(2) * eps) / denom);
}

/// 1 - M / m, for m < 0 < M.
template <class T>
T hoffman_chromatic_bound(const T& m, const T& M) {
  if (!(m < 0)) throw ValidationError("chromatic bound requires m < 0");
  if (!(M > 0)) throw ValidationError("chromatic bound requires M > 0");
  return T(T(1) - M / m);
}

struct Field {
  enum class Kind { Real, Padic };
  Kind kind = Kind::Real;
  unsigned long p = 0;

  static Field real() { return {}; }
  static Field padic(unsigned long p) {
    require_prime(p);
    return {Kind::Padic, p};
  }
  bool is_real() const noexcept { return kind == Kind::Real; }
};

struct GridSpec {
  int points_per_decade = 17;
  int min_exponent = -6;  // magnitudes 10^min .. 10^max
  int max_exponent = 6;
  /// p-adic lattice: valuations and unit digits.
  long min_valuation = -6;
  long max_valuation = 2;
  unsigned unit_digits = 2;

  /// {0} and +-10^{e / points_per_decade}.
  std::vector<double> real_axis() const {
    std::vector<double> v{0.0};
    for (int e = min_exponent * points_per_decade; e <= max_exponent * points_per_decade; ++e) {
      const double x = std::pow(10.0, static_cast<double>(e) / points_per_decade);
      v.push_back(x);
      v.push_back(-x);
    }
    return v;
  }
};

struct MinimizationOptions {
  std::size_t budget = 4000;
  std::uint64_t seed = 1;
  long double tol = 1e-9L;
  GridSpec grid;
  /// Grid cells evaluated between refinement stages.
  std::size_t chunk = 256;
  unsigned max_iterations = 200;
  unsigned workers = 0;  // 0: worker_count()
};

struct TraceEntry {
  std::string stage;
  std::vector<Rational> lambda;
  long double value = 0.0L;
};

struct MinimizationReport {
  Field field;
  std::vector<Rational> best_lambda;
  long double best_value = std::numeric_limits<long double>::infinity();
  long double best_error = 0.0L;
  std::size_t evaluations = 0;
  std::size_t failures = 0;
  /// Budget ran out before the search stream ended.
  bool partial = false;
  GridSpec grid;
  std::vector<TraceEntry> trace;
  /// Every evaluated (lambda, value, error), in stream order.
  struct Sample {
    std::vector<Rational> lambda;
    long double value;
    long double error;
  };
  std::vector<Sample> samples;
};

namespace detail {

struct Evaluated {
  long double value = 0.0L;
  long double error = 0.0L;
  bool ok = false;
};

/// Evaluates a batch of real frequencies in parallel; order is preserved.
inline std::vector<Evaluated> evaluate_real(const CurveFamily& family, const Window& w,
                                            const std::vector<std::vector<double>>& batch, long double tol,
                                            unsigned workers) {
  std::vector<Evaluated> out(batch.size());
  parallel_for(
      batch.size(),
      [&](std::size_t i) {
        try {
          const MuHatResult r = mu_hat_real(family, w, std::span<const double>(batch[i]), tol);
          out[i] = {r.value, r.error, true};
        } catch (const ConvergenceError&) {
          out[i] = {0.0L, 0.0L, false};
        }
      },
      workers);
  return out;
}

inline std::vector<Rational> exact_lambda(const std::vector<double>& l) {
  std::vector<Rational> q;
  for (double x : l) q.push_back(to_rational(x));
  return q;
}

}  // namespace detail

/// Real field: seeded random grid cells (log-spaced magnitudes, both signs,
/// zero) alternating with compass search from the incumbent. The candidate
/// stream does not depend on the budget, so the reported minimum can only
/// decrease as the budget grows.
inline MinimizationReport minimize_mu_hat_real(const CurveFamily& family, const Window& w,
                                               const MinimizationOptions& opt = {}) {
  if (opt.budget < 1) throw ValidationError("minimization budget must be >= 1");
  w.validate(family);
  const unsigned workers = opt.workers ? opt.workers : worker_count();
  MinimizationReport rep;
  rep.field = Field::real();
  rep.grid = opt.grid;
  const std::vector<double> axis = opt.grid.real_axis();
  const std::size_t m = family.m();
  long double grid_cells = 1.0L;
  for (std::size_t i = 0; i < m; ++i) grid_cells *= static_cast<long double>(axis.size());

  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<std::size_t> pick(0, axis.size() - 1);
  std::vector<double> best;

  auto run_batch = [&](const std::vector<std::vector<double>>& batch, const std::string& stage) {
    std::vector<std::vector<double>> todo(batch.begin(),
                                          batch.begin() + static_cast<std::ptrdiff_t>(std::min(
                                                              batch.size(), opt.budget - rep.evaluations)));
    const auto vals = detail::evaluate_real(family, w, todo, opt.tol, workers);
    bool improved = false;
    for (std::size_t i = 0; i < todo.size(); ++i) {
      ++rep.evaluations;
      if (!vals[i].ok) {
        ++rep.failures;
        continue;
      }
      rep.samples.push_back({detail::exact_lambda(todo[i]), vals[i].value, vals[i].error});
      if (vals[i].value < rep.best_value) {
        rep.best_value = vals[i].value;
        rep.best_error = vals[i].error;
        best = todo[i];
        rep.trace.push_back({stage, detail::exact_lambda(todo[i]), vals[i].value});
        improved = true;
      }
    }
    return improved;
  };
  auto exhausted = [&] { return rep.evaluations >= opt.budget; };

  run_batch({std::vector<double>(m, 0.0)}, "origin");
  std::size_t grid_seen = 1;
  while (!exhausted()) {
    std::vector<std::vector<double>> chunk;
    for (std::size_t c = 0; c < opt.chunk; ++c) {
      std::vector<double> l(m);
      for (auto& x : l) x = axis[pick(rng)];
      chunk.push_back(std::move(l));
    }
    run_batch(chunk, "grid");
    grid_seen += chunk.size();
    if (exhausted()) break;
    // Compass search around the incumbent with per-axis scales.
    std::vector<double> scale(m);
    for (std::size_t i = 0; i < m; ++i) scale[i] = std::max(std::fabs(best[i]), 1e-6);
    double step = 0.5;
    for (unsigned it = 0; it < opt.max_iterations && step > 1e-9 && !exhausted(); ++it) {
      std::vector<std::vector<double>> moves;
      for (std::size_t i = 0; i < m; ++i)
        for (double sgn : {1.0, -1.0}) {
          std::vector<double> l = best;
          l[i] += sgn * step * scale[i];
          moves.push_back(std::move(l));
        }
      if (!run_batch(moves, "refine")) step /= 2;
    }
    if (static_cast<long double>(grid_seen) >= 4.0L * grid_cells) break;
  }
  rep.partial = exhausted();
  rep.best_lambda = detail::exact_lambda(best);
  return rep;
}

/// p-adic field: exhaustive enumeration of the valuation / unit lattice.
inline MinimizationReport minimize_mu_hat_padic(const CurveFamily& family, const PadicWindow& w,
                                                const MinimizationOptions& opt = {}) {
  if (opt.budget < 1) throw ValidationError("minimization budget must be >= 1");
  w.validate(family);
  const unsigned workers = opt.workers ? opt.workers : worker_count();
  MinimizationReport rep;
  rep.field = Field::padic(w.p);
  rep.grid = opt.grid;
  const auto axis = padic_axis_lattice(w.p, opt.grid.min_valuation, opt.grid.max_valuation, opt.grid.unit_digits);
  const std::size_t m = family.m();
  std::size_t total = 1;
  for (std::size_t i = 0; i < m; ++i) total *= axis.size();
  const std::size_t count = std::min(total, opt.budget);
  auto lambda_at = [&](std::size_t idx) {
    std::vector<Rational> l(m);
    for (std::size_t i = 0; i < m; ++i) {
      l[i] = axis[idx % axis.size()];
      idx /= axis.size();
    }
    return l;
  };
  std::vector<long double> vals(count);
  parallel_for(
      count, [&](std::size_t i) { vals[i] = mu_hat_padic(family, w, lambda_at(i), false).value; }, workers);
  for (std::size_t i = 0; i < count; ++i) {
    ++rep.evaluations;
    rep.samples.push_back({lambda_at(i), vals[i], 0.0L});
    if (vals[i] < rep.best_value) {
      rep.best_value = vals[i];
      rep.best_lambda = lambda_at(i);
      rep.trace.push_back({"lattice", rep.best_lambda, vals[i]});
    }
  }
  rep.partial = count < total;
  // Report the incumbent exactly when it is rational.
  const PadicMuHat exact = mu_hat_padic(family, w, rep.best_lambda, true);
  if (exact.exact) rep.best_value = exact.value;
  return rep;
}

struct PipelineResult {
  Field field;
  /// Certified C with mu_hat >= -C / (T - a).
  long double C = 0.0L;
  long double window_length = 0.0L;
  long double certified_floor = 0.0L;  // -C / (T - a)
  long double certified_ratio = 0.0L;  // C / (T - a)
  long double chromatic_bound = 0.0L;  // (T - a) / C
  long double empirical_minimum = 0.0L;
  /// -m / (1 - m) when the empirical minimum is negative.
  std::optional<long double> empirical_ratio;
  MinimizationReport report;
  std::optional<CertifiedBound> real_certificate;
  std::optional<PadicCertificate> padic_certificate;
};

namespace detail {

inline void check_consistency(const PipelineResult& r, long double tol) {
  std::ostringstream why;
  if (r.empirical_minimum < r.certified_floor - tol) {
    why << "empirical minimum " << static_cast<double>(r.empirical_minimum) << " is below the certified floor "
        << static_cast<double>(r.certified_floor);
  } else if (r.empirical_ratio && *r.empirical_ratio > r.certified_ratio + tol) {
    why << "empirical ratio " << static_cast<double>(*r.empirical_ratio) << " exceeds the certified ratio "
        << static_cast<double>(r.certified_ratio);
  } else {
    return;
  }
  if (!r.report.best_lambda.empty()) {
    why << " at lambda = (";
    for (std::size_t i = 0; i < r.report.best_lambda.size(); ++i)
      why << (i ? ", " : "") << to_string(r.report.best_lambda[i]);
    why << ")";
  }
  throw ConsistencyError(why.str());
}

inline void fill_bounds(PipelineResult& r) {
  r.certified_floor = -r.C / r.window_length;
  r.certified_ratio = r.C / r.window_length;
  r.chromatic_bound = r.window_length / r.C;
  r.empirical_minimum = r.report.best_value;
  if (r.empirical_minimum < 0) r.empirical_ratio = hoffman_ratio_bound(r.empirical_minimum);
}

}  // namespace detail

inline PipelineResult independence_pipeline(const CurveFamily& family, const Window& w,
                                            const MinimizationOptions& opt = {}, long double slack = 1e-6L) {
  require_independent(family);
  w.validate(family);
  PipelineResult r;
  r.field = Field::real();
  r.real_certificate = certified_constant_real(family);
  r.C = r.real_certificate->C;
  r.window_length = w.length();
  r.report = minimize_mu_hat_real(family, w, opt);
  detail::fill_bounds(r);
  detail::check_consistency(r, slack);
  return r;
}

/// p-adic variant: C is scaled so that -C / (T - a) is the certified floor
/// -16 sum p^{deg f'_i} / L.
inline PipelineResult independence_pipeline(const CurveFamily& family, const PadicWindow& w,
                                            const MinimizationOptions& opt = {}, long double slack = 1e-6L) {
  require_independent(family);
  w.validate(family);
  PipelineResult r;
  r.field = Field::padic(w.p);
  r.padic_certificate = certified_bound_padic(family, w);
  r.window_length = static_cast<long double>(w.T - w.a);
  r.C = to_long_double(-r.padic_certificate->floor) * r.window_length;
  r.report = minimize_mu_hat_padic(family, w, opt);
  detail::fill_bounds(r);
  detail::check_consistency(r, slack);
  return r;
}

}  // namespace oscillabound
