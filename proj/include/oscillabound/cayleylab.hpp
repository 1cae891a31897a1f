#pragma once

// Desk-scale combinatorics around the Cayley graphs Cay(K^m, +-V): periodic
// box sets and their densities, difference configurations x1 - x2 = F(s),
// the multivariate-to-curve substitution, clique search on finite samples and
// the periodic coloring of graphs of periodic functions.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oscillabound/parallel.hpp"
#include "oscillabound/realosc.hpp"
#include "oscillabound/roots.hpp"

namespace oscillabound {

using Point = std::vector<Rational>;

inline Integer floor_div(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Integer ceil_div(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

// ---------------------------------------------------------------------------
// Box sets

/// Closed axis-aligned box.
struct Box {
  Point lo;
  Point hi;
};

/// Union of closed boxes, optionally replicated by the rectangular lattice
/// sum_i Z * period_i e_i. A zero period component leaves that axis
/// aperiodic.
class BoxSet {
 public:
  BoxSet(std::size_t dim, std::vector<Box> boxes, std::optional<Point> period = std::nullopt)
      : dim_(dim), boxes_(std::move(boxes)), period_(std::move(period)) {
    if (dim_ == 0) throw ValidationError("box set dimension must be positive");
    for (const auto& b : boxes_) {
      if (b.lo.size() != dim_ || b.hi.size() != dim_) throw ValidationError("box corner has the wrong dimension");
      for (std::size_t i = 0; i < dim_; ++i)
        if (b.lo[i] > b.hi[i]) throw ValidationError("box corner lo exceeds hi");
    }
    if (period_) {
      if (period_->size() != dim_) throw ValidationError("period vector has the wrong dimension");
      for (const auto& p : *period_)
        if (p < 0) throw ValidationError("period components must be non-negative");
    }
  }

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<Box>& boxes() const noexcept { return boxes_; }
  const std::optional<Point>& period() const noexcept { return period_; }
  Rational period(std::size_t axis) const { return period_ ? (*period_)[axis] : Rational(0); }

  /// Exact membership.
  bool contains(const Point& x) const {
    if (x.size() != dim_) throw ValidationError("point has the wrong dimension");
    for (const auto& b : boxes_) {
      bool in = true;
      for (std::size_t i = 0; i < dim_ && in; ++i) in = axis_hit(b, i, x[i]);
      if (in) return true;
    }
    return false;
  }

  /// Structured text: "dim m", "period p_1 ... p_m", "box lo_1 ... lo_m hi_1 ... hi_m";
  /// '#' starts a comment.
  static BoxSet parse(std::istream& in) {
    std::size_t dim = 0;
    std::optional<Point> period;
    std::vector<std::vector<Rational>> raw;
    std::string line;
    while (std::getline(in, line)) {
      if (auto c = line.find('#'); c != std::string::npos) line.erase(c);
      std::istringstream ls(line);
      std::string key;
      if (!(ls >> key)) continue;
      std::vector<Rational> vals;
      for (std::string tok; ls >> tok;) vals.push_back(parse_rational(tok));
      if (key == "dim") {
        if (vals.size() != 1 || vals[0] < 1 || vals[0].get_den() != 1) throw ValidationError("malformed dim line");
        dim = vals[0].get_num().get_ui();
      } else if (key == "period") {
        period = vals;
      } else if (key == "box") {
        raw.push_back(std::move(vals));
      } else {
        throw ValidationError("unknown box set key '" + key + "'");
      }
    }
    if (dim == 0) throw ValidationError("box set needs a 'dim' line");
    std::vector<Box> boxes;
    for (auto& v : raw) {
      if (v.size() != 2 * dim) throw ValidationError("box line needs 2*dim values");
      boxes.push_back({Point(v.begin(), v.begin() + dim), Point(v.begin() + dim, v.end())});
    }
    return BoxSet(dim, std::move(boxes), std::move(period));
  }

 private:
  bool axis_hit(const Box& b, std::size_t i, const Rational& x) const {
    const Rational p = period(i);
    if (p == 0) return b.lo[i] <= x && x <= b.hi[i];
    // some k with lo <= x - kP <= hi
    return ceil_div((x - b.hi[i]) / p) <= floor_div((x - b.lo[i]) / p);
  }

  std::size_t dim_;
  std::vector<Box> boxes_;
  std::optional<Point> period_;
};

struct DensityEstimate {
  long double radius = 0.0L;
  long double value = 0.0L;
  /// Boundary cell volume over |B_r|; the true ratio lies within value +- error.
  long double error = 0.0L;
  std::size_t cells = 0;
};

namespace detail {

enum class Overlap { None, Partial, Full };

/// Replicated box against the cell [lo, hi] along one axis.
inline Overlap axis_overlap(long double blo, long double bhi, long double p, long double lo, long double hi) {
  if (p == 0.0L) {
    if (bhi < lo || blo > hi) return Overlap::None;
    return (blo <= lo && hi <= bhi) ? Overlap::Full : Overlap::Partial;
  }
  if (bhi - blo >= p) return Overlap::Full;  // copies tile the axis
  const long double kmin = std::ceil((lo - bhi) / p), kmax = std::floor((hi - blo) / p);
  if (kmin > kmax) return Overlap::None;
  if (hi - lo > bhi - blo) return Overlap::Partial;
  for (long double k = kmin; k <= kmax; k += 1.0L)
    if (blo + k * p <= lo && hi <= bhi + k * p) return Overlap::Full;
  return Overlap::Partial;
}

struct BoxesLD {
  std::vector<std::vector<long double>> lo, hi;
  std::vector<long double> period;
};

inline Overlap cell_overlap(const BoxesLD& b, const std::vector<long double>& lo, const std::vector<long double>& hi) {
  Overlap best = Overlap::None;
  for (std::size_t j = 0; j < b.lo.size(); ++j) {
    Overlap o = Overlap::Full;
    for (std::size_t i = 0; i < lo.size() && o != Overlap::None; ++i)
      o = std::min(o, axis_overlap(b.lo[j][i], b.hi[j][i], b.period[i], lo[i], hi[i]));
    best = std::max(best, o);
    if (best == Overlap::Full) break;
  }
  return best;
}

inline bool point_in(const BoxesLD& b, const std::vector<long double>& x) {
  for (std::size_t j = 0; j < b.lo.size(); ++j) {
    bool in = true;
    for (std::size_t i = 0; i < x.size() && in; ++i) {
      const long double p = b.period[i];
      if (p == 0.0L) in = b.lo[j][i] <= x[i] && x[i] <= b.hi[j][i];
      else in = std::ceil((x[i] - b.hi[j][i]) / p) <= std::floor((x[i] - b.lo[j][i]) / p);
    }
    if (in) return true;
  }
  return false;
}

/// Share of k^m cell midpoints lying in both the ball and the set.
inline long double subgrid_fraction(const BoxesLD& b, const std::vector<long double>& lo,
                                    const std::vector<long double>& hi, long double r) {
  const std::size_t m = lo.size();
  const std::size_t k = m <= 2 ? 4 : m <= 4 ? 2 : 1;
  std::size_t total = 1;
  for (std::size_t i = 0; i < m; ++i) total *= k;
  std::vector<long double> x(m);
  std::size_t hits = 0;
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    long double norm = 0.0L;
    for (std::size_t i = 0; i < m; ++i) {
      x[i] = lo[i] + (hi[i] - lo[i]) * (static_cast<long double>(rest % k) + 0.5L) / static_cast<long double>(k);
      rest /= k;
      norm += x[i] * x[i];
    }
    if (norm <= r * r && point_in(b, x)) ++hits;
  }
  return static_cast<long double>(hits) / static_cast<long double>(total);
}

inline long double unit_ball_volume(std::size_t m) {
  const long double h = static_cast<long double>(m) / 2.0L;
  return std::pow(std::numbers::pi_v<long double>, h) / std::tgamma(h + 1.0L);
}

}  // namespace detail

/// |I cap B_r| / |B_r| by refining the cube [-r, r]^m: cells inside both the
/// ball and one replicated box count fully, cells missing either are dropped,
/// the rest are split until max_cells classifications are used. Leftover
/// boundary cells are weighted by a midpoint sub-grid; their total volume is
/// the reported error whatever the weights.
inline std::vector<DensityEstimate> upper_density_estimate(const BoxSet& set, const std::vector<long double>& radii,
                                                           std::size_t max_cells = 1 << 20) {
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0)) throw ValidationError("radii must be positive");
    if (i > 0 && !(radii[i] > radii[i - 1])) throw ValidationError("radii must be increasing");
  }
  const std::size_t m = set.dim();
  detail::BoxesLD b;
  for (const auto& box : set.boxes()) {
    std::vector<long double> lo, hi;
    for (std::size_t i = 0; i < m; ++i) {
      lo.push_back(to_long_double(box.lo[i]));
      hi.push_back(to_long_double(box.hi[i]));
    }
    b.lo.push_back(std::move(lo));
    b.hi.push_back(std::move(hi));
  }
  for (std::size_t i = 0; i < m; ++i) b.period.push_back(to_long_double(set.period(i)));

  std::vector<DensityEstimate> out;
  for (const long double r : radii) {
    struct Cell {
      std::vector<long double> lo, hi;
    };
    std::vector<Cell> level{{std::vector<long double>(m, -r), std::vector<long double>(m, r)}};
    long double inside = 0.0L, boundary = 0.0L, partial = 0.0L;
    std::size_t used = 0;
    while (!level.empty()) {
      std::vector<Cell> next;
      const bool can_split = used + level.size() * (std::size_t{1} << m) <= max_cells;
      for (const auto& c : level) {
        ++used;
        long double near = 0.0L, far = 0.0L, vol = 1.0L;
        for (std::size_t i = 0; i < m; ++i) {
          const long double a = std::fabs(c.lo[i]), z = std::fabs(c.hi[i]);
          const long double closest = (c.lo[i] <= 0 && 0 <= c.hi[i]) ? 0.0L : std::min(a, z);
          near += closest * closest;
          far += std::max(a, z) * std::max(a, z);
          vol *= c.hi[i] - c.lo[i];
        }
        if (near > r * r) continue;
        const auto o = detail::cell_overlap(b, c.lo, c.hi);
        if (o == detail::Overlap::None) continue;
        if (far <= r * r && o == detail::Overlap::Full) {
          inside += vol;
          continue;
        }
        if (!can_split) {
          boundary += vol;
          partial += vol * detail::subgrid_fraction(b, c.lo, c.hi, r);
          continue;
        }
        for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
          Cell child = c;
          for (std::size_t i = 0; i < m; ++i) {
            const long double mid = (c.lo[i] + c.hi[i]) / 2.0L;
            if (mask >> i & 1) child.lo[i] = mid;
            else child.hi[i] = mid;
          }
          next.push_back(std::move(child));
        }
      }
      level = std::move(next);
    }
    const long double ball = detail::unit_ball_volume(m) * std::pow(r, static_cast<long double>(m));
    const long double value = std::clamp((inside + partial) / ball, 0.0L, 1.0L);
    out.push_back({r, value, boundary / ball, used});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Difference configurations

struct ConfigFound {
  Point x1;
  Point x2;
  Rational s;
  /// max_i |x1_i - x2_i - f_i(s)|; zero since the construction is exact.
  long double residual = 0.0L;
};

struct ConfigSearchResult {
  std::optional<ConfigFound> found;
  std::size_t s_evaluated = 0;
};

namespace detail {

inline Point curve_point(const CurveFamily& family, const Rational& s) {
  Point v;
  for (const auto& f : family.polys()) v.push_back(f(s));
  return v;
}

/// For fixed F, x2 in b1 (the k = 0 copy suffices by periodicity) and
/// x2 + F in some copy of b2. Returns the x2 closest to the origin and accumulates the
/// separation gap otherwise.
inline std::optional<Point> pair_witness(const BoxSet& set, const Box& b1, const Box& b2, const Point& f,
                                         long double& gap) {
  Point x(set.dim());
  long double sep = 0.0L;
  for (std::size_t i = 0; i < set.dim(); ++i) {
    const Rational p = set.period(i);
    Rational shift = 0;
    if (p != 0) {
      const Integer k = ceil_div((b1.lo[i] - b2.hi[i] + f[i]) / p);
      shift = Rational(k) * p;
    }
    const Rational lo = std::max<Rational>(b1.lo[i], b2.lo[i] - f[i] + shift);
    const Rational hi = std::min<Rational>(b1.hi[i], b2.hi[i] - f[i] + shift);
    if (lo > hi) {
      sep = std::max(sep, to_long_double(lo - hi));
      continue;
    }
    x[i] = std::clamp<Rational>(Rational(0), lo, hi);
  }
  if (sep > 0) {
    gap = std::min(gap, sep);
    return std::nullopt;
  }
  gap = 0;
  return x;
}

inline std::optional<ConfigFound> config_at(const CurveFamily& family, const BoxSet& set, const Rational& s,
                                            long double& gap) {
  const Point f = curve_point(family, s);
  gap = std::numeric_limits<long double>::infinity();
  for (const auto& b1 : set.boxes())
    for (const auto& b2 : set.boxes()) {
      auto x2 = pair_witness(set, b1, b2, f, gap);
      if (!x2) continue;
      Point x1(set.dim());
      long double residual = 0.0L;
      for (std::size_t i = 0; i < set.dim(); ++i) {
        x1[i] = (*x2)[i] + f[i];
        residual = std::max(residual, std::fabs(to_long_double(x1[i] - (*x2)[i] - f[i])));
      }
      if (!set.contains(*x2) || !set.contains(x1)) throw ConsistencyError("config_search witness left the box set");
      return ConfigFound{std::move(x1), std::move(*x2), s, residual};
    }
  return std::nullopt;
}

}  // namespace detail

/// Scans s over [e^a, e^T] with the given step, then rescans a neighbourhood
/// of the closest misses at step/32. NotFound is not a proof of absence.
inline ConfigSearchResult config_search(const CurveFamily& family, const Window& window, const BoxSet& set,
                                        long double step, unsigned workers = worker_count()) {
  if (!(step > 0)) throw ValidationError("config_search step must be positive");
  if (set.dim() != family.m()) throw ValidationError("box set dimension must equal the number of polynomials");
  if (!(window.T > window.a)) throw ValidationError("window requires T > a");
  const long double s0 = std::exp(window.a), s1 = std::exp(window.T);
  const std::size_t count = static_cast<std::size_t>(std::floor((s1 - s0) / step)) + 1;
  if (count > 50'000'000) throw ValidationError("config_search step too small for the window");

  ConfigSearchResult result;
  std::vector<long double> gaps(count, std::numeric_limits<long double>::infinity());
  const std::size_t chunk = 4096;
  auto scan = [&](const std::vector<long double>& grid, std::vector<long double>* gap_out) {
    std::optional<ConfigFound> hit;
    for (std::size_t begin = 0; begin < grid.size() && !hit; begin += chunk * std::max(1U, workers)) {
      const std::size_t end = std::min(grid.size(), begin + chunk * std::max(1U, workers));
      const std::size_t blocks = (end - begin + chunk - 1) / chunk;
      std::vector<std::optional<ConfigFound>> found(blocks);
      parallel_for(
          blocks,
          [&](std::size_t blk) {
            for (std::size_t i = begin + blk * chunk; i < std::min(end, begin + (blk + 1) * chunk); ++i) {
              long double gap;
              auto f = detail::config_at(family, set, to_rational(grid[i]), gap);
              if (gap_out) (*gap_out)[i] = gap;
              if (f) {
                found[blk] = std::move(f);
                return;
              }
            }
          },
          workers);
      result.s_evaluated += end - begin;
      for (auto& f : found)
        if (f) {
          hit = std::move(f);
          break;
        }
    }
    return hit;
  };

  std::vector<long double> grid(count);
  for (std::size_t i = 0; i < count; ++i) grid[i] = std::min(s1, s0 + static_cast<long double>(i) * step);
  if ((result.found = scan(grid, &gaps))) return result;

  // local refinement around the eight smallest gaps
  std::vector<std::size_t> order(count);
  for (std::size_t i = 0; i < count; ++i) order[i] = i;
  const std::size_t keep = std::min<std::size_t>(8, count);
  std::partial_sort(order.begin(), order.begin() + keep, order.end(),
                    [&](std::size_t x, std::size_t y) { return gaps[x] < gaps[y] || (gaps[x] == gaps[y] && x < y); });
  std::vector<long double> fine;
  for (std::size_t j = 0; j < keep; ++j)
    for (int k = -32; k <= 32; ++k) {
      const long double s = grid[order[j]] + step * static_cast<long double>(k) / 32.0L;
      if (s >= s0 && s <= s1 && k != 0) fine.push_back(s);
    }
  result.found = scan(fine, nullptr);
  return result;
}

// ---------------------------------------------------------------------------
// Multivariate reduction

/// Polynomial in d variables with rational coefficients; keys are exponent
/// vectors of length d.
struct MultiPoly {
  std::size_t vars = 0;
  std::map<std::vector<unsigned>, Rational> terms;

  void add(std::vector<unsigned> exponent, const Rational& c) {
    if (exponent.size() != vars) throw ValidationError("exponent vector has the wrong length");
    auto& slot = terms[std::move(exponent)];
    slot += c;
  }
  unsigned max_exponent() const {
    unsigned e = 0;
    for (const auto& [k, c] : terms)
      if (c != 0)
        for (unsigned x : k) e = std::max(e, x);
    return e;
  }
};

/// ell = 1 + the largest per-variable exponent, so every exponent vector is a
/// digit vector in base ell and h(alpha) = sum alpha_i ell^{i-1} is injective.
inline unsigned reduction_base(const std::vector<MultiPoly>& polys) {
  unsigned e = 0;
  for (const auto& p : polys) e = std::max(e, p.max_exponent());
  return std::max(2U, e + 1);
}

/// f_i(t) = F_i(t^{ell^0}, ..., t^{ell^{d-1}}).
inline CurveFamily multivariate_reduce(const std::vector<MultiPoly>& polys) {
  if (polys.empty()) throw ValidationError("multivariate_reduce needs at least one polynomial");
  const std::size_t d = polys.front().vars;
  for (const auto& p : polys)
    if (p.vars != d || d == 0) throw ValidationError("all polynomials must share a positive variable count");

  // 1, F_1, ..., F_m independent over the monomial basis
  std::map<std::vector<unsigned>, std::size_t> column;
  column[std::vector<unsigned>(d, 0)] = 0;
  for (const auto& p : polys)
    for (const auto& [k, c] : p.terms)
      if (c != 0) column.emplace(k, column.size());
  RationalMatrix a(polys.size() + 1, column.size());
  for (std::size_t i = 0; i < polys.size(); ++i)
    for (const auto& [k, c] : polys[i].terms)
      if (c != 0) a(i, column.at(k)) += c;
  a(polys.size(), 0) = 1;
  if (a.rank() != polys.size() + 1) {
    throw ValidationError("independence violation: 1, F_1, ..., F_m are linearly dependent");
  }

  const unsigned ell = reduction_base(polys);
  std::vector<RationalPoly> out;
  for (const auto& p : polys) {
    RationalPoly f;
    for (const auto& [k, c] : p.terms) {
      std::size_t h = 0, place = 1;
      for (std::size_t i = 0; i < d; ++i) {
        h += k[i] * place;
        place *= ell;
      }
      f += RationalPoly::monomial(h, c);
    }
    out.push_back(std::move(f));
  }
  if (out.size() < 2) throw ValidationError("a curve family needs at least two polynomials");
  CurveFamily family(std::move(out));
  if (!check_independence(family).independent) {
    throw ConsistencyError("internal error: substitution lost linear independence");
  }
  return family;
}

// ---------------------------------------------------------------------------
// Bezout data

struct BezoutCliqueData {
  Integer product_bound;
  Integer d;
  /// The clique number is below R(d,d); never evaluated.
  std::string ramsey_symbol;
};

inline BezoutCliqueData bezout_clique_data(const std::vector<unsigned long>& degrees) {
  if (degrees.empty()) throw ValidationError("bezout_clique_data needs at least one degree");
  Integer prod = 1;
  for (auto deg : degrees) {
    if (deg < 1) throw ValidationError("degrees must be at least 1");
    prod *= deg;
  }
  BezoutCliqueData out;
  out.product_bound = prod * prod;
  out.d = out.product_bound + 3;
  out.ramsey_symbol = "R(" + out.d.get_str() + "," + out.d.get_str() + ")";
  return out;
}

// ---------------------------------------------------------------------------
// Clique search

/// Curve membership tolerance for floating point samples.
inline constexpr long double curve_membership_tolerance = 1e-9L;

/// V = {(g_1(s), ..., g_k(s)) : s in [lo, hi]} (whole line when unbounded).
class ParametrizedCurve {
 public:
  explicit ParametrizedCurve(std::vector<RationalPoly> coords, std::optional<Rational> lo = std::nullopt,
                             std::optional<Rational> hi = std::nullopt)
      : coords_(std::move(coords)), lo_(std::move(lo)), hi_(std::move(hi)) {
    if (coords_.empty()) throw ValidationError("curve needs at least one coordinate");
  }

  std::size_t dim() const noexcept { return coords_.size(); }

  /// Exact: v in V iff gcd_i(g_i - v_i) has a root in the parameter range.
  bool contains(const Point& v) const {
    if (v.size() != dim()) throw ValidationError("point has the wrong dimension");
    RationalPoly g;
    for (std::size_t i = 0; i < dim(); ++i) {
      RationalPoly h = coords_[i];
      h -= RationalPoly{v[i]};
      g = gcd(g, h);
    }
    if (g.is_zero()) return true;  // every coordinate constant and matching
    if (g.degree() == 0) return false;
    const Rational bound = cauchy_root_bound(g) + 1;
    const Rational lo = lo_ ? *lo_ : -bound, hi = hi_ ? *hi_ : bound;
    if (g(lo) == 0) return true;
    return count_roots(g, lo, hi) > 0;
  }

  /// Floating point samples: solve the first non-constant coordinate, check
  /// the rest to curve_membership_tolerance (relative for large values).
  bool near(const std::vector<long double>& v) const {
    if (v.size() != dim()) throw ValidationError("point has the wrong dimension");
    std::size_t lead = dim();
    for (std::size_t i = 0; i < dim() && lead == dim(); ++i)
      if (coords_[i].degree() >= 1) lead = i;
    auto close = [](long double a, long double b) {
      return std::fabs(a - b) <= curve_membership_tolerance * std::max(1.0L, std::fabs(b));
    };
    if (lead == dim()) {
      for (std::size_t i = 0; i < dim(); ++i)
        if (!close(to_long_double(coords_[i][0]), v[i])) return false;
      return true;
    }
    RationalPoly h = coords_[lead];
    h -= RationalPoly{to_rational(v[lead])};
    const Rational bound = cauchy_root_bound(h) + 1;
    const Rational lo = lo_ ? *lo_ : -bound, hi = hi_ ? *hi_ : bound;
    auto roots = isolate_roots(h, lo, hi, Rational(1, 1) / Rational(Integer(1) << 60));
    for (auto& iv : roots) {
      const long double s = iv.midpoint();
      bool ok = true;
      for (std::size_t i = 0; i < dim() && ok; ++i) ok = close(coords_[i].evaluate(s), v[i]);
      if (ok) return true;
    }
    return false;
  }

 private:
  std::vector<RationalPoly> coords_;
  std::optional<Rational> lo_, hi_;
};

/// Implicit plane curve {g(x, y) = 0}, exact on rational points.
class ImplicitPlaneCurve {
 public:
  explicit ImplicitPlaneCurve(MultiPoly g) : g_(std::move(g)) {
    if (g_.vars != 2) throw ValidationError("implicit plane curve needs a polynomial in two variables");
  }
  bool contains(const Point& v) const {
    if (v.size() != 2) throw ValidationError("point has the wrong dimension");
    Rational sum = 0;
    for (const auto& [k, c] : g_.terms) sum += c * rational_pow(v[0], k[0]) * rational_pow(v[1], k[1]);
    return sum == 0;
  }

 private:
  MultiPoly g_;
};

/// Vertices plus a membership oracle for V; u ~ w iff u != w and u - w in +-V.
struct CliqueInstance {
  std::vector<Point> sample;
  std::function<bool(const Point&)> in_v;
};

struct CliqueResult {
  std::vector<std::size_t> vertices;  // indices into the sample, increasing
  std::size_t edges = 0;
  std::size_t nodes = 0;              // search tree nodes
};

inline bool adjacent(const CliqueInstance& inst, const Point& u, const Point& w) {
  if (u == w) return false;
  Point d(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) d[i] = u[i] - w[i];
  if (inst.in_v(d)) return true;
  for (auto& x : d) x = -x;
  return inst.in_v(d);
}

/// Bron-Kerbosch with Tomita pivoting on the sample graph. Exact maximum
/// clique (capped at max_size); ties go to the first clique reached.
inline CliqueResult clique_search(const CliqueInstance& inst, std::size_t max_size = 64,
                                  unsigned workers = worker_count()) {
  const std::size_t n = inst.sample.size();
  CliqueResult out;
  if (n == 0 || max_size == 0) return out;
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  parallel_for(
      n,
      [&](std::size_t i) {
        for (std::size_t j = i + 1; j < n; ++j) adj[i][j] = adjacent(inst, inst.sample[i], inst.sample[j]);
      },
      workers);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      adj[j][i] = adj[i][j];
      out.edges += adj[i][j];
    }

  std::vector<std::size_t> best, current;
  std::function<void(std::vector<std::size_t>, std::vector<std::size_t>)> expand =
      [&](std::vector<std::size_t> p, std::vector<std::size_t> x) {
        ++out.nodes;
        if (best.size() >= max_size) return;
        if (p.empty()) {
          if (x.empty() && current.size() > best.size()) best = current;
          return;
        }
        if (current.size() + p.size() <= best.size()) return;
        std::size_t pivot = p.front(), pivot_deg = 0;
        bool first = true;
        for (auto src : {&p, &x})
          for (auto u : *src) {
            std::size_t deg = 0;
            for (auto v : p) deg += adj[u][v];
            if (first || deg > pivot_deg) {
              pivot = u;
              pivot_deg = deg;
              first = false;
            }
          }
        std::vector<std::size_t> candidates;
        for (auto v : p)
          if (!adj[pivot][v]) candidates.push_back(v);
        for (auto v : candidates) {
          std::vector<std::size_t> np, nx;
          for (auto w : p)
            if (adj[v][w]) np.push_back(w);
          for (auto w : x)
            if (adj[v][w]) nx.push_back(w);
          current.push_back(v);
          expand(std::move(np), std::move(nx));
          current.pop_back();
          if (best.size() >= max_size) return;
          p.erase(std::find(p.begin(), p.end(), v));
          x.push_back(v);
        }
      };
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  expand(all, {});
  if (best.size() > max_size) best.resize(max_size);
  std::sort(best.begin(), best.end());

  for (std::size_t i = 0; i < best.size(); ++i)
    for (std::size_t j = i + 1; j < best.size(); ++j)
      if (!adjacent(inst, inst.sample[best[i]], inst.sample[best[j]]))
        throw ConsistencyError("clique_search returned a non-adjacent pair");
  out.vertices = std::move(best);
  return out;
}

// ---------------------------------------------------------------------------
// Periodic coloring

struct PeriodicFunction {
  std::function<double(double)> f;
  double period = 1.0;
};

/// M >= sup|f|, and |f(x)| > epsilon whenever |x| <= delta (x measured in
/// periods). Certified by sampling, so valid for f without features finer
/// than the sample spacing.
struct ColoringParameters {
  double M = 0;
  double epsilon = 0;
  double delta = 0;
  /// Smallest integer n > max(M + 2, 1/epsilon, 1/delta).
  long min_n = 0;
};

inline ColoringParameters certify_coloring_parameters(const PeriodicFunction& fn, std::size_t samples = 1 << 14) {
  if (!(fn.period > 0)) throw ValidationError("period must be positive");
  auto g = [&](double u) { return fn.f(u * fn.period); };
  const double f0 = std::fabs(g(0.0));
  if (!(f0 > 0)) throw ValidationError("periodic coloring needs f(0) != 0");
  std::vector<double> absval(samples + 1);
  double M = 0;
  for (std::size_t k = 0; k <= samples; ++k) {
    absval[k] = std::fabs(g(static_cast<double>(k) / static_cast<double>(samples)));
    M = std::max(M, absval[k]);
  }
  M = M * (1.0 + 1e-3) + 1e-9;

  ColoringParameters best;
  double best_threshold = std::numeric_limits<double>::infinity();
  for (int j = 1; j < 16; ++j) {
    const double eps = f0 * j / 16.0;
    // walk outwards from 0 in both directions until |f| <= eps (with margin)
    std::size_t k = 1;
    while (k <= samples / 2 && std::min(absval[k], absval[samples - k]) > eps * (1.0 + 1e-6)) ++k;
    // the last good sample is k - 1; step back once more for safety
    const double delta = k > samples / 2 ? 0.5 : static_cast<double>(k > 1 ? k - 2 : 0) / static_cast<double>(samples);
    if (!(delta > 0)) continue;
    const double threshold = std::max({M + 2.0, 1.0 / eps, 1.0 / delta});
    if (threshold < best_threshold) {
      best_threshold = threshold;
      best = {M, eps, delta, static_cast<long>(std::floor(threshold)) + 1};
    }
  }
  if (!std::isfinite(best_threshold)) throw ValidationError("could not certify (epsilon, delta) for f");
  return best;
}

/// (floor(n x) mod n, floor(n y) mod n^2), x in periods.
inline std::pair<long long, long long> periodic_color(double x, double y, long n) {
  auto mod = [](long double v, long long q) {
    const long long k = static_cast<long long>(std::floor(v));
    return ((k % q) + q) % q;
  };
  return {mod(static_cast<long double>(n) * x, n), mod(static_cast<long double>(n) * y, static_cast<long long>(n) * n)};
}

struct ColoringCheck {
  std::size_t violations = 0;
  std::size_t edges = 0;
  long n = 0;
  ColoringParameters params;
};

/// Samples edges (x, y) ~ (x + t, y + f(t)) and counts equal colors. Half of
/// the shifts sit within 2/n of a whole period, where the first color
/// coordinate collides most often.
inline ColoringCheck periodic_coloring_verify(const PeriodicFunction& fn, long n, std::size_t edge_samples,
                                              std::uint64_t seed = 1) {
  ColoringCheck out;
  out.params = certify_coloring_parameters(fn);
  if (n < out.params.min_n) {
    throw ValidationError("n = " + std::to_string(n) + " is below the coloring threshold " +
                          std::to_string(out.params.min_n));
  }
  out.n = n;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(-50.0, 50.0), wide(-20.0, 20.0), narrow(-2.0 / n, 2.0 / n);
  std::uniform_int_distribution<int> whole(-5, 5);
  for (std::size_t e = 0; e < edge_samples; ++e) {
    const double x = pos(rng), y = pos(rng);
    const double t = (e % 2 == 0) ? wide(rng) : whole(rng) + narrow(rng);  // t in periods
    const double x2 = x + t, y2 = y + fn.f(t * fn.period);
    if (periodic_color(x, y, n) == periodic_color(x2, y2, n)) ++out.violations;
    ++out.edges;
  }
  return out;
}

}  // namespace oscillabound
