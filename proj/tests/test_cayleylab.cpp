#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "oscillabound/cayleylab.hpp"

using namespace oscillabound;

namespace {

RationalPoly X(std::initializer_list<Rational> c) { return RationalPoly(std::vector<Rational>(c)); }

CurveFamily parabola() { return CurveFamily({X({0, 1}), X({0, 0, 1})}); }

/// Area of {|x| stripes} inside the disc of radius r, from the antiderivative
/// of 2 sqrt(r^2 - x^2).
long double stripe_disc_area(long double lo, long double hi, long double period, long double r) {
  auto G = [r](long double x) {
    x = std::clamp(x, -r, r);
    return x * std::sqrt(r * r - x * x) + r * r * std::asin(x / r);
  };
  long double area = 0.0L;
  const long first = static_cast<long>(std::floor((-r - hi) / period));
  const long last = static_cast<long>(std::ceil((r - lo) / period));
  for (long k = first; k <= last; ++k) area += G(hi + k * period) - G(lo + k * period);
  return area;
}

CliqueInstance parabola_instance(std::vector<Point> sample) {
  auto curve = std::make_shared<ParametrizedCurve>(std::vector<RationalPoly>{X({0, 1}), X({0, 0, 1})});
  return {std::move(sample), [curve](const Point& v) { return curve->contains(v); }};
}

Point on_parabola(const Rational& s) { return {s, s * s}; }

MultiPoly mp(std::size_t vars, std::vector<std::pair<std::vector<unsigned>, Rational>> terms) {
  MultiPoly p;
  p.vars = vars;
  for (auto& [e, c] : terms) p.add(e, c);
  return p;
}

}  // namespace

TEST(BoxSet, ExactMembershipWithPeriod) {
  const BoxSet s(2, {Box{{0, 0}, {1, 1}}}, Point{3, 0});
  EXPECT_TRUE(s.contains({Rational(1), Rational(1)}));
  EXPECT_TRUE(s.contains({Rational(-2), Rational(1, 2)}));
  EXPECT_TRUE(s.contains({Rational(301, 100), Rational(0)}));
  EXPECT_FALSE(s.contains({Rational(3, 2), Rational(1, 2)}));
  EXPECT_FALSE(s.contains({Rational(0), Rational(2)}));  // second axis aperiodic
  EXPECT_FALSE(s.contains({Rational(1) + Rational(1, 1000000), Rational(0)}));
}

TEST(BoxSet, Parse) {
  std::istringstream in("# stripes\ndim 2\nperiod 9 1\nbox 0 0 3 1  # one cell\n");
  const BoxSet s = BoxSet::parse(in);
  EXPECT_EQ(s.dim(), 2u);
  EXPECT_EQ(s.period(0), 9);
  EXPECT_TRUE(s.contains({Rational(19, 2), Rational(-7)}));
  std::istringstream bad("dim 2\nbox 0 0 1\n");
  EXPECT_THROW(BoxSet::parse(bad), ValidationError);
  std::istringstream unknown("dim 1\nsphere 0 1\n");
  EXPECT_THROW(BoxSet::parse(unknown), ValidationError);
}

TEST(UpperDensity, WholePlaneAndEmpty) {
  const BoxSet all(2, {Box{{0, 0}, {1, 1}}}, Point{1, 1});
  for (const auto& e : upper_density_estimate(all, {1, 5, 25})) {
    // the only uncertainty is the disc boundary
    EXPECT_LE(std::fabs(e.value - 1.0L), e.error + 1e-12L);
    EXPECT_LT(e.error, 1e-3L);
  }
  const BoxSet none(2, {});
  for (const auto& e : upper_density_estimate(none, {1, 5})) EXPECT_EQ(e.value, 0.0L);
}

TEST(UpperDensity, StripesAgainstExactArea) {
  const BoxSet stripes(2, {Box{{0, 0}, {1, 1}}}, Point{3, 1});
  const std::vector<long double> radii{2, 10, 40, 160};
  const auto est = upper_density_estimate(stripes, radii);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const long double r = radii[i];
    const long double exact = stripe_disc_area(0, 1, 3, r) / (std::numbers::pi_v<long double> * r * r);
    EXPECT_LE(std::fabs(est[i].value - exact), est[i].error + 1e-12L)
        << "r=" << static_cast<double>(r) << " value=" << static_cast<double>(est[i].value)
        << " exact=" << static_cast<double>(exact) << " error=" << static_cast<double>(est[i].error);
  }
  EXPECT_NEAR(static_cast<double>(est.back().value), 1.0 / 3.0, 0.01) << static_cast<double>(est.back().error);
}

TEST(UpperDensity, RejectsBadRadii) {
  const BoxSet s(1, {Box{{0}, {1}}});
  EXPECT_THROW(upper_density_estimate(s, {2, 1}), ValidationError);
  EXPECT_THROW(upper_density_estimate(s, {0}), ValidationError);
}

TEST(ConfigSearch, BigBoxFindsOrigin) {
  const BoxSet big(2, {Box{{-100, -100}, {100, 100}}});
  const auto r = config_search(parabola(), Window{1, 2}, big, 0.01L);
  ASSERT_TRUE(r.found.has_value());
  EXPECT_EQ(r.found->x2, (Point{0, 0}));
  EXPECT_EQ(r.found->residual, 0.0L);
}

TEST(ConfigSearch, SmallBoxNotFound) {
  const BoxSet small(2, {Box{{0, 0}, {Rational(1, 2), Rational(1, 2)}}});
  const auto r = config_search(parabola(), Window{1, 2}, small, 0.01L);
  EXPECT_FALSE(r.found.has_value());
  EXPECT_GT(r.s_evaluated, 0u);
}

TEST(ConfigSearch, PeriodicStripesFound) {
  const BoxSet stripes(2, {Box{{0, 0}, {3, 1}}}, Point{9, 1});
  const auto r = config_search(parabola(), Window{1, 2}, stripes, 0.01L);
  ASSERT_TRUE(r.found.has_value());
  const auto& c = *r.found;
  EXPECT_TRUE(stripes.contains(c.x1));
  EXPECT_TRUE(stripes.contains(c.x2));
  EXPECT_EQ(c.x1[0] - c.x2[0], c.s);
  EXPECT_EQ(c.x1[1] - c.x2[1], c.s * c.s);
  EXPECT_LE(c.residual, 1e-9L);
  EXPECT_GE(to_long_double(c.s), std::exp(1.0L) - 1e-12L);
  EXPECT_LE(to_long_double(c.s), std::exp(2.0L) + 1e-12L);
}

TEST(ConfigSearch, Validation) {
  const BoxSet s(2, {Box{{0, 0}, {1, 1}}});
  EXPECT_THROW(config_search(parabola(), Window{1, 2}, s, 0.0L), ValidationError);
  const BoxSet s3(3, {Box{{0, 0, 0}, {1, 1, 1}}});
  EXPECT_THROW(config_search(parabola(), Window{1, 2}, s3, 0.1L), ValidationError);
}

TEST(MultivariateReduce, Examples) {
  const auto a = multivariate_reduce({mp(2, {{{1, 0}, 1}}), mp(2, {{{0, 1}, 1}})});
  EXPECT_EQ(a[0], X({0, 1}));
  EXPECT_EQ(a[1], X({0, 0, 1}));

  const auto b = multivariate_reduce({mp(2, {{{1, 1}, 1}}), mp(2, {{{1, 0}, 1}, {{0, 1}, 1}})});
  EXPECT_EQ(b[0], X({0, 0, 0, 1}));
  EXPECT_EQ(b[1], X({0, 1, 1}));

  const auto c = multivariate_reduce({mp(1, {{{1}, 1}}), mp(1, {{{3}, 2}})});
  EXPECT_EQ(c[0], X({0, 1}));
  EXPECT_EQ(c[1], X({0, 0, 0, 2}));
}

TEST(MultivariateReduce, RejectsDependentInput) {
  EXPECT_THROW(multivariate_reduce({mp(2, {{{1, 0}, 1}}), mp(2, {{{1, 0}, 2}, {{0, 0}, 5}})}), ValidationError);
}

TEST(MultivariateReduce, OutputAlwaysIndependent) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> coef(-3, 3), vars(1, 3), count(2, 4), deg(0, 3);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = static_cast<std::size_t>(vars(rng));
    std::vector<MultiPoly> polys;
    const int m = count(rng);
    for (int i = 0; i < m; ++i) {
      MultiPoly p;
      p.vars = d;
      for (int t = 0; t < 3; ++t) {
        std::vector<unsigned> e(d);
        for (auto& x : e) x = static_cast<unsigned>(deg(rng));
        p.add(e, coef(rng));
      }
      polys.push_back(p);
    }
    try {
      const auto fam = multivariate_reduce(polys);
      EXPECT_TRUE(check_independence(fam).independent);
      ++checked;
    } catch (const ValidationError&) {
      // dependent or degenerate draw
    }
  }
  EXPECT_GT(checked, 50);
}

TEST(BezoutCliqueData, Examples) {
  const auto a = bezout_clique_data({2});
  EXPECT_EQ(a.product_bound, 4);
  EXPECT_EQ(a.d, 7);
  EXPECT_EQ(a.ramsey_symbol, "R(7,7)");
  const auto b = bezout_clique_data({1});
  EXPECT_EQ(b.product_bound, 1);
  EXPECT_EQ(b.d, 4);
  const auto c = bezout_clique_data({2, 3});
  EXPECT_EQ(c.product_bound, 36);
  EXPECT_EQ(c.d, 39);
  EXPECT_THROW(bezout_clique_data({0}), ValidationError);
}

TEST(CurveMembership, ExactAndTolerance) {
  const ParametrizedCurve par({X({0, 1}), X({0, 0, 1})});
  EXPECT_TRUE(par.contains({Rational(3, 2), Rational(9, 4)}));
  EXPECT_FALSE(par.contains({Rational(3, 2), Rational(2)}));
  EXPECT_TRUE(par.near({1.5L, 2.25L}));
  EXPECT_TRUE(par.near({1.5L, 2.25L + 1e-12L}));
  EXPECT_FALSE(par.near({1.5L, 2.26L}));
  const ParametrizedCurve bounded({X({0, 1}), X({0, 0, 1})}, Rational(0), Rational(1));
  EXPECT_FALSE(bounded.contains({Rational(2), Rational(4)}));
  EXPECT_TRUE(bounded.contains({Rational(1), Rational(1)}));
  const ImplicitPlaneCurve imp(mp(2, {{{0, 1}, 1}, {{2, 0}, -1}}));
  EXPECT_TRUE(imp.contains({Rational(2), Rational(4)}));
  EXPECT_FALSE(imp.contains({Rational(2), Rational(5)}));
}

TEST(CliqueSearch, Examples) {
  const auto r = clique_search(parabola_instance({{0, 0}, {1, 1}, {2, 4}}));
  ASSERT_EQ(r.vertices.size(), 2u);
  EXPECT_EQ(r.vertices[0], 0u);
  EXPECT_EQ(r.edges, 2u);
  EXPECT_TRUE(clique_search(parabola_instance({})).vertices.empty());
}

TEST(CliqueSearch, FindsLargeCliqueOnLineCurve) {
  // V = {(s, 0)}: any points on the x-axis are pairwise adjacent
  auto curve = std::make_shared<ParametrizedCurve>(std::vector<RationalPoly>{X({0, 1}), X({0})});
  CliqueInstance inst{{}, [curve](const Point& v) { return curve->contains(v); }};
  for (int i = 0; i < 6; ++i) inst.sample.push_back({Rational(i), Rational(0)});
  inst.sample.push_back({Rational(0), Rational(1)});
  const auto r = clique_search(inst);
  EXPECT_EQ(r.vertices.size(), 6u);
  EXPECT_EQ(clique_search(inst, 4).vertices.size(), 4u);
}

TEST(CliqueSearch, ParabolaIsTriangleFree) {
  std::mt19937_64 rng(32);
  std::uniform_int_distribution<int> s(-80, 80);
  for (int trial = 0; trial < 500; ++trial) {
    std::set<int> picks;
    while (picks.size() < 50) picks.insert(s(rng));
    std::vector<Point> sample;
    for (int k : picks) sample.push_back(on_parabola(Rational(k, 8)));
    const auto r = clique_search(parabola_instance(std::move(sample)));
    ASSERT_LE(r.vertices.size(), 2u) << "trial " << trial;
  }
}

TEST(CliqueSearch, MonotoneInSample) {
  std::mt19937_64 rng(33);
  std::uniform_int_distribution<int> c(-4, 4);
  auto curve = std::make_shared<ParametrizedCurve>(std::vector<RationalPoly>{X({0, 1}), X({0, 0, 0, 1})});
  auto oracle = [curve](const Point& v) { return curve->contains(v); };
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Point> sample;
    std::size_t prev = 0;
    for (int k = 0; k < 24; ++k) {
      sample.push_back({Rational(c(rng)), Rational(c(rng) * c(rng))});
      const auto r = clique_search({sample, oracle});
      EXPECT_GE(r.vertices.size(), prev);
      prev = r.vertices.size();
    }
  }
}

TEST(PeriodicColor, Formula) {
  EXPECT_EQ(periodic_color(0.0, 0.0, 7), (std::pair<long long, long long>{0, 0}));
  EXPECT_EQ(periodic_color(-0.1, 0.0, 5).first, 4);
  EXPECT_EQ(periodic_color(0.5, -0.01, 4), (std::pair<long long, long long>{2, 15}));
}

TEST(PeriodicColoring, CosineExample) {
  const PeriodicFunction f{[](double t) { return 2.0 + std::cos(2 * std::numbers::pi * t); }, 1.0};
  const auto params = certify_coloring_parameters(f);
  EXPECT_GE(params.M, 3.0);
  EXPECT_GT(params.min_n, static_cast<long>(params.M + 2));
  const auto chk = periodic_coloring_verify(f, params.min_n, 100000);
  EXPECT_EQ(chk.violations, 0u);
  EXPECT_EQ(chk.edges, 100000u);
  EXPECT_THROW(periodic_coloring_verify(f, params.min_n - 1, 10), ValidationError);
  EXPECT_THROW(certify_coloring_parameters({[](double t) { return std::sin(t); }, 1.0}), ValidationError);
}

TEST(PeriodicColoring, RandomFunctionsHaveNoViolations) {
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> c0(0.5, 3.0), amp(-1.0, 1.0), phase(0.0, 6.283185307179586);
  std::uniform_int_distribution<int> freq(1, 4), sign(0, 1);
  for (int i = 0; i < 10; ++i) {
    const double base = (sign(rng) ? 1 : -1) * c0(rng);
    std::vector<std::tuple<double, int, double>> terms;
    for (int k = 0; k < 3; ++k) terms.emplace_back(amp(rng), freq(rng), phase(rng));
    const double period = 0.5 + c0(rng);
    PeriodicFunction f{[=](double t) {
                         double v = base;
                         for (auto [a, q, ph] : terms) v += a * std::cos(2 * std::numbers::pi * q * t / period + ph);
                         return v;
                       },
                       period};
    if (std::fabs(f.f(0.0)) < 1e-3) continue;
    const auto params = certify_coloring_parameters(f);
    const auto chk = periodic_coloring_verify(f, params.min_n, 20000, static_cast<std::uint64_t>(i) + 1);
    EXPECT_EQ(chk.violations, 0u) << "function " << i;
  }
}
