#include <gtest/gtest.h>

#include <random>

#include "oscillabound/polycore.hpp"
#include "oscillabound/roots.hpp"

using namespace oscillabound;

namespace {

RationalPoly X(std::initializer_list<Rational> c) { return RationalPoly(std::vector<Rational>(c)); }

std::vector<Rational> ones(std::size_t n) { return std::vector<Rational>(n, Rational(1)); }

}  // namespace

TEST(RationalPoly, DegreeTracksLastNonzero) {
  RationalPoly p = X({1, 2, 0, 0});
  EXPECT_EQ(p.degree(), 1);
  EXPECT_TRUE(RationalPoly().is_zero());
  EXPECT_EQ((X({0, 1}) - X({0, 1})).degree(), -1);
}

TEST(RationalPoly, ExactArithmetic) {
  const RationalPoly p = X({Rational(1, 3), 0, 1});
  const RationalPoly q = X({-1, Rational(1, 7)});
  EXPECT_EQ(p(Rational(1, 2)), Rational(7, 12));
  EXPECT_EQ((p * q)(3), p(3) * q(3));
  EXPECT_EQ((p + q)(Rational(-5, 2)), p(Rational(-5, 2)) + q(Rational(-5, 2)));
  const auto [quot, rem] = (p * q + X({2})).divmod(q);
  EXPECT_EQ(quot, p);
  EXPECT_EQ(rem, X({2}));
}

TEST(RationalPoly, GcdAndSquareFree) {
  const RationalPoly a = X({-2, 1}) * X({-3, 1});
  const RationalPoly b = X({-2, 1}) * X({5, 1});
  EXPECT_EQ(gcd(a, b).monic(), X({-2, 1}));
  EXPECT_EQ(square_free_part(a * a).monic(), a.monic());
}

TEST(CheckIndependence, Examples) {
  auto r1 = check_independence(CurveFamily({X({0, 1}), X({0, 0, 1})}));
  EXPECT_TRUE(r1.independent);
  EXPECT_EQ(r1.rank, 3u);
  auto r2 = check_independence(CurveFamily({X({1, 1}), X({2, 2})}));
  EXPECT_FALSE(r2.independent);
  EXPECT_EQ(r2.rank, 2u);
  // f3 = f1 + f2 - 1
  auto r3 = check_independence(CurveFamily({X({0, 1}), X({1, 0, 1}), X({0, 1, 1})}));
  EXPECT_FALSE(r3.independent);
  EXPECT_EQ(r3.rank, 3u);
}

TEST(CheckIndependence, InvariantUnderRowOperations) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> coef(-4, 4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<RationalPoly> f;
    for (int i = 0; i < 3; ++i) {
      std::vector<Rational> c(5);
      for (auto& x : c) x = coef(rng);
      c[static_cast<std::size_t>(i) + 1] += 1;  // keep every f_i non-constant
      f.push_back(RationalPoly(c));
    }
    if (f[0].degree() < 1 || f[1].degree() < 1 || f[2].degree() < 1) continue;
    const auto base = check_independence(CurveFamily(f));
    // f_0 += 3 f_1, swap f_1 and f_2, scale f_2 by -2/5
    std::vector<RationalPoly> g = f;
    g[0] += f[1] * Rational(3);
    std::swap(g[1], g[2]);
    g[2] *= Rational(-2, 5);
    if (g[0].degree() < 1) continue;
    const auto moved = check_independence(CurveFamily(g));
    EXPECT_EQ(base.independent, moved.independent);
    EXPECT_EQ(base.rank, moved.rank);
  }
}

TEST(CurveFamily, ConstantMemberRejected) {
  EXPECT_THROW(CurveFamily({X({0, 1}), X({3})}), ValidationError);
  EXPECT_THROW(CurveFamily({X({0, 1})}), ValidationError);
}

TEST(CurveFamily, IndependenceForcesMAtMostN) {
  // three polynomials of degree <= 2 can never be independent together with 1
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coef(-5, 5);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<RationalPoly> f;
    for (int i = 0; i < 3; ++i) f.push_back(X({coef(rng), coef(rng), Rational(coef(rng)) + 11}));
    const CurveFamily fam(f);
    EXPECT_FALSE(check_independence(fam).independent);
  }
}

TEST(PhiFromFrequency, Examples) {
  const CurveFamily f({X({0, 1}), X({0, 0, 1})});
  std::vector<Rational> l1{1, 0};
  const ExpPoly p1 = phi_from_frequency(f, l1);
  EXPECT_EQ(p1.terms().size(), 1u);
  EXPECT_EQ(p1.coefficient(1), 1);
  std::vector<Rational> l0{0, 0};
  EXPECT_TRUE(phi_from_frequency(f, l0).is_zero());
  const CurveFamily g({X({0, 1}), X({1, 0, 1})});
  std::vector<Rational> l2{2, 3};
  const ExpPoly p2 = phi_from_frequency(g, l2);
  EXPECT_EQ(p2.coefficient(0), 3);
  EXPECT_EQ(p2.coefficient(1), 2);
  EXPECT_EQ(p2.coefficient(2), 3);
  std::vector<Rational> bad{1};
  EXPECT_THROW(phi_from_frequency(f, bad), ValidationError);
}

TEST(ExpPolyDerivative, Examples) {
  EXPECT_EQ(exp_poly_derivative(ExpPoly({{1, Rational(2)}}), 3).coefficient(1), 2);
  EXPECT_EQ(exp_poly_derivative(ExpPoly({{2, Rational(1)}}), 2).coefficient(2), 4);
  const ExpPoly d = exp_poly_derivative(ExpPoly({{0, Rational(5)}, {1, Rational(1)}}), 1);
  EXPECT_EQ(d.terms().size(), 1u);
  EXPECT_EQ(d.coefficient(1), 1);
}

TEST(ExpPoly, EvaluationMatchesPolynomial) {
  const ExpPoly p({{0, Rational(1, 2)}, {1, Rational(-3)}, {3, Rational(2, 7)}});
  for (long double t : {-1.0L, 0.0L, 0.3L, 2.0L}) {
    EXPECT_NEAR(static_cast<double>(p(t)), static_cast<double>(p.as_polynomial().evaluate(std::exp(t))), 1e-12);
  }
}

TEST(Vandermonde, Examples) {
  EXPECT_EQ(vandermonde_interpolation(1, ones(1)), std::vector<Rational>{1});
  EXPECT_EQ(vandermonde_interpolation(2, ones(2)), (std::vector<Rational>{Rational(3, 2), Rational(-1, 2)}));
  std::vector<Rational> delta{0, 1};
  EXPECT_EQ(vandermonde_interpolation(2, delta), (std::vector<Rational>{Rational(-1, 2), Rational(1, 2)}));
}

TEST(Vandermonde, ExactForAllOnesUpTo12) {
  for (std::size_t n = 1; n <= 12; ++n) {
    const auto c = vandermonde_interpolation(n, ones(n));
    for (std::size_t j = 1; j <= n; ++j) {
      Rational acc = 0, pw = 1;
      for (std::size_t k = 1; k <= n; ++k) {
        pw *= j;
        acc += c[k - 1] * pw;
      }
      EXPECT_EQ(acc, 1) << "n=" << n << " j=" << j;
    }
  }
}

TEST(Interpolation, ReconstructionIdentities) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0), ut(0.0, 1.0);
  const CurveFamily fam({X({1, 2, 0, -1}), X({0, 1, 3}), X({-2, 0, 0, 1, 1})});
  const std::size_t n = fam.n();
  const auto alpha = vandermonde_interpolation(n, ones(n));
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> l{u(rng), u(rng), u(rng)};
    const long double t = ut(rng);
    const ExpPoly phi = phi_from_frequency(fam, std::span<const double>(l));
    long double acc = 0;
    for (std::size_t k = 1; k <= n; ++k) acc += to_long_double(alpha[k - 1]) * phi.derivative(k)(t);
    EXPECT_LE(std::fabs(phi(t) - to_long_double(phi.coefficient(0)) - acc), 1e-8L);
    for (std::size_t ell = 1; ell <= n; ++ell) {
      std::vector<Rational> delta(n, Rational(0));
      delta[ell - 1] = 1;
      const auto beta = vandermonde_interpolation(n, delta);
      long double b = 0;
      for (std::size_t k = 1; k <= n; ++k) b += to_long_double(beta[k - 1]) * phi.derivative(k)(t);
      const long double lhs = to_long_double(phi.coefficient(static_cast<unsigned>(ell))) *
                              std::exp(static_cast<long double>(ell) * t);
      EXPECT_LE(std::fabs(lhs - b), 1e-8L);
    }
  }
}

TEST(RootIsolation, Examples) {
  auto r1 = isolate_positive_roots(X({-2, 1}), 10.0L);
  ASSERT_EQ(r1.size(), 1u);
  EXPECT_LE(r1[0].lo, 2);
  EXPECT_GE(r1[0].hi, 2);
  EXPECT_TRUE(isolate_positive_roots(X({1, 0, 1}), 10.0L).empty());
  auto r3 = isolate_positive_roots(X({6, -5, 1}), 10.0L);
  ASSERT_EQ(r3.size(), 2u);
  EXPECT_LE(r3[0].lo, 2);
  EXPECT_GE(r3[0].hi, 2);
  EXPECT_LE(r3[1].lo, 3);
  EXPECT_GE(r3[1].hi, 3);
  for (const auto& iv : r3) EXPECT_LE(iv.width(), Rational(1, 1000000000000UL));
}

TEST(RootIsolation, CountMatchesSturm) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> coef(-9, 9);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Rational> c(6);
    for (auto& x : c) x = coef(rng);
    const RationalPoly p(c);
    if (p.is_zero()) continue;
    const auto roots = isolate_positive_roots(p, 10.0L);
    const SturmSequence s(p);
    EXPECT_EQ(static_cast<int>(roots.size()), s.count(Rational(0), Rational(10)));
    for (const auto& iv : roots) {
      EXPECT_LE(iv.width(), Rational(1, 1000000000000UL));
      // exactly one root inside
      if (iv.lo != iv.hi) EXPECT_EQ(s.count(iv.lo, iv.hi), 1);
    }
  }
}

TEST(ComputeA0, Examples) {
  EXPECT_EQ(compute_a0_real(CurveFamily({X({0, 1}), X({0, 0, 1})})).a0, 0.0L);
  const auto two = compute_a0_real(CurveFamily({X({-2, 1}), X({0, -2, 1})}));
  EXPECT_NEAR(static_cast<double>(two.a0), std::log(2.0), 1e-12);
  const auto half = compute_a0_real(CurveFamily({X({Rational(-1, 2), 1}), X({0, Rational(-1, 2), 1})}));
  EXPECT_EQ(half.a0, 0.0L);
}

TEST(ComputeA0, MinusInfinityFlag) {
  EXPECT_TRUE(compute_a0_real(CurveFamily({X({0, 1}), X({0, 0, 1})})).minus_infinity_admissible);
  EXPECT_FALSE(compute_a0_real(CurveFamily({X({1, 1}), X({0, 0, 1})})).minus_infinity_admissible);
}

TEST(HighFreqConstants, Examples) {
  const auto c = high_freq_constants(CurveFamily({X({0, 1}), X({0, 0, 1})}));
  EXPECT_NEAR(static_cast<double>(c.M), 1.0, 1e-12);
  EXPECT_GE(c.M, 1.0L);
  EXPECT_EQ(c.L, 0.0L);
  EXPECT_FALSE(c.epsilon.has_value());
  EXPECT_EQ(c.H, Rational(3, 2));

  const auto d = high_freq_constants(CurveFamily({X({0, 1}), X({1, 0, 1})}));
  EXPECT_NEAR(static_cast<double>(d.L), 1.0, 1e-15);
  ASSERT_TRUE(d.epsilon.has_value());
  // epsilon = 1 / (8 sqrt(2) L M), rounded down
  EXPECT_LE(*d.epsilon, 1.0L / (8.0L * std::sqrt(2.0L) * d.L * d.M) * (1 + 1e-15L));
  EXPECT_GT(d.M, 0.0L);
}

TEST(HighFreqConstants, OperatorNormOfKnownMatrix) {
  // columns x^1, x^2: [[2, 0], [0, 1/2]] -> inverse norm max(1/2, 2) = 2
  const auto c = high_freq_constants(CurveFamily({X({0, 2}), X({0, 0, Rational(1, 2)})}));
  EXPECT_NEAR(static_cast<double>(c.M), 2.0, 1e-12);
  EXPECT_GE(c.M, 2.0L);
}

TEST(HighFreqConstants, HPrimeFromDeltaTargets) {
  const auto c = high_freq_constants(CurveFamily({X({0, 1}), X({0, 0, 1})}));
  // n = 2: delta solutions (2, -1/2) and (-1/2, 1/2)
  EXPECT_EQ(c.H_prime, Rational(2));
}
