#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "oscillabound/padic.hpp"

using namespace oscillabound;

namespace {

RationalPoly X(std::initializer_list<Rational> c) { return RationalPoly(std::vector<Rational>(c)); }

long double pi() { return std::numbers::pi_v<long double>; }

Rational random_padic_coefficient(std::mt19937_64& rng, unsigned long p, long vmin, long vmax) {
  std::uniform_int_distribution<long> v(vmin, vmax);
  std::uniform_int_distribution<long> unit(1, 40);
  long u;
  do u = unit(rng);
  while (u % static_cast<long>(p) == 0);
  std::uniform_int_distribution<int> sign(0, 1);
  const Rational value = Rational(sign(rng) ? u : -u) * rational_power(p, v(rng));
  // units with a non-trivial denominator prime to p
  std::uniform_int_distribution<long> den(1, 6);
  long d;
  do d = den(rng);
  while (d % static_cast<long>(p) == 0);
  return value / d;
}

}  // namespace

TEST(Primes, Validation) {
  EXPECT_TRUE(is_prime(2));
  EXPECT_TRUE(is_prime(97));
  EXPECT_FALSE(is_prime(1));
  EXPECT_FALSE(is_prime(91));
  EXPECT_THROW(require_prime(4), ValidationError);
}

TEST(PadicScalar, ValuationNormAndZero) {
  const auto x = PadicScalar::from_rational(Rational(18, 5), 3);
  EXPECT_EQ(x.valuation(), 2);
  EXPECT_EQ(x.norm(), Rational(1, 9));
  const auto z = PadicScalar::from_rational(0, 3);
  EXPECT_TRUE(z.is_zero());
  EXPECT_EQ(z.norm(), 0);
  const auto y = PadicScalar::from_rational(Rational(7, 12), 2);
  EXPECT_EQ(y.valuation(), -2);
  EXPECT_EQ(y.unit() % 2, 1);
}

TEST(PadicScalar, UltrametricProperty) {
  std::mt19937_64 rng(21);
  for (unsigned long p : {2UL, 3UL, 5UL, 7UL}) {
    for (int i = 0; i < 200; ++i) {
      const auto x = PadicScalar::from_rational(random_padic_coefficient(rng, p, -4, 4), p);
      const auto y = PadicScalar::from_rational(random_padic_coefficient(rng, p, -4, 4), p);
      const auto s = x + y;
      const Rational nx = x.norm(), ny = y.norm();
      EXPECT_LE(s.norm(), std::max(nx, ny));
      if (nx != ny) {
        EXPECT_EQ(s.norm(), std::max(nx, ny));
      }
      EXPECT_EQ((x * y).norm(), nx * ny);
      const auto t = PadicScalar::from_rational(x.representative() + y.representative(), p);
      if (s.is_zero()) EXPECT_TRUE(t.is_zero() || t.valuation() >= std::min(x.valuation(), y.valuation()) + 60);
      else EXPECT_EQ(s, t);
    }
  }
}

TEST(TateCharacter, Examples) {
  const auto one = tate_character(Rational(7, 5), 3);
  EXPECT_NEAR(static_cast<double>(one.real()), 1.0, 1e-15);
  const auto third = tate_character(Rational(1, 3), 3);
  EXPECT_NEAR(static_cast<double>(third.real()), static_cast<double>(std::cos(2 * pi() / 3)), 1e-15);
  EXPECT_NEAR(static_cast<double>(third.imag()), static_cast<double>(std::sin(2 * pi() / 3)), 1e-15);
  const auto half = tate_character(PadicScalar::from_rational(Rational(1, 2), 2));
  EXPECT_NEAR(static_cast<double>(half.real()), -1.0, 1e-15);
  EXPECT_NEAR(static_cast<double>(half.imag()), 0.0, 1e-15);
}

TEST(TateCharacter, MatchesOracleAndIsUnimodular) {
  std::mt19937_64 rng(22);
  for (unsigned long p : {2UL, 3UL, 5UL, 11UL}) {
    for (int i = 0; i < 200; ++i) {
      const Rational x = random_padic_coefficient(rng, p, -5, 3);
      const auto v = tate_character(x, p);
      const auto o = oracle::tate(x, p);
      EXPECT_NEAR(static_cast<double>(std::abs(v)), 1.0, 1e-15);
      EXPECT_NEAR(static_cast<double>(std::abs(v - o)), 0.0, 1e-12);
    }
  }
}

TEST(TateCharacter, PrecisionCheck) {
  // 1/9 known only to one digit past the point cannot fix r_x mod 9
  const auto coarse = PadicScalar::from_parts(3, -2, Integer(1), 1);
  EXPECT_THROW(tate_character(coarse), PrecisionError);
}

TEST(EssPart, Examples) {
  EXPECT_EQ(ess_part(X({0, 3, 1}), 3), 0);
  EXPECT_EQ(ess_part(X({0, Rational(1, 3), 1}), 3), 1);
  EXPECT_EQ(ess_part(X({0, 0, 0, 1}), 5), 0);
  EXPECT_EQ(ess_part(X({Rational(1, 8), 0, 2}), 2), 4);
}

TEST(EchelonReduce, Examples) {
  const auto e1 = echelon_reduce(CurveFamily({X({0, 0, 1}), X({0, 1})}));
  EXPECT_EQ(e1.reduced[0].degree(), 2);
  EXPECT_EQ(e1.reduced[1].degree(), 1);
  EXPECT_EQ(e1.B, RationalMatrix::identity(2));

  const CurveFamily f2({X({0, 1, 1}), X({0, 0, 1})});
  const auto e2 = echelon_reduce(f2);
  EXPECT_EQ(e2.reduced[0].degree(), 2);
  EXPECT_EQ(e2.reduced[1].degree(), 1);

  const CurveFamily f3({X({1, 1}), X({0, 0, 1})});
  const auto e3 = echelon_reduce(f3);
  EXPECT_EQ(e3.reduced[0].degree(), 2);
  EXPECT_EQ(e3.reduced[1].degree(), 1);
  EXPECT_EQ(e3.reduced[1], X({1, 1}));

  EXPECT_THROW(echelon_reduce(CurveFamily({X({1, 1}), X({2, 2})})), ValidationError);
}

TEST(EchelonReduce, TransformIsExact) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> coef(-5, 5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<RationalPoly> f;
    for (int i = 0; i < 3; ++i) {
      std::vector<Rational> c(5);
      for (auto& x : c) x = coef(rng);
      c[4] += 1;
      f.push_back(RationalPoly(c));
    }
    const CurveFamily fam(f);
    if (!check_independence(fam).independent) continue;
    const auto e = echelon_reduce(fam);
    for (std::size_t i = 0; i < 3; ++i) {
      RationalPoly combo;
      for (std::size_t j = 0; j < 3; ++j) combo += fam[j] * e.B(i, j);
      EXPECT_EQ(combo, e.reduced[i]);
      if (i > 0) {
        EXPECT_GT(e.reduced[i - 1].degree(), e.reduced[i].degree());
      }
    }
    EXPECT_NE(e.B.determinant(), 0);
  }
}

TEST(SphereCharacterSum, Examples) {
  const auto zero = sphere_character_sum(X({0, 1}), Rational(0), 2, 3);
  EXPECT_NEAR(static_cast<double>(zero.value.real()), 9.0 - 3.0, 1e-12);
  const auto a = sphere_character_sum(X({0, 1}), Rational(1, 3), 0, 3);
  EXPECT_NEAR(static_cast<double>(a.value.real()), -1.0 / 3, 1e-12);
  EXPECT_NEAR(static_cast<double>(a.value.imag()), 0.0, 1e-12);
  const auto b = sphere_character_sum(X({0, 1}), Rational(1, 9), 1, 3);
  EXPECT_NEAR(static_cast<double>(std::abs(b.value)), 0.0, 1e-12);
}

TEST(SphereCharacterSum, ExactFormMatchesFloat) {
  const auto a = sphere_character_sum(X({0, 1}), Rational(1, 3), 0, 3, true);
  ASSERT_TRUE(a.exact.has_value());
  EXPECT_EQ(a.exact->as_rational(), std::optional<Rational>(Rational(-1, 3)));
}

TEST(SphereCharacterSum, BruteForceEquivalence) {
  std::mt19937_64 rng(24);
  std::uniform_int_distribution<int> deg(1, 3), radius(-1, 3);
  for (unsigned long p : {2UL, 3UL, 5UL}) {
    for (int i = 0; i < 15; ++i) {
      const int d = deg(rng);
      std::vector<Rational> c(static_cast<std::size_t>(d) + 1);
      for (auto& x : c) x = random_padic_coefficient(rng, p, -2, 2);
      const RationalPoly F(c);
      const long r = radius(rng);
      const long need = oracle::needed_digits(F, -r, p);
      const unsigned K = static_cast<unsigned>(std::max<long>(r + d + 3, need + 1));
      if (std::pow(static_cast<double>(p), K) > 3e7) continue;
      const auto mod = sphere_character_sum(F, r, p).value;
      const auto ref = oracle::sphere_bruteforce(F, r, p, K);
      EXPECT_NEAR(static_cast<double>(std::abs(mod - ref)), 0.0, 1e-9) << "p=" << p << " r=" << r;
      // one more residue level leaves the oracle unchanged
      if (std::pow(static_cast<double>(p), K + 1) <= 3e7) {
        EXPECT_NEAR(static_cast<double>(std::abs(oracle::sphere_bruteforce(F, r, p, K + 1) - ref)), 0.0, 1e-12);
      }
    }
  }
}

TEST(MuHatPadic, ZeroFrequencyIsExactlyOne) {
  const CurveFamily fam({X({0, 1}), X({0, 0, 1})});
  std::vector<Rational> zero{0, 0};
  const auto r = mu_hat_padic(fam, PadicWindow{1, 3, 5}, zero);
  ASSERT_TRUE(r.exact.has_value());
  EXPECT_EQ(*r.exact, 1);
}

TEST(MuHatPadic, WorkedExample) {
  const CurveFamily fam({X({0, 1}), X({0, 0, 1})});
  std::vector<Rational> l{3, 0};
  const auto r = mu_hat_padic(fam, PadicWindow{1, 2, 3}, l);
  ASSERT_TRUE(r.exact.has_value());
  EXPECT_EQ(*r.exact, Rational(1, 4));
  EXPECT_NEAR(static_cast<double>(oracle::mu_hat_padic_bruteforce(X({0, 3}), 1, 2, 3)), 0.25, 1e-12);
}

TEST(MuHatPadic, SymmetricAndMatchesOracle) {
  std::mt19937_64 rng(25);
  const CurveFamily fam({X({0, 1}), X({0, 0, 1})});
  for (unsigned long p : {2UL, 3UL, 5UL}) {
    for (int i = 0; i < 10; ++i) {
      std::vector<Rational> l{random_padic_coefficient(rng, p, -3, 1), random_padic_coefficient(rng, p, -3, 1)};
      std::vector<Rational> m{-l[0], -l[1]};
      const PadicWindow w{1, 2, p};
      const auto a = mu_hat_padic(fam, w, l), b = mu_hat_padic(fam, w, m);
      EXPECT_NEAR(static_cast<double>(a.value), static_cast<double>(b.value), 1e-15);
      if (a.exact && b.exact) {
        EXPECT_EQ(*a.exact, *b.exact);
      }
      EXPECT_GE(a.value, -1.0L);
      EXPECT_LE(a.value, 1.0L);
      const RationalPoly F = fam[0] * l[0] + fam[1] * l[1];
      EXPECT_NEAR(static_cast<double>(a.value), static_cast<double>(oracle::mu_hat_padic_bruteforce(F, 1, 2, p)), 1e-9);
    }
  }
}

TEST(MuHatPadic, ScalarPrecisionChecked) {
  const CurveFamily fam({X({0, 1}), X({0, 0, 1})});
  std::vector<PadicScalar> good{PadicScalar::from_rational(3, 3), PadicScalar::from_rational(0, 3)};
  EXPECT_NEAR(static_cast<double>(mu_hat_padic(fam, PadicWindow{1, 2, 3}, good).value), 0.25, 1e-15);
  // 3 + O(9) on s is harmless on |s| <= 9, but on s^2 the unknown digit matters
  std::vector<PadicScalar> enough{PadicScalar::from_parts(3, 1, Integer(1), 1), PadicScalar::from_rational(0, 3)};
  EXPECT_NEAR(static_cast<double>(mu_hat_padic(fam, PadicWindow{1, 2, 3}, enough).value), 0.25, 1e-15);
  std::vector<PadicScalar> coarse{PadicScalar::from_rational(0, 3), PadicScalar::from_parts(3, 1, Integer(1), 1)};
  EXPECT_THROW(mu_hat_padic(fam, PadicWindow{1, 2, 3}, coarse), PrecisionError);
}

TEST(PadicWindow, Validation) {
  const CurveFamily fam({X({0, Rational(1, 9), 1}), X({0, 1})});  // Ess = 2 at p = 3
  std::vector<Rational> l{1, 0};
  EXPECT_THROW(mu_hat_padic(fam, PadicWindow{2, 4, 3}, l), ValidationError);
  EXPECT_NO_THROW(mu_hat_padic(fam, PadicWindow{3, 4, 3}, l));
  EXPECT_THROW(mu_hat_padic(fam, PadicWindow{3, 3, 3}, l), ValidationError);
  EXPECT_THROW(mu_hat_padic(fam, PadicWindow{3, 4, 6}, l), ValidationError);
  EXPECT_EQ(PadicWindow({1, 4, 3}).normalization(), Rational(16, 3));
}

TEST(PadicVdc, Examples) {
  const auto a = padic_vdc_check(X({0, 1}), Rational(1), 0, 3);
  EXPECT_NEAR(static_cast<double>(a.lhs), 1.0, 1e-12);
  EXPECT_NEAR(static_cast<double>(a.rhs), 6.0, 1e-12);
  EXPECT_TRUE(a.ok);
  const auto b = padic_vdc_check(X({0, 1}), Rational(1, 3), 0, 3);
  EXPECT_NEAR(static_cast<double>(b.lhs), 0.0, 1e-12);
  EXPECT_TRUE(b.ok);
  const auto c = padic_vdc_check(X({0, 0, 1}), Rational(1, 4), 0, 2);
  EXPECT_NEAR(static_cast<double>(c.lhs), static_cast<double>(std::abs(oracle::ball_bruteforce(X({0, 0, Rational(1, 4)}), 0, 2, 3))), 1e-12);
  EXPECT_TRUE(c.ok);
}

TEST(PadicVdc, RandomInstancesHold) {
  std::mt19937_64 rng(26);
  std::uniform_int_distribution<int> deg(1, 3), radius(-2, 2), prime(0, 2);
  const unsigned long primes[] = {2, 3, 5};
  for (int i = 0; i < 500; ++i) {
    const unsigned long p = primes[prime(rng)];
    const int d = deg(rng);
    std::vector<Rational> c(static_cast<std::size_t>(d) + 1);
    for (auto& x : c) x = random_padic_coefficient(rng, p, -2, 2);
    EXPECT_TRUE(padic_vdc_check(RationalPoly(c), random_padic_coefficient(rng, p, -3, 1), radius(rng), p).ok);
  }
}

TEST(CertifiedBoundPadic, Examples) {
  const auto a = certified_bound_padic(CurveFamily({X({0, 0, 1}), X({0, 1})}), PadicWindow{1, 4, 3});
  EXPECT_EQ(a.bound, 192);
  EXPECT_EQ(a.floor, Rational(-36));
  const auto b = certified_bound_padic(CurveFamily({X({0, 0, 0, 1}), X({0, 1})}), PadicWindow{1, 2, 2});
  EXPECT_EQ(b.bound, 160);
}
