#include "spectacle/theta11.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace spectacle;

namespace {

// Direct enumeration of m1 in M1 Z + h1, m2 in M2 Z + h2 with m1 m2 < 0 and
// -m1 m2 <= bound, summing sgn(m1) (w, x^k) with x = m1 u + m2 u'. Returns the
// positive part of the displayed sum as exponent -> coefficient.
std::map<Rational, Rational> brute_positive(const SplitLatticeU& lat, int k, const Rational& w_u, const Rational& w_up,
                                            const Rational& bound) {
  std::map<Rational, Rational> out;
  auto members = [&](const Rational& M, const Rational& h, const Rational& lim) {
    std::vector<Rational> v;
    for (long j = -400; j <= 400; ++j) {
      const Rational m = M * Rational(j) + h;
      if (!m.is_zero() && m.abs() <= lim) v.push_back(m);
    }
    return v;
  };
  const Rational min2 = std::min(lat.h2.is_zero() ? lat.M2 : lat.h2, lat.M2 - lat.h2);
  for (const Rational& m1 : members(lat.M1, lat.h1, bound / min2))
    for (const Rational& m2 : members(lat.M2, lat.h2, bound / m1.abs())) {
      const Rational n = -m1 * m2;
      if (n.sign() <= 0 || n > bound) continue;
      // (u^k, (m1 u + m2 u')^k) = (u, x)^k = (-m2)^k and likewise (u'^k, x^k) = (-m1)^k.
      const Rational term = w_u * pow(-m2, k) + w_up * pow(-m1, k);
      out[n] += m1.sign() > 0 ? term : -term;
    }
  return out;
}

SplitLatticeU random_lattice(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(1, 6), den(1, 3);
  const Rational M1(num(rng), den(rng)), M2(num(rng), den(rng));
  std::uniform_int_distribution<long> frac(0, 3);
  const Rational h1 = frac(rng) == 0 ? Rational(0) : M1 * Rational(frac(rng), 4);
  const Rational h2 = frac(rng) == 0 ? Rational(0) : M2 * Rational(frac(rng), 4);
  return {M1, M2, h1, h2};
}

}  // namespace

TEST(Theta11, LevelOneExampleWeightFour) {
  const QExpansion s = theta11_series(SplitLatticeU::level1(), 3, 0, 1, Rational(50));
  EXPECT_EQ(s.exp_den, 1);
  EXPECT_EQ(s.coeff(Rational(0)), Rational(1, 120));
  EXPECT_EQ(s.coeff(Rational(1)), Rational(2));
  EXPECT_EQ(s.coeff(Rational(2)), Rational(18));
  for (long n = 1; n <= 50; ++n) EXPECT_EQ(s.coeff(Rational(n)), Rational(2) * Rational(divisor_power_sum(n, 3)));
}

TEST(Theta11, GlobalSignIsPinnedByTheLevelOneExample) {
  EXPECT_EQ(theta11_global_sign(), -1);
  // The displayed sum alone gives -2 sigma_3(n).
  const QExpansion lit = detail::theta11_literal(SplitLatticeU::level1(), 3, 0, 1, Rational(5), 1);
  EXPECT_EQ(lit.coeff(Rational(1)), Rational(-2));
  EXPECT_EQ(lit.coeff(Rational(0)), Rational(-1, 120));
}

TEST(Theta11, LevelOneWeightTwoWithNonholomorphicTerm) {
  const QExpansion s = theta11_series(SplitLatticeU::level1(), 1, 0, 1, Rational(20));
  EXPECT_EQ(s.coeff(Rational(1)), Rational(2));
  for (long n = 1; n <= 20; ++n) EXPECT_EQ(s.coeff(Rational(n)), Rational(2) * Rational(divisor_power_sum(n, 1)));
  EXPECT_EQ(s.coeff(Rational(0)), Rational(-1, 12));
  EXPECT_EQ(s.nonholo_coeff(Rational(0)), Rational(1, 4));
  EXPECT_EQ(s.nonholo->size(), 1u);
  // k > 1 carries no 1/(pi v) part.
  EXPECT_TRUE(theta11_series(SplitLatticeU::level1(), 3, 0, 1, Rational(5)).nonholo_is_zero());
}

TEST(Theta11, EvenWeightCancels) {
  for (int k = 2; k <= 8; k += 2)
    for (const auto& [wu, wup] : {std::pair{Rational(0), Rational(1)}, {Rational(1), Rational(0)}, {Rational(2), Rational(-3)}}) {
      const QExpansion s = theta11_series(SplitLatticeU(2, 3), k, wu, wup, Rational(40));
      for (const auto& [e, c] : s.coeffs) EXPECT_EQ(e, 0) << "k=" << k;
      const auto brute = brute_positive(SplitLatticeU(2, 3), k, wu, wup, Rational(40));
      for (const auto& [n, c] : brute) EXPECT_TRUE(c.is_zero());
    }
}

TEST(Theta11, MatchesDirectEnumeration) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 24; ++t) {
    const SplitLatticeU lat = random_lattice(rng);
    const int k = 1 + t % 5;
    const Rational wu(t % 3 - 1), wup(t % 4 + 1);
    const Rational bound(30);
    const QExpansion s = theta11_series(lat, k, wu, wup, bound);
    const auto brute = brute_positive(lat, k, wu, wup, bound);
    const Rational sigma(theta11_global_sign());
    for (const auto& [n, c] : brute) EXPECT_EQ(s.coeff(n), sigma * c) << "n=" << n;
    for (const auto& [e, c] : s.coeffs) {
      if (e > 0) {
        EXPECT_TRUE(brute.count(Rational(e, s.exp_den))) << "unexpected exponent " << e;
      }
    }
  }
}

TEST(Theta11, ConstantTermFormula) {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 40; ++t) {
    const SplitLatticeU lat = random_lattice(rng);
    const int k = 1 + t % 6;
    const Rational wu(t % 5 - 2), wup(t % 3 + 1);
    const Rational pair_sign = k % 2 == 0 ? Rational(1) : Rational(-1);
    Rational expected(0);
    if (lat.h2.is_zero())
      expected -= pow(lat.M1, k) * bernoulli_poly(k + 1, lat.h1 / lat.M1) / Rational(k + 1) * (wup * pair_sign);
    if (lat.h1.is_zero())
      expected -= pow(lat.M2, k) * bernoulli_poly(k + 1, lat.h2 / lat.M2) / Rational(k + 1) * (wu * pair_sign);
    const QExpansion s = theta11_series(lat, k, wu, wup, Rational(1));
    EXPECT_EQ(s.coeff(Rational(0)), Rational(theta11_global_sign()) * expected);
  }
}

TEST(Theta11, ExponentGrid) {
  const SplitLatticeU lat(Rational(3, 2), Rational(1), Rational(1, 2), Rational(0));
  const QExpansion s = theta11_series(lat, 3, 0, 1, Rational(10));
  EXPECT_EQ(s.exp_den, 2);
  EXPECT_EQ(s.n_max, 20);
  EXPECT_FALSE(s.coeff(Rational(1, 2)).is_zero());  // m1 = 1/2, m2 = -1
}

TEST(Theta11, SwappingTheIsotropicLines) {
  // (M1, h1, w_u) <-> (M2, h2, w_up) sends (m1, m2) to (m2, m1); sgn(m1)
  // flips while (w, x^k) is unchanged, so positive coefficients change sign.
  // The constant term and the 1/(pi v) part are invariant.
  std::mt19937_64 rng(43);
  for (int t = 0; t < 20; ++t) {
    const SplitLatticeU a = random_lattice(rng);
    const SplitLatticeU b(a.M2, a.M1, a.h2, a.h1);
    const int k = 1 + t % 5;
    const Rational wu(t % 3 + 1), wup(2 - t % 4);
    const QExpansion sa = theta11_series(a, k, wu, wup, Rational(40));
    const QExpansion sb = theta11_series(b, k, wup, wu, Rational(40));
    ASSERT_EQ(sa.exp_den, sb.exp_den);
    EXPECT_EQ(sa.coeff(Rational(0)), sb.coeff(Rational(0)));
    EXPECT_EQ(sa.nonholo_coeff(Rational(0)), sb.nonholo_coeff(Rational(0)));
    for (std::int64_t e = 1; e <= sa.n_max; ++e)
      EXPECT_EQ(sa.coeff(Rational(e, sa.exp_den)), -sb.coeff(Rational(e, sb.exp_den)));
  }
}

TEST(Theta11, ReflectionThroughTimelikeVector) {
  // x -> -m2 u - m1 u' preserves sgn(x, e1) and sends u'^k to (-1)^k u^k; on
  // symmetric cosets (h = 0 or M/2) the positive parts agree up to (-1)^k.
  for (int k = 1; k <= 6; ++k) {
    const SplitLatticeU a(Rational(2), Rational(3), Rational(1), Rational(0));
    const SplitLatticeU b(Rational(3), Rational(2), Rational(0), Rational(1));
    const QExpansion sa = theta11_series(a, k, 0, 1, Rational(30));
    const QExpansion sb = theta11_series(b, k, k % 2 == 0 ? 1 : -1, 0, Rational(30));
    for (std::int64_t e = 1; e <= sa.n_max; ++e) EXPECT_EQ(sa.coeff(Rational(e, sa.exp_den)), sb.coeff(Rational(e, sb.exp_den)));
  }
}

TEST(Theta11, ThreadCountDoesNotChangeTheResult) {
  const SplitLatticeU lat(Rational(2), Rational(5, 2), Rational(1), Rational(1, 2));
  EXPECT_EQ(theta11_series(lat, 3, 1, 2, Rational(60), 1), theta11_series(lat, 3, 1, 2, Rational(60), 4));
  EXPECT_EQ(theta11_series(lat, 3, 1, 2, Rational(20), 1), theta11_series(lat, 3, 1, 2, Rational(60), 3).truncate(Rational(20)));
}

TEST(SiegelWeil, LevelOne) {
  for (int k : {3, 5, 7}) {
    const SiegelWeilReport r = siegel_weil_check(SplitLatticeU::level1(), k, 100);
    EXPECT_TRUE(r.pass) << "k=" << k;
  }
  const SiegelWeilReport even = siegel_weil_check(SplitLatticeU::level1(), 4, 40);
  EXPECT_TRUE(even.pass);
  EXPECT_NE(even.note.find("identically zero"), std::string::npos);
}

TEST(SiegelWeil, UnsupportedTargets) {
  try {
    siegel_weil_check(SplitLatticeU(2, 1), 3, 10);
    FAIL() << "expected rejection";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("comparison target not implemented"), std::string::npos);
  }
  EXPECT_THROW(siegel_weil_check(SplitLatticeU::level1(), 1, 10), std::invalid_argument);
}
