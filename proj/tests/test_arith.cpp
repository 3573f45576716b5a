#include "spectacle/arith.hpp"
#include "spectacle/rational.hpp"

#include <gtest/gtest.h>

#include <random>
#include <vector>

using namespace spectacle;

namespace {

// Akiyama-Tanigawa: produces B_n with B_1 = +1/2, an independent route.
Rational akiyama_tanigawa(long n) {
  std::vector<Rational> a(static_cast<std::size_t>(n + 1));
  for (long m = 0; m <= n; ++m) {
    a[static_cast<std::size_t>(m)] = Rational(1, m + 1);
    for (long j = m; j >= 1; --j)
      a[static_cast<std::size_t>(j - 1)] = Rational(j) * (a[static_cast<std::size_t>(j - 1)] - a[static_cast<std::size_t>(j)]);
  }
  return a[0];
}

Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-200, 200), den(1, 60);
  return Rational(num(rng), den(rng));
}

// Euler's criterion for odd primes p not dividing a.
int legendre_oracle(long a, long p) {
  long r = ((a % p) + p) % p;
  if (r == 0) return 0;
  long e = (p - 1) / 2, acc = 1, base = r;
  while (e > 0) {
    if (e & 1) acc = acc * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return acc == 1 ? 1 : -1;
}

}  // namespace

TEST(Rational, CanonicalForm) {
  const Rational r(6, -4);
  EXPECT_EQ(r.num(), -3);
  EXPECT_EQ(r.den(), 2);
  EXPECT_EQ(r.str(), "-3/2");
  EXPECT_EQ(Rational(4, 2).fraction_str(), "2/1");
  EXPECT_EQ(Rational::parse("-10/4"), Rational(-5, 2));
  EXPECT_THROW(Rational(1, 0), std::domain_error);
  EXPECT_THROW(Rational(1) / Rational(0), std::domain_error);
  EXPECT_THROW(Rational::parse("x/2"), std::invalid_argument);
}

TEST(Rational, FloorAndMod) {
  EXPECT_EQ(floor(Rational(-1, 2)), -1);
  EXPECT_EQ(floor(Rational(7, 3)), 2);
  EXPECT_EQ(mod(Rational(-1, 4), Rational(1)), Rational(3, 4));
  EXPECT_EQ(mod(Rational(5, 2), Rational(1, 2)), Rational(0));
  EXPECT_EQ(pow(Rational(2, 3), -2), Rational(9, 4));
}

TEST(BernoulliNumber, Examples) {
  EXPECT_EQ(bernoulli_number(0), Rational(1));
  EXPECT_EQ(bernoulli_number(1), Rational(-1, 2));
  EXPECT_EQ(bernoulli_number(4), Rational(-1, 30));
  EXPECT_EQ(bernoulli_number(3), Rational(0));
}

TEST(BernoulliNumber, AgreesWithAkiyamaTanigawa) {
  for (long n = 0; n <= 30; ++n) {
    const Rational expected = n == 1 ? Rational(-1, 2) : akiyama_tanigawa(n);
    EXPECT_EQ(bernoulli_number(n), expected) << "n = " << n;
  }
}

TEST(BernoulliPoly, Examples) {
  EXPECT_EQ(bernoulli_poly(1, 0), Rational(-1, 2));
  EXPECT_EQ(bernoulli_poly(2, 0), Rational(1, 6));
  EXPECT_EQ(bernoulli_poly(2, Rational(1, 2)), Rational(-1, 12));
}

TEST(BernoulliPoly, DifferenceEquation) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const Rational x = random_rational(rng);
    for (long n = 1; n <= 20; ++n)
      EXPECT_EQ(bernoulli_poly(n, x + Rational(1)) - bernoulli_poly(n, x), Rational(n) * pow(x, n - 1));
  }
}

TEST(BernoulliPoly, MultiplicationTheorem) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 10; ++t) {
    const Rational x = random_rational(rng);
    for (long n = 0; n <= 8; ++n)
      for (long m = 1; m <= 6; ++m) {
        Rational sum(0);
        for (long j = 0; j < m; ++j) sum += bernoulli_poly(n, x + Rational(j, m));
        EXPECT_EQ(sum * pow(Rational(m), n - 1), bernoulli_poly(n, Rational(m) * x));
      }
  }
}

TEST(BernoulliPoly, ValueAtZeroIsNumber) {
  for (long n = 0; n <= 20; ++n) EXPECT_EQ(bernoulli_number(n), bernoulli_poly(n, 0));
}

TEST(GeneralizedBernoulli, Examples) {
  EXPECT_EQ(generalized_bernoulli(1, -4), Rational(-1, 2));
  EXPECT_EQ(generalized_bernoulli(1, -3), Rational(-1, 3));
  EXPECT_EQ(generalized_bernoulli(2, -4), Rational(0));
  EXPECT_EQ(generalized_bernoulli(4, 1), bernoulli_number(4));
}

TEST(GeneralizedBernoulli, DirectSumOracle) {
  // B_{1,chi} = sum chi(a) B_1(a/f) for D = -4 and -3.
  EXPECT_EQ(generalized_bernoulli(1, -4), bernoulli_poly(1, Rational(1, 4)) - bernoulli_poly(1, Rational(3, 4)));
  EXPECT_EQ(generalized_bernoulli(1, -3), bernoulli_poly(1, Rational(1, 3)) - bernoulli_poly(1, Rational(2, 3)));
  // B_{2,chi_5} = 5 (B_2(1/5) - B_2(2/5) - B_2(3/5) + B_2(4/5)) = 4/5
  EXPECT_EQ(generalized_bernoulli(2, 5), Rational(4, 5));
}

TEST(GeneralizedBernoulli, ParityVanishing) {
  for (long D = -24; D <= 24; ++D) {
    if (!is_fundamental_discriminant(D)) continue;
    const int chi_minus_one = D < 0 ? -1 : 1;
    for (long n = 1; n <= 8; ++n) {
      const int parity = n % 2 == 0 ? 1 : -1;
      if (chi_minus_one != parity) {
        EXPECT_TRUE(generalized_bernoulli(n, D).is_zero()) << "n=" << n << " D=" << D;
      }
    }
  }
}

TEST(GeneralizedBernoulli, RejectsNonFundamental) {
  try {
    generalized_bernoulli(2, 12 * 9);
    FAIL() << "expected rejection";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("square factor 9"), std::string::npos) << e.what();
  }
  EXPECT_THROW(generalized_bernoulli(1, -16), std::invalid_argument);
  EXPECT_THROW(generalized_bernoulli(1, 20), std::invalid_argument);
  EXPECT_THROW(generalized_bernoulli(1, 3), std::invalid_argument);
}

TEST(Kronecker, Examples) {
  EXPECT_EQ(kronecker_symbol(-4, 3), -1);
  for (long D : {-4, -3, 5, 8, 12}) EXPECT_EQ(kronecker_symbol(D, 1), 1);
  EXPECT_EQ(kronecker_symbol(-3, 6), 0);
}

TEST(Kronecker, MatchesEulerCriterionAndMultiplicative) {
  const std::vector<long> primes{3, 5, 7, 11, 13, 17, 19, 23};
  for (long D = -40; D <= 40; ++D) {
    if (((D % 4) + 4) % 4 > 1 || D == 0) continue;
    for (long p : primes) EXPECT_EQ(kronecker_symbol(D, p), legendre_oracle(D, p)) << D << " " << p;
    for (long m = 1; m <= 30; ++m)
      for (long n = 1; n <= 30; ++n)
        EXPECT_EQ(kronecker_symbol(D, m * n), kronecker_symbol(D, m) * kronecker_symbol(D, n));
  }
}

TEST(DivisorPowerSum, Examples) {
  EXPECT_EQ(divisor_power_sum(2, 3), 9);
  for (long k = 0; k <= 5; ++k) EXPECT_EQ(divisor_power_sum(1, k), 1);
  EXPECT_EQ(divisor_power_sum(6, 1), 12);
}

TEST(DivisorPowerSum, BruteForce) {
  for (long n = 1; n <= 200; ++n)
    for (long k = 0; k <= 5; ++k) {
      BigInt expected(0);
      for (long d = 1; d <= n; ++d)
        if (n % d == 0) expected += BigInt(pow(Rational(d), k).num());
      EXPECT_EQ(divisor_power_sum(n, k), expected);
    }
}

TEST(Discriminant, Split) {
  const auto s = split_discriminant(-12);
  EXPECT_EQ(s.fundamental, -3);
  EXPECT_EQ(s.conductor, 2);
  EXPECT_EQ(split_discriminant(-16).fundamental, -4);
  EXPECT_EQ(split_discriminant(-16).conductor, 2);
  EXPECT_EQ(split_discriminant(16).fundamental, 1);
  EXPECT_EQ(split_discriminant(16).conductor, 4);
  EXPECT_EQ(split_discriminant(-7 * 9).fundamental, -7);
  EXPECT_EQ(split_discriminant(8 * 4).fundamental, 8);
  for (long d = -300; d <= 300; ++d) {
    if (d == 0 || ((d % 4) + 4) % 4 > 1) continue;
    const auto sp = split_discriminant(d);
    EXPECT_EQ(sp.fundamental * sp.conductor * sp.conductor, d);
    EXPECT_TRUE(sp.fundamental == 1 || is_fundamental_discriminant(sp.fundamental)) << d;
  }
}
