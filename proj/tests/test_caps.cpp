#include "spectacle/caps.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace spectacle;

namespace {

SymVector E(const VecV& x) { return embed_power(x, 1); }

const VecV u = VecV::u(), up = VecV::u_prime(), w0 = VecV::w0();

Rational random_position(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> n(-40, 40), d(1, 12);
  return Rational(n(rng), d(rng));
}

Rational random_width(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> n(1, 30), d(1, 6);
  return Rational(n(rng), d(rng));
}

CapInput make_input(int k, const Rational& M, const Rational& r, const SymVector& v) {
  CapInput in;
  in.k = k;
  in.width = M;
  in.position = r;
  in.v = v;
  return in;
}

}  // namespace

TEST(Caps, ClosedFormCapAtInfinity) {
  const SymVector w = cap_solve(make_input(1, 1, 0, weight_vector(1, 0)));
  EXPECT_EQ(w, E(up) - Rational(1, 2) * E(w0) + Rational(1, 6) * E(u));
  EXPECT_EQ(to_vec(w), up - Rational(1, 2) * w0 + Rational(1, 6) * u);
}

TEST(Caps, ClosedFormCapAtZero) {
  for (long N : {1, 2, 3, 5}) {
    const SpectacleCycle cyc = spectacle_assemble(w0, 1, 1, Rational(N));
    ASSERT_FALSE(cyc.closed());
    EXPECT_EQ(cyc.start->cusp, IsotropicLine::infinity());
    EXPECT_EQ(cyc.end->cusp, IsotropicLine::zero());
    EXPECT_EQ(to_vec(cyc.start->cap), up - Rational(1, 2) * w0 + Rational(1, 6) * u);
    EXPECT_EQ(to_vec(cyc.end->cap), Rational(-1, N) * u - Rational(1, 2) * w0 - Rational(N, 6) * up);
  }
}

TEST(Caps, SolveHighestWeightNeighbour) {
  const SymVector w = cap_solve(make_input(1, 1, 0, weight_vector(1, 1)));
  EXPECT_EQ(w, Rational(-1, 2) * weight_vector(1, 0) - Rational(1, 2) * weight_vector(1, 1));
  EXPECT_EQ(cap_closed_form(1, 1, 0, 1), w);
}

TEST(Caps, SolveRejectsHighestWeightJump) {
  try {
    cap_solve(make_input(2, 1, 0, weight_vector(2, -2)));
    FAIL() << "expected rejection";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("no primitive"), std::string::npos);
  }
  EXPECT_THROW(cap_solve(make_input(1, 0, 0, weight_vector(1, 0))), std::invalid_argument);
  EXPECT_THROW(cap_solve(make_input(2, 1, 0, weight_vector(1, 0))), std::invalid_argument);
}

TEST(Caps, ClosedFormExamples) {
  EXPECT_EQ(to_vec(cap_closed_form(1, 0, 0, 1)), up - Rational(1, 2) * w0 + Rational(1, 6) * u);
  for (int k = 1; k <= 6; ++k)
    for (const Rational& M : {Rational(1), Rational(3), Rational(5, 2)}) {
      const SymVector w = cap_closed_form(k, 0, 0, M);
      // coefficient of u^k = e1^(2k)
      EXPECT_EQ(w.at(2 * k), pow(Rational(2) * M, k) * bernoulli_number(k + 1) / Rational(k + 1));
    }
  EXPECT_THROW(cap_closed_form(2, -2, 0, 1), std::invalid_argument);
  EXPECT_THROW(cap_closed_form(2, 3, 0, 1), std::invalid_argument);
}

TEST(Caps, ClosedFormLowestIndexTermIsPresent) {
  // At i = -k+1 the sum starts at j = -k with C(0, 0) = 1, so v_{-2k} appears.
  for (int k = 1; k <= 4; ++k) {
    const SymVector w = cap_closed_form(k, -k + 1, 0, 1);
    EXPECT_FALSE(w.at(0).is_zero());
    EXPECT_EQ(w, cap_solve(make_input(k, 1, 0, weight_vector(k, -k + 1))));
  }
}

TEST(Caps, DoublePathOracle) {
  std::mt19937_64 rng(31);
  for (int k = 1; k <= 6; ++k)
    for (int i = -k + 1; i <= k; ++i)
      for (int t = 0; t < 20; ++t) {
        const Rational r = random_position(rng), M = random_width(rng);
        const SymVector v = act(GammaMat::unipotent(r), weight_vector(k, i));
        const SymVector w = cap_solve(make_input(k, M, r, v));
        ASSERT_EQ(cap_closed_form(k, i, r, M), w) << "k=" << k << " i=" << i << " r=" << r << " M=" << M;
        // jump identity and period normalization
        EXPECT_EQ(act(GammaMat::unipotent(-M), w) - w, v);
        EXPECT_TRUE(cap_period(w, r, M).is_zero());
      }
}

TEST(Caps, PeriodNormalizationNewtonCotesOracle) {
  // Closed Newton-Cotes with 2k+1 nodes integrates the pairing polynomial
  // exactly; the common factor M/n is dropped since the target is zero.
  std::mt19937_64 rng(32);
  for (int k = 1; k <= 4; ++k) {
    const Rational r = random_position(rng), M = random_width(rng);
    const SymVector w = cap_solve(make_input(k, M, r, act(GammaMat::unipotent(r), weight_vector(k, 0))));
    const int n = 2 * k;
    std::vector<Rational> weights(static_cast<std::size_t>(n + 1));
    // Weights from integrating Lagrange basis polynomials on [0, n].
    for (int j = 0; j <= n; ++j) {
      std::vector<Rational> poly{Rational(1)};
      for (int m = 0; m <= n; ++m) {
        if (m == j) continue;
        std::vector<Rational> next(poly.size() + 1);
        for (std::size_t e = 0; e < poly.size(); ++e) {
          next[e + 1] += poly[e] / Rational(j - m);
          next[e] -= poly[e] * Rational(m) / Rational(j - m);
        }
        poly = next;
      }
      weights[static_cast<std::size_t>(j)] = integrate_poly(poly, 0, n);
    }
    Rational total(0);
    for (int j = 0; j <= n; ++j) {
      const Rational t = r + M * Rational(j, n);
      total += weights[static_cast<std::size_t>(j)] *
               pairing(act(GammaMat::unipotent(t), embed_power(VecV::u_prime(), k)), w);
    }
    EXPECT_TRUE(total.is_zero()) << total;
  }
}

TEST(Caps, AssembleOrientationAndClosedCycles) {
  const SpectacleCycle a = spectacle_assemble(w0, 1);
  const SpectacleCycle b = spectacle_assemble(-w0, 1);
  ASSERT_FALSE(b.closed());
  EXPECT_EQ(b.start->cusp, a.end->cusp);
  EXPECT_EQ(b.end->cusp, a.start->cusp);
  EXPECT_EQ(b.v0, -a.v0);

  const SpectacleCycle c = spectacle_assemble(VecV{1, 1, 1}, 2);  // q = 2
  EXPECT_TRUE(c.closed());
  EXPECT_FALSE(c.end.has_value());
  EXPECT_THROW(spectacle_assemble(VecV{1, 0, -1}, 1), std::invalid_argument);
  EXPECT_THROW(spectacle_assemble(VecV::u(), 1), std::invalid_argument);
}

TEST(Caps, AssembleBoundaryCancellation) {
  // At each end, with gamma = sigma n(M) sigma^{-1}: (gamma^{-1} - Id) w = v0.
  std::mt19937_64 rng(33);
  std::uniform_int_distribution<long> d(-7, 7);
  int checked = 0;
  while (checked < 40) {
    const long p = d(rng), q = d(rng);
    if (gcd(BigInt(p), BigInt(q)) != 1) continue;
    const auto [g, s, t] = detail::ext_gcd(BigInt(p), BigInt(q));
    const GammaMat gam(Rational(p), Rational(BigInt(-t)), Rational(q), Rational(s));
    const VecV x = conjugate(gam, Rational(1 + checked % 3) * w0 + Rational(d(rng), 2) * u);
    const int k = 1 + checked % 4;
    const Rational M1 = random_width(rng), M2 = random_width(rng);
    ++checked;
    const SpectacleCycle cyc = spectacle_assemble(x, k, M1, M2);
    ASSERT_FALSE(cyc.closed());
    EXPECT_EQ(cyc.v0, embed_power(x, k));
    for (const CapEnd* end : {&*cyc.start, &*cyc.end}) {
      const GammaMat sigma = end->cusp.sigma();
      const GammaMat gamma_inv = sigma * GammaMat::unipotent(-end->width) * sigma.inverse();
      EXPECT_EQ(act(gamma_inv, end->cap) - end->cap, cyc.v0);
      EXPECT_TRUE(cap_period(to_cusp_frame(end->cusp, end->cap), end->position, end->width).is_zero());
      EXPECT_TRUE(end->cusp.contains(conjugate(sigma, VecV::u())));
    }
  }
}
