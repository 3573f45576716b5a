#include "spectacle/periods.hpp"

#include <gtest/gtest.h>

#include <boost/math/special_functions/zeta.hpp>

#include <random>

using namespace spectacle;

namespace {

// Lambda(E_m, s) = (2 pi)^{-s} Gamma(s) C zeta(s) zeta(s - m + 1) with C = -2m/B_m,
// continued through the removable singularity at s = 1 using
// zeta'(-2n) = (-1)^n (2n)! zeta(2n+1) / (2 (2 pi)^{2n}).
double eisenstein_lambda(int m, int s) {
  const double pi = std::numbers::pi;
  const double C = -2.0 * m / bernoulli_number(m).to_double();
  const double front = std::pow(2 * pi, -s) * std::tgamma(double(s)) * C;
  if (s == 1) {
    const int n = (m - 2) / 2;
    const double dz = (n % 2 == 0 ? 1.0 : -1.0) * std::tgamma(2.0 * n + 1) * boost::math::zeta(2.0 * n + 1) /
                      (2 * std::pow(2 * pi, 2 * n));
    return front * dz;
  }
  return front * boost::math::zeta(double(s)) * boost::math::zeta(double(s - m + 1));
}

std::complex<double> pairing_at(const SymVector& v, std::complex<double> z) {
  std::complex<double> acc = 0;
  const auto p = unipotent_pairing_poly(v);
  for (std::size_t m = p.size(); m-- > 0;) acc = acc * z + p[m].to_double();
  return acc;
}

}  // namespace

TEST(CompletedL, EisensteinExamples) {
  EXPECT_NEAR(completed_L(HolomorphicFormSpec::eisenstein(4), 2), -5.0 / 6, 1e-12);
  EXPECT_NEAR(completed_L(HolomorphicFormSpec::eisenstein(8), 4), 1.0 / 60, 1e-12);
}

TEST(CompletedL, ZetaProductAtIntegerPoints) {
  for (int m : {4, 6, 8}) {
    const auto f = HolomorphicFormSpec::eisenstein(m);
    for (int s = 1; s < m; ++s) EXPECT_NEAR(completed_L(f, s), eisenstein_lambda(m, s), 1e-10) << "m=" << m << " s=" << s;
  }
}

TEST(CompletedL, FunctionalEquation) {
  for (int m : {4, 6, 8, 10, 12}) {
    const auto f = HolomorphicFormSpec::eisenstein(m);
    const double sign = m % 4 == 0 ? 1 : -1;
    for (double s : {0.3, 1.0, 1.7, 2.5, 3.2}) {
      EXPECT_NEAR(completed_L(f, s), sign * completed_L(f, m - s), 1e-10) << "m=" << m << " s=" << s;
    }
  }
}

TEST(CompletedL, RejectsOutOfRange) {
  const auto f = HolomorphicFormSpec::eisenstein(4);
  EXPECT_THROW(completed_L(f, 0), std::invalid_argument);
  EXPECT_THROW(completed_L(f, 4), std::invalid_argument);
  EXPECT_THROW(HolomorphicFormSpec::eisenstein(5), std::invalid_argument);
}

TEST(SpectaclePeriod, ConstantMatchesThePairing) {
  // On the imaginary axis i (n(iy) u'^k, v_{2j}) = c_{k,j} y^{k-j}.
  for (int k = 1; k <= 5; ++k)
    for (int j = -k; j <= k; ++j) {
      const double y = 1.7;
      const auto lhs = std::complex<double>(0, 1) * pairing_at(weight_vector(k, j), {0, y});
      const auto rhs = period_constant(k, j) * std::pow(y, k - j);
      EXPECT_NEAR(std::abs(lhs - rhs), 0, 1e-9 * std::abs(rhs)) << "k=" << k << " j=" << j;
    }
  EXPECT_NEAR(std::abs(period_constant(1, 0) - 2.0), 0, 1e-15);
  EXPECT_NEAR(std::abs(period_constant(3, 0) + 8.0), 0, 1e-15);
}

TEST(SpectaclePeriod, CriticalValues) {
  const auto e4 = HolomorphicFormSpec::eisenstein(4), e8 = HolomorphicFormSpec::eisenstein(8);
  for (double T1 : {3.0, 5.0, 10.0})
    for (double T2 : {3.0, 5.0, 10.0}) {
      const PeriodResult a = spectacle_period(e4, 1, 0, T1, T2);
      EXPECT_NEAR(a.value.real(), -5.0 / 3, 1e-8);
      EXPECT_NEAR(a.value.imag(), 0, 1e-8);
      const PeriodResult b = spectacle_period(e8, 3, 0, T1, T2);
      EXPECT_NEAR(b.value.real(), -2.0 / 15, 1e-8);
      EXPECT_NEAR(b.value.imag(), 0, 1e-8);
    }
  EXPECT_LT(std::abs(spectacle_period(e4, 1, 0, 3, 3).value - spectacle_period(e4, 1, 0, 10, 5).value), 1e-8);
}

TEST(SpectaclePeriod, AllWeightVectorsAgainstLambda) {
  for (int k = 1; k <= 4; ++k) {
    const auto f = HolomorphicFormSpec::eisenstein(2 * k + 2);
    for (int j = -k + 1; j <= k - 1; ++j) {
      const std::complex<double> target = period_constant(k, j) * completed_L(f, k + 1 - j);
      for (const auto& [T1, T2] : {std::pair{3.0, 3.0}, {3.0, 10.0}, {10.0, 5.0}}) {
        const PeriodResult r = spectacle_period(f, k, j, T1, T2);
        EXPECT_LT(std::abs(r.value - target), 1e-8) << "k=" << k << " j=" << j << " T=" << T1 << "," << T2;
        // the reference value carries its own rounding error of a few ulps
        EXPECT_LE(std::abs(r.value - target), r.abs_err_bound + 1e-13) << "k=" << k << " j=" << j;
        const double scale = std::abs(r.geodesic) + std::abs(r.cap_start) + std::abs(r.cap_end);
        EXPECT_LE(std::abs(r.geodesic + r.cap_start + r.cap_end - r.value), 1e-15 * scale);
      }
    }
  }
}

TEST(SpectaclePeriod, CapsAreNeededForHeightIndependence) {
  const auto f = HolomorphicFormSpec::eisenstein(4);
  const PeriodResult lo = spectacle_period(f, 1, 0, 3, 3, false), hi = spectacle_period(f, 1, 0, 10, 10, false);
  EXPECT_GT(std::abs(lo.value - hi.value), 1e-2);
  EXPECT_EQ(lo.cap_start, std::complex<double>(0));
  // The geodesic part is the same with or without caps.
  EXPECT_EQ(lo.geodesic, spectacle_period(f, 1, 0, 3, 3).geodesic);
}

TEST(SpectaclePeriod, RejectsInvalidInput) {
  const auto f = HolomorphicFormSpec::eisenstein(4);
  EXPECT_THROW(spectacle_period(f, 1, 0, 1.0, 3), std::invalid_argument);
  EXPECT_THROW(spectacle_period(f, 1, 0, 3, 0.5), std::invalid_argument);
  EXPECT_THROW(spectacle_period(f, 1, 1, 3, 3), std::invalid_argument);
  EXPECT_THROW(spectacle_period(f, 1, -1, 3, 3), std::invalid_argument);
  EXPECT_THROW(spectacle_period(f, 2, 0, 3, 3), std::invalid_argument);
}

TEST(GeodesicIntersection, Example) {
  const GeodesicIntersection g = geodesic_intersection_numeric({1, 0, 1}, {0, 1, 0});
  EXPECT_NEAR(std::abs(g.point - std::complex<double>(0, 1)), 0, 1e-15);
  EXPECT_EQ(g.sign, 1);
  EXPECT_EQ(geodesic_intersection_numeric({0, 1, 0}, {1, 0, 1}).sign, -1);
}

TEST(GeodesicIntersection, AgreesWithEpsilonSign) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> d(-7, 7);
  int checked = 0, disagreements = 0;
  while (checked < 500) {
    const VecV x{d(rng), d(rng), d(rng)}, y{d(rng), d(rng), d(rng)};
    const Rational gram = inner(x, x) * inner(y, y) - inner(x, y) * inner(x, y);
    if (qform(x).sign() <= 0 || qform(y).sign() <= 0 || gram.sign() <= 0) continue;
    const GeodesicIntersection g = geodesic_intersection_numeric(x, y);
    ASSERT_GT(g.point.imag(), 0);
    // the point lies on both geodesics a|z|^2 - 2b Re z - c = 0
    for (const VecV& v : {x, y}) {
      const double r = v.a.to_double() * std::norm(g.point) - 2 * v.b.to_double() * g.point.real() - v.c.to_double();
      EXPECT_NEAR(r, 0, 1e-9);
    }
    if (g.sign != epsilon_sign(x, y)) ++disagreements;
    ++checked;
  }
  EXPECT_EQ(disagreements, 0);
}

TEST(GeodesicIntersection, RejectsDegeneratePairs) {
  EXPECT_THROW(geodesic_intersection_numeric({0, 1, 0}, {0, 1, 1}), std::invalid_argument);  // parallel vertical lines
  EXPECT_THROW(geodesic_intersection_numeric({1, 0, 1}, {1, 0, 4}), std::invalid_argument);  // nested circles
  EXPECT_THROW(geodesic_intersection_numeric({1, 0, -1}, {0, 1, 0}), std::invalid_argument); // x not spacelike
}
