#pragma once

// Signature (1,1): the generating series of weighted 0-cycles attached to a
// split lattice coset (M1 Z + h1) u + (M2 Z + h2) u', paired with
// w = w_u u^k + w_up u'^k.

#include "spectacle/arith.hpp"
#include "spectacle/parallel.hpp"
#include "spectacle/qseries.hpp"
#include "spectacle/rational.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace spectacle {

struct SplitLatticeU {
  Rational M1 = 1, M2 = 1, h1 = 0, h2 = 0;

  SplitLatticeU() = default;
  SplitLatticeU(Rational m1, Rational m2, Rational s1 = 0, Rational s2 = 0)
      : M1(std::move(m1)), M2(std::move(m2)), h1(std::move(s1)), h2(std::move(s2)) {
    if (M1.sign() <= 0 || M2.sign() <= 0) throw std::invalid_argument("SplitLatticeU: M1, M2 must be positive");
    if (h1.sign() < 0 || h1 >= M1 || h2.sign() < 0 || h2 >= M2)
      throw std::invalid_argument("SplitLatticeU: need 0 <= h1 < M1 and 0 <= h2 < M2");
  }

  static SplitLatticeU level1() { return {}; }

  bool is_level1() const { return M1 == 1 && M2 == 1 && h1.is_zero() && h2.is_zero(); }
  bool in_first(const Rational& m) const { return ((m - h1) / M1).is_integer(); }
  bool in_second(const Rational& m) const { return ((m - h2) / M2).is_integer(); }

  /// m1 ranges over (1/d1) Z and m2 over (1/d2) Z.
  BigInt d1() const { return lcm(M1.den(), h1.den()); }
  BigInt d2() const { return lcm(M2.den(), h2.den()); }
};

namespace detail {

inline std::vector<std::int64_t> positive_divisors(std::int64_t n) {
  std::vector<std::int64_t> small, large;
  for (std::int64_t d = 1; d * d <= n; ++d)
    if (n % d == 0) {
      small.push_back(d);
      if (d * d != n) large.push_back(n / d);
    }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

/// The series exactly as displayed, before the global sign.
inline QExpansion theta11_literal(const SplitLatticeU& lat, int k, const Rational& w_u, const Rational& w_up,
                                  const Rational& bound, int threads) {
  const std::int64_t d1 = to_int64(lat.d1()), d2 = to_int64(lat.d2());
  const std::int64_t den = d1 * d2;
  const std::int64_t nmax = to_int64(floor(bound * Rational(den)));
  QExpansion out(den, nmax);
  const Rational sign_k = k % 2 == 0 ? Rational(1) : Rational(-1);
  const bool d01 = lat.h1.is_zero(), d02 = lat.h2.is_zero();

  // (u^k, u'^k) = (-1)^k and (u^k, u^k) = (u'^k, u'^k) = 0.
  Rational constant(0);
  if (d02) constant -= pow(lat.M1, k) * bernoulli_poly(k + 1, lat.h1 / lat.M1) / Rational(k + 1) * w_up * sign_k;
  if (d01) constant -= pow(lat.M2, k) * bernoulli_poly(k + 1, lat.h2 / lat.M2) / Rational(k + 1) * w_u * sign_k;
  out.add_to(0, constant);

  std::vector<Rational> slot(static_cast<std::size_t>(nmax + 1));
  parallel_for(nmax, threads, [&](std::int64_t i) {
    const std::int64_t e = i + 1;  // m1 m2 = -e / den with m1 = t / d1, m2 = s / d2
    Rational acc(0);
    for (const std::int64_t t0 : positive_divisors(e))
      for (const std::int64_t t : {t0, -t0}) {
        const Rational m1(t, d1), m2(-e / t, d2);
        if (!lat.in_first(m1) || !lat.in_second(m2)) continue;
        const Rational term = w_u * pow(-m2, k) + w_up * pow(-m1, k);
        acc += t > 0 ? term : -term;
      }
    slot[static_cast<std::size_t>(e)] = acc;
  });
  for (std::int64_t e = 1; e <= nmax; ++e) out.add_to(e, slot[static_cast<std::size_t>(e)]);

  if (k == 1) {
    // Multiplier of 1/(pi v): delta_{0,h1} (w,u)/(4 M2) + delta_{0,h2} (w,u')/(4 M1),
    // with (w, u) = -w_up and (w, u') = -w_u.
    Rational nh(0);
    if (d01) nh -= w_up / (Rational(4) * lat.M2);
    if (d02) nh -= w_u / (Rational(4) * lat.M1);
    out.nonholo.emplace();
    out.add_nonholo(0, nh);
  }
  return out;
}

}  // namespace detail

/// The global sign that makes the level-one series agree with
/// -B_{k+1}/(k+1) + 2 sum_{x,y>0} x^k q^{xy}. It is derived from the
/// coefficient of q at k = 3, where the displayed sum gives -2.
inline int theta11_global_sign() {
  static const int sign = [] {
    const QExpansion lit =
        detail::theta11_literal(SplitLatticeU::level1(), 3, Rational(0), Rational(1), Rational(1), 1);
    const Rational expected(2);  // 2 sum_{xy = 1} x^3
    const Rational got = lit.coeff(Rational(1));
    if (got == expected) return 1;
    if (got == -expected) return -1;
    throw std::logic_error("theta11_global_sign: displayed sum is not +-2 at q");
  }();
  return sign;
}

/// Generating series up to the exponent bound (an actual exponent, not a
/// numerator). The global sign applies to every part of the series.
inline QExpansion theta11_series(const SplitLatticeU& lat, int k, const Rational& w_u, const Rational& w_up,
                                 const Rational& bound, int threads = 1) {
  if (k < 1) throw std::invalid_argument("theta11_series: k must be positive");
  if (bound.sign() < 0) throw std::invalid_argument("theta11_series: negative bound");
  return scale(detail::theta11_literal(lat, k, w_u, w_up, bound, threads), Rational(theta11_global_sign()));
}

struct SiegelWeilReport {
  bool pass = false;
  std::string note;
  std::optional<QMismatch> mismatch;
};

/// theta11_series(w = u'^k) against (-B_{k+1}/(k+1)) E_{k+1} at level one.
inline SiegelWeilReport siegel_weil_check(const SplitLatticeU& lat, int k, std::int64_t n_max, int threads = 1) {
  if (!lat.is_level1())
    throw std::invalid_argument("siegel_weil_check: comparison target not implemented for this lattice (level one only)");
  if (k < 1) throw std::invalid_argument("siegel_weil_check: k must be positive");
  const QExpansion theta = theta11_series(lat, k, 0, 1, Rational(n_max), threads);
  SiegelWeilReport rep;
  if (k % 2 == 0) {
    QExpansion zero(1, n_max);
    rep.mismatch = first_difference(theta, zero, Rational(n_max));
    rep.pass = !rep.mismatch;
    rep.note = "k even: series identically zero beyond constant (and constant -B_{k+1}/(k+1) = 0)";
    return rep;
  }
  if (k == 1)
    throw std::invalid_argument("siegel_weil_check: comparison target not implemented for k = 1 (weight 2)");
  const QExpansion target = scale(eisenstein_level1(k + 1, n_max), -bernoulli_number(k + 1) / Rational(k + 1));
  rep.mismatch = first_difference(theta, target, Rational(n_max));
  rep.pass = !rep.mismatch;
  rep.note = "compared with (-B_{k+1}/(k+1)) E_{k+1}";
  return rep;
}

}  // namespace spectacle
