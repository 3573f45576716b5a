#pragma once

// Floating-point layer: completed L-functions of level-one forms, periods of
// eta_f = f(z) (n(z) u'^k, .) dz over pushed-in spectacle cycles, and a
// numerical orientation oracle for geodesic intersections.

#include "spectacle/arith.hpp"
#include "spectacle/caps.hpp"
#include "spectacle/quad_space.hpp"
#include "spectacle/rational.hpp"
#include "spectacle/sym_rep.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace spectacle {

using Complex = std::complex<double>;
using LongComplex = std::complex<long double>;

/// A level-one holomorphic form of weight 2k+2 given by its q-expansions at
/// infinity (a_n) and at 0 (b_n, the expansion of f|S).
struct HolomorphicFormSpec {
  int weight = 4;
  std::function<Rational(std::int64_t)> a;
  std::function<Rational(std::int64_t)> b;
  /// |a_n|, |b_n| <= growth n^(weight-1) for n >= 1; drives truncation.
  double growth = 0;

  int k() const { return (weight - 2) / 2; }

  void validate() const {
    if (weight < 4 || weight % 2 != 0) throw std::invalid_argument("HolomorphicFormSpec: weight must be even and >= 4");
    if (!a || !b) throw std::invalid_argument("HolomorphicFormSpec: missing coefficient stream");
  }

  /// E_m = 1 - (2m/B_m) sum sigma_{m-1}(n) q^n. At level one f|S = f.
  static HolomorphicFormSpec eisenstein(int weight) {
    if (weight < 4 || weight % 2 != 0) throw std::invalid_argument("eisenstein: weight must be even and >= 4");
    const Rational C = Rational(-2 * weight) / bernoulli_number(weight);
    auto coeff = [C, weight](std::int64_t n) -> Rational {
      if (n < 0) throw std::out_of_range("eisenstein: negative index");
      return n == 0 ? Rational(1) : C * Rational(divisor_power_sum(n, weight - 1));
    };
    // sigma_{m-1}(n) <= zeta(m-1) n^(m-1) <= 2 n^(m-1)
    return {weight, coeff, coeff, 2 * std::abs(C.to_double())};
  }
};

namespace detail {

constexpr double kTwoPi = 2 * std::numbers::pi;

/// Number of terms N such that the tail of sum a_n e^{-2 pi n y} is below tol
/// for y >= y_min, using the growth bound.
inline std::int64_t truncation_terms(const HolomorphicFormSpec& f, double y_min, double tol) {
  const double peak = (f.weight - 1) / (kTwoPi * y_min);
  for (std::int64_t n = 1;; ++n) {
    const double bound = f.growth * std::pow(double(n), f.weight - 1) * std::exp(-kTwoPi * double(n) * y_min);
    // Past the peak the bound decreases geometrically with ratio <= e^{-2 pi y_min} (1+1/n)^(w-1).
    if (double(n) > 2 * peak + 1 && bound < tol) return n;
    if (n > 100000) throw std::runtime_error("truncation_terms: series converges too slowly");
  }
}

inline std::vector<double> coefficients(const std::function<Rational(std::int64_t)>& c, std::int64_t n) {
  std::vector<double> out(static_cast<std::size_t>(n + 1));
  for (std::int64_t i = 0; i <= n; ++i) out[static_cast<std::size_t>(i)] = c(i).to_double();
  return out;
}

/// sum_{n >= 1} c_n e^{2 pi i n z}, the series without its constant term.
inline Complex q_tail(const std::vector<double>& c, Complex z) {
  const Complex q = std::exp(Complex(0, kTwoPi) * z);
  Complex acc = 0;
  for (std::size_t n = c.size(); n-- > 1;) acc = (acc + c[n]) * q;
  return acc;
}

inline Complex poly_eval(const std::vector<Complex>& p, Complex z) {
  Complex acc = 0;
  for (std::size_t m = p.size(); m-- > 0;) acc = acc * z + p[m];
  return acc;
}

/// Rational to long double; exact up to rounding when numerator and
/// denominator fit in a double mantissa.
inline long double to_long_double(const Rational& r) {
  const auto fits = [](const BigInt& n) { return mpz_sizeinbase(n.get_mpz_t(), 2) <= 53; };
  if (fits(r.num()) && fits(r.den())) return (long double)r.num().get_d() / (long double)r.den().get_d();
  return (long double)r.to_double();
}

inline std::vector<LongComplex> to_complex(const std::vector<Rational>& p) {
  std::vector<LongComplex> out;
  out.reserve(p.size());
  for (const Rational& c : p) out.emplace_back(to_long_double(c), 0.0L);
  return out;
}

inline std::vector<Complex> narrow(const std::vector<LongComplex>& p) { return {p.begin(), p.end()}; }

struct Integral {
  Complex value = 0;
  double error = 0;
};

/// Adaptive Gauss-Kronrod on [lo, hi], real and imaginary parts separately.
template <class F>
Integral integrate(F&& g, double lo, double hi, double tol) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double er = 0, ei = 0;
  const double re = GK::integrate([&](double t) { return g(t).real(); }, lo, hi, 20, tol, &er);
  const double im = GK::integrate([&](double t) { return g(t).imag(); }, lo, hi, 20, tol, &ei);
  // Boost reports a relative estimate when tol is relative; convert to absolute.
  return {Complex(re, im), er * std::max(1.0, std::abs(re)) + ei * std::max(1.0, std::abs(im))};
}

/// int_0^1 x^l e^{i a x} dx for l = 0..L with a = 2 pi n, n >= 1.
inline std::vector<Complex> oscillatory_moments(double a, int L) {
  std::vector<Complex> I(static_cast<std::size_t>(L + 1));
  const Complex ia(0, a);
  I[0] = 0;  // e^{i a} = 1
  for (int l = 1; l <= L; ++l) I[static_cast<std::size_t>(l)] = (1.0 - double(l) * I[static_cast<std::size_t>(l - 1)]) / ia;
  return I;
}

/// Coefficients in x of p(x + i T), in extended precision: for large T the
/// constant-term contributions of geodesic and caps cancel to many digits.
inline std::vector<LongComplex> shift_imaginary(const std::vector<LongComplex>& p, double T) {
  const int deg = static_cast<int>(p.size()) - 1;
  std::vector<LongComplex> d(p.size(), 0.0L);
  for (int m = 0; m <= deg; ++m) {
    long double binom = 1;
    for (int l = 0; l <= m; ++l) {
      d[static_cast<std::size_t>(l)] +=
          p[static_cast<std::size_t>(m)] * binom * std::pow(LongComplex(0, T), m - l);
      binom = binom * (long double)(m - l) / (long double)(l + 1);
    }
  }
  return d;
}

struct CapIntegral {
  LongComplex value = 0;
  double magnitude = 0;  // sum of absolute values of the summands
};

/// int_0^1 h(x + i T) p(x + i T) dx with h = c_0 + sum c_n q^n, integrated
/// exactly in x term by term.
inline CapIntegral horocycle_integral(const std::vector<double>& c, const std::vector<LongComplex>& p, double T) {
  const std::vector<LongComplex> d = shift_imaginary(p, T);
  const int L = static_cast<int>(d.size()) - 1;
  CapIntegral out;
  for (int l = 0; l <= L; ++l) {
    const LongComplex t = (long double)c[0] * d[static_cast<std::size_t>(l)] / (long double)(l + 1);
    out.value += t;
    out.magnitude += (double)std::abs(t);
  }
  for (std::size_t n = 1; n < c.size(); ++n) {
    if (c[n] == 0) continue;
    const double damp = c[n] * std::exp(-kTwoPi * double(n) * T);
    const std::vector<Complex> I = oscillatory_moments(kTwoPi * double(n), L);
    Complex acc = 0;
    for (int l = 0; l <= L; ++l) acc += Complex(d[static_cast<std::size_t>(l)]) * I[static_cast<std::size_t>(l)];
    out.value += LongComplex(damp * acc);
    out.magnitude += std::abs(damp * acc);
  }
  return out;
}

}  // namespace detail

/// Lambda(f, s) = int_0^inf (f(iy) - a_0) y^s dy/y, continued to 0 < s < 2k+2.
inline double completed_L(const HolomorphicFormSpec& f, double s) {
  f.validate();
  const int m = f.weight;
  if (!(s > 0 && s < m)) throw std::invalid_argument("completed_L: s must lie in (0, weight)");
  const double eps = m % 4 == 0 ? 1.0 : -1.0;  // (-1)^{k+1} = i^weight
  auto sum = [&](const std::function<Rational(std::int64_t)>& c, double sigma) {
    // int_1^inf e^{-2 pi n y} y^{sigma-1} dy = (2 pi n)^{-sigma} Gamma(sigma, 2 pi n)
    double acc = 0;
    const double peak = (m - 1) / detail::kTwoPi;
    for (std::int64_t n = 1;; ++n) {
      const double x = detail::kTwoPi * double(n);
      const double term = c(n).to_double() * std::pow(x, -sigma) * boost::math::tgamma(sigma, x);
      acc += term;
      if (double(n) > peak && std::abs(term) < 1e-17 * std::max(1.0, std::abs(acc))) break;
      if (n > 100000) throw std::runtime_error("completed_L: series converges too slowly");
    }
    return acc;
  };
  const double a0 = f.a(0).to_double(), b0 = f.b(0).to_double();
  return sum(f.a, s) + eps * sum(f.b, m - s) - a0 / s - eps * b0 / (m - s);
}

struct PeriodResult {
  Complex value = 0;
  Complex geodesic = 0;   // the truncated modular symbol
  Complex cap_start = 0;  // -X^{T1}_infinity (x) w
  Complex cap_end = 0;    // +X^{T2}_0 (x) w'
  double abs_err_bound = 0;
};

/// The period of eta_f over the spectacle cycle of the imaginary axis with
/// coefficient v_{2j}, caps pushed in to heights T1 (at infinity) and T2 (at 0).
/// With caps the value is c_{k,j} Lambda(f, k+1-j) for all T1, T2 > 1.
inline PeriodResult spectacle_period(const HolomorphicFormSpec& f, int k, int j, double T1, double T2,
                                     bool include_caps = true) {
  f.validate();
  if (f.weight != 2 * k + 2) throw std::invalid_argument("spectacle_period: weight of f must be 2k+2");
  if (j <= -k || j >= k) throw std::invalid_argument("spectacle_period: need |j| <= k-1");
  if (!(T1 > 1) || !(T2 > 1)) throw std::invalid_argument("spectacle_period: truncation heights must exceed 1");

  constexpr double tail_tol = 1e-18;
  const std::int64_t N = detail::truncation_terms(f, 1.0, tail_tol);
  const std::vector<double> a = detail::coefficients(f.a, N), b = detail::coefficients(f.b, N);
  const double eps = std::numeric_limits<double>::epsilon();

  const SymVector v = weight_vector(k, j);
  const std::vector<LongComplex> pv_ld = detail::to_complex(unipotent_pairing_poly(v));
  const std::vector<Complex> pv = detail::narrow(pv_ld);
  const Complex I(0, 1);
  const LongComplex IL(0, 1);
  PeriodResult out;
  double magnitude = 0;
  // The constant-term pieces grow like T^(2k+1) and cancel between geodesic
  // and caps, so they are summed in extended precision.
  LongComplex geodesic(0), cap_start(0), cap_end(0);

  // Upper half of the geodesic: int_{i}^{i T1} f(z) P_v(z) dz with z = i y.
  {
    LongComplex poly = 0;  // a_0 part in closed form
    for (std::size_t m = 0; m < pv.size(); ++m)
      poly += (long double)a[0] * pv_ld[m] * std::pow(IL, (int)m + 1) *
              (std::pow((long double)T1, (int)m + 1) - 1) / (long double)(m + 1);
    const auto g = [&](double y) { return I * detail::q_tail(a, Complex(0, y)) * detail::poly_eval(pv, Complex(0, y)); };
    const detail::Integral r = detail::integrate(g, 1.0, T1, 1e-12);
    geodesic += poly + LongComplex(r.value);
    out.abs_err_bound += r.error;
    magnitude += (double)std::abs(poly);
  }
  // Lower half: y = 1/t, f(i/t) = (i t)^{2k+2} g(i t) with g = f|S.
  {
    // (i t)^{2k+2} P_v(i/t) / t^2 = i^{2k+2} sum_m p_m i^m t^{2k-m}
    std::vector<LongComplex> lower_ld(static_cast<std::size_t>(2 * k + 1), 0.0L);
    const LongComplex lead = std::pow(IL, 2 * k + 2);
    for (std::size_t m = 0; m < pv_ld.size(); ++m)
      lower_ld[static_cast<std::size_t>(2 * k) - m] += lead * pv_ld[m] * std::pow(IL, (int)m);
    const std::vector<Complex> lower = detail::narrow(lower_ld);
    LongComplex poly = 0;
    for (std::size_t e = 0; e < lower_ld.size(); ++e)
      poly += IL * (long double)b[0] * lower_ld[e] * (std::pow((long double)T2, (int)e + 1) - 1) /
              (long double)(e + 1);
    const auto g = [&](double t) { return I * detail::q_tail(b, Complex(0, t)) * detail::poly_eval(lower, Complex(t, 0)); };
    const detail::Integral r = detail::integrate(g, 1.0, T2, 1e-12);
    geodesic += poly + LongComplex(r.value);
    out.abs_err_bound += r.error;
    magnitude += (double)std::abs(poly);
  }

  if (include_caps) {
    const VecV axis = VecV::w0();
    const CapEnd at_inf = cap_at(axis, v, IsotropicLine::infinity(), Rational(1));
    const CapEnd at_zero = cap_at(axis, v, IsotropicLine::zero(), Rational(1));
    const auto pw = detail::to_complex(unipotent_pairing_poly(to_cusp_frame(at_inf.cusp, at_inf.cap)));
    const auto pw0 = detail::to_complex(unipotent_pairing_poly(to_cusp_frame(at_zero.cusp, at_zero.cap)));
    const detail::CapIntegral c1 = detail::horocycle_integral(a, pw, T1);
    const detail::CapIntegral c2 = detail::horocycle_integral(b, pw0, T2);
    cap_start = -c1.value;
    cap_end = c2.value;
    magnitude += c1.magnitude + c2.magnitude;
  }
  out.geodesic = Complex(geodesic);
  out.cap_start = Complex(cap_start);
  out.cap_end = Complex(cap_end);
  out.value = Complex(geodesic + cap_start + cap_end);
  // Rounding of the cancelling pieces, coefficient conversion, and the q-series tail.
  const double ext_eps = std::numeric_limits<long double>::epsilon();
  out.abs_err_bound += 64 * ext_eps * magnitude + 64 * eps * std::abs(out.value) +
                       4 * tail_tol * std::max(T1, T2) * double(pv.size());
  return out;
}

/// c_{k,j} = i (-i)^{k-j} 2^k (k!)^2 / ((k-j)! (k+j)!).
inline Complex period_constant(int k, int j) {
  if (j < -k || j > k) throw std::invalid_argument("period_constant: |j| must not exceed k");
  const Rational mag = pow(Rational(2), k) * Rational(factorial(k) * factorial(k), factorial(k - j) * factorial(k + j));
  // i (-i)^e cycles through i, 1, -i, -1
  static const Complex unit[4] = {Complex(0, 1), Complex(1, 0), Complex(0, -1), Complex(-1, 0)};
  return unit[(k - j) % 4] * mag.to_double();
}

struct GeodesicIntersection {
  Complex point;
  int sign = 0;
};

namespace detail {

/// Point of the upper half-plane attached to the negative line through
/// Phi(z) = (-1, -X, X^2 + Y^2) / Y; (x, Phi(z)) = 0 iff z lies on D_x.
inline std::array<double, 3> hyperboloid(double X, double Y) { return {-1 / Y, -X / Y, (X * X + Y * Y) / Y}; }

inline std::array<double, 3> hyperboloid_differential(double X, double Y, double tX, double tY) {
  const std::array<double, 3> dX{0, -1 / Y, 2 * X / Y};
  const std::array<double, 3> dY{1 / (Y * Y), X / (Y * Y), 1 - X * X / (Y * Y)};
  return {tX * dX[0] + tY * dY[0], tX * dX[1] + tY * dY[1], tX * dX[2] + tY * dY[2]};
}

/// triple() for double (a, b, c) coordinates.
inline double triple_d(const std::array<double, 3>& x, const std::array<double, 3>& y, const std::array<double, 3>& z) {
  const double X[3] = {x[2], x[1], -x[0]}, Y[3] = {y[2], y[1], -y[0]}, Z[3] = {z[2], z[1], -z[0]};
  return X[0] * (Y[1] * Z[2] - Y[2] * Z[1]) - X[1] * (Y[0] * Z[2] - Y[2] * Z[0]) + X[2] * (Y[0] * Z[1] - Y[1] * Z[0]);
}

/// Oriented tangent of D_x at (X, Y): (dPhi(t), x) is positive in Phi^perp,
/// where (e1, e2) is positive iff (e1, e2, Phi) is positive in V.
inline std::array<double, 2> oriented_tangent(const VecV& x, double X, double Y) {
  const double a = x.a.to_double(), b = x.b.to_double();
  // rotate the gradient of a|z|^2 - 2b Re z - c by 90 degrees
  std::array<double, 2> t{-2 * a * Y, 2 * a * X - 2 * b};
  const auto dphi = hyperboloid_differential(X, Y, t[0], t[1]);
  const std::array<double, 3> xv{a, b, x.c.to_double()};
  const double o = triple_d(dphi, xv, hyperboloid(X, Y));
  if (o == 0) throw std::invalid_argument("geodesic_intersection_numeric: degenerate tangent");
  if (o < 0) t = {-t[0], -t[1]};
  return t;
}

}  // namespace detail

/// Intersection point of D_x and D_y and the sign of det(t_x, t_y) of their
/// oriented tangents in the upper half-plane.
inline GeodesicIntersection geodesic_intersection_numeric(const VecV& x, const VecV& y) {
  const Rational gram = inner(x, x) * inner(y, y) - inner(x, y) * inner(x, y);
  if (qform(x).sign() <= 0 || qform(y).sign() <= 0 || gram.sign() <= 0)
    throw std::invalid_argument("geodesic_intersection_numeric: not a positive 2-plane");
  // a rho - 2 b X = c with rho = |z|^2, solved exactly.
  const Rational det = Rational(-2) * (x.a * y.b - y.a * x.b);
  if (det.is_zero()) throw std::invalid_argument("geodesic_intersection_numeric: geodesics do not meet transversally");
  const Rational rho = (x.c * Rational(-2) * y.b - y.c * Rational(-2) * x.b) / det;
  const Rational X = (x.a * y.c - y.a * x.c) / det;
  const Rational Y2 = rho - X * X;
  if (Y2.sign() <= 0) throw std::invalid_argument("geodesic_intersection_numeric: no intersection in the upper half-plane");
  const double Xd = X.to_double(), Yd = std::sqrt(Y2.to_double());
  const auto tx = detail::oriented_tangent(x, Xd, Yd);
  const auto ty = detail::oriented_tangent(y, Xd, Yd);
  const double d = tx[0] * ty[1] - tx[1] * ty[0];
  if (d == 0) throw std::invalid_argument("geodesic_intersection_numeric: tangents are parallel");
  return {Complex(Xd, Yd), d > 0 ? 1 : -1};
}

}  // namespace spectacle
