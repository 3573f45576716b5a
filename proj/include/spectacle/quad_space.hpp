#pragma once

// The rational quadratic space V of signature (2,1), realized as trace-zero
// 2x2 matrices x = [[b, c], [a, -b]] with q(x) = -det(x) and (x, y) = tr(xy).
// In terms of u = [[0,1],[0,0]], u' = [[0,0],[-1,0]], w0 = [[1,0],[0,-1]]:
// x = b w0 + c u - a u'.

#include "spectacle/matrix.hpp"
#include "spectacle/rational.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spectacle {

struct VecV {
  Rational a, b, c;

  static VecV u() { return {0, 0, 1}; }
  static VecV u_prime() { return {-1, 0, 0}; }
  static VecV w0() { return {0, 1, 0}; }

  /// Coordinates with respect to the ordered basis (u, w0, u').
  std::array<Rational, 3> witt_coords() const { return {c, b, -a}; }
  static VecV from_witt(const Rational& cu, const Rational& cw0, const Rational& cup) { return {-cup, cw0, cu}; }

  bool is_zero() const { return a.is_zero() && b.is_zero() && c.is_zero(); }

  VecV operator-() const { return {-a, -b, -c}; }
  friend VecV operator+(const VecV& x, const VecV& y) { return {x.a + y.a, x.b + y.b, x.c + y.c}; }
  friend VecV operator-(const VecV& x, const VecV& y) { return {x.a - y.a, x.b - y.b, x.c - y.c}; }
  friend VecV operator*(const Rational& s, const VecV& x) { return {s * x.a, s * x.b, s * x.c}; }
  friend bool operator==(const VecV&, const VecV&) = default;
  friend auto operator<=>(const VecV& x, const VecV& y) {
    if (auto o = x.a <=> y.a; o != 0) return o;
    if (auto o = x.b <=> y.b; o != 0) return o;
    return x.c <=> y.c;
  }

  friend std::ostream& operator<<(std::ostream& os, const VecV& x) {
    return os << "(" << x.a << ", " << x.b << ", " << x.c << ")";
  }
};

inline Rational inner(const VecV& x, const VecV& y) {
  return Rational(2) * x.b * y.b + x.a * y.c + y.a * x.c;
}

inline Rational qform(const VecV& x) { return x.b * x.b + x.a * x.c; }

/// g x g^{-1}.
inline VecV conjugate(const GammaMat& g, const VecV& x) {
  const GammaMat gi = g.inverse();
  // m = g * [[b, c], [a, -b]] * g^{-1}
  const Rational p00 = g.a() * x.b + g.b() * x.a, p01 = g.a() * x.c - g.b() * x.b;
  const Rational p10 = g.c() * x.b + g.d() * x.a, p11 = g.c() * x.c - g.d() * x.b;
  const Rational m00 = p00 * gi.a() + p01 * gi.c();
  const Rational m01 = p00 * gi.b() + p01 * gi.d();
  const Rational m10 = p10 * gi.a() + p11 * gi.c();
  return {m10, m00, m01};
}

/// Determinant of (u, w0, u')-coordinates. The orientation constant is 1 here;
/// the e-basis volume of (u, w0, u') is sqrt(2), so only signs are meaningful.
inline Rational triple(const VecV& x, const VecV& y, const VecV& z) {
  const auto X = x.witt_coords(), Y = y.witt_coords(), Z = z.witt_coords();
  return X[0] * (Y[1] * Z[2] - Y[2] * Z[1]) - X[1] * (Y[0] * Z[2] - Y[2] * Z[0]) +
         X[2] * (Y[0] * Z[1] - Y[1] * Z[0]);
}

/// The vector with (cross(x, y), z) = triple(x, y, z) for all z.
/// With Gram matrix G of (u, w0, u'), the coordinates are G^{-1} (X x Y).
inline VecV cross(const VecV& x, const VecV& y) {
  const auto X = x.witt_coords(), Y = y.witt_coords();
  const Rational e0 = X[1] * Y[2] - X[2] * Y[1];
  const Rational e1 = X[2] * Y[0] - X[0] * Y[2];
  const Rational e2 = X[0] * Y[1] - X[1] * Y[0];
  // G = [[0,0,-1],[0,2,0],[-1,0,0]] is its own inverse up to the middle entry.
  return VecV::from_witt(-e2, e1 / Rational(2), -e0);
}

/// Intersection multiplicity of the oriented geodesics D_x, D_y: +1 iff x x y
/// points down. With e3 = (u + u')/sqrt(2) and (v, e3) = -v_3, that is
/// sgn((x x y, u + u')) = +1.
inline int epsilon_sign(const VecV& x, const VecV& y) {
  const Rational gram = inner(x, x) * inner(y, y) - inner(x, y) * inner(x, y);
  if (qform(x).sign() <= 0 || qform(y).sign() <= 0 || gram.sign() <= 0)
    throw std::invalid_argument("epsilon_sign: not a positive 2-plane");
  return triple(x, y, VecV::u() + VecV::u_prime()).sign();
}

namespace detail {

inline std::optional<BigInt> exact_sqrt(const BigInt& n) {
  if (n < 0 || mpz_perfect_square_p(n.get_mpz_t()) == 0) return std::nullopt;
  BigInt r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

inline std::optional<Rational> rational_sqrt(const Rational& x) {
  auto n = exact_sqrt(x.num());
  auto d = exact_sqrt(x.den());
  if (!n || !d) return std::nullopt;
  return Rational(*n, *d);
}

/// (g, s, t) with s a + t b = g = gcd(a, b) >= 0.
inline std::array<BigInt, 3> ext_gcd(const BigInt& a, const BigInt& b) {
  BigInt g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return {g, s, t};
}

}  // namespace detail

/// A cusp [alpha : beta] and its oriented primitive generator
/// u_l = sigma_l u sigma_l^{-1} = [[-alpha beta, alpha^2], [-beta^2, alpha beta]].
struct IsotropicLine {
  BigInt alpha, beta;

  /// Normalizes the sign so that beta > 0, or (alpha, beta) = (1, 0).
  static IsotropicLine from_cusp(BigInt alpha, BigInt beta) {
    if (alpha == 0 && beta == 0) throw std::invalid_argument("IsotropicLine: [0:0] is not a cusp");
    const BigInt g = gcd(alpha, beta);
    alpha /= g;
    beta /= g;
    if (beta < 0 || (beta == 0 && alpha < 0)) {
      alpha = -alpha;
      beta = -beta;
    }
    return {alpha, beta};
  }
  static IsotropicLine infinity() { return {1, 0}; }
  static IsotropicLine zero() { return {0, 1}; }

  VecV generator() const {
    return {Rational(-beta * beta), Rational(-alpha * beta), Rational(alpha * alpha)};
  }

  /// Integral matrix with first column (alpha, beta).
  GammaMat sigma() const {
    // alpha delta - beta gamma = 1
    const auto [g, s, t] = detail::ext_gcd(alpha, beta);
    return {Rational(alpha), Rational(BigInt(-t)), Rational(beta), Rational(s)};
  }

  bool contains(const VecV& x) const {
    const VecV g = generator();
    // x is a multiple of g iff all 2x2 minors vanish.
    return x.a * g.b == x.b * g.a && x.a * g.c == x.c * g.a && x.b * g.c == x.c * g.b;
  }

  friend bool operator==(const IsotropicLine&, const IsotropicLine&) = default;
  friend std::ostream& operator<<(std::ostream& os, const IsotropicLine& l) {
    return os << "[" << l.alpha << ":" << l.beta << "]";
  }
};

/// The oriented pair (l_x, l'_x) of cusps at the ends of the geodesic D_x, so
/// that (u_{l_x}, x, u_{l'_x}) is a properly oriented basis.
inline std::pair<IsotropicLine, IsotropicLine> isotropic_lines_of(const VecV& x) {
  const Rational qx = qform(x);
  const auto root = qx.sign() > 0 ? detail::rational_sqrt(qx) : std::nullopt;
  if (!root) throw std::invalid_argument("isotropic_lines_of: cycle is closed (non-split); no rational endpoints");
  // (x, u_[alpha:beta]) = a alpha^2 - 2 b alpha beta - c beta^2 = 0.
  std::vector<IsotropicLine> lines;
  auto add_ratio = [&](const Rational& t) { lines.push_back(IsotropicLine::from_cusp(t.num(), t.den())); };
  if (x.a.is_zero()) {
    lines.push_back(IsotropicLine::infinity());
    add_ratio(-x.c / (Rational(2) * x.b));
  } else {
    add_ratio((x.b + *root) / x.a);
    add_ratio((x.b - *root) / x.a);
  }
  if (triple(lines[0].generator(), x, lines[1].generator()).sign() < 0) std::swap(lines[0], lines[1]);
  return {lines[0], lines[1]};
}

/// An even lattice L (given by a basis) together with a coset representative h.
struct LatticeCoset {
  std::array<VecV, 3> basis;
  VecV shift;

  LatticeCoset(std::array<VecV, 3> basis_, VecV shift_) : basis(std::move(basis_)), shift(std::move(shift_)) {
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j)
        if (!inner(basis[i], basis[j]).is_integer()) throw std::invalid_argument("LatticeCoset: Gram matrix not integral");
      if (!(inner(basis[i], basis[i]) / Rational(2)).is_integer())
        throw std::invalid_argument("LatticeCoset: lattice is not even");
    }
    if (triple(basis[0], basis[1], basis[2]).is_zero()) throw std::invalid_argument("LatticeCoset: basis is degenerate");
  }

  /// Z w0 + Z u + Z u', shifted by 0 or w0/2.
  static LatticeCoset standard(bool half_shift) {
    return LatticeCoset({VecV::w0(), VecV::u(), VecV::u_prime()},
                        half_shift ? Rational(1, 2) * VecV::w0() : VecV{});
  }

  /// Coordinates of x in the lattice basis (rational).
  std::array<Rational, 3> coords(const VecV& x) const {
    // Cramer's rule with triple as the determinant.
    const Rational det = triple(basis[0], basis[1], basis[2]);
    return {triple(x, basis[1], basis[2]) / det, triple(basis[0], x, basis[2]) / det,
            triple(basis[0], basis[1], x) / det};
  }

  bool contains(const VecV& x) const {
    const auto n = coords(x - shift);
    return n[0].is_integer() && n[1].is_integer() && n[2].is_integer();
  }
};

/// A set M Z + h of rationals, with M > 0 and 0 <= h < M.
struct Progression {
  Rational M, h;

  bool contains(const Rational& s) const { return ((s - h) / M).is_integer(); }
  friend bool operator==(const Progression&, const Progression&) = default;
};

namespace detail {

/// Intersection of two arithmetic progressions of rationals.
inline std::optional<Progression> intersect(const Progression& p, const Progression& q) {
  const BigInt D = lcm(lcm(p.M.den(), p.h.den()), lcm(q.M.den(), q.h.den()));
  const Rational Dr(D);
  const BigInt A1 = (p.h * Dr).num(), D1 = (p.M * Dr).num();
  const BigInt A2 = (q.h * Dr).num(), D2 = (q.M * Dr).num();
  const BigInt g = gcd(D1, D2);
  const BigInt diff = A2 - A1;
  if (diff % g != 0) return std::nullopt;
  // x = A1 + D1 t with D1 t = diff (mod D2)
  const BigInt m = D2 / g;
  BigInt t(0);
  if (m != 1) {
    BigInt inv;
    const BigInt d1g = D1 / g;
    mpz_invert(inv.get_mpz_t(), d1g.get_mpz_t(), m.get_mpz_t());
    BigInt r = (diff / g) * inv;
    mpz_fdiv_r(t.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
  }
  const Rational modulus(lcm(D1, D2), D);
  return Progression{modulus, mod(Rational(A1 + D1 * t, D), modulus)};
}

}  // namespace detail

/// The progression {s : s u_l in shift + L}, or nothing if the coset misses l.
inline std::optional<Progression> line_lattice_data(const LatticeCoset& coset, const IsotropicLine& line) {
  const auto p = coset.coords(line.generator());
  const auto q0 = coset.coords(coset.shift);
  // s p_i - q0_i must be an integer for each i.
  std::optional<Progression> acc;
  for (std::size_t i = 0; i < 3; ++i) {
    if (p[i].is_zero()) {
      if (!q0[i].is_integer()) return std::nullopt;
      continue;
    }
    const Rational step = p[i].abs().inverse();
    const Progression cur{step, mod(q0[i] / p[i], step)};
    if (!acc) {
      acc = cur;
    } else {
      acc = detail::intersect(*acc, cur);
      if (!acc) return std::nullopt;
    }
  }
  if (!acc) throw std::logic_error("line_lattice_data: zero generator");
  return acc;
}

/// Restrictions for enumerate_coset. The U-part of x is its component
/// c u - a u' in U = span(u, u'); its norm is q(x_U) = a c.
struct CosetQuery {
  enum class UPart { any, positive, zero };

  std::optional<Rational> q_min, q_max;  // inclusive window on q(x)
  std::optional<BigInt> box;             // |n_i| <= box on lattice coordinates
  UPart u_part = UPart::any;
};

namespace detail {

/// Index j of the basis vector spanning Q u, Q w0, Q u' respectively, when the
/// basis is adapted to the Witt splitting.
inline std::optional<std::array<std::size_t, 3>> witt_adapted(const LatticeCoset& coset) {
  std::array<std::optional<std::size_t>, 3> slot;
  for (std::size_t j = 0; j < 3; ++j) {
    const VecV& e = coset.basis[j];
    const int nz = !e.a.is_zero() + !e.b.is_zero() + !e.c.is_zero();
    if (nz != 1) return std::nullopt;
    const std::size_t s = !e.c.is_zero() ? 0 : (!e.b.is_zero() ? 1 : 2);
    if (slot[s]) return std::nullopt;
    slot[s] = j;
  }
  return std::array<std::size_t, 3>{*slot[0], *slot[1], *slot[2]};
}

/// Members of the progression step Z + offset with |value| <= bound, ascending.
inline std::vector<Rational> progression_members(const Rational& step, const Rational& offset, const Rational& bound) {
  std::vector<Rational> out;
  const Rational s = step.abs();
  const Rational start = mod(offset, s);
  const BigInt lo = floor((-bound - start) / s);
  for (BigInt n = lo;; ++n) {
    const Rational v = start + Rational(n) * s;
    if (v > bound) break;
    if (v >= -bound) out.push_back(v);
  }
  return out;
}

/// Smallest nonzero |value| in step Z + offset.
inline Rational min_nonzero_abs(const Rational& step, const Rational& offset) {
  const Rational s = step.abs();
  const Rational r = mod(offset, s);
  if (r.is_zero()) return s;
  return std::min(r, s - r);
}

}  // namespace detail

/// All vectors of the coset satisfying the query, sorted, each once. The query
/// must bound the search region: either a coordinate box, or an upper q-bound
/// together with a positive or zero U-part on a Witt-adapted basis.
inline std::vector<VecV> enumerate_coset(const LatticeCoset& coset, const CosetQuery& query) {
  using UPart = CosetQuery::UPart;
  auto in_window = [&](const VecV& x) {
    const Rational qx = qform(x);
    if (query.q_min && qx < *query.q_min) return false;
    if (query.q_max && qx > *query.q_max) return false;
    const Rational qu = x.a * x.c;
    if (query.u_part == UPart::positive && qu.sign() <= 0) return false;
    if (query.u_part == UPart::zero && !(x.a.is_zero() && x.c.is_zero())) return false;
    return true;
  };
  std::vector<VecV> out;
  if (query.q_min && query.q_max && *query.q_min > *query.q_max) return out;

  if (query.box) {
    const BigInt B = *query.box;
    if (B < 0) return out;
    for (BigInt i = -B; i <= B; ++i)
      for (BigInt j = -B; j <= B; ++j)
        for (BigInt l = -B; l <= B; ++l) {
          const VecV x = coset.shift + Rational(i) * coset.basis[0] + Rational(j) * coset.basis[1] +
                         Rational(l) * coset.basis[2];
          if (in_window(x)) out.push_back(x);
        }
    std::sort(out.begin(), out.end());
    return out;
  }

  const auto slots = detail::witt_adapted(coset);
  if (!query.q_max || query.u_part == UPart::any || !slots)
    throw std::invalid_argument(
        "enumerate_coset: unbounded enumeration; give a coordinate box, or an upper q bound with a positive or zero "
        "U-part on a Witt-adapted basis");

  // Coordinate progressions: c (u-coefficient), b (w0-coefficient), -a (u'-coefficient).
  const VecV& bu = coset.basis[(*slots)[0]];
  const VecV& bw = coset.basis[(*slots)[1]];
  const VecV& bup = coset.basis[(*slots)[2]];
  const Rational step_m1 = bu.c, off_m1 = coset.shift.c;
  const Rational step_b = bw.b, off_b = coset.shift.b;
  const Rational step_m2 = -bup.a, off_m2 = -coset.shift.a;
  const Rational& hi = *query.q_max;

  if (query.u_part == UPart::zero) {
    if (!mod(off_m1, step_m1.abs()).is_zero() || !mod(off_m2, step_m2.abs()).is_zero()) return out;
    if (hi.sign() < 0) return out;
    const Rational bound = hi + Rational(1);  // |b| <= sqrt(hi) < hi + 1
    for (const Rational& b : detail::progression_members(step_b, off_b, bound)) {
      const VecV x{0, b, 0};
      if (in_window(x)) out.push_back(x);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  // Positive U-part: q(x_U) = -m1 m2 > 0 and b^2 < hi.
  if (hi.sign() <= 0) return out;
  const Rational mu2 = detail::min_nonzero_abs(step_m2, off_m2);
  for (const Rational& b : detail::progression_members(step_b, off_b, hi + 1)) {
    const Rational rest = hi - b * b;
    if (rest.sign() <= 0) continue;
    for (const Rational& m1 : detail::progression_members(step_m1, off_m1, rest / mu2)) {
      if (m1.is_zero()) continue;
      for (const Rational& m2 : detail::progression_members(step_m2, off_m2, rest / m1.abs())) {
        if (m2.is_zero() || m1.sign() == m2.sign()) continue;
        const VecV x{-m2, b, m1};
        if (in_window(x)) out.push_back(x);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace spectacle
