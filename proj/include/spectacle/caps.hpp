#pragma once

// Cap vectors: the unique w with (gamma^{-1} - Id) w = v, gamma = n(M), whose
// boundary period over one width vanishes. Everything is solved at the cusp
// infinity; other cusps are handled by transport through sigma_l.

#include "spectacle/arith.hpp"
#include "spectacle/matrix.hpp"
#include "spectacle/quad_space.hpp"
#include "spectacle/rational.hpp"
#include "spectacle/sym_rep.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace spectacle {

struct CapInput {
  int k = 1;
  IsotropicLine cusp = IsotropicLine::infinity();
  Rational width = 1;     // M
  Rational position = 0;  // r, the boundary point n(r) z_l
  SymVector v{1};         // jump value in the normalized coordinates of the cusp
};

/// Integral of the polynomial sum_m p_m t^m over [lo, hi].
inline Rational integrate_poly(const std::vector<Rational>& p, const Rational& lo, const Rational& hi) {
  Rational acc(0);
  for (std::size_t m = p.size(); m-- > 0;) {
    const Rational c = p[m] / Rational(static_cast<long>(m + 1));
    acc += c * (pow(hi, static_cast<long>(m + 1)) - pow(lo, static_cast<long>(m + 1)));
  }
  return acc;
}

/// Boundary period of w over [r, r + M]: the integral of (n(t) u'^k, w) dt.
inline Rational cap_period(const SymVector& w, const Rational& r, const Rational& M) {
  return integrate_poly(unipotent_pairing_poly(w), r, r + M);
}

/// Solves (n(-M) - Id) w = v by forward substitution and fixes the kernel
/// component u^k by the period normalization.
inline SymVector cap_solve(const CapInput& in) {
  const int k = in.k;
  const int n = 2 * k;
  if (in.v.k() != k) throw std::invalid_argument("cap_solve: jump vector has the wrong k");
  if (in.width.sign() <= 0) throw std::invalid_argument("cap_solve: width must be positive");
  if (!in.v.at(0).is_zero()) throw std::invalid_argument("cap_solve: no primitive: jump has highest-weight component");

  // Columns of A = n(-M) - Id; A maps index j to indices > j.
  const GammaMat step = GammaMat::unipotent(-in.width);
  std::vector<SymVector> cols;
  cols.reserve(static_cast<std::size_t>(n + 1));
  for (int j = 0; j <= n; ++j) cols.push_back(act(step, SymVector::monomial(k, j)) - SymVector::monomial(k, j));

  // Row i + 1 determines w_i; the diagonal entry A[i+1][i] = -M (n - i) is nonzero.
  SymVector w(k);
  for (int i = 0; i < n; ++i) {
    Rational rhs = in.v.at(i + 1);
    for (int j = 0; j < i; ++j) rhs -= cols[static_cast<std::size_t>(j)].at(i + 1) * w.at(j);
    w.at(i) = rhs / cols[static_cast<std::size_t>(i)].at(i + 1);
  }
  // Adding lambda u^k shifts the period by lambda (-1)^k M.
  const Rational period = cap_period(w, in.position, in.width);
  const Rational sign = k % 2 == 0 ? Rational(1) : Rational(-1);
  w.at(n) -= sign * period / in.width;
  return w;
}

/// Bernoulli closed form for the cap of v = n(r) v_{2i}:
/// w = sum_{j=i-1}^{k} (-M)^(j-i) C(k+j, j+1-i) B_{j+1-i}(-r/M) / (k+i) v_{2j}.
inline SymVector cap_closed_form(int k, int i, const Rational& r, const Rational& M) {
  if (i < -k + 1 || i > k) throw std::invalid_argument("cap_closed_form: weight index out of range");
  if (M.sign() <= 0) throw std::invalid_argument("cap_closed_form: width must be positive");
  const Rational x = -r / M;
  SymVector w(k);
  for (int j = i - 1; j <= k; ++j) {
    const Rational coeff = pow(-M, j - i) * Rational(binomial(k + j, j + 1 - i)) * bernoulli_poly(j + 1 - i, x) /
                           Rational(k + i);
    w += coeff * weight_vector(k, j);
  }
  return w;
}

/// Transport between actual coordinates and the normalized coordinates at a cusp.
inline SymVector to_cusp_frame(const IsotropicLine& l, const SymVector& v) { return act(l.sigma().inverse(), v); }
inline SymVector from_cusp_frame(const IsotropicLine& l, const SymVector& v) { return act(l.sigma(), v); }

/// Position r of the endpoint of D_x at the cusp l: in the frame of l the
/// geodesic is the vertical line Re z = r.
inline Rational endpoint_position(const VecV& x, const IsotropicLine& l) {
  const VecV y = conjugate(l.sigma().inverse(), x);
  if (!y.a.is_zero() || y.b.is_zero()) throw std::invalid_argument("endpoint_position: cusp is not an endpoint of D_x");
  return -y.c / (Rational(2) * y.b);
}

struct CapEnd {
  IsotropicLine cusp;
  Rational width;
  Rational position;
  SymVector cap;  // actual coordinates
};

/// C_x tensor v0 capped off at both ends: -X_{l,c} (x) w + X_{l',c'} (x) w'.
struct SpectacleCycle {
  VecV x;
  int k = 1;
  SymVector v0;
  std::optional<CapEnd> start, end;  // empty for closed cycles

  bool closed() const { return !start.has_value(); }
};

/// Cap at one end of D_x, with v0 the coefficient in actual coordinates.
inline CapEnd cap_at(const VecV& x, const SymVector& v0, const IsotropicLine& l, const Rational& width) {
  CapInput in;
  in.k = v0.k();
  in.cusp = l;
  in.width = width;
  in.position = endpoint_position(x, l);
  in.v = to_cusp_frame(l, v0);
  return {l, width, in.position, from_cusp_frame(l, cap_solve(in))};
}

/// Assembles the spectacle cycle of x. Widths default to 1 (level one).
inline SpectacleCycle spectacle_assemble(const VecV& x, int k, const Rational& width_start = 1,
                                         const Rational& width_end = 1) {
  if (qform(x).sign() <= 0) throw std::invalid_argument("spectacle_assemble: q(x) must be positive");
  SpectacleCycle cyc{x, k, embed_power(x, k), std::nullopt, std::nullopt};
  if (!detail::rational_sqrt(qform(x))) return cyc;
  const auto [l, lp] = isotropic_lines_of(x);
  cyc.start = cap_at(x, cyc.v0, l, width_start);
  cyc.end = cap_at(x, cyc.v0, lp, width_end);
  return cyc;
}

}  // namespace spectacle
