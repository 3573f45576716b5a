#pragma once

// H_k(V) realized as homogeneous forms of degree 2k in e1, e2. Coefficient i
// belongs to the monomial e1^i e2^(2k-i); e1^(k+i) e2^(k-i) has weight 2i.
// The dictionary with V is e1^2 <-> u, e2^2 <-> u', -2 e1 e2 <-> w0.

#include "spectacle/arith.hpp"
#include "spectacle/matrix.hpp"
#include "spectacle/quad_space.hpp"
#include "spectacle/rational.hpp"

#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace spectacle {

class SymVector {
 public:
  explicit SymVector(int k = 0) : k_(check_k(k)), coeffs_(static_cast<std::size_t>(2 * k + 1)) {}

  SymVector(int k, std::vector<Rational> coeffs) : k_(check_k(k)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != static_cast<std::size_t>(2 * k + 1))
      throw std::invalid_argument("SymVector: expected " + std::to_string(2 * k + 1) + " coefficients");
  }

  /// e1^i e2^(2k-i)
  static SymVector monomial(int k, int i, Rational coeff = 1) {
    SymVector v(k);
    v.at(i) = std::move(coeff);
    return v;
  }

  int k() const { return k_; }
  int degree() const { return 2 * k_; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  Rational& at(int i) { return coeffs_.at(static_cast<std::size_t>(i)); }
  const Rational& at(int i) const { return coeffs_.at(static_cast<std::size_t>(i)); }

  bool is_zero() const {
    for (const auto& c : coeffs_)
      if (!c.is_zero()) return false;
    return true;
  }

  SymVector& operator+=(const SymVector& o) {
    same_k(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  SymVector& operator-=(const SymVector& o) {
    same_k(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  friend SymVector operator+(SymVector x, const SymVector& y) { return x += y; }
  friend SymVector operator-(SymVector x, const SymVector& y) { return x -= y; }
  friend SymVector operator*(const Rational& s, SymVector x) {
    for (auto& c : x.coeffs_) c *= s;
    return x;
  }
  SymVector operator-() const { return Rational(-1) * *this; }
  friend bool operator==(const SymVector&, const SymVector&) = default;

  friend std::ostream& operator<<(std::ostream& os, const SymVector& v) {
    os << "[";
    for (std::size_t i = 0; i < v.coeffs_.size(); ++i) os << (i ? ", " : "") << v.coeffs_[i];
    return os << "]";
  }

 private:
  static int check_k(int k) {
    if (k < 0) throw std::invalid_argument("SymVector: k must be nonnegative");
    return k;
  }
  void same_k(const SymVector& o) const {
    if (o.k_ != k_) throw std::invalid_argument("SymVector: mismatched k");
  }

  int k_;
  std::vector<Rational> coeffs_;
};

namespace detail {

/// Product of binary forms given by coefficient lists indexed by the e1-degree.
inline std::vector<Rational> form_mul(const std::vector<Rational>& p, const std::vector<Rational>& q) {
  std::vector<Rational> r(p.size() + q.size() - 1);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i].is_zero()) continue;
    for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
  }
  return r;
}

inline std::vector<Rational> form_pow(const std::vector<Rational>& p, int e) {
  std::vector<Rational> r{Rational(1)};
  for (int i = 0; i < e; ++i) r = form_mul(r, p);
  return r;
}

}  // namespace detail

/// Substitution action e1 -> a e1 + c e2, e2 -> b e1 + d e2.
inline SymVector act(const GammaMat& g, const SymVector& v) {
  const int n = v.degree();
  // Linear forms as coefficient lists [e2-coefficient, e1-coefficient].
  const std::vector<Rational> img1{g.c(), g.a()};
  const std::vector<Rational> img2{g.d(), g.b()};
  std::vector<std::vector<Rational>> pow1(static_cast<std::size_t>(n + 1)), pow2(static_cast<std::size_t>(n + 1));
  pow1[0] = pow2[0] = {Rational(1)};
  for (int i = 1; i <= n; ++i) {
    pow1[static_cast<std::size_t>(i)] = detail::form_mul(pow1[static_cast<std::size_t>(i - 1)], img1);
    pow2[static_cast<std::size_t>(i)] = detail::form_mul(pow2[static_cast<std::size_t>(i - 1)], img2);
  }
  SymVector out(v.k());
  for (int i = 0; i <= n; ++i) {
    if (v.at(i).is_zero()) continue;
    const auto term = detail::form_mul(pow1[static_cast<std::size_t>(i)], pow2[static_cast<std::size_t>(n - i)]);
    for (int j = 0; j <= n; ++j) out.at(j) += v.at(i) * term[static_cast<std::size_t>(j)];
  }
  return out;
}

/// The derivation R with R e2 = e1, R e1 = 0.
inline SymVector raising(const SymVector& v) {
  const int n = v.degree();
  SymVector out(v.k());
  for (int i = 0; i < n; ++i) out.at(i + 1) = Rational(n - i) * v.at(i);
  return out;
}

/// Invariant symmetric pairing normalized by (u^k, u'^k) = (-1)^k:
/// (e1^a e2^(2k-a), e1^(2k-a) e2^a) = (-1)^(k+a) / C(2k, a).
inline Rational pairing(const SymVector& x, const SymVector& y) {
  if (x.k() != y.k()) throw std::invalid_argument("pairing: mismatched k");
  const int n = x.degree();
  Rational sum(0);
  for (int a = 0; a <= n; ++a) {
    if (x.at(a).is_zero() || y.at(n - a).is_zero()) continue;
    const Rational t = x.at(a) * y.at(n - a) / Rational(binomial(n, a));
    if ((x.k() + a) % 2 == 0) sum += t;
    else sum -= t;
  }
  return sum;
}

/// Q_x^k with Q_x = c e1^2 - 2b e1 e2 - a e2^2, the image of the harmonic
/// projection of x^k.
inline SymVector embed_power(const VecV& x, int k) {
  const std::vector<Rational> q{-x.a, Rational(-2) * x.b, x.c};
  return SymVector(k, detail::form_pow(q, k));
}

/// Inverse of embed_power for k = 1.
inline VecV to_vec(const SymVector& v) {
  if (v.k() != 1) throw std::invalid_argument("to_vec: only defined for k = 1");
  return {-v.at(0), -v.at(1) / Rational(2), v.at(2)};
}

/// c_k = (-2)^k (k!)^2 / (2k)!
inline Rational c_k(int k) { return pow(Rational(-2), k) * Rational(factorial(k) * factorial(k), factorial(2 * k)); }

/// v_{2i} = (-2)^k (k!)^2 / ((k+i)! (k-i)!) e1^(k+i) e2^(k-i)
inline SymVector weight_vector(int k, int i) {
  if (i < -k || i > k) throw std::invalid_argument("weight_vector: |i| must not exceed k");
  const Rational coeff =
      pow(Rational(-2), k) * Rational(factorial(k) * factorial(k), factorial(k + i) * factorial(k - i));
  return SymVector::monomial(k, k + i, coeff);
}

/// Coefficients p_m of the polynomial t -> (n(t) u'^k, w) = sum_m p_m t^m.
inline std::vector<Rational> unipotent_pairing_poly(const SymVector& w) {
  // n(t) e2^(2k) = sum_a C(2k, a) t^a e1^a e2^(2k-a); the binomial cancels in the pairing.
  const int n = w.degree();
  std::vector<Rational> p(static_cast<std::size_t>(n + 1));
  for (int a = 0; a <= n; ++a) {
    const Rational& c = w.at(n - a);
    p[static_cast<std::size_t>(a)] = ((w.k() + a) % 2 == 0) ? c : -c;
  }
  return p;
}

}  // namespace spectacle
