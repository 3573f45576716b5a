#pragma once

// Exact scalars. BigInt is GMP's mpz_class; Rational wraps mpq_class so that
// every value is canonical (lowest terms, positive denominator) by construction.

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace spectacle {

using BigInt = mpz_class;

class Rational {
 public:
  Rational() = default;

  template <std::integral T>
  Rational(T n) : v_(static_cast<long>(n)) {}  // NOLINT(google-explicit-constructor)

  Rational(const BigInt& n) : v_(n) {}  // NOLINT(google-explicit-constructor)

  Rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }

  template <std::integral A, std::integral B>
  Rational(A num, B den) : Rational(BigInt(static_cast<long>(num)), BigInt(static_cast<long>(den))) {}

  /// Parses "p", "-p" or "p/q".
  static Rational parse(std::string_view text) {
    const auto slash = text.find('/');
    try {
      if (slash == std::string_view::npos) return Rational(BigInt(std::string(text)));
      return Rational(BigInt(std::string(text.substr(0, slash))),
                      BigInt(std::string(text.substr(slash + 1))));
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("Rational: cannot parse '" + std::string(text) + "'");
    }
  }

  BigInt num() const { return v_.get_num(); }
  BigInt den() const { return v_.get_den(); }
  int sign() const { return sgn(v_); }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }
  double to_double() const { return v_.get_d(); }
  const mpq_class& raw() const { return v_; }

  /// Canonical text: "p" for integers, "p/q" otherwise.
  std::string str() const { return v_.get_str(); }
  /// Always "p/q", with "/1" for integers. This is the wire format.
  std::string fraction_str() const { return v_.get_num().get_str() + "/" + v_.get_den().get_str(); }

  Rational operator-() const { return from_raw(-v_); }
  Rational abs() const { return from_raw(::abs(v_)); }
  Rational inverse() const {
    if (is_zero()) throw std::domain_error("Rational: inverse of zero");
    return from_raw(1 / v_);
  }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("Rational: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  static Rational from_raw(mpq_class v) {
    Rational r;
    r.v_ = std::move(v);
    return r;
  }

  mpq_class v_{0};
};

/// x^e for integer e (negative exponents invert).
inline Rational pow(const Rational& x, long e) {
  if (e < 0) return pow(x.inverse(), -e);
  Rational result(1);
  Rational base = x;
  while (e > 0) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

/// Floor of a rational as a BigInt.
inline BigInt floor(const Rational& x) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), x.num().get_mpz_t(), x.den().get_mpz_t());
  return q;
}

/// x mod m in [0, m) for m > 0.
inline Rational mod(const Rational& x, const Rational& m) {
  if (m.sign() <= 0) throw std::domain_error("mod: modulus must be positive");
  return x - m * Rational(floor(x / m));
}

inline BigInt lcm(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline BigInt gcd(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

/// Narrowing conversion; throws if the value does not fit.
inline std::int64_t to_int64(const BigInt& n) {
  if (!n.fits_slong_p()) throw std::overflow_error("BigInt does not fit in 64 bits: " + n.get_str());
  return n.get_si();
}

}  // namespace spectacle
