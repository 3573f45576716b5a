#pragma once

#include "spectacle/rational.hpp"

#include <ostream>
#include <stdexcept>

namespace spectacle {

/// Element of SL_2(Q): integral matrices of Gamma and rational unipotents n(t).
class GammaMat {
 public:
  GammaMat() : GammaMat(1, 0, 0, 1) {}

  GammaMat(Rational a, Rational b, Rational c, Rational d)
      : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
    if (a_ * d_ - b_ * c_ != Rational(1)) throw std::invalid_argument("GammaMat: determinant must be 1");
  }

  static GammaMat identity() { return {}; }
  /// n(t) = [[1, t], [0, 1]]
  static GammaMat unipotent(const Rational& t) { return {1, t, 0, 1}; }
  /// [[0, -1], [1, 0]]
  static GammaMat fricke() { return {0, -1, 1, 0}; }

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  const Rational& c() const { return c_; }
  const Rational& d() const { return d_; }

  bool is_integral() const { return a_.is_integer() && b_.is_integer() && c_.is_integer() && d_.is_integer(); }

  GammaMat inverse() const { return {d_, -b_, -c_, a_}; }

  friend GammaMat operator*(const GammaMat& x, const GammaMat& y) {
    return {x.a_ * y.a_ + x.b_ * y.c_, x.a_ * y.b_ + x.b_ * y.d_,
            x.c_ * y.a_ + x.d_ * y.c_, x.c_ * y.b_ + x.d_ * y.d_};
  }
  friend bool operator==(const GammaMat&, const GammaMat&) = default;

  friend std::ostream& operator<<(std::ostream& os, const GammaMat& g) {
    return os << "[[" << g.a_ << ", " << g.b_ << "], [" << g.c_ << ", " << g.d_ << "]]";
  }

 private:
  Rational a_, b_, c_, d_;
};

}  // namespace spectacle
