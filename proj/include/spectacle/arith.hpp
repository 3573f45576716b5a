#pragma once

// Bernoulli numbers and polynomials, quadratic characters, generalized
// Bernoulli numbers and divisor sums over exact rationals.

#include "spectacle/rational.hpp"

#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spectacle {

inline BigInt binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return BigInt(0);
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

inline BigInt factorial(long n) {
  if (n < 0) throw std::domain_error("factorial of a negative number");
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

namespace detail {

// Memo of B_0..B_n, filled on demand under a lock. Entries are never
// mutated after being appended, so returned values are copies of stable data.
class BernoulliTable {
 public:
  Rational get(long n) {
    std::lock_guard lock(mu_);
    while (static_cast<long>(table_.size()) <= n) extend();
    return table_[static_cast<std::size_t>(n)];
  }

 private:
  // sum_{j=0}^{m} C(m+1, j) B_j = 0  =>  B_m = -(1/(m+1)) sum_{j<m} C(m+1, j) B_j
  void extend() {
    const long m = static_cast<long>(table_.size());
    if (m == 0) {
      table_.emplace_back(1);
      return;
    }
    Rational acc(0);
    for (long j = 0; j < m; ++j) acc += Rational(binomial(m + 1, j)) * table_[static_cast<std::size_t>(j)];
    table_.push_back(-acc / Rational(m + 1));
  }

  std::mutex mu_;
  std::vector<Rational> table_;
};

inline BernoulliTable& bernoulli_table() {
  static BernoulliTable table;
  return table;
}

}  // namespace detail

/// B_n with B_1 = -1/2, i.e. B_n = B_n(0).
inline Rational bernoulli_number(long n) {
  if (n < 0) throw std::domain_error("bernoulli_number: negative index");
  return detail::bernoulli_table().get(n);
}

/// B_n(x) = sum_j C(n, j) B_j x^{n-j}, evaluated by Horner in x.
inline Rational bernoulli_poly(long n, const Rational& x) {
  if (n < 0) throw std::domain_error("bernoulli_poly: negative index");
  // Horner over descending powers of x: coefficient of x^{n-j} is C(n,j) B_j.
  Rational acc(0);
  for (long j = 0; j <= n; ++j) acc = acc * x + Rational(binomial(n, j)) * bernoulli_number(j);
  return acc;
}

/// Trial-division factorization of |n| into (prime, exponent) pairs.
inline std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  if (n == 0) throw std::domain_error("factorize: zero");
  if (n < 0) n = -n;
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline int moebius(std::int64_t n) {
  int mu = 1;
  for (const auto& [p, e] : factorize(n)) {
    if (e > 1) return 0;
    mu = -mu;
  }
  return mu;
}

/// sigma_k(n) = sum of d^k over positive divisors d of n.
inline BigInt divisor_power_sum(std::int64_t n, long k) {
  if (n <= 0) throw std::domain_error("divisor_power_sum: n must be positive");
  if (k < 0) throw std::domain_error("divisor_power_sum: k must be nonnegative");
  BigInt total(0);
  for (std::int64_t d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    BigInt t;
    mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(k));
    total += t;
    const std::int64_t e = n / d;
    if (e != d) {
      mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(e), static_cast<unsigned long>(k));
      total += t;
    }
  }
  return total;
}

/// Jacobi symbol (a/m) for odd positive m.
inline int jacobi_symbol(std::int64_t a, std::int64_t m) {
  if (m <= 0 || m % 2 == 0) throw std::domain_error("jacobi_symbol: modulus must be odd and positive");
  a %= m;
  if (a < 0) a += m;
  int result = 1;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      const std::int64_t r = m % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, m);
    if (a % 4 == 3 && m % 4 == 3) result = -result;
    a %= m;
  }
  return m == 1 ? result : 0;
}

/// Kronecker symbol (D/m) for positive m.
inline int kronecker_symbol(std::int64_t D, std::int64_t m) {
  if (m <= 0) throw std::domain_error("kronecker_symbol: m must be positive");
  int result = 1;
  while (m % 2 == 0) {
    m /= 2;
    if (D % 2 == 0) return 0;
    const std::int64_t r = ((D % 8) + 8) % 8;
    if (r == 3 || r == 5) result = -result;
  }
  if (m == 1) return result;
  return result * jacobi_symbol(D, m);
}

/// Non-empty string explaining why D is not 1 or a fundamental discriminant;
/// empty when D is admissible.
inline std::string fundamental_discriminant_defect(std::int64_t D) {
  if (D == 1) return {};
  if (D == 0) return "D = 0 is not a discriminant";
  const std::int64_t r = ((D % 4) + 4) % 4;
  auto odd_square_factor = [](std::int64_t n) -> std::int64_t {
    for (const auto& [p, e] : factorize(n))
      if (p != 2 && e >= 2) return p * p;
    return 1;
  };
  if (r == 1) {
    for (const auto& [p, e] : factorize(D))
      if (e >= 2) return "D = " + std::to_string(D) + " has square factor " + std::to_string(p * p);
    return {};
  }
  if (r == 0) {
    const std::int64_t m = D / 4;
    const std::int64_t rm = ((m % 4) + 4) % 4;
    if (rm == 0 || rm == 1) {
      // m itself (or its 2-part) supplies the square factor 4 beyond the discriminant part.
      return "D = " + std::to_string(D) + " has square factor 4";
    }
    if (const std::int64_t sq = odd_square_factor(m); sq != 1)
      return "D = " + std::to_string(D) + " has square factor " + std::to_string(sq);
    return {};
  }
  return "D = " + std::to_string(D) + " is not congruent to 0 or 1 mod 4";
}

inline bool is_fundamental_discriminant(std::int64_t D) {
  return D != 1 && fundamental_discriminant_defect(D).empty();
}

/// B_{n, chi_D} = |D|^{n-1} sum_{a=1}^{|D|} chi_D(a) B_n(a/|D|).
/// D = 1 returns B_n (trivial character of modulus 1).
inline Rational generalized_bernoulli(long n, std::int64_t D) {
  if (n <= 0) throw std::domain_error("generalized_bernoulli: n must be positive");
  if (const std::string defect = fundamental_discriminant_defect(D); !defect.empty())
    throw std::invalid_argument("generalized_bernoulli: not a fundamental discriminant: " + defect);
  if (D == 1) return bernoulli_number(n);
  const std::int64_t f = D < 0 ? -D : D;
  Rational sum(0);
  for (std::int64_t a = 1; a <= f; ++a) {
    const int chi = kronecker_symbol(D, a);
    if (chi == 0) continue;
    const Rational b = bernoulli_poly(n, Rational(a, f));
    if (chi > 0) sum += b;
    else sum -= b;
  }
  return pow(Rational(f), n - 1) * sum;
}

struct DiscriminantSplit {
  std::int64_t fundamental;  // D: 1 or a fundamental discriminant
  std::int64_t conductor;    // f >= 1 with Delta = D f^2
};

/// Writes a nonzero discriminant Delta (== 0, 1 mod 4) as D f^2.
inline DiscriminantSplit split_discriminant(std::int64_t delta) {
  const std::int64_t r = ((delta % 4) + 4) % 4;
  if (delta == 0 || (r != 0 && r != 1))
    throw std::domain_error("split_discriminant: " + std::to_string(delta) + " is not a nonzero discriminant");
  std::int64_t core = delta < 0 ? -1 : 1;
  std::int64_t root = 1;
  for (const auto& [p, e] : factorize(delta)) {
    for (int i = 0; i < e / 2; ++i) root *= p;
    if (e % 2 == 1) core *= p;
  }
  if (((core % 4) + 4) % 4 == 1) return {core, root};
  // core == 2, 3 mod 4: the discriminant part absorbs a factor 4 from the square.
  return {4 * core, root / 2};
}

}  // namespace spectacle
