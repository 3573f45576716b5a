#pragma once

// Truncated q-expansions with exponents in (1/exp_den) Z_{>=0}, plus the
// level-one Eisenstein series and the Cohen-Eisenstein series.

#include "spectacle/arith.hpp"
#include "spectacle/rational.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

namespace spectacle {

/// sum_e coeffs[e] q^(e / exp_den) for 0 <= e <= n_max. The optional nonholo
/// part holds the rational multipliers of q^(e / exp_den) / (pi v).
struct QExpansion {
  std::int64_t exp_den = 1;
  std::int64_t n_max = 0;
  std::map<std::int64_t, Rational> coeffs;  // zero coefficients are not stored
  std::optional<std::map<std::int64_t, Rational>> nonholo;

  QExpansion() = default;
  QExpansion(std::int64_t den, std::int64_t nmax) : exp_den(den), n_max(nmax) {
    if (den <= 0) throw std::invalid_argument("QExpansion: exp_den must be positive");
    if (nmax < 0) throw std::invalid_argument("QExpansion: n_max must be nonnegative");
  }

  /// Truncation bound as an actual exponent.
  Rational bound() const { return Rational(n_max, exp_den); }

  void add_to(std::int64_t e, const Rational& c) { add_at(coeffs, e, c); }
  void add_nonholo(std::int64_t e, const Rational& c) {
    if (!nonholo) nonholo.emplace();
    add_at(*nonholo, e, c);
  }

  /// Coefficient of q^e where e is an exponent (not a numerator).
  Rational coeff(const Rational& e) const { return lookup(coeffs, e); }
  Rational nonholo_coeff(const Rational& e) const { return nonholo ? lookup(*nonholo, e) : Rational(0); }

  bool nonholo_is_zero() const { return !nonholo || nonholo->empty(); }

  /// Same series on the finer grid (1/den) Z; den must be a multiple of exp_den.
  QExpansion rescale(std::int64_t den) const {
    if (den % exp_den != 0) throw std::invalid_argument("QExpansion::rescale: grid is not a refinement");
    const std::int64_t f = den / exp_den;
    QExpansion out(den, n_max * f);
    for (const auto& [e, c] : coeffs) out.coeffs.emplace(e * f, c);
    if (nonholo) {
      out.nonholo.emplace();
      for (const auto& [e, c] : *nonholo) out.nonholo->emplace(e * f, c);
    }
    return out;
  }

  /// f(m tau): every exponent is multiplied by m.
  QExpansion substitute(std::int64_t m) const {
    if (m <= 0) throw std::invalid_argument("QExpansion::substitute: factor must be positive");
    QExpansion out(exp_den, n_max * m);
    for (const auto& [e, c] : coeffs) out.coeffs.emplace(e * m, c);
    if (nonholo) {
      out.nonholo.emplace();
      for (const auto& [e, c] : *nonholo) out.nonholo->emplace(e * m, c);
    }
    return out;
  }

  /// Drops terms beyond the exponent bound b (b must not exceed bound()).
  QExpansion truncate(const Rational& b) const {
    if (b > bound()) throw std::invalid_argument("QExpansion::truncate: beyond the truncation bound");
    QExpansion out(exp_den, to_int64(floor(b * Rational(exp_den))));
    for (const auto& [e, c] : coeffs)
      if (e <= out.n_max) out.coeffs.emplace(e, c);
    if (nonholo) {
      out.nonholo.emplace();
      for (const auto& [e, c] : *nonholo)
        if (e <= out.n_max) out.nonholo->emplace(e, c);
    }
    return out;
  }

  friend bool operator==(const QExpansion&, const QExpansion&) = default;

 private:
  static void add_at(std::map<std::int64_t, Rational>& m, std::int64_t e, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = m.emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) m.erase(it);
    }
  }

  Rational lookup(const std::map<std::int64_t, Rational>& m, const Rational& e) const {
    if (e > bound() || e.sign() < 0) throw std::out_of_range("QExpansion: exponent " + e.str() + " outside [0, " + bound().str() + "]");
    const Rational n = e * Rational(exp_den);
    if (!n.is_integer()) return Rational(0);
    const auto it = m.find(to_int64(n.num()));
    return it == m.end() ? Rational(0) : it->second;
  }
};

/// Both expansions on the grid of lcm(exp_den), truncated to the smaller bound.
inline std::pair<QExpansion, QExpansion> unify(const QExpansion& f, const QExpansion& g) {
  const std::int64_t den = std::lcm(f.exp_den, g.exp_den);
  QExpansion a = f.rescale(den), b = g.rescale(den);
  const std::int64_t n = std::min(a.n_max, b.n_max);
  a = a.truncate(Rational(n, den));
  b = b.truncate(Rational(n, den));
  return {a, b};
}

inline QExpansion scale(const QExpansion& f, const Rational& s) {
  QExpansion out(f.exp_den, f.n_max);
  if (s.is_zero()) return out;
  for (const auto& [e, c] : f.coeffs) out.coeffs.emplace(e, s * c);
  if (f.nonholo) {
    out.nonholo.emplace();
    for (const auto& [e, c] : *f.nonholo) out.nonholo->emplace(e, s * c);
  }
  return out;
}

inline QExpansion add(const QExpansion& f, const QExpansion& g) {
  auto [a, b] = unify(f, g);
  for (const auto& [e, c] : b.coeffs) a.add_to(e, c);
  if (b.nonholo)
    for (const auto& [e, c] : *b.nonholo) a.add_nonholo(e, c);
  return a;
}

inline QExpansion operator+(const QExpansion& f, const QExpansion& g) { return add(f, g); }
inline QExpansion operator*(const Rational& s, const QExpansion& f) { return scale(f, s); }

/// First exponent where two expansions differ, up to the exponent bound b.
struct QMismatch {
  Rational exponent;
  bool nonholo = false;  // true if the difference is in the 1/(pi v) part
  Rational left, right;
};

inline std::optional<QMismatch> first_difference(const QExpansion& f, const QExpansion& g, const Rational& b) {
  if (b > f.bound() || b > g.bound())
    throw std::out_of_range("QExpansion: comparison up to " + b.str() + " exceeds a truncation bound (" +
                            f.bound().str() + ", " + g.bound().str() + ")");
  auto [x, y] = unify(f.truncate(b), g.truncate(b));
  std::optional<QMismatch> best;
  auto scan = [&](const std::map<std::int64_t, Rational>& p, const std::map<std::int64_t, Rational>& q, bool nh) {
    auto at = [](const std::map<std::int64_t, Rational>& m, std::int64_t e) {
      const auto it = m.find(e);
      return it == m.end() ? Rational(0) : it->second;
    };
    std::map<std::int64_t, bool> keys;
    for (const auto& kv : p) keys[kv.first] = true;
    for (const auto& kv : q) keys[kv.first] = true;
    for (const auto& kv : keys) {
      const std::int64_t e = kv.first;
      if (at(p, e) != at(q, e)) {
        const Rational ex(e, x.exp_den);
        if (!best || ex < best->exponent) best = QMismatch{ex, nh, at(p, e), at(q, e)};
        return;
      }
    }
  };
  static const std::map<std::int64_t, Rational> empty;
  scan(x.coeffs, y.coeffs, false);
  scan(x.nonholo ? *x.nonholo : empty, y.nonholo ? *y.nonholo : empty, true);
  return best;
}

/// Equality on all exponents <= b, holomorphic and 1/(pi v) parts separately.
inline bool equals_to(const QExpansion& f, const QExpansion& g, const Rational& b) {
  return !first_difference(f, g, b).has_value();
}

// JSON wire format: {"exp_den", "n_max", "coeffs": [[e, "p/q"], ...], "nonholo": null | [...]}.

inline nlohmann::ordered_json coeff_table_json(const std::map<std::int64_t, Rational>& m) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& [e, c] : m) arr.push_back({e, c.fraction_str()});
  return arr;
}

inline nlohmann::ordered_json to_json(const QExpansion& f) {
  nlohmann::ordered_json j;
  j["exp_den"] = f.exp_den;
  j["n_max"] = f.n_max;
  j["coeffs"] = coeff_table_json(f.coeffs);
  j["nonholo"] = f.nonholo ? coeff_table_json(*f.nonholo) : nlohmann::ordered_json(nullptr);
  return j;
}

inline QExpansion qexpansion_from_json(const nlohmann::ordered_json& j) {
  QExpansion f(j.at("exp_den").get<std::int64_t>(), j.at("n_max").get<std::int64_t>());
  auto read = [](const nlohmann::ordered_json& arr, std::map<std::int64_t, Rational>& m) {
    for (const auto& entry : arr) {
      const Rational c = Rational::parse(entry.at(1).get<std::string>());
      if (!c.is_zero()) m[entry.at(0).get<std::int64_t>()] = c;
    }
  };
  read(j.at("coeffs"), f.coeffs);
  if (j.contains("nonholo") && !j.at("nonholo").is_null()) {
    f.nonholo.emplace();
    read(j.at("nonholo"), *f.nonholo);
  }
  return f;
}

/// E_m = 1 - (2m / B_m) sum sigma_{m-1}(n) q^n for even m >= 4.
inline QExpansion eisenstein_level1(int m, std::int64_t n_max) {
  if (m < 4 || m % 2 != 0) throw std::invalid_argument("eisenstein_level1: weight must be even and >= 4");
  QExpansion f(1, n_max);
  f.add_to(0, 1);
  const Rational factor = Rational(-2 * m) / bernoulli_number(m);
  for (std::int64_t n = 1; n <= n_max; ++n) f.add_to(n, factor * Rational(divisor_power_sum(n, m - 1)));
  return f;
}

/// H(r, N): coefficient of the Cohen-Eisenstein series of weight r + 1/2.
inline Rational cohen_number(int r, std::int64_t N) {
  if (r < 1) throw std::invalid_argument("cohen_number: r must be positive");
  if (N < 0) throw std::invalid_argument("cohen_number: N must be nonnegative");
  if (N == 0) return -bernoulli_number(2 * r) / Rational(2 * r);
  const std::int64_t delta = r % 2 == 0 ? N : -N;
  const std::int64_t res = ((delta % 4) + 4) % 4;
  if (res == 2 || res == 3) return Rational(0);
  const auto [D, f] = split_discriminant(delta);
  Rational sum(0);
  for (std::int64_t d = 1; d <= f; ++d) {
    if (f % d != 0) continue;
    const int mu = moebius(d);
    if (mu == 0) continue;
    const int chi = kronecker_symbol(D, d);
    if (chi == 0) continue;
    sum += Rational(mu * chi) * pow(Rational(d), r - 1) * Rational(divisor_power_sum(f / d, 2 * r - 1));
  }
  return -generalized_bernoulli(r, D) / Rational(r) * sum;
}

inline QExpansion cohen_eisenstein(int r, std::int64_t N_max) {
  QExpansion f(1, N_max);
  for (std::int64_t N = 0; N <= N_max; ++N) f.add_to(N, cohen_number(r, N));
  return f;
}

}  // namespace spectacle
