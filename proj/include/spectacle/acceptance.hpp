#pragma once

// The acceptance matrix: nine end-to-end checks at fixed tolerances and
// runtime limits, shared by the acceptance binary and `spectacle_cli verify-all`.

#include "spectacle/caps.hpp"
#include "spectacle/periods.hpp"
#include "spectacle/qseries.hpp"
#include "spectacle/quad_space.hpp"
#include "spectacle/shintani_lift.hpp"
#include "spectacle/sym_rep.hpp"
#include "spectacle/theta11.hpp"

#include <chrono>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace spectacle {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0;
  double time_limit = 0;  // 0 when no limit applies
  std::string detail;
};

namespace acceptance {

struct Outcome {
  bool pass = false;
  std::string detail;
};

inline Outcome cap_double_path() {
  std::mt19937_64 rng(20240101);
  std::uniform_int_distribution<long> rn(-40, 40), rd(1, 12), mn(1, 30), md(1, 6);
  long checked = 0;
  for (int k = 1; k <= 6; ++k)
    for (int i = -k + 1; i <= k; ++i)
      for (int t = 0; t < 20; ++t) {
        const Rational r(rn(rng), rd(rng)), M(mn(rng), md(rng));
        CapInput in;
        in.k = k;
        in.width = M;
        in.position = r;
        in.v = act(GammaMat::unipotent(r), weight_vector(k, i));
        if (cap_solve(in) != cap_closed_form(k, i, r, M))
          return {false, "mismatch at k=" + std::to_string(k) + " i=" + std::to_string(i) + " r=" + r.str() +
                             " M=" + M.str()};
        ++checked;
      }
  return {true, std::to_string(checked) + " cases exact"};
}

inline Outcome cap_example() {
  const VecV u = VecV::u(), up = VecV::u_prime(), w0 = VecV::w0();
  for (long N : {1, 2, 3, 5}) {
    const SpectacleCycle cyc = spectacle_assemble(w0, 1, 1, Rational(N));
    if (cyc.closed()) return {false, "cycle unexpectedly closed"};
    const VecV w = to_vec(cyc.start->cap), wp = to_vec(cyc.end->cap);
    if (w != up - Rational(1, 2) * w0 + Rational(1, 6) * u)
      return {false, "cap at infinity for N=" + std::to_string(N)};
    if (wp != Rational(-1, N) * u - Rational(1, 2) * w0 - Rational(N, 6) * up)
      return {false, "cap at 0 for N=" + std::to_string(N)};
  }
  return {true, "w = u' - x/2 + u/6 and w' = -u/N - x/2 - N u'/6 for N in {1,2,3,5}"};
}

inline Outcome siegel_weil(int threads) {
  for (int k : {3, 5, 7}) {
    const SiegelWeilReport r = siegel_weil_check(SplitLatticeU::level1(), k, 200, threads);
    if (!r.pass) {
      std::string d = "k=" + std::to_string(k) + " differs";
      if (r.mismatch) d += " at exponent " + r.mismatch->exponent.str();
      return {false, d};
    }
  }
  return {true, "k = 3, 5, 7 up to q^200"};
}

inline Outcome main_theorem(int threads) {
  for (int k : {1, 3})
    for (CosetTag h : {CosetTag::zero, CosetTag::half}) {
      const LiftReport r = main_theorem_check({k, h, Rational(100), threads});
      const std::string tag = "k=" + std::to_string(k) + " h=" + to_string(h);
      if (!r.equal_to) return {false, tag + ": sides differ at exponent " + r.mismatch->exponent.str()};
      if (!r.nonholo_cancelled) return {false, tag + ": 1/(pi v) terms do not cancel"};
      if (k == 1 && h == CosetTag::zero) {
        // the cancellation must be between two nonzero pieces
        const LiftParts p = detail::compute_parts({k, h, Rational(100), threads});
        if (p.k1_additional.nonholo_is_zero() || p.k1_boundary.nonholo_is_zero())
          return {false, tag + ": expected nonzero 1/(pi v) pieces"};
      }
    }
  return {true, "theta side = geometric side up to exponent 100 for k in {1,3}, h in {0, w0/2}"};
}

inline Outcome plus_space(int threads) {
  std::ostringstream os;
  for (const auto& [k, expected] : {std::pair{1, Rational(10)}, {3, Rational(2)}}) {
    const PlusSpaceReport r = plus_space_check(k, Rational(60), threads);
    if (!r.pass || !r.lambda) return {false, "k=" + std::to_string(k) + ": " + r.detail};
    if (r.lambda->abs() != expected)
      return {false, "k=" + std::to_string(k) + ": |lambda| = " + r.lambda->abs().str() + ", expected " + expected.str()};
    const QExpansion c0 = lift_theta_side({k, CosetTag::zero, Rational(1), threads});
    const Rational b = bernoulli_number(k + 1) / Rational(k + 1);
    if (c0.coeff(Rational(0)).abs() != b.abs())
      return {false, "k=" + std::to_string(k) + ": constant coefficient " + c0.coeff(Rational(0)).str()};
    os << "k=" << k << " lambda=" << r.lambda->str() << " ";
  }
  os << "on exponents <= 240";
  return {true, os.str()};
}

inline Outcome lvalue_periods() {
  struct Case {
    int weight, k;
    double target;
  };
  double worst = 0;
  for (const Case& c : {Case{4, 1, -5.0 / 3}, Case{8, 3, -2.0 / 15}}) {
    const auto f = HolomorphicFormSpec::eisenstein(c.weight);
    std::vector<Complex> values;
    for (double T1 : {3.0, 5.0, 10.0})
      for (double T2 : {3.0, 5.0, 10.0}) {
        const Complex v = spectacle_period(f, c.k, 0, T1, T2).value;
        worst = std::max(worst, std::abs(v - c.target));
        values.push_back(v);
      }
    for (const Complex& a : values)
      for (const Complex& b : values)
        if (std::abs(a - b) >= 1e-8) return {false, "weight " + std::to_string(c.weight) + ": T-spread >= 1e-8"};
  }
  if (worst >= 1e-8) return {false, "value off by " + std::to_string(worst)};
  const auto e4 = HolomorphicFormSpec::eisenstein(4);
  const double spread = std::abs(spectacle_period(e4, 1, 0, 3, 3, false).value - spectacle_period(e4, 1, 0, 10, 10, false).value);
  if (!(spread > 1e-2)) return {false, "negative control: without caps the T-spread is only " + std::to_string(spread)};
  std::ostringstream os;
  os << "max error " << worst << ", T-spread without caps " << spread;
  return {true, os.str()};
}

inline Outcome intersection_oracle() {
  std::mt19937_64 rng(977);
  std::uniform_int_distribution<int> d(-9, 9);
  int checked = 0, bad = 0;
  while (checked < 500) {
    const VecV x{d(rng), d(rng), d(rng)}, y{d(rng), d(rng), d(rng)};
    const Rational gram = inner(x, x) * inner(y, y) - inner(x, y) * inner(x, y);
    if (qform(x).sign() <= 0 || qform(y).sign() <= 0 || gram.sign() <= 0) continue;
    if (geodesic_intersection_numeric(x, y).sign != epsilon_sign(x, y)) ++bad;
    ++checked;
  }
  return {bad == 0, std::to_string(bad) + " disagreements in 500 pairs"};
}

inline Outcome rep_identities() {
  for (int k = 1; k <= 8; ++k) {
    const std::string tag = "k=" + std::to_string(k);
    if (c_k(k) * Rational(factorial(2 * k)) != pow(Rational(-2), k) * Rational(factorial(k) * factorial(k)))
      return {false, tag + ": c_k"};
    if (weight_vector(k, k) != c_k(k) * embed_power(VecV::u(), k) ||
        weight_vector(k, -k) != c_k(k) * embed_power(VecV::u_prime(), k))
      return {false, tag + ": extreme weight vectors"};
    SymVector r = embed_power(VecV::u_prime(), k);
    for (int i = -k; i <= k; ++i) {
      const Rational scale = pow(Rational(-2), k) * Rational(factorial(k) * factorial(k), factorial(2 * k) * factorial(k + i));
      if (weight_vector(k, i) != scale * r) return {false, tag + ": v_{2i} normalization at i=" + std::to_string(i)};
      r = raising(r);
      for (int j = -k; j <= k; ++j) {
        const Rational sign = i % 2 == 0 ? Rational(1) : Rational(-1);
        const Rational expected =
            j == -i ? sign * c_k(k) * c_k(k) * Rational(factorial(2 * k), factorial(k + i) * factorial(k - i)) : Rational(0);
        if (pairing(weight_vector(k, i), weight_vector(k, j)) != expected)
          return {false, tag + ": pairing table at (" + std::to_string(i) + "," + std::to_string(j) + ")"};
      }
    }
  }
  if (c_k(1) != Rational(-1) || c_k(2) != Rational(2, 3)) return {false, "c_1, c_2"};
  // (x^k, y^k) = (x, y)^k with x^k harmonic (x isotropic).
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<long> d(-9, 9), n(1, 7);
  int checked = 0;
  while (checked < 100) {
    const long alpha = d(rng), beta = d(rng);
    if (alpha == 0 && beta == 0) continue;
    const int k = 1 + checked % 8;
    const VecV x = Rational(d(rng), n(rng)) * IsotropicLine::from_cusp(alpha, beta).generator();
    const VecV y{Rational(d(rng), n(rng)), Rational(d(rng), n(rng)), Rational(d(rng), n(rng))};
    if (pairing(embed_power(x, k), embed_power(y, k)) != pow(inner(x, y), k)) return {false, "(x^k, y^k) != (x, y)^k"};
    ++checked;
  }
  return {true, "k <= 8; 100 random pairs"};
}

inline Outcome vanishing_laws(int threads) {
  for (int k : {2, 4})
    for (CosetTag h : {CosetTag::zero, CosetTag::half}) {
      const LiftConfig cfg{k, h, Rational(40), threads};
      const std::string tag = "k=" + std::to_string(k) + " h=" + to_string(h);
      const LiftReport r = main_theorem_check(cfg);
      if (!r.theta_side.coeffs.empty() || !r.geometric_side.coeffs.empty()) return {false, tag + ": lift not zero"};
      // brute force: the interior contributions cancel exponent by exponent
      std::map<Rational, Rational> sums;
      for (const InteriorTerm& t : lift_interior_terms(cfg)) sums[t.exponent] += Rational(t.eps_shortcut) * t.weight;
      for (const auto& [e, s] : sums)
        if (!s.is_zero()) return {false, tag + ": interior sum nonzero at " + e.str()};
    }
  for (int k : {2, 4, 6})
    for (const SplitLatticeU& lat : {SplitLatticeU::level1(), SplitLatticeU(2, 3, 1, 0), SplitLatticeU(Rational(3, 2), 1)}) {
      const QExpansion s = theta11_series(lat, k, 1, 1, Rational(40), threads);
      for (const auto& [e, c] : s.coeffs)
        if (e > 0) return {false, "theta11 k=" + std::to_string(k) + " nonzero positive coefficient"};
    }
  for (int r : {2, 4}) {
    const QExpansion H = cohen_eisenstein(r, 240);
    for (const auto& [N, c] : H.coeffs)
      if (N % 4 == 2 || N % 4 == 3) return {false, "Cohen series of r=" + std::to_string(r) + " nonzero at N=" + std::to_string(N)};
  }
  return {true, "even k lifts and theta11 vanish to 40; Cohen support in N = 0, 1 mod 4"};
}

}  // namespace acceptance

/// Runs all nine checks in order; progress receives each result as it completes.
inline std::vector<CriterionResult> run_acceptance(int threads = 1,
                                                   const std::function<void(const CriterionResult&)>& progress = {}) {
  struct Entry {
    int id;
    const char* name;
    double limit;
    std::function<acceptance::Outcome()> run;
  };
  const std::vector<Entry> entries = {
      {1, "cap double-path oracle", 5, [] { return acceptance::cap_double_path(); }},
      {2, "cap example at both cusps", 0, [] { return acceptance::cap_example(); }},
      {3, "Siegel-Weil at level one", 10, [threads] { return acceptance::siegel_weil(threads); }},
      {4, "lift: theta side = geometric side", 30, [threads] { return acceptance::main_theorem(threads); }},
      {5, "plus-space proportionality", 0, [threads] { return acceptance::plus_space(threads); }},
      {6, "L-value periods", 10, [] { return acceptance::lvalue_periods(); }},
      {7, "intersection-sign oracle", 0, [] { return acceptance::intersection_oracle(); }},
      {8, "representation identities", 0, [] { return acceptance::rep_identities(); }},
      {9, "vanishing laws", 0, [threads] { return acceptance::vanishing_laws(threads); }},
  };
  std::vector<CriterionResult> out;
  for (const Entry& e : entries) {
    CriterionResult r{e.id, e.name, false, 0, e.limit, ""};
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const acceptance::Outcome o = e.run();
      r.pass = o.pass;
      r.detail = o.detail;
    } catch (const std::exception& ex) {
      r.detail = std::string("exception: ") + ex.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.pass && e.limit > 0 && r.seconds >= e.limit) {
      r.pass = false;
      r.detail += " (runtime limit exceeded)";
    }
    out.push_back(r);
    if (progress) progress(r);
  }
  return out;
}

inline std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  os.precision(3);
  os << (r.pass ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << " (" << std::fixed << r.seconds << " s";
  if (r.time_limit > 0) os << ", limit " << r.time_limit << " s";
  os << "): " << r.detail;
  return os.str();
}

}  // namespace spectacle
