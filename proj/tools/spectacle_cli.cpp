// Command-line front end for the spectacle library.

#include "spectacle/spectacle.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace spectacle;
using Json = nlohmann::ordered_json;

namespace {

enum class LogLevel { error = 0, info = 1, debug = 2 };

LogLevel log_level() {
  const char* env = std::getenv("SPECTACLE_LOG");
  if (env == nullptr) return LogLevel::error;
  const std::string v = env;
  if (v == "info") return LogLevel::info;
  if (v == "debug") return LogLevel::debug;
  if (v != "error") std::cerr << "warning: SPECTACLE_LOG=" << v << " not recognized; using error\n";
  return LogLevel::error;
}

void log(LogLevel level, const std::string& msg) {
  static const LogLevel current = log_level();
  if (level <= current) std::cerr << (level == LogLevel::debug ? "[debug] " : "[info] ") << msg << "\n";
}

/// A verification failure: exit code 1 after the output has been written.
struct CheckFailed {
  std::string message;
};

std::string decimal12(double x) {
  if (x == 0) return "0";
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

std::vector<Rational> parse_rational_list(const std::string& text, std::size_t expected, const char* what) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(Rational::parse(item));
  if (expected != 0 && out.size() != expected)
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(expected) + " comma-separated values");
  return out;
}

VecV parse_vec(const std::string& text, const char* what) {
  const auto v = parse_rational_list(text, 3, what);
  return {v[0], v[1], v[2]};
}

Json vec_json(const VecV& x) { return Json::array({x.a.fraction_str(), x.b.fraction_str(), x.c.fraction_str()}); }

Json sym_json(const SymVector& v) {
  Json arr = Json::array();
  for (int i = 0; i <= v.degree(); ++i) arr.push_back(v.at(i).fraction_str());
  return arr;
}

/// Two-column table of exponent and coefficient.
std::string series_table(const QExpansion& f) {
  std::vector<std::pair<std::string, std::string>> rows;
  for (const auto& [e, c] : f.coeffs) rows.emplace_back(Rational(e, f.exp_den).str(), c.str());
  if (f.nonholo)
    for (const auto& [e, c] : *f.nonholo) rows.emplace_back(Rational(e, f.exp_den).str() + " (x 1/(pi v))", c.str());
  std::size_t w = std::string("exponent").size();
  for (const auto& r : rows) w = std::max(w, r.first.size());
  std::ostringstream os;
  os << std::left << std::setw(int(w)) << "exponent" << "  coefficient\n";
  for (const auto& r : rows) os << std::left << std::setw(int(w)) << r.first << "  " << r.second << "\n";
  return os.str();
}

/// Key/value table for flat JSON objects; nested values are printed compactly.
std::string object_table(const Json& j) {
  std::size_t w = 0;
  for (const auto& [k, v] : j.items()) w = std::max(w, k.size());
  std::ostringstream os;
  for (const auto& [k, v] : j.items())
    os << std::left << std::setw(int(w)) << k << "  " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  return os.str();
}

struct Output {
  std::string format = "json";
  std::string path;

  void emit(const Json& j, const std::string& table) const {
    const std::string text = format == "json" ? j.dump(2) + "\n" : table;
    if (path.empty()) {
      std::cout << text;
      std::cout.flush();
      return;
    }
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open output file " + path);
    f << text;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectacle cycles: cap vectors, theta lifts, q-expansions and period checks"};
  // --h selects the lift coset, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  Output out;
  int threads = 1;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", out.format, "Output format")->check(CLI::IsMember({"json", "table"}));
    sub->add_option("--out", out.path, "Write output to PATH instead of stdout");
    sub->add_option("--threads", threads, "Worker threads for per-coefficient loops")->check(CLI::Range(1, 256));
  };

  int k = 1;
  std::string h = "0";
  std::int64_t nmax = 20;
  int weight = 4;
  int j = 0;
  std::string T_list = "3,5,10";
  std::string x_text = "0,1,0", y_text;
  std::string widths = "1,1";
  bool check = false;

  auto* theta11 = app.add_subcommand("theta11", "Level-one signature (1,1) series with w = u'^k");
  theta11->add_option("--k", k, "Coefficient degree k")->required()->check(CLI::Range(1, 64));
  theta11->add_option("--nmax", nmax, "Exponent bound")->check(CLI::Range(0, 100000));
  theta11->add_flag("--check", check, "Compare with (-B_{k+1}/(k+1)) E_{k+1}");

  auto* lift = app.add_subcommand("lift", "Signature (2,1) lift of the standard lattice coset");
  lift->add_option("--k", k, "Coefficient degree k")->required()->check(CLI::Range(1, 32));
  lift->add_option("--h", h, "Coset: 0 or half (w0/2)")->check(CLI::IsMember({"0", "half"}));
  lift->add_option("--nmax", nmax, "Exponent bound")->check(CLI::Range(0, 10000));
  lift->add_flag("--check", check, "Compute both sides and report the comparison");

  auto* caps = app.add_subcommand("caps", "Spectacle cycle data of x: cap vectors at both cusps");
  caps->add_option("--k", k, "Coefficient degree k")->check(CLI::Range(1, 32));
  caps->add_option("--x", x_text, "Vector (a,b,c) <-> [[b,c],[a,-b]]");
  caps->add_option("--widths", widths, "Cusp widths at the start and end cusps");
  caps->add_flag("--check", check, "Verify the jump equation and the period normalization");

  auto* cohen = app.add_subcommand("cohen", "Cohen-Eisenstein series of weight k + 3/2");
  cohen->add_option("--k", k, "Weight is k + 3/2")->required()->check(CLI::Range(0, 64));
  cohen->add_option("--nmax", nmax, "Exponent bound")->check(CLI::Range(0, 100000));

  auto* eis = app.add_subcommand("eisenstein", "Level-one Eisenstein series E_m");
  eis->add_option("--weight", weight, "Even weight m >= 4")->required();
  eis->add_option("--nmax", nmax, "Exponent bound")->check(CLI::Range(0, 100000));

  auto* lvalue = app.add_subcommand("lvalue", "Period of E_m over the capped spectacle cycle");
  lvalue->add_option("--weight", weight, "Even weight 2k+2 >= 4")->required();
  lvalue->add_option("--j", j, "Weight index, |j| <= k-1");
  lvalue->add_option("--T", T_list, "Truncation heights (comma list, each > 1); all pairs are evaluated");
  lvalue->add_flag("--check", check, "Require T-spread and error against c_{k,j} Lambda below 1e-8");

  auto* intersect = app.add_subcommand("intersect", "Intersection sign of the geodesics D_x and D_y");
  intersect->add_option("--x", x_text, "Vector (a,b,c)")->required();
  intersect->add_option("--y", y_text, "Vector (a,b,c)")->required();
  intersect->add_flag("--check", check, "Require the exact and numerical signs to agree");

  auto* verify = app.add_subcommand("verify-all", "Run the acceptance matrix");

  for (CLI::App* sub : {theta11, lift, caps, cohen, eis, lvalue, intersect, verify}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (theta11->parsed()) {
      log(LogLevel::info, "theta11 k=" + std::to_string(k) + " nmax=" + std::to_string(nmax));
      const QExpansion s = theta11_series(SplitLatticeU::level1(), k, 0, 1, Rational(nmax), threads);
      Json jo;
      jo["k"] = k;
      jo["lattice"] = "level 1";
      jo["w"] = "u'^k";
      jo["series"] = to_json(s);
      std::string table = series_table(s);
      std::optional<SiegelWeilReport> sw;
      if (check) {
        sw = siegel_weil_check(SplitLatticeU::level1(), k, nmax, threads);
        jo["check"] = {{"pass", sw->pass},
                       {"note", sw->note},
                       {"first_difference", sw->mismatch ? to_json(*sw->mismatch) : Json(nullptr)}};
        table += std::string(sw->pass ? "PASS" : "FAIL") + ": " + sw->note + "\n";
      }
      out.emit(jo, table);
      if (sw && !sw->pass) throw CheckFailed{"series differs at exponent " + sw->mismatch->exponent.str()};
    } else if (lift->parsed()) {
      const LiftConfig cfg{k, h == "half" ? CosetTag::half : CosetTag::zero, Rational(nmax), threads};
      log(LogLevel::info, "lift k=" + std::to_string(k) + " h=" + h + " nmax=" + std::to_string(nmax));
      if (check) {
        const LiftReport r = main_theorem_check(cfg);
        log(LogLevel::debug, "sign convention: " + r.sign_convention.note);
        std::string table = "theta side:\n" + series_table(r.theta_side) + "geometric side:\n" +
                            series_table(r.geometric_side) + (r.ok() ? "PASS" : "FAIL") + "\n";
        out.emit(to_json(r), table);
        if (!r.ok()) {
          const std::string where = r.mismatch ? " at exponent " + r.mismatch->exponent.str() : "";
          throw CheckFailed{"theta side differs from geometric side" + where};
        }
      } else {
        const QExpansion s = lift_theta_side(cfg);
        Json jo;
        jo["k"] = k;
        jo["h"] = h;
        jo["n_max"] = Rational(nmax).fraction_str();
        jo["theta_side"] = to_json(s);
        out.emit(jo, series_table(s));
      }
    } else if (caps->parsed()) {
      const VecV x = parse_vec(x_text, "--x");
      const auto w = parse_rational_list(widths, 2, "--widths");
      const SpectacleCycle cyc = spectacle_assemble(x, k, w[0], w[1]);
      Json jo;
      jo["x"] = vec_json(x);
      jo["k"] = k;
      jo["v0"] = sym_json(cyc.v0);
      jo["closed"] = cyc.closed();
      std::ostringstream table;
      table << "x = " << x << ", k = " << k << (cyc.closed() ? ", closed cycle\n" : "\n");
      bool ok = true;
      for (const auto& [name, end] : {std::pair{"start", cyc.start}, {"end", cyc.end}}) {
        if (!end) {
          jo[name] = nullptr;
          continue;
        }
        Json e;
        std::ostringstream cusp;
        cusp << end->cusp;
        e["cusp"] = cusp.str();
        e["width"] = end->width.fraction_str();
        e["position"] = end->position.fraction_str();
        e["cap"] = sym_json(end->cap);
        if (k == 1) e["cap_vector"] = vec_json(to_vec(end->cap));
        if (check) {
          const SymVector wf = to_cusp_frame(end->cusp, end->cap), vf = to_cusp_frame(end->cusp, cyc.v0);
          const bool jump = act(GammaMat::unipotent(-end->width), wf) - wf == vf;
          const bool period = cap_period(wf, end->position, end->width).is_zero();
          e["jump_equation"] = jump;
          e["period_zero"] = period;
          ok = ok && jump && period;
        }
        jo[name] = e;
        table << name << " cusp " << cusp.str() << " width " << end->width << " position " << end->position << ": cap "
              << end->cap << "\n";
      }
      if (check) table << (ok ? "PASS" : "FAIL") << "\n";
      out.emit(jo, table.str());
      if (!ok) throw CheckFailed{"cap vectors fail the jump equation or the period normalization"};
    } else if (cohen->parsed()) {
      const QExpansion s = cohen_eisenstein(k + 1, nmax);
      Json jo;
      jo["weight"] = std::to_string(2 * k + 3) + "/2";
      jo["series"] = to_json(s);
      out.emit(jo, series_table(s));
    } else if (eis->parsed()) {
      const QExpansion s = eisenstein_level1(weight, nmax);
      Json jo;
      jo["weight"] = weight;
      jo["series"] = to_json(s);
      out.emit(jo, series_table(s));
    } else if (lvalue->parsed()) {
      const auto f = HolomorphicFormSpec::eisenstein(weight);
      const int kk = f.k();
      std::vector<double> Ts;
      {
        std::stringstream ss(T_list);
        std::string item;
        while (std::getline(ss, item, ',')) {
          std::size_t used = 0;
          const double t = std::stod(item, &used);
          if (used != item.size()) throw std::invalid_argument("--T: not a number: " + item);
          Ts.push_back(t);
        }
      }
      if (Ts.empty()) throw std::invalid_argument("--T: no heights given");
      const Complex reference = period_constant(kk, j) * completed_L(f, kk + 1 - j);
      Json periods = Json::array();
      std::vector<Complex> values;
      double bound = 0, worst = 0;
      std::ostringstream table;
      table << "T1      T2      value                          abs_err_bound\n";
      for (double T1 : Ts)
        for (double T2 : Ts) {
          const PeriodResult r = spectacle_period(f, kk, j, T1, T2);
          log(LogLevel::debug, "T=" + decimal12(T1) + "," + decimal12(T2) + " geodesic " + decimal12(r.geodesic.real()) +
                                   " caps " + decimal12(r.cap_start.real()) + " " + decimal12(r.cap_end.real()));
          values.push_back(r.value);
          bound = std::max(bound, r.abs_err_bound);
          worst = std::max(worst, std::abs(r.value - reference));
          periods.push_back({{"T1", decimal12(T1)},
                             {"T2", decimal12(T2)},
                             {"re", decimal12(r.value.real())},
                             {"im", decimal12(r.value.imag())},
                             {"abs_err_bound", decimal12(r.abs_err_bound)}});
          table << std::left << std::setw(8) << decimal12(T1) << std::setw(8) << decimal12(T2) << std::setw(31)
                << (decimal12(r.value.real()) + (r.value.imag() == 0 ? "" : " + " + decimal12(r.value.imag()) + "i"))
                << decimal12(r.abs_err_bound) << "\n";
        }
      double spread = 0;
      for (const Complex& a : values)
        for (const Complex& b : values) spread = std::max(spread, std::abs(a - b));
      Json jo;
      jo["weight"] = weight;
      jo["k"] = kk;
      jo["j"] = j;
      jo["value"] = {{"re", decimal12(values.front().real())}, {"im", decimal12(values.front().imag())}};
      jo["abs_err_bound"] = decimal12(bound);
      jo["reference"] = {{"re", decimal12(reference.real())}, {"im", decimal12(reference.imag())}};
      jo["T_spread"] = decimal12(spread);
      jo["periods"] = periods;
      table << "T-spread " << decimal12(spread) << ", c_{k,j} Lambda(f, k+1-j) = " << decimal12(reference.real())
            << (reference.imag() == 0 ? "" : " + " + decimal12(reference.imag()) + "i") << "\n";
      const bool ok = spread < 1e-8 && worst < 1e-8;
      if (check) {
        jo["check"] = {{"pass", ok}, {"tolerance", "1e-08"}};
        table << (ok ? "PASS" : "FAIL") << "\n";
      }
      out.emit(jo, table.str());
      if (check && !ok) throw CheckFailed{"T-spread " + decimal12(spread) + ", error " + decimal12(worst)};
    } else if (intersect->parsed()) {
      const VecV x = parse_vec(x_text, "--x"), y = parse_vec(y_text, "--y");
      const int eps = epsilon_sign(x, y);
      const GeodesicIntersection g = geodesic_intersection_numeric(x, y);
      Json jo;
      jo["x"] = vec_json(x);
      jo["y"] = vec_json(y);
      jo["epsilon"] = eps;
      jo["point"] = {{"re", decimal12(g.point.real())}, {"im", decimal12(g.point.imag())}};
      jo["numeric_sign"] = g.sign;
      jo["agree"] = eps == g.sign;
      out.emit(jo, object_table(jo));
      if (check && eps != g.sign) throw CheckFailed{"exact and numerical intersection signs disagree"};
    } else if (verify->parsed()) {
      Json arr = Json::array();
      std::ostringstream table;
      const bool stream = out.format == "table" && out.path.empty();
      const auto results = run_acceptance(threads, [&](const CriterionResult& r) {
        if (stream) {
          std::cout << format_result(r) << std::endl;
        } else {
          table << format_result(r) << "\n";
        }
      });
      int failed = 0;
      for (const auto& r : results) {
        failed += r.pass ? 0 : 1;
        arr.push_back({{"id", r.id},
                       {"name", r.name},
                       {"pass", r.pass},
                       {"seconds", decimal12(r.seconds)},
                       {"detail", r.detail}});
      }
      if (!stream) out.emit(Json{{"criteria", arr}, {"failed", failed}}, table.str());
      if (failed > 0) throw CheckFailed{std::to_string(failed) + " acceptance criteria failed"};
    }
  } catch (const CheckFailed& e) {
    std::cerr << "verification failed: " << e.message << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
