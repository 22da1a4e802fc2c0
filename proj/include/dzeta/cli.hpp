#pragma once

// Command-line driver: subcommand parsing, RunConfig file round trips and
// JSON/CSV reports. Requires the vendored CLI11 and nlohmann/json headers.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "coefficients.hpp"
#include "field.hpp"
#include "kernels.hpp"
#include "lfunction.hpp"
#include "modular.hpp"
#include "numeric.hpp"
#include "riesz.hpp"

namespace dzeta {

using json = nlohmann::ordered_json;

inline constexpr int report_schema = 1;

enum class Precision { standard, extended };

struct RunConfig {
  std::string command;
  std::string field = "Q";  // "Q" or a squarefree integer d
  std::string precision = "standard";
  std::size_t N = 100000;
  double T = 40;
  double t_max = 0;
  double quad_step = 0.01;
  double c0 = 1.0;
  std::optional<double> alpha;  // default √η
  int r1 = 1;
  int r2 = 0;
  double x = 1;
  double abscissa = -0.25;
  double y_min = 1e2;
  double y_max = 1e6;
  int points = 241;
  double eps = 0.1;
  std::optional<std::size_t> coeff_bound;
  std::string s = "0.25,0";
  std::string json_path;
  std::string csv_path;
  bool deterministic = true;  // no random input anywhere; echoed for the record

  /// Rejects non-positive budgets and malformed selectors.
  void validate() const {
    if (N < 1) throw std::invalid_argument("N must be positive");
    if (!(T > 0)) throw std::invalid_argument("T must be positive");
    if (t_max < 0) throw std::invalid_argument("t_max must be non-negative");
    if (!(quad_step > 0)) throw std::invalid_argument("quad_step must be positive");
    if (!(c0 > 0)) throw std::invalid_argument("c0 must be positive");
    if (alpha && !(*alpha > 0)) throw std::invalid_argument("alpha must be positive");
    if (!(y_min > 0 && y_max > y_min)) throw std::invalid_argument("need 0 < y_min < y_max");
    if (points < 2) throw std::invalid_argument("points must be at least 2");
    if (coeff_bound && *coeff_bound < 1) throw std::invalid_argument("coeff_bound must be positive");
    if (precision != "standard" && precision != "extended")
      throw std::invalid_argument("precision must be standard or extended");
    field_descriptor();
  }

  FieldDescriptor field_descriptor() const {
    if (field == "Q" || field == "q") return make_field(std::nullopt);
    std::size_t pos = 0;
    long long d = 0;
    try {
      d = std::stoll(field, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("unknown field '" + field + "'");
    }
    if (pos != field.size()) throw std::invalid_argument("unknown field '" + field + "'");
    return make_field(d);
  }

  std::complex<double> s_value() const {
    const auto comma = s.find(',');
    try {
      if (comma == std::string::npos) return {std::stod(s), 0.0};
      return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
    } catch (const std::exception&) {
      throw std::invalid_argument("s must be RE or RE,IM");
    }
  }
};

inline void to_json(json& j, const RunConfig& c) {
  j = json{{"command", c.command},
           {"field", c.field},
           {"precision", c.precision},
           {"N", c.N},
           {"T", c.T},
           {"t_max", c.t_max},
           {"quad_step", c.quad_step},
           {"c0", c.c0},
           {"alpha", c.alpha ? json(*c.alpha) : json(nullptr)},
           {"r1", c.r1},
           {"r2", c.r2},
           {"x", c.x},
           {"abscissa", c.abscissa},
           {"y_min", c.y_min},
           {"y_max", c.y_max},
           {"points", c.points},
           {"eps", c.eps},
           {"coeff_bound", c.coeff_bound ? json(*c.coeff_bound) : json(nullptr)},
           {"s", c.s},
           {"json_path", c.json_path},
           {"csv_path", c.csv_path},
           {"deterministic", c.deterministic}};
}

inline void from_json(const json& j, RunConfig& c) {
  auto get = [&](const char* key, auto& dst) {
    if (j.contains(key) && !j.at(key).is_null()) j.at(key).get_to(dst);
  };
  get("command", c.command);
  get("field", c.field);
  get("precision", c.precision);
  get("N", c.N);
  get("T", c.T);
  get("t_max", c.t_max);
  get("quad_step", c.quad_step);
  get("c0", c.c0);
  if (j.contains("alpha") && !j.at("alpha").is_null()) c.alpha = j.at("alpha").get<double>();
  get("r1", c.r1);
  get("r2", c.r2);
  get("x", c.x);
  get("abscissa", c.abscissa);
  get("y_min", c.y_min);
  get("y_max", c.y_max);
  get("points", c.points);
  get("eps", c.eps);
  if (j.contains("coeff_bound") && !j.at("coeff_bound").is_null())
    c.coeff_bound = j.at("coeff_bound").get<std::size_t>();
  get("s", c.s);
  get("json_path", c.json_path);
  get("csv_path", c.csv_path);
  get("deterministic", c.deterministic);
}

inline bool operator==(const RunConfig& a, const RunConfig& b) { return json(a) == json(b); }

inline json field_json(const FieldDescriptor& f, const FieldInvariants& inv) {
  return json{{"d", f.d ? json(*f.d) : json(nullptr)},
              {"label", f.label()},
              {"d_K", f.d_K},
              {"r1", f.r1},
              {"r2", f.r2},
              {"n", f.degree_n},
              {"r", f.r},
              {"eta", f.eta},
              {"w", f.w},
              {"h", inv.h},
              {"R", inv.R},
              {"hR", inv.hR},
              {"L1", inv.L1},
              {"L1_error", inv.L1_error},
              {"h_residual", inv.h_residual},
              {"h_R_separated", !inv.product_only}};
}

inline FieldInvariants invariants_of(const FieldDescriptor& f) {
  if (f.is_quadratic()) return class_number_data(f);
  return FieldInvariants{};
}

namespace detail {

inline json residue_json(const ResidueTerm& t) {
  json j{{"value", t.value}};
  if (t.has_closed) {
    j["closed_form"] = t.closed;
    j["route_gap"] = t.route_gap;
  }
  return j;
}

inline json relation_json(const RelationReport& r) {
  json partials = json::array();
  for (auto& p : r.zeros.partials)
    partials.push_back({{"bracket", p.bracket_id}, {"gamma_max", p.gamma_max}, {"term", p.bracket_term},
                        {"partial", p.partial}});
  json checkpoints = json::array();
  for (auto& c : r.checkpoints)
    checkpoints.push_back(
        {{"T", c.T}, {"n_zeros", c.n_zeros}, {"zero_partial", c.zero_partial}, {"discrepancy", c.discrepancy}});
  json printed = json::array();
  for (auto& p : r.printed_forms)
    printed.push_back({{"form", p.name}, {"lhs_scale", p.lhs_scale}, {"rhs", p.rhs}, {"discrepancy", p.discrepancy}});
  return json{{"alpha", r.alpha},
              {"beta", r.beta},
              {"eta_relative_defect", r.eta_relative_defect},
              {"lhs", {{"value", r.lhs.value},
                       {"alpha_part", r.lhs.alpha_part},
                       {"beta_part", r.lhs.beta_part},
                       {"tail_estimate", r.lhs.tail_estimate}}},
              {"rhs_s1", residue_json(r.rhs_s1)},
              {"rhs_s0", residue_json(r.rhs_s0)},
              {"zero_sum", {{"total", r.zeros.total()},
                            {"max_imag_residue", r.zeros.max_imag_residue},
                            {"excluded_zeros", r.zeros.excluded},
                            {"smallest_bracket_term", r.smallest_zero_term}}},
              {"rhs_zero_partial", partials},
              {"discrepancy", r.discrepancy},
              {"checkpoints", checkpoints},
              {"trend_pass", r.trend_pass},
              {"truncation", {{"N_terms", r.N_terms},
                              {"T", r.T},
                              {"n_zeros", r.n_zeros},
                              {"bracket_count", r.bracket_count},
                              {"max_bracket_size", r.max_bracket_size},
                              {"c0", r.c0},
                              {"balanced", r.truncation_balanced}}},
              {"printed_normalizations", printed},
              {"warnings", r.warnings}};
}

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << text;
}

struct Check {
  std::string name;
  double value;
  double tolerance;
  bool pass;
};

inline json checks_json(const std::vector<Check>& checks) {
  json a = json::array();
  for (auto& c : checks) a.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass}});
  return a;
}

template <class Real>
struct Runner {
  const RunConfig& cfg;
  json report;
  std::string csv;
  bool pass = true;

  KernelSpec kernel_spec() const {
    KernelSpec spec;
    spec.r1 = cfg.r1;
    spec.r2 = cfg.r2;
    spec.c = cfg.abscissa < 0 ? cfg.abscissa : spec.c;
    spec.d = cfg.abscissa > 0 ? cfg.abscissa : spec.d;
    spec.t_max = cfg.t_max;
    spec.quad_step = cfg.quad_step;
    return spec;
  }

  void field_cmd() {
    const auto f = cfg.field_descriptor();
    const auto inv = invariants_of(f);
    report["field"] = field_json(f, inv);
    pass = inv.product_only || inv.h_residual <= 1e-6;
  }

  void coeffs_cmd() {
    if (!cfg.coeff_bound) throw CLI::ValidationError("coeffs", "--coeff-bound is required");
    const auto f = cfg.field_descriptor();
    const std::size_t N = *cfg.coeff_bound;
    const auto t = build_coefficients(f, N);
    // Σ_{d|n} a_d b_{n/d} = [n = 1].
    std::vector<std::int64_t> conv(N + 1, 0);
    for (std::size_t d = 1; d <= N; ++d)
      if (t.a[d])
        for (std::size_t k = 1; d * k <= N; ++k) conv[d * k] += t.a[d] * t.b[k];
    std::size_t bad = 0;
    for (std::size_t n = 1; n <= N; ++n) bad += conv[n] != (n == 1 ? 1 : 0);
    const std::size_t prime_limit = std::min<std::size_t>(N, 10000);
    const auto bp = b_via_prime_ideals(f, prime_limit);
    std::size_t prime_bad = 0;
    for (std::size_t n = 1; n <= prime_limit; ++n) prime_bad += bp[n] != t.b[n];
    report["coefficients"] = {{"N", N},
                              {"convolution_failures", bad},
                              {"prime_ideal_route_checked_to", prime_limit},
                              {"prime_ideal_route_failures", prime_bad},
                              {"M_K_at_N", t.M[N]},
                              {"m_K_at_N", t.m[N]}};
    pass = bad == 0 && prime_bad == 0;
    if (!cfg.csv_path.empty()) {
      std::ostringstream os;
      write_coefficients_csv(os, t);
      csv = os.str();
    }
  }

  void kernel_cmd() {
    const auto spec = kernel_spec();
    spec.validate();
    const auto kv = z_line_integral<Real>(spec, Real(cfg.x), cfg.abscissa);
    json j{{"r1", cfg.r1},
           {"r2", cfg.r2},
           {"x", cfg.x},
           {"abscissa", cfg.abscissa},
           {"function", cfg.abscissa < 0 ? "Z" : "Z_tilde"},
           {"value", static_cast<double>(kv.value)},
           {"err_est", kv.err_est},
           {"imag_residual", kv.imag_residual},
           {"t_max", kv.t_max},
           {"method", kv.method},
           {"warnings", kv.warnings}};
    const auto closed = cfg.abscissa < 0 ? z_closed_form<Real>(cfg.r1, cfg.r2, Real(cfg.x))
                                         : z_tilde_closed_form<Real>(cfg.r1, cfg.r2, Real(cfg.x));
    if (closed) {
      const double gap = std::abs(static_cast<double>(kv.value - *closed));
      j["closed_form"] = static_cast<double>(*closed);
      j["closed_form_gap"] = gap;
      pass = gap <= 1e-8;
    }
    report["kernel"] = j;
  }

  void zeros_cmd() {
    const auto f = cfg.field_descriptor();
    ZeroScanOptions opt;
    opt.c0 = cfg.c0;
    const auto zl = find_zeros<Real>(f, Real(cfg.T), opt);
    json zs = json::array();
    double worst_gap = 0;
    std::ostringstream os;
    os << "gamma,source,zeta_K_prime_re,zeta_K_prime_im,derivative_gap,localization_err,bracket,collision\n";
    for (auto& z : zl.zeros) {
      worst_gap = std::max(worst_gap, z.derivative_gap);
      zs.push_back({{"gamma", static_cast<double>(z.gamma)},
                    {"source", to_string(z.source)},
                    {"zeta_K_prime", {static_cast<double>(z.zeta_K_prime.real()),
                                      static_cast<double>(z.zeta_K_prime.imag())}},
                    {"derivative_gap", z.derivative_gap},
                    {"localization_err", z.localization_err},
                    {"bracket", z.bracket_id},
                    {"collision", z.collision}});
      os << fmt(static_cast<double>(z.gamma)) << ',' << to_string(z.source) << ','
         << fmt(static_cast<double>(z.zeta_K_prime.real())) << ',' << fmt(static_cast<double>(z.zeta_K_prime.imag()))
         << ',' << fmt(z.derivative_gap) << ',' << fmt(z.localization_err) << ',' << z.bracket_id << ','
         << (z.collision ? 1 : 0) << '\n';
    }
    const double count = argument_principle_count(f, cfg.T, 0.0);
    report["zeros"] = {{"T", cfg.T},
                       {"count", zl.zeros.size()},
                       {"argument_principle_count", count},
                       {"bracket_count", zl.brackets.size()},
                       {"density_constant", zl.density_constant},
                       {"max_derivative_gap", worst_gap},
                       {"list", zs},
                       {"warnings", zl.warnings}};
    pass = worst_gap <= 1e-6 && std::abs(count - double(zl.zeros.size())) < 0.5;
    csv = os.str();
  }

  void verify_cmd() {
    const auto f = cfg.field_descriptor();
    const double alpha = cfg.alpha ? *cfg.alpha : std::sqrt(f.eta);
    RelationOptions opt;
    opt.c0 = cfg.c0;
    const auto rep = verify_relation<Real>(f, alpha, cfg.T, cfg.N, opt);
    report["relation"] = relation_json(rep);
    pass = rep.trend_pass;
    std::ostringstream os;
    os << "bracket,gamma_max,term,partial\n";
    for (auto& p : rep.zeros.partials)
      os << p.bracket_id << ',' << fmt(p.gamma_max) << ',' << fmt(p.bracket_term) << ',' << fmt(p.partial) << '\n';
    csv = os.str();
  }

  void riesz_cmd() {
    if (!cfg.coeff_bound) throw CLI::ValidationError("riesz-scan", "--coeff-bound is required");
    if (double(*cfg.coeff_bound) < 10 * std::sqrt(cfg.y_max))
      throw CLI::ValidationError("riesz-scan", "--coeff-bound must be at least 10 sqrt(y_max)");
    const auto f = cfg.field_descriptor();
    RieszScanOptions opt;
    opt.y_min = cfg.y_min;
    opt.y_max = cfg.y_max;
    opt.points = cfg.points;
    opt.eps = cfg.eps;
    opt.N = *cfg.coeff_bound;
    const auto scan = riesz_scan<Real>(f, opt);
    std::ostringstream os;
    os << "y,P,main,corrected,tail_estimate\n";
    double worst_tail = 0;
    for (std::size_t i = 0; i < scan.y_grid.size(); ++i) {
      os << fmt(scan.y_grid[i]) << ',' << fmt(scan.P_values[i]) << ',' << fmt(scan.main_term[i]) << ','
         << fmt(scan.corrected[i]) << ',' << fmt(scan.tail_estimate[i]) << '\n';
      worst_tail = std::max(worst_tail, scan.tail_estimate[i]);
    }
    csv = os.str();
    auto fit_json = [](const DecayFit& d) {
      return json{{"slope", d.slope},          {"slope_stderr", d.slope_stderr}, {"rms_residual", d.rms_residual},
                  {"fit_points", d.fit_points}, {"consistent", d.consistent},     {"nondecay_flag", d.nondecay_flag}};
    };
    const bool structural = f.r == 0 || scan.fit.slope < scan.p_fit.slope;
    report["riesz"] = {{"points", scan.y_grid.size()},
                       {"eps", scan.eps},
                       {"N_used", *cfg.coeff_bound},
                       {"leading_power", scan.leading_power},
                       {"max_tail_estimate", worst_tail},
                       {"P_last", scan.P_values.back()},
                       {"main_last", scan.main_term.back()},
                       {"corrected_fit", fit_json(scan.fit)},
                       {"P_fit", fit_json(scan.p_fit)},
                       {"main_term_structure_pass", structural},
                       {"warnings", scan.warnings}};
    pass = structural;
  }

  void mellin_cmd() {
    const auto f = cfg.field_descriptor();
    const auto s = cfg.s_value();
    const auto g = mellin_grid<Real>(f);
    const auto rep = mellin_identity_check<Real>(g, s);
    auto cj = [](std::complex<double> z) { return json{z.real(), z.imag()}; };
    report["mellin"] = {{"s", cj(s)},
                        {"lhs", cj(rep.lhs)},
                        {"rhs", cj(rep.rhs)},
                        {"quadrature", cj(rep.quadrature)},
                        {"small_y_tail", cj(rep.small_y_tail)},
                        {"large_y_tail", cj(rep.large_y_tail)},
                        {"quadrature_error", rep.quadrature_error},
                        {"large_tail_bound", rep.large_tail_bound},
                        {"p_tail_estimate", g.max_tail_estimate},
                        {"relative_discrepancy", rep.relative_discrepancy},
                        {"imag_residue", rep.imag_residue},
                        {"hl_factor", rep.hl_factor},
                        {"hl_rhs", cj(rep.hl_rhs)},
                        {"pass", rep.pass}};
    pass = rep.pass;
  }

  void selftest_cmd() {
    std::vector<Check> checks;
    auto add = [&](std::string name, double value, double tol) {
      checks.push_back({std::move(name), value, tol, value <= tol});
    };
    // Kernel equivalence and the Bessel identity.
    for (auto [r1, r2] : {std::pair{1, 0}, std::pair{0, 1}, std::pair{2, 0}}) {
      KernelSpec spec;
      spec.r1 = r1;
      spec.r2 = r2;
      double worst = 0;
      for (double x : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0})
        worst = std::max(worst, std::abs(static_cast<double>(z_line_integral<Real>(spec, Real(x), -0.25).value -
                                                             *z_closed_form<Real>(r1, r2, Real(x)))));
      add("kernel_closed_form_" + std::to_string(r1) + "_" + std::to_string(r2), worst, 1e-8);
    }
    {
      KernelSpec spec;
      spec.r1 = 2;
      double worst = 0;
      for (double x : {0.5, 1.0, 2.0}) {
        const double expect =
            4 * (bessel_k0<double>(2 * x) + std::numbers::egamma + std::log(x));
        worst = std::max(worst, std::abs(static_cast<double>(z_line_integral<Real>(spec, Real(x), -0.5).value) - expect));
      }
      add("bessel_mellin_identity", worst, 1e-8);
    }
    // Functional equation and zeros.
    for (auto d : {std::optional<std::int64_t>{}, std::optional<std::int64_t>{-1}, std::optional<std::int64_t>{5}}) {
      const auto f = make_field(d);
      double worst = 0;
      for (double t : {2.0, 7.5, 13.0, 21.0})
        worst = std::max(worst, functional_equation_defect(std::complex<double>(0.3, t), f));
      add("functional_equation_" + f.label(), worst, 1e-8);
    }
    {
      const auto zl = find_zeros<Real>(make_field(std::nullopt), Real(30));
      const double known[] = {14.134725141734693790, 21.022039638771554993, 25.010857580145688763};
      double worst = zl.zeros.size() == 3 ? 0.0 : 1.0;
      for (std::size_t i = 0; i < std::min<std::size_t>(3, zl.zeros.size()); ++i)
        worst = std::max(worst, std::abs(static_cast<double>(zl.zeros[i].gamma) - known[i]));
      add("riemann_first_three_zeros", worst, 1e-9);
      add("riemann_argument_principle_count",
          std::abs(argument_principle_count(make_field(std::nullopt), 30.0, 0.0) - 3.0), 0.5);
    }
    {
      const auto inv = class_number_data(make_field(-1));
      add("class_number_gaussian", std::abs(double(inv.h) - 1) + inv.h_residual, 1e-6);
      const auto ex = expansion_data<Real>(make_field(5));
      add("zeta_K_prime_0_sqrt5", ex.class_number_gap, 1e-6);
    }
    // Symmetric point of the modular relation and the Mellin identity.
    for (auto d : {std::optional<std::int64_t>{}, std::optional<std::int64_t>{-1}, std::optional<std::int64_t>{5}}) {
      const auto f = make_field(d);
      const auto rep = verify_relation<Real>(f, std::sqrt(f.eta), 20, 20000);
      add("symmetric_lhs_" + f.label(), std::abs(rep.lhs.value), 1e-12);
    }
    {
      MellinGridOptions mo;
      mo.u_max = 14;
      mo.step = 0.02;
      const auto g = mellin_grid<Real>(make_field(std::nullopt), mo);
      add("mellin_identity_Q_s0.25", mellin_identity_check<Real>(g, {0.25, 0}).relative_discrepancy, 1e-3);
    }
    bool all = true;
    for (auto& c : checks) all = all && c.pass;
    report["checks"] = checks_json(checks);
    pass = all;
  }

  void run() {
    const auto& c = cfg.command;
    if (c == "field") field_cmd();
    else if (c == "coeffs") coeffs_cmd();
    else if (c == "kernel") kernel_cmd();
    else if (c == "zeros") zeros_cmd();
    else if (c == "verify-modular") verify_cmd();
    else if (c == "riesz-scan") riesz_cmd();
    else if (c == "mellin-check") mellin_cmd();
    else if (c == "selftest") selftest_cmd();
    else throw CLI::ValidationError("command", "unknown subcommand " + c);
  }
};

inline json run_report(const RunConfig& cfg, std::string& csv, bool& pass) {
  json report;
  report["schema"] = report_schema;
  report["config"] = cfg;
  if (cfg.precision == "extended") {
    Runner<long double> r{cfg, {}, {}, true};
    r.run();
    csv = r.csv;
    pass = r.pass;
    for (auto& [k, v] : r.report.items()) report[k] = v;
  } else {
    Runner<double> r{cfg, {}, {}, true};
    r.run();
    csv = r.csv;
    pass = r.pass;
    for (auto& [k, v] : r.report.items()) report[k] = v;
  }
  report["status"] = pass ? "PASS" : "FAIL";
  return report;
}

}  // namespace detail

/// Parses argv, runs one subcommand and writes the JSON report to `out`
/// (or --json PATH). Exit code 0 on PASS, 2 on a numeric failure, 1 on a
/// usage error.
inline int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  // A config file supplies the starting values; explicit flags override it.
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      std::ifstream is(argv[i + 1]);
      if (!is) {
        err << "cannot read config " << argv[i + 1] << '\n';
        return 1;
      }
      try {
        cfg = json::parse(is).get<RunConfig>();
      } catch (const std::exception& e) {
        err << "bad config: " << e.what() << '\n';
        return 1;
      }
    }
  }

  CLI::App app{"Dedekind zeta modular relation and Riesz-type criterion toolkit", "dzeta"};
  app.require_subcommand(0, 1);
  std::string config_path, write_config;
  std::optional<double> alpha;
  std::optional<std::size_t> coeff_bound;
  app.add_option("--config", config_path, "JSON RunConfig supplying defaults");
  app.add_option("--write-config", write_config, "write the effective RunConfig to this path");
  app.add_option("--precision", cfg.precision, "standard | extended")
      ->check(CLI::IsMember({"standard", "extended"}));
  app.add_option("--json", cfg.json_path, "write the JSON report here instead of stdout");

  auto add_field = [&](CLI::App* sc) { sc->add_option("--field", cfg.field, "Q or a squarefree integer d"); };
  auto add_csv = [&](CLI::App* sc) { sc->add_option("--csv", cfg.csv_path, "CSV output path"); };

  auto* field = app.add_subcommand("field", "field invariants");
  add_field(field);

  auto* coeffs = app.add_subcommand("coeffs", "ideal counts and 1/zeta_K coefficients");
  add_field(coeffs);
  coeffs->add_option("--coeff-bound", coeff_bound, "largest n");
  add_csv(coeffs);

  auto* kernel = app.add_subcommand("kernel", "Mellin kernels");
  auto* keval = kernel->add_subcommand("eval", "evaluate the kernel on one vertical line");
  kernel->require_subcommand(1);
  keval->add_option("--r1", cfg.r1);
  keval->add_option("--r2", cfg.r2);
  keval->add_option("--x", cfg.x);
  keval->add_option("--abscissa", cfg.abscissa, "negative for Z, positive for Z tilde");
  keval->add_option("--t-max", cfg.t_max);
  keval->add_option("--quad-step", cfg.quad_step);

  auto* zeros = app.add_subcommand("zeros", "zeros of zeta_K");
  auto* zscan = zeros->add_subcommand("scan", "locate zeros up to height T");
  zeros->require_subcommand(1);
  add_field(zscan);
  zscan->add_option("--T", cfg.T);
  zscan->add_option("--c0", cfg.c0);
  add_csv(zscan);

  auto* verify = app.add_subcommand("verify-modular", "both sides of the modular relation");
  add_field(verify);
  verify->add_option("--alpha", alpha);
  verify->add_option("--T", cfg.T);
  verify->add_option("--N", cfg.N);
  verify->add_option("--c0", cfg.c0);
  add_csv(verify);

  auto* riesz = app.add_subcommand("riesz-scan", "P(y), main term and decay fits");
  add_field(riesz);
  riesz->add_option("--y-min", cfg.y_min);
  riesz->add_option("--y-max", cfg.y_max);
  riesz->add_option("--points", cfg.points);
  riesz->add_option("--eps", cfg.eps);
  riesz->add_option("--coeff-bound", coeff_bound);
  add_csv(riesz);

  auto* mellin = app.add_subcommand("mellin-check", "Mellin transform identity for P");
  add_field(mellin);
  mellin->add_option("--s", cfg.s, "RE or RE,IM");

  app.add_subcommand("selftest", "invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }
  if (alpha) cfg.alpha = alpha;
  if (coeff_bound) cfg.coeff_bound = coeff_bound;
  for (auto* sc : app.get_subcommands()) cfg.command = sc->get_name();
  if (cfg.command.empty()) {
    err << "no subcommand given\n" << app.help();
    return 1;
  }

  std::string csv;
  bool pass = false;
  json report;
  try {
    cfg.validate();
    if (!write_config.empty()) detail::write_text(write_config, json(cfg).dump(2) + "\n");
    report = detail::run_report(cfg, csv, pass);
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const numeric_error& e) {
    report = json{{"schema", report_schema}, {"config", cfg}, {"status", "FAIL"},
                  {"error", {{"component", e.component()}, {"message", e.what()}}}};
    pass = false;
  } catch (const std::exception& e) {
    report = json{{"schema", report_schema}, {"config", cfg}, {"status", "FAIL"},
                  {"error", {{"component", "cli_reporting"}, {"message", e.what()}}}};
    pass = false;
  }

  try {
    const std::string text = report.dump(2) + "\n";
    if (cfg.json_path.empty()) out << text;
    else detail::write_text(cfg.json_path, text);
    if (!cfg.csv_path.empty() && !csv.empty()) detail::write_text(cfg.csv_path, csv);
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return 1;
  }
  return pass ? 0 : 2;
}

}  // namespace dzeta
