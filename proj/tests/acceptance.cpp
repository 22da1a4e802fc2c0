// Acceptance suite: one PASS/FAIL line per criterion with wall time against
// its budget. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dzeta/cli.hpp"
#include "dzeta/dzeta.hpp"

namespace {

using cd = std::complex<double>;
using dzeta::make_field;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Notes {
 public:
  template <class... Args>
  void add(const char* fmt, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    if (!text_.empty()) text_ += "; ";
    text_ += buf;
  }
  const std::string& str() const { return text_; }

 private:
  std::string text_;
};

const std::optional<std::int64_t> kRational = std::nullopt;

// K0(x) = ∫_0^∞ e^{-x cosh t} dt, trapezoid in t.
double k0_oracle(double x) {
  const double h = 1e-3;
  double acc = 0.5 * std::exp(-x);
  for (int k = 1; k < 20000; ++k) {
    const double v = std::exp(-x * std::cosh(k * h));
    acc += v;
    if (v < 1e-300) break;
  }
  return acc * h;
}

int mobius_trial(std::int64_t n) {
  int m = 1;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    m = -m;
  }
  return n > 1 ? -m : m;
}

Outcome kernel_oracle() {
  Outcome o;
  Notes n;
  for (auto [r1, r2] : {std::pair{1, 0}, std::pair{0, 1}, std::pair{2, 0}}) {
    dzeta::KernelSpec spec;
    spec.r1 = r1;
    spec.r2 = r2;
    double worst = 0;
    for (double x : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0})
      worst = std::max(worst, std::abs(dzeta::z_line_integral<double>(spec, x, spec.c).value -
                                       *dzeta::z_closed_form<double>(r1, r2, x)));
    o.pass = o.pass && worst <= 1e-8;
    n.add("(%d,%d) max err %.1e", r1, r2, worst);
  }
  o.detail = n.str();
  return o;
}

Outcome bessel_identity() {
  Outcome o;
  Notes n;
  const dzeta::LineKernel<double> lk(2, 0, -0.5);
  double worst = 0;
  for (double x : {0.5, 1.0, 2.0}) {
    const double v = lk.eval(x / 2).value / 4;
    worst = std::max(worst, std::abs(v - (k0_oracle(x) + std::numbers::egamma + std::log(x / 2))));
  }
  o.pass = worst <= 1e-8;
  n.add("max err %.1e at c = -1/2", worst);
  o.detail = n.str();
  return o;
}

Outcome residue_decomposition() {
  Outcome o;
  Notes n;
  for (auto [r1, r2] : {std::pair{1, 0}, std::pair{0, 1}, std::pair{2, 0}}) {
    dzeta::KernelSpec spec;
    spec.r1 = r1;
    spec.r2 = r2;
    const auto k = dzeta::residue_calibrate(r1, r2);
    double worst = 0;
    for (double x : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
      const double z = dzeta::z_line_integral<double>(spec, x, spec.c).value;
      const double zt = dzeta::z_line_integral<double>(spec, x, spec.d).value;
      worst = std::max(worst, std::abs(z - (zt - dzeta::residue_at_zero(k, x))));
    }
    o.pass = o.pass && worst <= 1e-8;
    n.add("(%d,%d) max err %.1e, leading power %s", r1, r2, worst, k.matched_power.c_str());
    if ((r1 == 2 && r2 == 0) || (r1 == 0 && r2 == 1)) o.pass = o.pass && k.matched_power == "2^r1";
  }
  o.detail = n.str();
  return o;
}

Outcome coefficients() {
  Outcome o;
  Notes n;
  const std::size_t N = 100000;
  for (auto d : {kRational, std::optional<std::int64_t>{-1}, std::optional<std::int64_t>{5},
                 std::optional<std::int64_t>{-3}}) {
    const auto f = make_field(d);
    const auto t = dzeta::build_coefficients(f, N);
    std::vector<std::int64_t> conv(N + 1, 0);
    for (std::size_t a = 1; a <= N; ++a)
      if (t.a[a])
        for (std::size_t k = 1; a * k <= N; ++k) conv[a * k] += t.a[a] * t.b[k];
    std::size_t bad = 0;
    for (std::size_t m = 1; m <= N; ++m) bad += conv[m] != (m == 1 ? 1 : 0);
    const auto bp = dzeta::b_via_prime_ideals(f, 10000);
    const auto bi = dzeta::dirichlet_inverse(dzeta::ideal_counts(f, 10000), 10000);
    std::size_t prime_bad = 0;
    for (std::size_t m = 1; m <= 10000; ++m) prime_bad += bp[m] != bi[m];
    std::size_t mobius_bad = 0;
    if (f.is_rational())
      for (std::size_t m = 1; m <= N; ++m) mobius_bad += t.b[m] != mobius_trial(static_cast<std::int64_t>(m));
    o.pass = o.pass && bad == 0 && prime_bad == 0 && mobius_bad == 0;
    n.add("%s: %zu/%zu/%zu mismatches", f.label().c_str(), bad, prime_bad, mobius_bad);
  }
  o.detail = n.str();
  return o;
}

Outcome functional_equation() {
  Outcome o;
  Notes n;
  for (auto d : {kRational, std::optional<std::int64_t>{-1}, std::optional<std::int64_t>{5},
                 std::optional<std::int64_t>{-3}}) {
    const auto f = make_field(d);
    double worst = 0;
    int count = 0;
    for (double sigma : {-0.4, 0.2, 0.65, 1.3})
      for (double t : {0.7, 4.0, 11.0, 19.5, 33.0}) {
        worst = std::max(worst, dzeta::functional_equation_defect(cd(sigma, t), f));
        ++count;
      }
    o.pass = o.pass && worst <= 1e-8 && count == 20;
    n.add("%s: %d points, max defect %.1e", f.label().c_str(), count, worst);
  }
  o.detail = n.str();
  return o;
}

Outcome zero_finding() {
  Outcome o;
  Notes n;
  const auto q = make_field(kRational);
  const auto zl = dzeta::find_zeros<double>(q, 30.0);
  const double known[] = {14.134725141734693790, 21.022039638771554993, 25.010857580145688763};
  double worst = zl.zeros.size() == 3 ? 0.0 : 1.0;
  for (std::size_t i = 0; i < std::min<std::size_t>(3, zl.zeros.size()); ++i)
    worst = std::max(worst, std::abs(zl.zeros[i].gamma - known[i]));
  const double count_q = dzeta::argument_principle_count(q, 30.0, 0.0);
  o.pass = worst <= 1e-9 && std::abs(count_q - 3) < 0.5 && zl.zeros.size() == 3;
  n.add("Q: %zu stored, max gamma err %.1e, contour count %.3f", zl.zeros.size(), worst, count_q);

  const auto gi = make_field(-1);
  const auto zg = dzeta::find_zeros<double>(gi, 30.0);
  const double count_g = dzeta::argument_principle_count(gi, 30.0, 0.0);
  const long rounded = std::lround(count_g);
  o.pass = o.pass && rounded == static_cast<long>(zg.zeros.size()) && std::abs(count_g - rounded) < 1e-3;
  n.add("Q(i): %zu merged zeros, contour count %.3f", zg.zeros.size(), count_g);
  o.detail = n.str();
  return o;
}

Outcome derivative_routes() {
  Outcome o;
  Notes n;
  for (auto d : {kRational, std::optional<std::int64_t>{-1}, std::optional<std::int64_t>{5}}) {
    const auto f = make_field(d);
    const auto zl = dzeta::find_zeros<double>(f, 80.0);
    double worst = 0;
    const std::size_t m = std::min<std::size_t>(20, zl.zeros.size());
    for (std::size_t i = 0; i < m; ++i) worst = std::max(worst, zl.zeros[i].derivative_gap);
    o.pass = o.pass && m == 20 && worst <= 1e-6;
    n.add("%s: %zu zeros, max gap %.1e", f.label().c_str(), m, worst);
  }
  o.detail = n.str();
  return o;
}

Outcome class_numbers() {
  Outcome o;
  Notes n;
  const auto inv = dzeta::class_number_data(make_field(-1));
  const auto ex = dzeta::expansion_data<double>(make_field(5));
  o.pass = inv.h == 1 && inv.h_residual <= 1e-6 && ex.class_number_gap <= 1e-6;
  n.add("d=-1: h=%lld residual %.1e", inv.h, inv.h_residual);
  n.add("d=5: zeta_K'(0)=%.12f vs -hR/2, rel gap %.1e", ex.zeta_K_prime_at_0, ex.class_number_gap);
  o.detail = n.str();
  return o;
}

Outcome modular_relation() {
  Outcome o;
  Notes n;
  for (auto d : {kRational, std::optional<std::int64_t>{-1}, std::optional<std::int64_t>{5}}) {
    const auto f = make_field(d);
    const auto rep = dzeta::verify_relation<double>(f, std::sqrt(f.eta), 60, 100000);
    const bool ok = std::abs(rep.lhs.value) <= 1e-12;
    o.pass = o.pass && ok;
    n.add("(a) %s symmetric: |lhs| %.1e, rhs cancellation %.1e (s1 %+.6f, s0 %+.6f)", f.label().c_str(),
          std::abs(rep.lhs.value), rep.discrepancy, rep.rhs_s1.value, rep.rhs_s0.value);
  }
  for (auto d : {kRational, std::optional<std::int64_t>{-1}, std::optional<std::int64_t>{5}}) {
    const auto f = make_field(d);
    const auto rep = dzeta::verify_relation<double>(f, 1.0, 60, 1000000);
    bool ok = rep.trend_pass;
    if (f.is_imaginary_quadratic() || f.is_rational()) ok = ok && rep.rhs_s1.value == 0 && rep.rhs_s0.value == 0;
    if (f.is_real_quadratic()) ok = ok && rep.rhs_s1.value != 0 && rep.rhs_s0.value != 0;
    o.pass = o.pass && ok;
    n.add("(%s) %s alpha=1: disc(T/4) %.2e, disc(T) %.2e, %d zeros, trend %s", f.is_rational() ? "b" : "c",
          f.label().c_str(), rep.checkpoints.front().discrepancy, rep.checkpoints.back().discrepancy, rep.n_zeros,
          rep.trend_pass ? "PASS" : "FAIL");
    for (auto& p : rep.printed_forms) n.add("  printed [%s] disc %.2e", p.name.c_str(), p.discrepancy);
  }
  o.detail = n.str();
  return o;
}

Outcome mellin_identity() {
  Outcome o;
  Notes n;
  for (auto d : {kRational, std::optional<std::int64_t>{-1}}) {
    const auto f = make_field(d);
    const auto g = dzeta::mellin_grid<double>(f);
    for (cd s : {cd(0.15, 0), cd(0.25, 0), cd(0.35, 0), cd(0.25, 0.1)}) {
      const auto rep = dzeta::mellin_identity_check<double>(g, s);
      o.pass = o.pass && rep.pass;
      n.add("%s s=%.2f%+.2fi rel %.1e", f.label().c_str(), s.real(), s.imag(), rep.relative_discrepancy);
      if (f.is_rational() && s == cd(0.25, 0)) {
        const double classical = dzeta::gamma_real(-0.25) / dzeta::zeta_eval(cd(1.5, 0)).real();
        n.add("HL sum = P/%.0f, rel %.1e", rep.hl_factor, std::abs(rep.lhs.real() / 2 - classical) / std::abs(classical));
      }
    }
  }
  o.detail = n.str();
  return o;
}

Outcome riesz_structure() {
  Outcome o;
  Notes n;
  dzeta::RieszScanOptions opt;
  const auto scan = dzeta::riesz_scan<double>(make_field(5), opt);
  o.pass = scan.fit.slope < scan.p_fit.slope;
  n.add("slope |P - main| %.3f +- %.3f, slope |P| %.3f, leading power %s", scan.fit.slope, scan.fit.slope_stderr,
        scan.p_fit.slope, scan.leading_power.c_str());
  o.detail = n.str();
  return o;
}

std::string selftest_output() {
  const char* argv[] = {"dzeta", "selftest"};
  std::ostringstream out, err;
  const int code = dzeta::run_command(2, argv, out, err);
  return std::to_string(code) + "\n" + out.str();
}

Outcome determinism() {
  Outcome o;
  Notes n;
  const auto a = selftest_output();
  const auto b = selftest_output();
  setenv("DZETA_THREADS", "3", 1);
  const auto c = selftest_output();
  unsetenv("DZETA_THREADS");
  o.pass = a == b && a == c && a.rfind("0\n", 0) == 0;
  n.add("3 runs (default threads twice, 3 threads once): %s, %zu bytes", o.pass ? "identical" : "DIFFER", a.size());
  o.detail = n.str();
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "kernel oracle equivalence", 10, kernel_oracle},
      {2, "Bessel inverse-Mellin identity", 5, bessel_identity},
      {3, "residue decomposition and calibration", 10, residue_decomposition},
      {4, "coefficient correctness", 60, coefficients},
      {5, "functional equation", 10, functional_equation},
      {6, "zero finding and argument principle", 120, zero_finding},
      {7, "zeta_K'(rho) dual routes", 60, derivative_routes},
      {8, "class-number cross-checks", 10, class_numbers},
      {9, "modular relation", 900, modular_relation},
      {10, "Mellin identity for P", 300, mellin_identity},
      {11, "Riesz main-term structure", 600, riesz_structure},
      {12, "determinism", 600, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = out.pass && secs <= c.budget;
    failures += !ok;
    std::printf("[%s] %2d %-40s %8.2f s (limit %4.0f s)  %s\n", ok ? "PASS" : "FAIL", c.id, c.name, secs, c.budget,
                out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
