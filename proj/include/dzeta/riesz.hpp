#pragma once

// The Riesz-type function P(y) = Σ b_n/n Z(√y/n), its main term for r >= 1,
// envelope decay fits and the Mellin transform identity
//
//   ∫_0^∞ y^{-s-1} P(y) dy = 2 Γ^{r1}(-s) Γ^{r2}(-2s) / ζ_K(2s+1),  0 < Re s < 1/2.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "coefficients.hpp"
#include "field.hpp"
#include "gamma.hpp"
#include "kernels.hpp"
#include "lfunction.hpp"
#include "numeric.hpp"

namespace dzeta {

struct PValue {
  double value = 0;
  double tail_correction = 0;  // leading small-x contribution of n > n_max, already included
  double tail_estimate = 0;    // size of the first neglected order
  std::size_t n_used = 0;
  std::vector<std::string> warnings;
};

/// Precomputed data for repeated P(y) evaluations over one coefficient table.
///
/// For n <= √y / x_far the kernel equals minus its residue polynomial to
/// machine precision, so those terms come from prefix moments
/// Σ b_n (log n)^j / n. Terms with n > n_max are replaced by the leading
/// small-x Taylor term of the closed-form kernel, whose coefficient sums
/// Σ_{n>n_max} b_n n^{-k} follow from 1/ζ_K(k) minus prefix sums.
template <class Real = double>
class RieszContext {
 public:
  RieszContext(const FieldDescriptor& field, const CoefficientTable& table, const KernelSpec& spec,
               bool use_closed_form = true)
      : field_(field),
        table_(&table),
        kernel_(spec, use_closed_form),
        consts_(residue_calibrate(spec.r1, spec.r2)) {
    const int r1 = spec.r1, r2 = spec.r2;
    closed_kind_ = kernel_.closed_form() ? (r1 == 1 && r2 == 0 ? 1 : r1 == 0 && r2 == 1 ? 2 : 3) : 0;
    if (closed_kind_ == 1) x_far_ = 6.2;
    if (closed_kind_ == 2) x_far_ = 39.0;
    if (closed_kind_ == 3) x_far_ = 19.5;

    const std::size_t N = table.N;
    for (std::size_t n = 1; n <= N; ++n) b_bound_ = std::max(b_bound_, std::abs(double(table.b[n])));
    moments_.assign(consts_.r + 1, std::vector<double>(N + 1, 0.0));
    for (int j = 0; j <= consts_.r; ++j) {
      compensated_sum<double> acc;
      for (std::size_t n = 1; n <= N; ++n) {
        if (table.b[n]) acc += table.b[n] * std::pow(std::log(double(n)), j) / double(n);
        moments_[j][n] = acc.value();
      }
    }
    if (closed_kind_ == 0) return;
    for (int k = 2; k <= 5; ++k) {
      inv_zeta_[k] = 1.0 / dedekind_eval(std::complex<double>(k, 0), field).real();
      power_prefix_[k].assign(N + 1, 0.0);
      compensated_sum<double> acc;
      for (std::size_t n = 1; n <= N; ++n) {
        if (table.b[n]) acc += table.b[n] * std::pow(double(n), -k);
        power_prefix_[k][n] = acc.value();
      }
    }
    if (closed_kind_ == 3) {
      // Σ b_n log n n^{-s} = ζ_K'(s) / ζ_K(s)^2.
      auto zk = [&](double s) { return dedekind_eval(std::complex<double>(s, 0), field).real(); };
      const double z3 = zk(3.0);
      const double dz3 = richardson_derivative(zk, 3.0, 1, 0.1, 4).value;
      log_full_ = dz3 / (z3 * z3);
      log_prefix_.assign(N + 1, 0.0);
      compensated_sum<double> acc;
      for (std::size_t n = 1; n <= N; ++n) {
        if (table.b[n]) acc += table.b[n] * std::log(double(n)) / std::pow(double(n), 3);
        log_prefix_[n] = acc.value();
      }
    }
  }

  const FieldDescriptor& field() const { return field_; }
  const CoefficientTable& table() const { return *table_; }
  const ResidueConstants& constants() const { return consts_; }
  const KernelEvaluator<Real>& kernel() const { return kernel_; }

  /// Σ_{n<=m} b_n/n Res(√y/n) through the prefix moments.
  double residue_prefix(double y, std::size_t m) const {
    if (m == 0) return 0;
    const int r = consts_.r;
    const double L = 0.5 * std::log(y);
    double acc = 0;
    for (int i = 0; i <= r; ++i) {
      double inner = 0;
      for (int j = 0; j <= r - i; ++j) inner += binomial(r - i, j) * std::pow(-L, r - i - j) * moments_[j][m];
      acc += consts_.C[i] * binomial(r, i) * inner;
    }
    return consts_.leading_power_coeff / factorial(r) * acc;
  }

  PValue eval(double y, std::size_t n_max = 0) const {
    if (!(y > 0)) throw std::invalid_argument("p_eval: y must be positive");
    const std::size_t N = table_->N;
    if (n_max == 0 || n_max > N) n_max = N;
    PValue out;
    out.n_used = n_max;
    const double root = std::sqrt(y);
    if (double(n_max) < 10 * root) {
      out.warnings.push_back("coefficient bound " + std::to_string(n_max) + " below 10 sqrt(y)");
    }
    std::size_t far = 0;
    if (x_far_ > 0) far = std::min<std::size_t>(n_max, static_cast<std::size_t>(std::floor(root / x_far_)));
    compensated_sum<double> acc;
    acc += -residue_prefix(y, far);
    compensated_sum<double> last_block;
    for (std::size_t n = far + 1; n <= n_max; ++n) {
      if (!table_->b[n]) continue;
      const double term = table_->b[n] / double(n) * static_cast<double>(kernel_.z(Real(root / double(n))));
      acc += term;
      if (2 * n > n_max) last_block += term;
    }
    auto S = [&](int k) { return inv_zeta_[k] - power_prefix_[k][n_max]; };
    // Bound on Σ_{n>n_max} |b_n| n^{-k}; the differenced S(k) is too noisy
    // to serve as its own error bar.
    auto B = [&](int k) { return (b_bound_ + 1) * std::pow(double(n_max), 1 - k) / (k - 1); };
    switch (closed_kind_) {
      case 1:  // 2(e^{-x^2} - 1) = -2x^2 + x^4 - ...
        out.tail_correction = -2 * y * S(3);
        out.tail_estimate = y * y * B(5);
        break;
      case 2:  // e^{-x} - 1 = -x + x^2/2 - x^3/6 + ...
        out.tail_correction = -root * S(2) + 0.5 * y * S(3);
        out.tail_estimate = y * root * B(4) / 6;
        break;
      case 3: {  // 4(K0(2x) + γ + log x) = 4x^2 (1 - γ - log x) + O(x^4 log x)
        const double SL = log_full_ - log_prefix_[n_max];
        out.tail_correction = 4 * y * ((1 - std::numbers::egamma - 0.5 * std::log(y)) * S(3) + SL);
        out.tail_estimate = y * y * B(5) * (1.5 + std::abs(0.5 * std::log(y)) + std::log(double(n_max)));
        break;
      }
      default:
        out.tail_estimate = std::abs(last_block.value());
    }
    acc += out.tail_correction;
    out.tail_estimate += 1e-15 * (1 + std::abs(residue_prefix(y, far)));
    out.value = acc.value();
    return out;
  }

 private:
  FieldDescriptor field_;
  const CoefficientTable* table_;
  KernelEvaluator<Real> kernel_;
  ResidueConstants consts_;
  int closed_kind_ = 0;
  double x_far_ = 0;
  double b_bound_ = 0;
  std::vector<std::vector<double>> moments_;
  double inv_zeta_[6] = {};
  std::vector<double> power_prefix_[6];
  double log_full_ = 0;
  std::vector<double> log_prefix_;
};

inline KernelSpec kernel_spec_for(const FieldDescriptor& field) {
  KernelSpec spec;
  spec.r1 = field.r1;
  spec.r2 = field.r2;
  return spec;
}

/// P(y) = Σ b_n/n Z(√y/n) with the small-x tail correction.
template <class Real = double>
PValue p_eval(const RieszContext<Real>& ctx, double y) {
  return ctx.eval(y);
}

/// -Σ_{n <= [y^{1/2-ε}] - 1} (b_n/n) Res(√y/n); Res carries the calibrated
/// leading power and the constants C_i. Zero for r = 0.
template <class Real = double>
double main_term(const RieszContext<Real>& ctx, double y, double eps) {
  if (!(eps > 0 && eps < 0.5)) throw std::invalid_argument("main_term: eps must lie in (0, 1/2)");
  if (!(y > 0)) throw std::invalid_argument("main_term: y must be positive");
  if (ctx.constants().r == 0) return 0;
  const double cut = std::floor(std::pow(y, 0.5 - eps)) - 1;
  if (cut < 1) return 0;
  const std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(cut), ctx.table().N);
  return -ctx.residue_prefix(y, m);
}

struct DecayFit {
  double slope = 0;
  double slope_stderr = 0;
  double rms_residual = 0;
  double nonzero_fraction = 0;
  bool consistent = false;  // slope <= -0.15, informational
  bool nondecay_flag = false;
  std::size_t fit_points = 0;
};

/// Slope of log(envelope) against log y over the top `decades` of the grid.
/// The envelope at y is max |v| over grid points >= y, which follows the
/// peaks of an oscillating, decaying signal.
inline DecayFit decay_fit(const std::vector<double>& y, const std::vector<double>& v, double decades = 2) {
  if (y.size() != v.size() || y.size() < 3) throw std::invalid_argument("decay_fit: need matching grids of size >= 3");
  const double y_lo = y.back() / std::pow(10.0, decades);
  std::vector<double> lx, ly, env;
  std::size_t total = 0, nonzero = 0;
  double running = 0;
  std::vector<double> suffix(v.size());
  for (std::size_t i = v.size(); i-- > 0;) {
    running = std::max(running, std::abs(v[i]));
    suffix[i] = running;
  }
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] < y_lo) continue;
    ++total;
    if (v[i] != 0 && std::isfinite(v[i])) ++nonzero;
    if (suffix[i] > 0) {
      lx.push_back(std::log(y[i]));
      ly.push_back(std::log(suffix[i]));
    }
  }
  DecayFit out;
  out.nonzero_fraction = total ? double(nonzero) / double(total) : 0.0;
  if (out.nonzero_fraction < 0.8 || lx.size() < 3)
    throw numeric_error("riesz_criterion", "degenerate decay fit: too few nonzero values in the top decades");
  const auto fit = fit_line(lx, ly);
  out.slope = fit.slope;
  out.slope_stderr = fit.slope_stderr;
  out.rms_residual = fit.rms_residual;
  out.fit_points = lx.size();
  out.consistent = out.slope <= -0.15;
  out.nondecay_flag = out.slope > -0.05;
  return out;
}

struct RieszScanOptions {
  double y_min = 1e2;
  double y_max = 1e6;
  int points = 241;
  double eps = 0.1;
  std::size_t N = 0;  // 0: max(1000, 10 √y_max)
};

struct RieszScan {
  FieldDescriptor field;
  std::vector<double> y_grid;
  std::vector<double> P_values;
  std::vector<double> main_term;
  std::vector<double> corrected;
  std::vector<double> tail_estimate;
  std::vector<std::size_t> N_used;
  double eps = 0.1;
  DecayFit fit;    // of |P - main term|
  DecayFit p_fit;  // of |P|
  std::string leading_power;  // calibrated power used by the main term
  std::vector<std::string> warnings;
};

inline std::vector<double> log_grid(double lo, double hi, int points) {
  if (!(lo > 0 && hi > lo) || points < 2) throw std::invalid_argument("log_grid: need 0 < lo < hi, points >= 2");
  std::vector<double> g(points);
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < points; ++i) g[i] = std::exp(a + (b - a) * i / (points - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

template <class Real = double>
RieszScan riesz_scan(const FieldDescriptor& field, const RieszScanOptions& opt = {}) {
  if (opt.y_max / opt.y_min < 999.999) throw std::invalid_argument("riesz_scan: grid must span at least 3 decades");
  if (!(opt.eps > 0 && opt.eps < 0.5)) throw std::invalid_argument("riesz_scan: eps must lie in (0, 1/2)");
  const std::size_t N =
      opt.N ? opt.N : std::max<std::size_t>(1000, static_cast<std::size_t>(std::ceil(10 * std::sqrt(opt.y_max))));
  if (double(N) < 10 * std::sqrt(opt.y_max)) throw std::invalid_argument("riesz_scan: N below 10 sqrt(y_max)");
  const auto table = build_coefficients(field, N);
  const RieszContext<Real> ctx(field, table, kernel_spec_for(field));

  RieszScan out;
  out.field = field;
  out.eps = opt.eps;
  out.leading_power = ctx.constants().matched_power;
  out.y_grid = log_grid(opt.y_min, opt.y_max, opt.points);
  const std::size_t n = out.y_grid.size();
  out.P_values.resize(n);
  out.main_term.resize(n);
  out.corrected.resize(n);
  out.tail_estimate.resize(n);
  out.N_used.resize(n);
  parallel_for(n, [&](std::size_t i) {
    const auto p = ctx.eval(out.y_grid[i]);
    out.P_values[i] = p.value;
    out.tail_estimate[i] = p.tail_estimate;
    out.N_used[i] = p.n_used;
    out.main_term[i] = main_term(ctx, out.y_grid[i], opt.eps);
    out.corrected[i] = p.value - out.main_term[i];
  });
  for (double v : out.P_values)
    if (!std::isfinite(v)) throw numeric_error("riesz_criterion", "non-finite P value");
  out.fit = decay_fit(out.y_grid, out.corrected);
  out.p_fit = decay_fit(out.y_grid, out.P_values);
  if (out.fit.nondecay_flag) out.warnings.push_back("corrected envelope does not decay over the top two decades");
  return out;
}

namespace detail {

// ∫_0^X x^{a-1} Z(x) dx for the closed-form kernels, from their power
// series at 0; X is small and Re a > -1.
inline std::complex<double> small_x_mellin(int r1, int r2, std::complex<double> a, double X) {
  using C = std::complex<double>;
  C acc = 0;
  const double lX = std::log(X);
  if (r1 == 1 && r2 == 0) {
    double fact = 1;
    for (int k = 1; k <= 12; ++k) {
      fact *= k;
      const C b = double(2 * k) + a;
      acc += (k % 2 ? -2.0 : 2.0) / fact * std::exp(b * lX) / b;
    }
  } else if (r1 == 0 && r2 == 1) {
    double fact = 1;
    for (int k = 1; k <= 20; ++k) {
      fact *= k;
      const C b = double(k) + a;
      acc += (k % 2 ? -1.0 : 1.0) / fact * std::exp(b * lX) / b;
    }
  } else if (r1 == 2 && r2 == 0) {
    double fact2 = 1, harmonic = 0;
    for (int k = 1; k <= 12; ++k) {
      fact2 *= double(k) * k;
      harmonic += 1.0 / k;
      const C b = double(2 * k) + a;
      const C xb = std::exp(b * lX);
      const C plain = xb / b;
      const C with_log = xb * (lX / b - 1.0 / (b * b));
      acc += 4.0 / fact2 * ((harmonic - std::numbers::egamma) * plain - with_log);
    }
  } else {
    throw std::invalid_argument("small_x_mellin: no closed form for this kernel");
  }
  return acc;
}

}  // namespace detail

struct MellinGridOptions {
  double u_min = -9.2;  // log y
  double u_max = 18.4;
  double step = 0.01;
  std::size_t N = 0;  // 0: 10 e^{u_max/2} + 100
};

/// P sampled on a uniform grid in u = log y, shared by several s.
struct MellinGrid {
  FieldDescriptor field;
  MellinGridOptions options;
  std::vector<double> u;
  std::vector<double> P;
  double P_limit = 0;  // limit of P(y) as y → ∞ (D_0 for r = 1, else 0)
  double max_tail_estimate = 0;
  std::vector<double> small_y_b;  // b_n/n for the small-y tail, n <= N
};

template <class Real = double>
MellinGrid mellin_grid(const FieldDescriptor& field, const MellinGridOptions& opt = {}) {
  if (!(opt.u_max > opt.u_min) || !(opt.step > 0)) throw std::invalid_argument("mellin_grid: bad grid");
  MellinGrid g;
  g.field = field;
  g.options = opt;
  int intervals = static_cast<int>(std::ceil((opt.u_max - opt.u_min) / opt.step));
  if (intervals % 4) intervals += 4 - intervals % 4;  // Simpson at h and 2h
  const double h = (opt.u_max - opt.u_min) / intervals;
  const std::size_t N =
      opt.N ? opt.N : static_cast<std::size_t>(std::ceil(10 * std::exp(opt.u_max / 2))) + 100;
  const auto table = build_coefficients(field, N);
  const RieszContext<Real> ctx(field, table, kernel_spec_for(field));
  g.u.resize(intervals + 1);
  g.P.resize(intervals + 1);
  std::vector<double> tails(intervals + 1);
  parallel_for(g.u.size(), [&](std::size_t i) {
    g.u[i] = opt.u_min + h * double(i);
    const double y = std::exp(g.u[i]);
    const std::size_t n_max = std::min<std::size_t>(N, static_cast<std::size_t>(10 * std::sqrt(y)) + 100);
    const auto p = ctx.eval(y, n_max);
    g.P[i] = p.value;
    tails[i] = p.tail_estimate;
  });
  g.max_tail_estimate = *std::max_element(tails.begin(), tails.end());
  if (field.r >= 1) {
    const auto ex = expansion_data<Real>(field);
    g.P_limit = static_cast<double>(ex.D[0]) * ctx.constants().leading_power_coeff / std::pow(2.0, field.r1);
  }
  g.small_y_b.resize(N + 1);
  for (std::size_t n = 1; n <= N; ++n) g.small_y_b[n] = double(table.b[n]) / double(n);
  return g;
}

struct MellinReport {
  std::complex<double> s;
  std::complex<double> lhs;  // quadrature plus both tails
  std::complex<double> rhs;  // 2 Γ^{r1}(-s) Γ^{r2}(-2s) / ζ_K(2s+1)
  std::complex<double> quadrature;
  std::complex<double> small_y_tail;
  std::complex<double> large_y_tail;
  double quadrature_error = 0;  // |Simpson(h) - Simpson(2h)|
  double large_tail_bound = 0;  // residual oscillation beyond the grid
  double relative_discrepancy = 0;
  double imag_residue = 0;  // |Im| of both sides when s is real
  bool pass = false;
  // The classical form Σ μ(k)/k e^{-y/k^2} is P/2 for Q.
  double hl_factor = 2;
  std::complex<double> hl_rhs;
  double hl_relative_discrepancy = 0;
};

template <class Real = double>
MellinReport mellin_identity_check(const MellinGrid& g, std::complex<double> s) {
  if (!(s.real() > 0 && s.real() < 0.5)) throw std::invalid_argument("mellin_identity_check: need 0 < Re s < 1/2");
  using C = std::complex<double>;
  const auto& f = g.field;
  MellinReport out;
  out.s = s;

  auto simpson = [&](std::size_t stride) {
    const std::size_t M = (g.u.size() - 1) / stride;
    const double h = (g.u[1] - g.u[0]) * double(stride);
    compensated_sum<C> acc;
    for (std::size_t k = 0; k <= M; ++k) {
      const std::size_t i = k * stride;
      const double w = (k == 0 || k == M) ? 1.0 : (k % 2 ? 4.0 : 2.0);
      acc += w * std::exp(-s * g.u[i]) * g.P[i];
    }
    return acc.value() * h / 3.0;
  };
  out.quadrature = simpson(1);
  out.quadrature_error = std::abs(out.quadrature - simpson(2));

  // y < y0: Σ_n (b_n/n) 2 n^{-2s} ∫_0^{√y0/n} x^{-2s-1} Z(x) dx.
  const double y0 = std::exp(g.u.front());
  compensated_sum<C> small;
  for (std::size_t n = 1; n < g.small_y_b.size(); ++n) {
    if (g.small_y_b[n] == 0) continue;
    const double X = std::sqrt(y0) / double(n);
    small += g.small_y_b[n] * 2.0 * std::exp(-2.0 * s * std::log(double(n))) *
             detail::small_x_mellin(f.r1, f.r2, -2.0 * s, X);
  }
  out.small_y_tail = small.value();

  // y > Y: the limit of P integrates exactly; the oscillating rest is bounded
  // by its size near Y.
  const double Y = std::exp(g.u.back());
  out.large_y_tail = g.P_limit * std::exp(-s * std::log(Y)) / s;
  double osc = 0;
  for (std::size_t i = g.u.size(); i-- > 0 && g.u[i] > g.u.back() - std::log(10.0);)
    osc = std::max(osc, std::abs(g.P[i] - g.P_limit));
  out.large_tail_bound = osc * std::pow(Y, -s.real()) / (s.real() + 0.25);

  out.lhs = out.quadrature + out.small_y_tail + out.large_y_tail;
  C gam = 2.0;
  if (f.r1) gam *= std::pow(gamma<double>(-s), f.r1);
  if (f.r2) gam *= std::pow(gamma<double>(-2.0 * s), f.r2);
  out.rhs = gam / dedekind_eval(2.0 * s + 1.0, f);
  out.relative_discrepancy = std::abs(out.lhs - out.rhs) / std::abs(out.rhs);
  if (s.imag() == 0) out.imag_residue = std::max(std::abs(out.lhs.imag()), std::abs(out.rhs.imag()));
  out.pass = out.relative_discrepancy <= 1e-3 && out.imag_residue <= 1e-6;
  out.hl_rhs = out.rhs / out.hl_factor;
  out.hl_relative_discrepancy = std::abs(out.lhs / out.hl_factor - out.hl_rhs) / std::abs(out.hl_rhs);
  return out;
}

struct MkDecayReport {
  std::size_t N = 0;
  std::int64_t M_at_1 = 0;
  double m_at_1 = 0;
  double exponent_M = 0;  // envelope slope of |M_K(x)|
  double exponent_m = 0;  // envelope slope of |m_K(x)|
  double max_scaled_M = 0;  // max |M_K(x)| x^{-0.6} on the range
  std::vector<std::string> warnings;
};

/// Envelope exponents of M_K(x) = Σ_{n<=x} b_n and m_K(x) = Σ_{n<=x} b_n/n
/// over x in [10^3, N]. Observational only.
inline MkDecayReport m_k_decay_probe(const CoefficientTable& t) {
  if (t.N < 2000) throw std::invalid_argument("m_k_decay_probe: table too short");
  MkDecayReport out;
  out.N = t.N;
  out.M_at_1 = t.M[1];
  out.m_at_1 = t.m[1];
  if (t.N < 1'000'000) out.warnings.push_back("table shorter than 1e6; exponents are rough");
  // Growing |M|: running max from the left. Decaying |m|: max over n >= x.
  std::vector<double> envM(t.N + 1, 0.0), envm(t.N + 2, 0.0);
  double run = 0;
  for (std::size_t n = 1; n <= t.N; ++n) {
    run = std::max(run, std::abs(double(t.M[n])));
    envM[n] = run;
  }
  run = 0;
  for (std::size_t n = t.N; n >= 1; --n) {
    run = std::max(run, std::abs(t.m[n]));
    envm[n] = run;
  }
  const auto grid = log_grid(1e3, double(t.N), 200);
  std::vector<double> lx, lM, lm;
  for (double x : grid) {
    const auto n = static_cast<std::size_t>(x);
    lx.push_back(std::log(double(n)));
    lM.push_back(std::log(std::max(envM[n], 1.0)));
    lm.push_back(std::log(std::max(envm[n], 1e-300)));
  }
  out.exponent_M = fit_line(lx, lM).slope;
  out.exponent_m = fit_line(lx, lm).slope;
  for (std::size_t n = 1000; n <= t.N; ++n)
    out.max_scaled_M = std::max(out.max_scaled_M, std::abs(double(t.M[n])) * std::pow(double(n), -0.6));
  return out;
}

}  // namespace dzeta
