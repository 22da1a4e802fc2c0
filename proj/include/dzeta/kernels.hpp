#pragma once

// Inverse Mellin kernels of Γ^{r1}(s/2) Γ^{r2}(s):
//
//   Z(x)  = (1/2πi) ∫_{(c)} Γ^{r1}(s/2) Γ^{r2}(s) x^{-s} ds,  -1/2 < c < 0
//   Z̃(x) = the same integral on a line Re s = d > 0
//
// Z̃ - Z is the residue at s = 0, a polynomial in log x of degree r built
// from the Taylor coefficients C_i of Γ^{r1}(s/2 + 1) Γ^{r2}(s + 1) at 0.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bessel.hpp"
#include "gamma.hpp"
#include "numeric.hpp"
#include "zeta.hpp"

namespace dzeta {

struct KernelSpec {
  int r1 = 1;
  int r2 = 0;
  double c = -0.25;
  double d = 0.5;
  double t_max = 0;  // 0 picks the height from the decay of the integrand
  double quad_step = 0.01;

  int degree() const { return r1 + 2 * r2; }
  int r() const { return r1 + r2 - 1; }

  void validate() const {
    if (r1 < 0 || r2 < 0 || r1 + r2 == 0) throw std::invalid_argument("KernelSpec: need r1, r2 >= 0, not both 0");
    if (!(c > -0.5 && c < 0)) throw std::invalid_argument("KernelSpec: c must lie in (-1/2, 0)");
    if (!(d > 0)) throw std::invalid_argument("KernelSpec: d must be positive");
    if (!(quad_step > 0) || t_max < 0) throw std::invalid_argument("KernelSpec: quadrature budgets must be positive");
  }
};

template <class Real>
std::complex<Real> log_kernel_gamma(int r1, int r2, std::complex<Real> s) {
  std::complex<Real> v{};
  if (r1) v += Real(r1) * log_gamma(s / Real(2));
  if (r2) v += Real(r2) * log_gamma(s);
  return v;
}

/// Distance from `a` to the nearest pole of Γ^{r1}(s/2)Γ^{r2}(s) on the real axis.
inline double pole_distance(int r2, double a) {
  if (a > 0) return a;
  const double spacing = r2 > 0 ? 1.0 : 2.0;
  const double k = std::round(-a / spacing);
  return std::abs(a + k * spacing);
}

template <class Real>
std::optional<Real> z_closed_form(int r1, int r2, Real x) {
  if (!(x > 0)) throw std::domain_error("z_closed_form: x must be positive");
  if (r1 == 1 && r2 == 0) return 2 * std::expm1(-x * x);
  if (r1 == 0 && r2 == 1) return std::expm1(-x);
  if (r1 == 2 && r2 == 0) return 4 * bessel_k0_regular(2 * x);
  return std::nullopt;
}

template <class Real>
std::optional<Real> z_tilde_closed_form(int r1, int r2, Real x) {
  if (!(x > 0)) throw std::domain_error("z_tilde_closed_form: x must be positive");
  if (r1 == 1 && r2 == 0) return 2 * std::exp(-x * x);
  if (r1 == 0 && r2 == 1) return std::exp(-x);
  if (r1 == 2 && r2 == 0) return 4 * bessel_k0(2 * x);
  return std::nullopt;
}

template <class Real>
struct KernelValue {
  Real value{};
  double err_est = 0;
  double imag_residual = 0;
  double t_max = 0;
  std::string method;
  std::vector<std::string> warnings;
};

/// Trapezoid rule on the vertical line Re s = a with Γ-factor values cached
/// at the nodes, so that many x can be evaluated cheaply. The integrand is
/// analytic in a strip around the line, so the rule converges geometrically
/// in 1/h; the error estimate compares steps h and 2h.
template <class Real>
class LineKernel {
 public:
  LineKernel(int r1, int r2, double abscissa, double step = 0.01, double t_max = 0)
      : r1_(r1), r2_(r2), a_(abscissa), h_(step) {
    if (r1 < 0 || r2 < 0 || r1 + r2 == 0) throw std::invalid_argument("LineKernel: need r1, r2 >= 0, not both 0");
    if (!(step > 0)) throw std::invalid_argument("LineKernel: step must be positive");
    if (pole_distance(r2, abscissa) < 1e-6) throw pole_error("LineKernel: abscissa within 1e-6 of a pole");
    const Real peak = std::abs(std::exp(log_kernel_gamma<Real>(r1, r2, {Real(a_), 0})));
    // Grow the node set until |Γ-factor| falls below 1e-18 of its peak, or
    // up to the requested height.
    for (std::size_t k = 0;; ++k) {
      const Real t = Real(k) * Real(h_);
      const auto up = std::exp(log_kernel_gamma<Real>(r1, r2, {Real(a_), t}));
      const auto down = std::exp(log_kernel_gamma<Real>(r1, r2, {Real(a_), -t}));
      upper_.push_back(up);
      lower_.push_back(down);
      if (t_max > 0 ? t >= Real(t_max) : (k > 10 && std::abs(up) < Real(1e-18) * peak)) break;
      if (k > 5'000'000) throw numeric_error("mellin_kernels", "line integral node budget exceeded");
    }
    t_max_ = double(h_) * double(upper_.size() - 1);
    tail_ = static_cast<double>(std::abs(upper_.back()) / peak);
  }

  KernelValue<Real> eval(Real x) const {
    if (!(x > 0)) throw std::domain_error("LineKernel: x must be positive");
    const Real lx = std::log(x);
    const Real scale = std::exp(-Real(a_) * lx);
    // Symmetric sum over ±t; the real part pairs conjugates, the imaginary
    // part should cancel.
    compensated_sum<std::complex<Real>> full, coarse;
    for (std::size_t k = 0; k < upper_.size(); ++k) {
      const Real t = Real(k) * Real(h_);
      const std::complex<Real> rot = std::polar(Real(1), -t * lx);
      std::complex<Real> term = upper_[k] * rot + lower_[k] * std::conj(rot);
      if (k == 0) term /= Real(2);
      full += term;
      if (k % 2 == 0) coarse += term;
    }
    const std::complex<Real> fine = full.value() * Real(h_) * scale / (2 * pi_v<Real>);
    const std::complex<Real> rough = coarse.value() * Real(2 * h_) * scale / (2 * pi_v<Real>);
    KernelValue<Real> out;
    out.value = fine.real();
    out.imag_residual = static_cast<double>(std::abs(fine.imag()));
    out.err_est = static_cast<double>(std::abs(fine.real() - rough.real())) + tail_ * double(scale);
    out.t_max = t_max_;
    out.method = "line_integral";
    if (out.imag_residual > 1e-10) out.warnings.push_back("imaginary residue above 1e-10");
    if (out.err_est > 1e-8) out.warnings.push_back("quadrature error estimate above 1e-8");
    return out;
  }

  double abscissa() const { return a_; }
  double t_max() const { return t_max_; }
  std::size_t nodes() const { return upper_.size(); }

 private:
  int r1_, r2_;
  double a_, h_;
  double t_max_ = 0;
  double tail_ = 0;
  std::vector<std::complex<Real>> upper_, lower_;
};

/// One-off (1/2πi) ∫_{(abscissa)} Γ^{r1}(s/2) Γ^{r2}(s) x^{-s} ds.
template <class Real>
KernelValue<Real> z_line_integral(const KernelSpec& spec, Real x, double abscissa) {
  if (spec.r1 < 0 || spec.r2 < 0 || spec.r1 + spec.r2 == 0)
    throw std::invalid_argument("z_line_integral: need r1, r2 >= 0, not both 0");
  return LineKernel<Real>(spec.r1, spec.r2, abscissa, spec.quad_step, spec.t_max).eval(x);
}

/// log Z̃(x) from the line through the real saddle point of
/// Γ^{r1}(s/2)Γ^{r2}(s)x^{-s}, which keeps relative accuracy where Z̃ is
/// far below the round-off floor of a fixed contour.
template <class Real>
Real log_z_tilde_saddle(int r1, int r2, Real x) {
  if (!(x > 0)) throw std::domain_error("log_z_tilde_saddle: x must be positive");
  const Real lx = std::log(x);
  auto slope = [&](Real a) { return Real(r1) / 2 * digamma(a / 2) + Real(r2) * digamma(a) - lx; };
  Real lo = Real(1e-3), hi = 1;
  while (slope(hi) < 0) hi *= 2;
  if (slope(lo) > 0) hi = lo;
  for (int i = 0; i < 200 && hi - lo > Real(1e-12) * hi; ++i) {
    const Real mid = (lo + hi) / 2;
    (slope(mid) < 0 ? lo : hi) = mid;
  }
  const Real a = (lo + hi) / 2;
  const Real curvature = Real(r1) / 4 * trigamma(a / 2) + Real(r2) * trigamma(a);
  const Real width = 1 / std::sqrt(curvature);
  const Real h = std::max(Real(0.01), width / 200);
  const std::complex<Real> base = log_kernel_gamma<Real>(r1, r2, {a, 0}) - a * lx;
  compensated_sum<Real> acc;
  for (std::size_t k = 0;; ++k) {
    const Real t = Real(k) * h;
    const std::complex<Real> s(a, t);
    const std::complex<Real> v = std::exp(log_kernel_gamma<Real>(r1, r2, s) - s * lx - base);
    acc += (k == 0 ? Real(0.5) : Real(1)) * v.real();
    if (k > 10 && std::abs(v) < Real(1e-18)) break;
    if (k > 5'000'000) throw numeric_error("mellin_kernels", "saddle integral node budget exceeded");
  }
  return base.real() + std::log(acc.value() * h / pi_v<Real>);
}

struct ResidueConstants {
  int r1 = 1;
  int r2 = 0;
  int r = 0;
  std::vector<double> C;             // polygamma series route, used downstream
  std::vector<double> C_difference;  // finite-difference route, cross-check only
  double route_gap = 0;
  double leading_power_coeff = 1;
  std::string matched_power;     // "2^r1", "2^r2" or "2^r1 = 2^r2"
  double residual_r1 = 0;        // max calibration residual with 2^{r1}
  double residual_r2 = 0;        // and with 2^{r2}
};

/// Res_{s=0} Γ^{r1}(s/2) Γ^{r2}(s) x^{-s}
///   = (lead / r!) Σ_{i<=r} C_i binom(r, i) (-log x)^{r-i}.
inline double residue_at_zero(const ResidueConstants& k, double x) {
  if (!(x > 0)) throw std::domain_error("residue_at_zero: x must be positive");
  const double mlog = -std::log(x);
  double acc = 0;
  for (int i = 0; i <= k.r; ++i) acc += k.C[i] * binomial(k.r, i) * std::pow(mlog, k.r - i);
  return k.leading_power_coeff / factorial(k.r) * acc;
}

namespace detail {

// Taylor coefficients of X(s) = Γ^{r1}(1 + s/2) Γ^{r2}(1 + s) at 0 from
// log Γ(1 + z) = -γ z + Σ_{k>=2} (-1)^k ζ(k) z^k / k.
inline std::vector<double> x_taylor_series(int r1, int r2, int count) {
  std::vector<double> a(count + 1, 0.0);
  for (int k = 1; k <= count; ++k) {
    const double weight = r1 * std::pow(0.5, k) + r2;
    if (k == 1) {
      a[k] = -std::numbers::egamma * weight;
    } else {
      const double zk = zeta_eval(std::complex<double>(k, 0)).real();
      a[k] = (k % 2 == 0 ? 1.0 : -1.0) * zk / k * weight;
    }
  }
  std::vector<double> c(count + 1, 0.0);
  c[0] = 1;
  for (int n = 1; n <= count; ++n) {
    double s = 0;
    for (int k = 1; k <= n; ++k) s += k * a[k] * c[n - k];
    c[n] = s / n;
  }
  return c;
}

}  // namespace detail

/// C_i = X^{(i)}(0) by two routes, then the leading constant of the residue
/// polynomial fixed against Z̃ - Z from two contours at x ∈ {1/2, 1, 2}.
inline ResidueConstants residue_calibrate(int r1, int r2) {
  if (r1 < 0 || r2 < 0 || r1 + r2 == 0) throw std::invalid_argument("residue_calibrate: need r1 + r2 >= 1");
  ResidueConstants k;
  k.r1 = r1;
  k.r2 = r2;
  k.r = r1 + r2 - 1;
  auto Xd = [&](double s) {
    double v = 1;
    for (int i = 0; i < r1; ++i) v *= gamma_real(1 + s / 2);
    for (int i = 0; i < r2; ++i) v *= gamma_real(1 + s);
    return v;
  };
  const auto series = detail::x_taylor_series(r1, r2, k.r);
  k.C.assign(k.r + 1, 0.0);
  k.C_difference.assign(k.r + 1, 0.0);
  for (int i = 0; i <= k.r; ++i) {
    k.C[i] = series[i] * factorial(i);
    if (i == 0) {
      k.C_difference[i] = Xd(0.0);
    } else if (i == 1) {
      k.C_difference[i] = richardson_derivative(Xd, 0.0, 1, 1e-2, 6).value;
    } else {
      // Round-off grows like eps / h^i, so higher orders start wider.
      k.C_difference[i] = richardson_derivative(Xd, 0.0, i, 0.05 * i, 4).value;
    }
    k.route_gap = std::max(k.route_gap, std::abs(k.C[i] - k.C_difference[i]));
  }
  if (k.route_gap > 1e-8) {
    throw numeric_error("mellin_kernels", "C_i routes disagree by " + std::to_string(k.route_gap));
  }
  const LineKernel<double> left(r1, r2, -0.25);
  const LineKernel<double> right(r1, r2, 0.5);
  ResidueConstants trial = k;
  for (double x : {0.5, 1.0, 2.0}) {
    const double diff = right.eval(x).value - left.eval(x).value;
    trial.leading_power_coeff = std::ldexp(1.0, r1);
    k.residual_r1 = std::max(k.residual_r1, std::abs(diff - residue_at_zero(trial, x)));
    trial.leading_power_coeff = std::ldexp(1.0, r2);
    k.residual_r2 = std::max(k.residual_r2, std::abs(diff - residue_at_zero(trial, x)));
  }
  const bool ok1 = k.residual_r1 <= 1e-8, ok2 = k.residual_r2 <= 1e-8;
  if (ok1 && ok2) {
    k.matched_power = "2^r1 = 2^r2";
    k.leading_power_coeff = std::ldexp(1.0, r1);
  } else if (ok1) {
    k.matched_power = "2^r1";
    k.leading_power_coeff = std::ldexp(1.0, r1);
  } else if (ok2) {
    k.matched_power = "2^r2";
    k.leading_power_coeff = std::ldexp(1.0, r2);
  } else {
    throw numeric_error("mellin_kernels", "neither 2^r1 nor 2^r2 reproduces the contour difference");
  }
  return k;
}

struct AsymptoticReport {
  std::vector<double> x;
  std::vector<double> ratio;  // Z̃(x) / (x^{-r/n} exp(-n (x / 2^{r2})^{2/n}))
  double top_decade_slope = 0;
  bool bounded = false;
};

inline AsymptoticReport z_asymptotic_check(const KernelSpec& spec, const std::vector<double>& x_grid) {
  spec.validate();
  if (x_grid.empty() || x_grid.back() < 20) throw std::invalid_argument("z_asymptotic_check: grid must reach x >= 20");
  for (std::size_t i = 1; i < x_grid.size(); ++i)
    if (!(x_grid[i] > x_grid[i - 1])) throw std::invalid_argument("z_asymptotic_check: grid must be increasing");
  const double n = spec.degree();
  const double r = spec.r();
  AsymptoticReport rep;
  rep.x = x_grid;
  rep.ratio.resize(x_grid.size());
  parallel_for(x_grid.size(), [&](std::size_t i) {
    const double x = x_grid[i];
    const double log_bound = -r / n * std::log(x) - n * std::pow(x / std::ldexp(1.0, spec.r2), 2 / n);
    rep.ratio[i] = std::exp(log_z_tilde_saddle<double>(spec.r1, spec.r2, x) - log_bound);
  });
  // Slope of log ratio against log x over the top decade.
  std::vector<double> lx, lr;
  const double top = x_grid.back();
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    if (x_grid[i] >= top / 10) {
      lx.push_back(std::log(x_grid[i]));
      lr.push_back(std::log(rep.ratio[i]));
    }
  }
  rep.top_decade_slope = fit_line(lx, lr).slope;
  // A bounded ratio shows no power-law growth over the decade.
  rep.bounded = rep.top_decade_slope < 0.05;
  return rep;
}

/// Z and Z̃ for a given (r1, r2): closed forms where they exist, cached
/// line integrals otherwise.
template <class Real = double>
class KernelEvaluator {
 public:
  explicit KernelEvaluator(const KernelSpec& spec, bool use_closed_form = true)
      : spec_(spec), closed_(use_closed_form && z_closed_form<Real>(spec.r1, spec.r2, Real(1)).has_value()) {
    spec.validate();
    if (!closed_) {
      z_line_.emplace(spec.r1, spec.r2, spec.c, spec.quad_step, spec.t_max);
      zt_line_.emplace(spec.r1, spec.r2, spec.d, spec.quad_step, spec.t_max);
    }
  }

  Real z(Real x) const { return closed_ ? *z_closed_form<Real>(spec_.r1, spec_.r2, x) : z_line_->eval(x).value; }
  Real z_tilde(Real x) const {
    return closed_ ? *z_tilde_closed_form<Real>(spec_.r1, spec_.r2, x) : zt_line_->eval(x).value;
  }
  bool closed_form() const { return closed_; }
  const KernelSpec& spec() const { return spec_; }

 private:
  KernelSpec spec_;
  bool closed_;
  std::optional<LineKernel<Real>> z_line_, zt_line_;
};

}  // namespace dzeta
