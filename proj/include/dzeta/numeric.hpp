#pragma once

// Shared numerical plumbing: constants, compensated summation, finite
// difference derivatives with Richardson extrapolation, Cauchy-ring Taylor
// coefficients, and a deterministic index-parallel loop.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace dzeta {

template <class Real>
using complex_t = std::complex<Real>;

template <class Real>
inline constexpr Real pi_v = std::numbers::pi_v<Real>;

template <class Real>
inline constexpr Real euler_gamma_v = std::numbers::egamma_v<Real>;

/// Error raised by a numerical component. `component()` names the module
/// that failed so reports can attribute the failure.
class numeric_error : public std::runtime_error {
 public:
  numeric_error(std::string component, const std::string& what)
      : std::runtime_error(component + ": " + what), component_(std::move(component)) {}
  const std::string& component() const noexcept { return component_; }

 private:
  std::string component_;
};

/// Raised when a function is evaluated at one of its poles.
class pole_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Neumaier's variant of Kahan summation.
template <class Real>
class compensated_sum {
 public:
  void add(Real x) {
    Real t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  compensated_sum& operator+=(Real x) {
    add(x);
    return *this;
  }
  Real value() const { return sum_ + comp_; }

 private:
  Real sum_{};
  Real comp_{};
};

template <class Real>
class compensated_sum<std::complex<Real>> {
 public:
  void add(std::complex<Real> z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  compensated_sum& operator+=(std::complex<Real> z) {
    add(z);
    return *this;
  }
  std::complex<Real> value() const { return {re_.value(), im_.value()}; }

 private:
  compensated_sum<Real> re_;
  compensated_sum<Real> im_;
};

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

template <class T>
struct derivative_estimate {
  T value{};
  double error{};
};

/// Derivative of order `order` at x0 by central differences of step h0,
/// h0/2, ..., h0/2^levels, combined in a Richardson tableau (the central
/// stencil error expands in even powers of h). `f` may be real or complex
/// valued; the step is always taken along the real axis.
template <class F, class Arg>
auto richardson_derivative(F&& f, Arg x0, int order, double h0, int levels) {
  using T = decltype(f(x0));
  auto stencil = [&](double h) {
    T acc{};
    for (int j = 0; j <= order; ++j) {
      double sign = (j % 2 == 0) ? 1.0 : -1.0;
      auto offset = static_cast<decltype(std::real(x0))>((0.5 * order - j) * h);
      acc += static_cast<decltype(std::real(x0))>(sign * binomial(order, j)) * f(x0 + offset);
    }
    return acc / static_cast<decltype(std::real(x0))>(std::pow(h, order));
  };
  std::vector<std::vector<T>> tab(levels + 1);
  double h = h0;
  for (int i = 0; i <= levels; ++i, h *= 0.5) {
    tab[i].resize(i + 1);
    tab[i][0] = stencil(h);
    double fac = 1.0;
    for (int m = 1; m <= i; ++m) {
      fac *= 4.0;
      tab[i][m] = tab[i][m - 1] +
                  (tab[i][m - 1] - tab[i - 1][m - 1]) / static_cast<decltype(std::real(x0))>(fac - 1.0);
    }
  }
  derivative_estimate<T> out;
  out.value = tab[levels][levels];
  out.error = levels > 0 ? static_cast<double>(std::abs(tab[levels][levels] - tab[levels - 1][levels - 1])) : 0.0;
  return out;
}

/// Taylor coefficients c_0..c_{count-1} of an analytic f around z0, from
/// `points` samples on the circle |z - z0| = radius (discrete Cauchy formula).
template <class Real, class F>
std::vector<std::complex<Real>> cauchy_taylor(F&& f, std::complex<Real> z0, Real radius, int count,
                                              int points = 64) {
  std::vector<std::complex<Real>> samples(points);
  for (int j = 0; j < points; ++j) {
    Real th = 2 * pi_v<Real> * j / points;
    samples[j] = f(z0 + std::polar(radius, th));
  }
  std::vector<std::complex<Real>> coeffs(count);
  for (int k = 0; k < count; ++k) {
    compensated_sum<std::complex<Real>> acc;
    for (int j = 0; j < points; ++j) {
      Real th = 2 * pi_v<Real> * j * k / points;
      acc += samples[j] * std::polar(Real(1), -th);
    }
    coeffs[k] = acc.value() / (Real(points) * std::pow(radius, Real(k)));
  }
  return coeffs;
}

/// Worker count: DZETA_THREADS when set, else hardware concurrency.
inline unsigned thread_count() {
  if (const char* env = std::getenv("DZETA_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1U : hc;
}

/// Runs f(i) for i in [0, n) over contiguous chunks. Callers write results
/// by index, so the outcome does not depend on the thread count.
template <class F>
void parallel_for(std::size_t n, F&& f) {
  unsigned workers = std::min<std::size_t>(thread_count(), n == 0 ? 1 : n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    std::size_t lo = w * chunk;
    std::size_t hi = std::min(n, lo + chunk);
    pool.emplace_back([&, lo, hi, w] {
      try {
        for (std::size_t i = lo; i < hi; ++i) f(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Least-squares line through (x_i, y_i). Returns slope, intercept and the
/// standard error of the slope.
struct line_fit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double rms_residual = 0.0;
};

inline line_fit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  line_fit out;
  const std::size_t n = x.size();
  if (n < 2) return out;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) return out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  double ssr = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = y[i] - (out.intercept + out.slope * x[i]);
    ssr += r * r;
  }
  out.rms_residual = std::sqrt(ssr / n);
  out.slope_stderr = n > 2 ? std::sqrt(ssr / (n - 2) / sxx) : 0.0;
  return out;
}

}  // namespace dzeta
