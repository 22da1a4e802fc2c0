#pragma once

// Modified Bessel function K0 for real positive arguments.
//
//   x <= 2 : ascending series  K0 = -(log(x/2) + γ) I0(x) + Σ (x²/4)^k H_k / (k!)²
//   x >  2 : Steed's continued fraction (Temme's CF2), which is the
//            convergent resummation of the large-x asymptotic expansion.

#include <cmath>
#include <limits>
#include <stdexcept>

#include "numeric.hpp"

namespace dzeta {

namespace detail {

// I0(x) - 1 and Σ_{k>=1} (x²/4)^k H_k / (k!)², summed together.
template <class Real>
void k0_series_parts(Real x, Real& i0_minus_one, Real& harmonic_part) {
  const Real t = x * x / 4;
  Real term = 1;
  Real h = 0;
  compensated_sum<Real> i0m1;
  compensated_sum<Real> hp;
  for (int k = 1; k < 200; ++k) {
    term *= t / (Real(k) * Real(k));
    h += Real(1) / k;
    i0m1 += term;
    hp += term * h;
    if (term * h < std::numeric_limits<Real>::epsilon() * std::numeric_limits<Real>::epsilon()) break;
    if (term * h < std::numeric_limits<Real>::epsilon() * std::abs(hp.value()) * Real(1e-3)) break;
  }
  i0_minus_one = i0m1.value();
  harmonic_part = hp.value();
}

template <class Real>
Real k0_steed(Real x) {
  // Temme / Steed continued fraction for K_mu at mu = 0.
  const Real eps = std::numeric_limits<Real>::epsilon();
  Real b = 2 * (1 + x);
  Real d = 1 / b;
  Real h = d;
  Real delh = d;
  Real q1 = 0;
  Real q2 = 1;
  const Real a1 = Real(0.25);
  Real q = a1;
  Real c = a1;
  Real a = -a1;
  Real s = 1 + q * delh;
  for (int i = 2; i < 10000; ++i) {
    a -= 2 * (i - 1);
    c = -a * c / i;
    Real qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2;
    d = 1 / (b + a * d);
    delh = (b * d - 1) * delh;
    h += delh;
    Real dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < eps / 4) break;
  }
  return std::sqrt(pi_v<Real> / (2 * x)) * std::exp(-x) / s;
}

}  // namespace detail

/// K0(x) for x > 0.
template <class Real>
Real bessel_k0(Real x) {
  if (!(x > 0)) throw std::domain_error("bessel_k0: argument must be positive");
  if (x <= 2) {
    Real i0m1, hp;
    detail::k0_series_parts(x, i0m1, hp);
    const Real lg = std::log(x / 2) + euler_gamma_v<Real>;
    return -lg * (1 + i0m1) + hp;
  }
  return detail::k0_steed(x);
}

/// K0(x) + γ + log(x/2), the regular part that vanishes like x² log x at 0.
/// Evaluated without the cancellation of the naive sum for small x.
template <class Real>
Real bessel_k0_regular(Real x) {
  if (!(x > 0)) throw std::domain_error("bessel_k0_regular: argument must be positive");
  if (x <= 2) {
    Real i0m1, hp;
    detail::k0_series_parts(x, i0m1, hp);
    const Real lg = std::log(x / 2) + euler_gamma_v<Real>;
    return -lg * i0m1 + hp;
  }
  return detail::k0_steed(x) + euler_gamma_v<Real> + std::log(x / 2);
}

}  // namespace dzeta
