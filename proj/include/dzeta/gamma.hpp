#pragma once

// Complex log-gamma by upward recurrence followed by the Stirling series.

#include <cmath>
#include <complex>

#include "numeric.hpp"

namespace dzeta {

namespace detail {

// B_{2k} / (2k (2k-1)) for k = 1..15.
template <class Real>
inline constexpr Real stirling_coeffs[15] = {
    Real(1.0L / 12.0L),
    Real(-1.0L / 360.0L),
    Real(1.0L / 1260.0L),
    Real(-1.0L / 1680.0L),
    Real(1.0L / 1188.0L),
    Real(-691.0L / 360360.0L),
    Real(1.0L / 156.0L),
    Real(-3617.0L / 122400.0L),
    Real(43867.0L / 244188.0L),
    Real(-174611.0L / 125400.0L),
    Real(77683.0L / 5796.0L),
    Real(-236364091.0L / 1506960.0L),
    Real(657931.0L / 300.0L),
    Real(-3392780147.0L / 93960.0L),
    Real(1723168255201.0L / 2492028.0L),
};

template <class Real>
bool is_nonpositive_integer(std::complex<Real> z) {
  return z.imag() == 0 && z.real() <= 0 && std::floor(z.real()) == z.real();
}

}  // namespace detail

/// log Γ(z) on the branch that is real on the positive axis and continuous
/// in the plane cut along (-∞, 0]; the imaginary part is not reduced
/// modulo 2π, so arg Γ along vertical lines is continuous.
template <class Real>
std::complex<Real> log_gamma(std::complex<Real> z) {
  if (detail::is_nonpositive_integer(z)) throw pole_error("log_gamma: pole at non-positive integer");
  constexpr Real shift_to = Real(15);
  std::complex<Real> shift_sum{};
  compensated_sum<std::complex<Real>> shifts;
  while (z.real() < shift_to) {
    shifts += std::log(z);
    z += Real(1);
  }
  shift_sum = shifts.value();
  const std::complex<Real> zinv = Real(1) / z;
  const std::complex<Real> zinv2 = zinv * zinv;
  std::complex<Real> series{};
  std::complex<Real> p = zinv;
  constexpr int terms = sizeof(Real) > 8 ? 15 : 11;
  for (int k = 0; k < terms; ++k) {
    series += detail::stirling_coeffs<Real>[k] * p;
    p *= zinv2;
  }
  const Real half_log_2pi = Real(0.918938533204672741780329736405617639861L);
  return (z - Real(0.5)) * std::log(z) - z + half_log_2pi + series - shift_sum;
}

template <class Real>
std::complex<Real> gamma(std::complex<Real> z) {
  return std::exp(log_gamma(z));
}

/// Real Γ for the handful of real call sites; keeps the sign for x < 0.
template <class Real>
Real gamma_real(Real x) {
  return std::exp(log_gamma(std::complex<Real>(x, 0))).real();
}

/// ψ(x) and ψ'(x) for real x > 0.
template <class Real>
Real digamma(Real x) {
  Real acc = 0;
  while (x < 15) {
    acc -= 1 / x;
    x += 1;
  }
  const Real inv2 = 1 / (x * x);
  Real p = inv2;
  Real series = 0;
  for (int k = 1; k <= 8; ++k) {
    series += detail::stirling_coeffs<Real>[k - 1] * Real(2 * k - 1) * p;
    p *= inv2;
  }
  return acc + std::log(x) - 1 / (2 * x) - series;
}

template <class Real>
Real trigamma(Real x) {
  Real acc = 0;
  while (x < 15) {
    acc += 1 / (x * x);
    x += 1;
  }
  const Real inv = 1 / x;
  const Real inv2 = inv * inv;
  Real p = inv2 * inv;
  Real series = 0;
  for (int k = 1; k <= 8; ++k) {
    series += detail::stirling_coeffs<Real>[k - 1] * Real(2 * k * (2 * k - 1)) * p;
    p *= inv2;
  }
  return acc + inv + inv2 / 2 + series;
}

}  // namespace dzeta
