#pragma once

// Riemann ζ, Hurwitz ζ and L(s, χ_{d_K}) by Euler–Maclaurin summation.

#include <cmath>
#include <complex>
#include <stdexcept>

#include "field.hpp"
#include "gamma.hpp"
#include "numeric.hpp"

namespace dzeta {

namespace detail {

// B_{2j} as exact fractions, j = 1..12.
inline constexpr long double bernoulli_num[12] = {1.0L,      -1.0L,  1.0L,      -1.0L,      5.0L,        -691.0L,
                                                  7.0L,      -3617.0L, 43867.0L, -174611.0L, 854513.0L, -236364091.0L};
inline constexpr long double bernoulli_den[12] = {6.0L, 30.0L, 42.0L, 30.0L, 66.0L, 2730.0L,
                                                  6.0L, 510.0L, 798.0L, 330.0L, 138.0L, 2730.0L};

template <class Real>
Real bernoulli_over_factorial(int j) {
  long double f = 1;
  for (int k = 2; k <= 2 * j; ++k) f *= k;
  return static_cast<Real>(bernoulli_num[j - 1] / bernoulli_den[j - 1] / f);
}

template <class Real>
constexpr int em_depth() {
  return sizeof(Real) > 8 ? 12 : 8;
}

template <class Real>
int em_terms(std::complex<Real> s) {
  return static_cast<int>(std::ceil(std::abs(s.imag()))) + (sizeof(Real) > 8 ? 40 : 30);
}

// (e^u - 1)/u for complex u, accurate near 0.
template <class Real>
std::complex<Real> expm1_ratio(std::complex<Real> u) {
  if (std::abs(u) < Real(1e-2)) {
    std::complex<Real> term = 1, sum = 1;
    for (int k = 2; k <= 9; ++k) {
      term *= u / Real(k);
      sum += term;
    }
    return sum;
  }
  return (std::exp(u) - Real(1)) / u;
}

// Euler–Maclaurin for ζ(s, a). With `regularized_pole` the pole term
// X^{1-s}/(s-1) is replaced by (X^{1-s} - 1)/(s-1); sums of these over a
// character with Σχ(a) = 0 are unchanged and stay finite at s = 1.
template <class Real>
std::complex<Real> hurwitz_em(std::complex<Real> s, Real a, int N, int depth, bool regularized_pole) {
  compensated_sum<std::complex<Real>> sum;
  for (int k = N - 1; k >= 0; --k) sum += std::exp(-s * std::log(Real(k) + a));
  const Real X = Real(N) + a;
  const Real logX = std::log(X);
  const std::complex<Real> Xs = std::exp(-s * logX);
  if (regularized_pole) {
    sum += -logX * expm1_ratio((Real(1) - s) * logX);
  } else {
    sum += Xs * X / (s - Real(1));
  }
  sum += Xs / Real(2);
  std::complex<Real> poch = s;
  std::complex<Real> xpow = Xs / X;
  for (int j = 1; j <= depth; ++j) {
    sum += bernoulli_over_factorial<Real>(j) * poch * xpow;
    poch *= (s + Real(2 * j - 1)) * (s + Real(2 * j));
    xpow /= X * X;
  }
  return sum.value();
}

}  // namespace detail

/// Hurwitz ζ(s, a), 0 < a <= 1, s != 1.
template <class Real>
std::complex<Real> hurwitz_zeta(std::complex<Real> s, Real a) {
  if (s == std::complex<Real>(1)) throw pole_error("hurwitz_zeta: pole at s = 1");
  return detail::hurwitz_em(s, a, detail::em_terms(s), detail::em_depth<Real>(), false);
}

/// Riemann ζ(s), s != 1. Re s < -2 goes through the functional equation.
template <class Real>
std::complex<Real> zeta_eval(std::complex<Real> s) {
  if (s == std::complex<Real>(1)) throw pole_error("zeta_eval: pole at s = 1");
  if (s.real() < Real(-2)) {
    const std::complex<Real> one_minus = Real(1) - s;
    const std::complex<Real> pref = std::exp(s * std::log(Real(2)) + (s - Real(1)) * std::log(pi_v<Real>) +
                                             log_gamma(one_minus));
    return pref * std::sin(pi_v<Real> * s / Real(2)) * zeta_eval(one_minus);
  }
  return detail::hurwitz_em(s, Real(1), detail::em_terms(s), detail::em_depth<Real>(), false);
}

/// L(s, χ_{d_K}) = q^{-s} Σ_a χ(a) ζ(s, a/q). Entire for the nontrivial
/// real character, so s = 1 is allowed.
template <class Real>
std::complex<Real> l_eval(std::complex<Real> s, const FieldDescriptor& field) {
  if (!field.is_quadratic()) throw std::invalid_argument("l_eval: field must be quadratic");
  const std::int64_t q = field.conductor();
  if (s.real() < Real(-2)) {
    // Λ(s, χ) = (q/π)^{(s+κ)/2} Γ((s+κ)/2) L(s, χ) is symmetric under s -> 1 - s.
    const int kappa = field.d_K < 0 ? 1 : 0;
    const std::complex<Real> t = Real(1) - s;
    const Real lq = std::log(Real(q) / pi_v<Real>);
    const std::complex<Real> logratio = (t + Real(kappa)) / Real(2) * lq + log_gamma((t + Real(kappa)) / Real(2)) -
                                        (s + Real(kappa)) / Real(2) * lq;
    // Γ((s+κ)/2) has poles at s = -κ, -κ-2, ...; there L has a trivial zero.
    const std::complex<Real> g = (s + Real(kappa)) / Real(2);
    if (detail::is_nonpositive_integer(g)) return {0, 0};
    return std::exp(logratio - log_gamma(g)) * l_eval(t, field);
  }
  const int N = detail::em_terms(s);
  const int depth = detail::em_depth<Real>();
  const QuadraticCharacter chi(field);
  compensated_sum<std::complex<Real>> acc;
  for (std::int64_t a = 1; a <= q; ++a) {
    const int c = chi(a);
    if (c == 0) continue;
    const auto hz = detail::hurwitz_em(s, Real(a) / Real(q), N, depth, true);
    acc += c > 0 ? hz : -hz;
  }
  return std::exp(-s * std::log(Real(q))) * acc.value();
}

}  // namespace dzeta
