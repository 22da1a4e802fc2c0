#pragma once

// ζ_K = ζ · L(·, χ_{d_K}), its completion Λ_K, critical-line zeros of both
// factors, ζ_K'(ρ), and the expansion data at s = 0 and s = 1 used by the
// residue terms of the modular relation.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "field.hpp"
#include "gamma.hpp"
#include "numeric.hpp"
#include "zeta.hpp"

namespace dzeta {

template <class Real>
std::complex<Real> dedekind_eval(std::complex<Real> s, const FieldDescriptor& field) {
  if (s == std::complex<Real>(1)) throw pole_error("dedekind_eval: pole at s = 1");
  const auto z = zeta_eval(s);
  return field.is_rational() ? z : z * l_eval(s, field);
}

/// log of the gamma factor (|d_K|/(4^{r2} π^n))^{s/2} Γ^{r1}(s/2) Γ^{r2}(s).
template <class Real>
std::complex<Real> log_gamma_factor(std::complex<Real> s, const FieldDescriptor& field) {
  const Real logA = -std::log(field.eta_as<Real>());
  std::complex<Real> v = s / Real(2) * logA;
  if (field.r1) v += Real(field.r1) * log_gamma(s / Real(2));
  if (field.r2) v += Real(field.r2) * log_gamma(s);
  return v;
}

template <class Real>
std::complex<Real> completed_lambda(std::complex<Real> s, const FieldDescriptor& field) {
  if (s == std::complex<Real>(0) || s == std::complex<Real>(1)) throw pole_error("completed_lambda: pole at s = 0 or 1");
  return std::exp(log_gamma_factor(s, field)) * dedekind_eval(s, field);
}

/// Relative defect |Λ(s) - Λ(1-s)| / max(|Λ(s)|, |Λ(1-s)|).
template <class Real>
Real functional_equation_defect(std::complex<Real> s, const FieldDescriptor& field) {
  const auto a = completed_lambda(s, field);
  const auto b = completed_lambda(Real(1) - s, field);
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

enum class ZeroSource { zeta_factor, l_factor };

inline const char* to_string(ZeroSource s) { return s == ZeroSource::zeta_factor ? "zeta" : "L"; }

/// Factor of ζ_K selected by `source`: ζ itself or L(·, χ_{d_K}).
template <class Real>
std::complex<Real> factor_eval(std::complex<Real> s, const FieldDescriptor& field, ZeroSource source) {
  return source == ZeroSource::zeta_factor ? zeta_eval(s) : l_eval(s, field);
}

/// Real function e^{iθ(t)} F(1/2 + it) for F = ζ or L(·, χ). θ is the phase
/// of the completed factor, so the product is real (root number +1).
template <class Real>
Real rotated_factor(Real t, const FieldDescriptor& field, ZeroSource source) {
  const std::complex<Real> s(Real(0.5), t);
  Real q = 1;
  int kappa = 0;
  if (source == ZeroSource::l_factor) {
    q = Real(field.conductor());
    kappa = field.d_K < 0 ? 1 : 0;
  }
  const Real theta = log_gamma((s + Real(kappa)) / Real(2)).imag() + t / 2 * std::log(q / pi_v<Real>);
  return (std::exp(std::complex<Real>(0, theta)) * factor_eval(s, field, source)).real();
}

template <class Real>
struct ZetaKPrime {
  std::complex<Real> value;  // product rule route
  std::complex<Real> alt;    // direct difference of ζ_K
  double rel_gap = 0;
  double error_est = 0;
};

/// ζ_K'(ρ) at a zero of the tagged factor: ζ'(ρ)L(ρ) or ζ(ρ)L'(ρ), checked
/// against a central difference of ζ_K itself. Throws when |ζ_K'(ρ)| is
/// below 1e-8, where simplicity of the zero cannot be relied on.
template <class Real>
ZetaKPrime<Real> zeta_K_prime_at(std::complex<Real> rho, const FieldDescriptor& field, ZeroSource source) {
  constexpr double h0 = 1e-2;
  constexpr int levels = 4;
  auto factor = [&](std::complex<Real> z) { return factor_eval(z, field, source); };
  const auto dfac = richardson_derivative(factor, rho, 1, h0, levels);
  std::complex<Real> other = 1;
  if (field.is_quadratic()) {
    other = source == ZeroSource::zeta_factor ? l_eval(rho, field) : zeta_eval(rho);
  }
  ZetaKPrime<Real> out;
  out.value = dfac.value * other;
  auto full = [&](std::complex<Real> z) { return dedekind_eval(z, field); };
  const auto dfull = richardson_derivative(full, rho, 1, h0, levels);
  out.alt = dfull.value;
  const Real mag = std::abs(out.value);
  if (!(mag >= Real(1e-8))) {
    throw numeric_error("lfunction_engine", "|zeta_K'(rho)| < 1e-8 at gamma = " + std::to_string(double(rho.imag())) +
                                                ": zero may not be simple");
  }
  out.rel_gap = static_cast<double>(std::abs(out.value - out.alt) / mag);
  out.error_est = dfac.error * static_cast<double>(std::abs(other)) + dfull.error;
  return out;
}

template <class Real>
struct ZeroRecord {
  Real gamma{};
  ZeroSource source = ZeroSource::zeta_factor;
  std::complex<Real> zeta_K_prime{};
  double derivative_gap = 0;
  double localization_err = 0;
  int bracket_id = 0;
  bool collision = false;
};

template <class Real>
struct ZeroList {
  FieldDescriptor field;
  Real T{};
  double c0 = 1.0;
  std::vector<ZeroRecord<Real>> zeros;
  std::vector<std::vector<std::size_t>> brackets;
  std::vector<std::string> warnings;
  double density_constant = 0;  // max over unit windows of count / log(T0 + 2)
  int refined_windows = 0;
};

struct ZeroScanOptions {
  double step = 0.05;
  double tolerance = 1e-9;
  double c0 = 1.0;
  double t_start = 0.05;
};

namespace detail {

template <class Real>
Real bracket_radius(Real gamma, double c0) {
  if (gamma <= Real(std::exp(1.0))) return 1;
  return std::exp(-Real(c0) * gamma / std::log(gamma));
}

// Sign-change brackets of the rotated factor on [t_lo, t_hi] at spacing h.
template <class Real>
std::vector<std::pair<Real, Real>> sign_changes(const FieldDescriptor& field, ZeroSource source, Real t_lo, Real t_hi,
                                                Real h) {
  const auto count = static_cast<std::size_t>(std::ceil((t_hi - t_lo) / h)) + 1;
  std::vector<Real> ts(count), vs(count);
  parallel_for(count, [&](std::size_t i) {
    ts[i] = std::min(t_hi, t_lo + h * Real(i));
    vs[i] = rotated_factor(ts[i], field, source);
  });
  std::vector<std::pair<Real, Real>> out;
  for (std::size_t i = 0; i + 1 < count; ++i) {
    if (vs[i] == 0) {
      out.emplace_back(ts[i], ts[i]);
    } else if ((vs[i] < 0) != (vs[i + 1] < 0) && vs[i + 1] != 0) {
      out.emplace_back(ts[i], ts[i + 1]);
    }
  }
  return out;
}

}  // namespace detail

template <class Real>
void assign_brackets(ZeroList<Real>& list) {
  list.brackets.clear();
  for (std::size_t i = 0; i < list.zeros.size(); ++i) {
    bool join = false;
    if (i > 0) {
      const Real g0 = list.zeros[i - 1].gamma, g1 = list.zeros[i].gamma;
      join = std::abs(g1 - g0) < detail::bracket_radius(g0, list.c0) + detail::bracket_radius(g1, list.c0);
    }
    if (!join) list.brackets.emplace_back();
    list.brackets.back().push_back(i);
    list.zeros[i].bracket_id = static_cast<int>(list.brackets.size() - 1);
  }
}

/// Zeros 1/2 + iγ, 0 < γ <= T, of ζ_K, located as sign changes of the
/// rotated factors and refined by bisection.
template <class Real>
ZeroList<Real> find_zeros(const FieldDescriptor& field, Real T, const ZeroScanOptions& opt = {}) {
  if (!(T > 0)) throw std::invalid_argument("find_zeros: T must be positive");
  if (T > 200) throw std::invalid_argument("find_zeros: T above the supported height 200");
  ZeroList<Real> list;
  list.field = field;
  list.T = T;
  list.c0 = opt.c0;
  std::vector<ZeroSource> sources{ZeroSource::zeta_factor};
  if (field.is_quadratic()) sources.push_back(ZeroSource::l_factor);

  const Real log_t = std::log(std::max(T, Real(std::exp(1.0))));
  for (ZeroSource src : sources) {
    auto brackets = detail::sign_changes(field, src, Real(opt.t_start), T, Real(opt.step));
    // Refine unit windows that look too crowded for the scan step.
    std::vector<std::pair<Real, Real>> refined;
    const int windows = static_cast<int>(std::ceil(T));
    std::size_t idx = 0;
    for (int w = 0; w < windows; ++w) {
      std::vector<std::pair<Real, Real>> in_window;
      while (idx < brackets.size() && brackets[idx].first < Real(w + 1)) in_window.push_back(brackets[idx++]);
      if (static_cast<Real>(in_window.size()) > 3 * log_t) {
        ++list.refined_windows;
        list.warnings.push_back("refined scan step in window [" + std::to_string(w) + ", " + std::to_string(w + 1) + "]");
        const Real lo = std::max(Real(opt.t_start), Real(w));
        const Real hi = std::min(T, Real(w + 1));
        for (auto& b : detail::sign_changes(field, src, lo, hi, Real(opt.step) / 10)) refined.push_back(b);
      } else {
        for (auto& b : in_window) refined.push_back(b);
      }
    }
    std::vector<ZeroRecord<Real>> found(refined.size());
    parallel_for(refined.size(), [&](std::size_t i) {
      Real lo = refined[i].first, hi = refined[i].second;
      Real flo = rotated_factor(lo, field, src);
      while (hi - lo > Real(2 * opt.tolerance)) {
        const Real mid = (lo + hi) / 2;
        const Real fm = rotated_factor(mid, field, src);
        if (fm == 0) {
          lo = hi = mid;
          break;
        }
        if ((fm < 0) == (flo < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      ZeroRecord<Real> rec;
      rec.gamma = (lo + hi) / 2;
      rec.source = src;
      rec.localization_err = static_cast<double>((hi - lo) / 2);
      found[i] = rec;
    });
    for (auto& r : found) list.zeros.push_back(r);
  }
  std::sort(list.zeros.begin(), list.zeros.end(), [](const auto& a, const auto& b) { return a.gamma < b.gamma; });

  for (std::size_t i = 0; i + 1 < list.zeros.size(); ++i) {
    if (std::abs(list.zeros[i + 1].gamma - list.zeros[i].gamma) < Real(1e-6)) {
      list.zeros[i].collision = list.zeros[i + 1].collision = true;
      list.warnings.push_back("zeros closer than 1e-6 near gamma = " + std::to_string(double(list.zeros[i].gamma)) +
                              "; excluded from zero sums");
    }
  }
  parallel_for(list.zeros.size(), [&](std::size_t i) {
    auto& z = list.zeros[i];
    if (z.collision) return;
    const auto d = zeta_K_prime_at(std::complex<Real>(Real(0.5), z.gamma), field, z.source);
    z.zeta_K_prime = d.value;
    z.derivative_gap = d.rel_gap;
  });
  assign_brackets(list);

  for (int t0 = 1; t0 + 1 <= static_cast<int>(T); ++t0) {
    int count = 0;
    for (auto& z : list.zeros)
      if (z.gamma >= Real(t0) && z.gamma < Real(t0 + 1)) ++count;
    list.density_constant = std::max(list.density_constant, count / std::log(t0 + 2.0));
  }
  return list;
}

/// Number of zeros of ξ_K(s) = s(s-1)Λ_K(s) inside [σ_lo, σ_hi] × [t_lo, T],
/// from the winding of ξ_K around the rectangle (not rounded). With t_lo = 0
/// the bottom edge lies on the real axis, where ξ_K is real and free of
/// zeros, so its phase change is read off the end points.
template <class Real>
double argument_principle_count(const FieldDescriptor& field, Real T, Real t_lo, Real sigma_lo = Real(-0.5),
                                Real sigma_hi = Real(1.5), Real step = Real(0.05)) {
  auto phase = [&](std::complex<Real> s) {
    const std::complex<Real> lg = std::log(s) + std::log(s - Real(1)) + log_gamma_factor(s, field);
    return static_cast<double>(lg.imag() + std::arg(dedekind_eval(s, field)));
  };
  const double two_pi = 2 * std::numbers::pi;
  auto wrap = [&](double d) {
    d = std::fmod(d, two_pi);
    if (d > std::numbers::pi) d -= two_pi;
    if (d <= -std::numbers::pi) d += two_pi;
    return d;
  };
  const std::complex<Real> corners[5] = {
      {sigma_hi, t_lo}, {sigma_hi, T}, {sigma_lo, T}, {sigma_lo, t_lo}, {sigma_hi, t_lo}};
  const bool real_bottom = t_lo == Real(0);
  double total = 0;
  // Adaptive walk: split a segment until the phase moves by less than 1 rad.
  std::function<double(std::complex<Real>, std::complex<Real>, double, double, int)> segment =
      [&](std::complex<Real> a, std::complex<Real> b, double pa, double pb, int depth) -> double {
    const double d = wrap(pb - pa);
    if (std::abs(d) < 1.0 || depth > 30) return d;
    const std::complex<Real> m = (a + b) / Real(2);
    const double pm = phase(m);
    return segment(a, m, pa, pm, depth + 1) + segment(m, b, pm, pb, depth + 1);
  };
  const int edges = real_bottom ? 3 : 4;
  for (int e = 0; e < edges; ++e) {
    const auto a = corners[e], b = corners[e + 1];
    const int pieces = std::max(1, static_cast<int>(std::ceil(static_cast<double>(std::abs(b - a) / step))));
    std::vector<double> ph(pieces + 1);
    std::vector<std::complex<Real>> pts(pieces + 1);
    parallel_for(static_cast<std::size_t>(pieces + 1), [&](std::size_t k) {
      pts[k] = a + (b - a) * (Real(k) / Real(pieces));
      ph[k] = phase(pts[k]);
    });
    for (int k = 0; k < pieces; ++k) total += segment(pts[k], pts[k + 1], ph[k], ph[k + 1], 0);
  }
  if (real_bottom) total += wrap(phase(corners[0]) - phase(corners[3]));
  return total / two_pi;
}

template <class Real>
struct ExpansionData {
  FieldDescriptor field;
  Real zeta_K_prime_at_0{};  // lim ζ_K(s)/s^r at 0
  Real residue_at_1{};       // lim (s-1) ζ_K(s) at 1
  std::vector<Real> taylor_at_0;   // Taylor coefficients of ζ_K at 0
  std::vector<Real> laurent_at_1;  // Taylor coefficients of (s-1) ζ_K(s) at 1
  std::vector<Real> D;  // M^{(i)}(1), M(s) = (s-1)^r Γ^{r1}((1-s)/2) Γ^{r2}(1-s) / ζ_K(s)
  std::vector<Real> E;  // N^{(i)}(0), N(s) = s^r Γ^{r1}((1-s)/2) Γ^{r2}(1-s) / ζ_K(s)
  double extrapolation_residual = 0;
  double class_number_gap = 0;  // relative gap to -hR/w
};

namespace detail {

// Richardson extrapolation of an even function g(h) to h = 0 using
// h_k = h0 / 2^k; returns value and the last diagonal change.
template <class Real, class G>
std::pair<Real, double> extrapolate_even(G&& g, double h0, int levels) {
  std::vector<std::vector<Real>> tab(levels + 1);
  double h = h0;
  for (int i = 0; i <= levels; ++i, h /= 2) {
    tab[i].resize(i + 1);
    tab[i][0] = g(Real(h));
    Real fac = 1;
    for (int m = 1; m <= i; ++m) {
      fac *= 4;
      tab[i][m] = tab[i][m - 1] + (tab[i][m - 1] - tab[i - 1][m - 1]) / (fac - 1);
    }
  }
  return {tab[levels][levels], static_cast<double>(std::abs(tab[levels][levels] - tab[levels - 1][levels - 1]))};
}

template <class Real>
std::complex<Real> gamma_dual_factor(std::complex<Real> s, const FieldDescriptor& field) {
  std::complex<Real> v{};
  if (field.r1) v += Real(field.r1) * log_gamma((Real(1) - s) / Real(2));
  if (field.r2) v += Real(field.r2) * log_gamma(Real(1) - s);
  return std::exp(v);
}

}  // namespace detail

template <class Real>
ExpansionData<Real> expansion_data(const FieldDescriptor& field) {
  using C = std::complex<Real>;
  ExpansionData<Real> ex;
  ex.field = field;
  const int r = field.r;
  auto zk = [&](Real s) { return dedekind_eval(C(s), field).real(); };

  if (r == 0) {
    ex.zeta_K_prime_at_0 = zk(0);
  } else {
    auto g = [&](Real h) {
      return (zk(h) / std::pow(h, Real(r)) + zk(-h) / std::pow(-h, Real(r))) / 2;
    };
    auto [v, res] = detail::extrapolate_even<Real>(g, 1e-2, 5);
    ex.zeta_K_prime_at_0 = v;
    ex.extrapolation_residual = res;
  }
  {
    auto g = [&](Real h) { return (h * zk(1 + h) - h * zk(1 - h)) / 2; };
    auto [v, res] = detail::extrapolate_even<Real>(g, 1e-2, 5);
    ex.residue_at_1 = v;
    ex.extrapolation_residual = std::max(ex.extrapolation_residual, res);
  }
  if (ex.extrapolation_residual > 1e-6) {
    throw numeric_error("lfunction_engine", "expansion extrapolation residual above 1e-6");
  }
  const Real radius = Real(0.25);
  const int count = r + 2;
  auto tz = cauchy_taylor<Real>([&](C s) { return dedekind_eval(s, field); }, C(0), radius, count);
  auto tl = cauchy_taylor<Real>([&](C s) { return (s - Real(1)) * dedekind_eval(s, field); }, C(1), radius, count);
  for (auto& c : tz) ex.taylor_at_0.push_back(c.real());
  for (auto& c : tl) ex.laurent_at_1.push_back(c.real());
  if (r >= 1) {
    auto Mfun = [&](C s) {
      return std::pow(s - Real(1), r) * detail::gamma_dual_factor(s, field) / dedekind_eval(s, field);
    };
    auto Nfun = [&](C s) { return std::pow(s, r) * detail::gamma_dual_factor(s, field) / dedekind_eval(s, field); };
    auto dm = cauchy_taylor<Real>(Mfun, C(1), radius, r + 1);
    auto dn = cauchy_taylor<Real>(Nfun, C(0), radius, r + 1);
    for (int i = 0; i <= r; ++i) {
      ex.D.push_back(dm[i].real() * Real(factorial(i)));
      ex.E.push_back(dn[i].real() * Real(factorial(i)));
    }
  }
  double hR = 1.0;
  if (field.is_quadratic()) hR = class_number_data(field).hR;
  const double expected = -hR / field.w;
  ex.class_number_gap = std::abs(static_cast<double>(ex.zeta_K_prime_at_0) - expected) / std::abs(expected);
  return ex;
}

}  // namespace dzeta
