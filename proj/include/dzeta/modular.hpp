#pragma once

// Both sides of the α ↔ β modular relation for ζ_K:
//
//   √α Σ b_n/n Z(α/n) - √β Σ b_n/n Z(β/n)
//     = R_1(β) + R_0(β) - (1/√β) Σ_ρ β^ρ Γ^{r1}((1-ρ)/2) Γ^{r2}(1-ρ) / ζ_K'(ρ)
//
// with αβ = η. R_1, R_0 are the residues at s = 1 and s = 0 (present only
// when r >= 1). The zero sum is summed bracket by bracket over ρ = 1/2 + iγ,
// γ > 0, pairing each zero with its conjugate.

#include <cmath>
#include <complex>
#include <future>
#include <numbers>
#include <string>
#include <vector>

#include "coefficients.hpp"
#include "field.hpp"
#include "kernels.hpp"
#include "lfunction.hpp"
#include "numeric.hpp"

namespace dzeta {

struct LhsResult {
  double value = 0;
  double alpha_part = 0;  // √α Σ b_n/n Z(α/n)
  double beta_part = 0;   // √β Σ b_n/n Z(β/n)
  double tail_estimate = 0;
  std::vector<std::string> warnings;
};

namespace detail {

// √x Σ_{n<=N} b_n/n Z(x/n) in ascending n, with the last half-block as a
// proxy for the truncation error (the terms oscillate with b_n, so a
// majorant would be far too pessimistic).
template <class Real>
std::pair<Real, double> weighted_kernel_sum(const CoefficientTable& t, const KernelEvaluator<Real>& kern, Real x) {
  compensated_sum<Real> acc, last_block;
  for (std::size_t n = 1; n <= t.N; ++n) {
    if (t.b[n] == 0) continue;
    const Real term = Real(t.b[n]) / Real(n) * kern.z(x / Real(n));
    acc += term;
    if (2 * n > t.N) last_block += term;
  }
  const Real root = std::sqrt(x);
  return {root * acc.value(), static_cast<double>(root * std::abs(last_block.value()))};
}

}  // namespace detail

template <class Real = double>
LhsResult lhs_sum(const FieldDescriptor& field, Real alpha, const CoefficientTable& table,
                  const KernelEvaluator<Real>& kernel) {
  if (!(alpha > 0)) throw std::invalid_argument("lhs_sum: alpha must be positive");
  const Real beta = field.eta_as<Real>() / alpha;
  LhsResult out;
  auto [a, ta] = detail::weighted_kernel_sum(table, kernel, alpha);
  auto [b, tb] = detail::weighted_kernel_sum(table, kernel, beta);
  out.alpha_part = static_cast<double>(a);
  out.beta_part = static_cast<double>(b);
  out.value = static_cast<double>(a - b);
  out.tail_estimate = ta + tb;
  const double target = 1e-8 * std::sqrt(static_cast<double>(std::max(alpha, beta)));
  if (out.tail_estimate > target) {
    out.warnings.push_back("estimated b_n-sum tail " + std::to_string(out.tail_estimate) + " above target " +
                           std::to_string(target));
  }
  return out;
}

struct ResidueTerm {
  double value = 0;     // Leibniz route from D_i or E_i
  double closed = 0;    // closed evaluation through h R (quadratic fields)
  bool has_closed = false;
  double route_gap = 0; // relative
};

/// -(1/(√β (r-1)!)) d^{r-1}/ds^{r-1} [β^s M(s)] at s = 1
///   = -(√β/(r-1)!) Σ_i binom(r-1, i) (log β)^{r-1-i} D_i.
template <class Real>
ResidueTerm residue_term_s1(const FieldDescriptor& field, double beta, const ExpansionData<Real>& ex) {
  ResidueTerm out;
  const int r = field.r;
  if (r == 0) return out;
  double acc = 0;
  for (int i = 0; i <= r - 1; ++i)
    acc += binomial(r - 1, i) * std::pow(std::log(beta), r - 1 - i) * static_cast<double>(ex.D[i]);
  out.value = -std::sqrt(beta) / factorial(r - 1) * acc;
  if (field.is_real_quadratic()) {
    const auto inv = class_number_data(field);
    out.closed = -2 * std::sqrt(beta * double(field.d_K)) / inv.hR;
    out.has_closed = true;
    out.route_gap = std::abs(out.value - out.closed) / std::abs(out.closed);
    if (out.route_gap > 1e-6)
      throw numeric_error("modular_relation", "s = 1 residue routes disagree by " + std::to_string(out.route_gap));
  }
  return out;
}

/// -(1/(√β (r-1)!)) Σ_i binom(r-1, i) (log β)^{r-1-i} E_i.
template <class Real>
ResidueTerm residue_term_s0(const FieldDescriptor& field, double beta, const ExpansionData<Real>& ex) {
  ResidueTerm out;
  const int r = field.r;
  if (r == 0) return out;
  double acc = 0;
  for (int i = 0; i <= r - 1; ++i)
    acc += binomial(r - 1, i) * std::pow(std::log(beta), r - 1 - i) * static_cast<double>(ex.E[i]);
  out.value = -acc / (std::sqrt(beta) * factorial(r - 1));
  if (field.is_real_quadratic()) {
    // -π/(√β ζ_K'(0)) with ζ_K'(0) = -hR/2.
    const auto inv = class_number_data(field);
    out.closed = 2 * std::numbers::pi / (std::sqrt(beta) * inv.hR);
    out.has_closed = true;
    out.route_gap = std::abs(out.value - out.closed) / std::abs(out.closed);
    if (out.route_gap > 1e-6)
      throw numeric_error("modular_relation", "s = 0 residue routes disagree by " + std::to_string(out.route_gap));
  }
  return out;
}

struct ZeroSumPartial {
  int bracket_id = 0;
  double gamma_max = 0;   // largest ordinate in the bracket
  double bracket_term = 0;
  double partial = 0;     // running sum through this bracket
};

struct ZeroSumResult {
  std::vector<ZeroSumPartial> partials;
  double max_imag_residue = 0;
  int excluded = 0;
  std::vector<std::string> warnings;

  double total() const { return partials.empty() ? 0.0 : partials.back().partial; }
  /// Running sum over brackets whose zeros all lie at or below `height`.
  double partial_at(double height) const {
    double v = 0;
    for (auto& p : partials) {
      if (p.gamma_max > height) break;
      v = p.partial;
    }
    return v;
  }
};

/// -(1/√β) Σ_ρ β^ρ Γ^{r1}((1-ρ)/2) Γ^{r2}(1-ρ) / ζ_K'(ρ), bracketed.
template <class Real>
ZeroSumResult zero_sum(const FieldDescriptor& field, double beta, const ZeroList<Real>& zeros) {
  ZeroSumResult out;
  out.warnings = zeros.warnings;
  using C = std::complex<double>;
  const double lb = std::log(beta);
  auto term = [&](C rho, C deriv) {
    return std::exp(rho * lb) * detail::gamma_dual_factor<double>(rho, field) / deriv;
  };
  const double pref = -1 / std::sqrt(beta);
  double running = 0;
  for (std::size_t b = 0; b < zeros.brackets.size(); ++b) {
    compensated_sum<C> acc;
    double gmax = 0;
    for (std::size_t idx : zeros.brackets[b]) {
      const auto& z = zeros.zeros[idx];
      gmax = std::max(gmax, double(z.gamma));
      if (z.collision) {
        ++out.excluded;
        continue;
      }
      const C rho(0.5, double(z.gamma));
      const C d(double(z.zeta_K_prime.real()), double(z.zeta_K_prime.imag()));
      // The conjugate zero has the conjugate derivative; its Γ-factor is
      // evaluated independently so the cancellation of imaginary parts is
      // a genuine check.
      acc += term(rho, d);
      acc += term(std::conj(rho), std::conj(d));
    }
    const C pair_sum = pref * acc.value();
    out.max_imag_residue = std::max(out.max_imag_residue, std::abs(pair_sum.imag()));
    running += pair_sum.real();
    out.partials.push_back({static_cast<int>(b), gmax, pair_sum.real(), running});
  }
  if (out.max_imag_residue > 1e-9) out.warnings.push_back("zero-sum imaginary residue above 1e-9");
  return out;
}

struct Checkpoint {
  double T = 0;
  int n_zeros = 0;
  double zero_partial = 0;
  double discrepancy = 0;
};

/// Printed special-case normalization, evaluated from the same computed
/// pieces: (LHS / lhs_scale) compared with the printed right-hand side.
struct PrintedForm {
  std::string name;
  double lhs_scale = 1;
  double rhs = 0;
  double discrepancy = 0;
};

struct RelationReport {
  FieldDescriptor field;
  double alpha = 0;
  double beta = 0;
  double eta_relative_defect = 0;
  LhsResult lhs;
  ResidueTerm rhs_s1;
  ResidueTerm rhs_s0;
  ZeroSumResult zeros;
  double discrepancy = 0;
  std::vector<Checkpoint> checkpoints;
  bool trend_pass = false;
  std::size_t N_terms = 0;
  double T = 0;
  int n_zeros = 0;
  int bracket_count = 0;
  int max_bracket_size = 0;
  double c0 = 1.0;
  double smallest_zero_term = 0;
  bool truncation_balanced = true;  // b_n-sum tail below 10% of the smallest retained zero term
  std::vector<PrintedForm> printed_forms;
  std::vector<std::string> warnings;
};

struct RelationOptions {
  double c0 = 1.0;
};

namespace detail {

template <class F>
auto run_component(const char* component, F&& f) {
  try {
    return f();
  } catch (const numeric_error&) {
    throw;
  } catch (const std::exception& e) {
    throw numeric_error(component, e.what());
  }
}

inline void add_printed_forms(RelationReport& rep) {
  const double lhs = rep.lhs.value;
  const double zs = rep.zeros.total();
  const auto& f = rep.field;
  if (f.is_rational()) {
    // Z_{1,0} = 2(e^{-x²} - 1): the printed sums carry e^{-x²} without the 2.
    rep.printed_forms.push_back({"rational, printed coefficient -1/(2 sqrt(beta))", 2, zs / 2, lhs / 2 - zs / 2});
  } else if (f.is_imaginary_quadratic()) {
    rep.printed_forms.push_back({"imaginary quadratic, printed coefficient -1/(2 sqrt(beta))", 1, zs / 2, lhs - zs / 2});
    rep.printed_forms.push_back({"imaginary quadratic, coefficient -1/sqrt(beta)", 1, zs, lhs - zs});
  } else if (f.is_real_quadratic()) {
    // Z_{2,0} = 4(K0(2x) + γ + log x); printed sums drop the 4.
    const double s1 = rep.rhs_s1.value / 4;
    const double s0_printed = rep.rhs_s0.value;
    const double s0_quarter = rep.rhs_s0.value / 4;
    rep.printed_forms.push_back(
        {"real quadratic, printed s=0 term -pi/(sqrt(beta) zeta_K'(0))", 4, s1 + s0_printed + zs / 4,
         lhs / 4 - (s1 + s0_printed + zs / 4)});
    rep.printed_forms.push_back({"real quadratic, all terms divided by 4", 4, s1 + s0_quarter + zs / 4,
                                 lhs / 4 - (s1 + s0_quarter + zs / 4)});
  }
}

}  // namespace detail

/// Assembles both sides of the relation at (α, β = η/α), zeros to height T
/// and b_n to N, with discrepancy checkpoints at T/4, T/2, 3T/4 and T.
template <class Real = double>
RelationReport verify_relation(const FieldDescriptor& field, double alpha, double T, std::size_t N,
                               const RelationOptions& opt = {}) {
  if (!(alpha > 0)) throw std::invalid_argument("verify_relation: alpha must be positive");
  if (!(T > 0) || T > 100) throw std::invalid_argument("verify_relation: T must lie in (0, 100]");
  if (N < 1 || N > 10'000'000) throw std::invalid_argument("verify_relation: N must lie in [1, 1e7]");
  RelationReport rep;
  rep.field = field;
  rep.alpha = alpha;
  const double eta = field.eta_as<double>();
  rep.beta = eta / alpha;
  rep.eta_relative_defect = std::abs(rep.alpha * rep.beta - eta) / eta;
  rep.N_terms = N;
  rep.T = T;
  rep.c0 = opt.c0;

  KernelSpec spec;
  spec.r1 = field.r1;
  spec.r2 = field.r2;

  // The b_n sums and the zero scan are independent; run them side by side.
  auto lhs_future = std::async(std::launch::async, [&] {
    return detail::run_component("modular_relation", [&] {
      const auto table = build_coefficients(field, N);
      const KernelEvaluator<Real> kernel(spec);
      return lhs_sum<Real>(field, Real(alpha), table, kernel);
    });
  });
  ZeroScanOptions zopt;
  zopt.c0 = opt.c0;
  const auto zl = detail::run_component("lfunction_engine", [&] { return find_zeros<Real>(field, Real(T), zopt); });
  rep.lhs = lhs_future.get();

  if (field.r >= 1) {
    const auto ex = detail::run_component("lfunction_engine", [&] { return expansion_data<Real>(field); });
    rep.rhs_s1 = residue_term_s1(field, rep.beta, ex);
    rep.rhs_s0 = residue_term_s0(field, rep.beta, ex);
  }
  rep.zeros = zero_sum(field, rep.beta, zl);
  rep.n_zeros = static_cast<int>(zl.zeros.size());
  rep.bracket_count = static_cast<int>(zl.brackets.size());
  for (auto& b : zl.brackets) rep.max_bracket_size = std::max(rep.max_bracket_size, static_cast<int>(b.size()));

  const double residues = rep.rhs_s1.value + rep.rhs_s0.value;
  rep.discrepancy = rep.lhs.value - (residues + rep.zeros.total());
  for (double frac : {0.25, 0.5, 0.75, 1.0}) {
    Checkpoint cp;
    cp.T = frac * T;
    for (auto& z : zl.zeros)
      if (double(z.gamma) <= cp.T) ++cp.n_zeros;
    cp.zero_partial = rep.zeros.partial_at(cp.T);
    cp.discrepancy = rep.lhs.value - (residues + cp.zero_partial);
    rep.checkpoints.push_back(cp);
  }
  const double d_first = std::abs(rep.checkpoints.front().discrepancy);
  const double d_last = std::abs(rep.checkpoints.back().discrepancy);
  rep.trend_pass = d_last <= d_first || d_last < 1e-3 * (1 + std::abs(rep.lhs.value));

  rep.smallest_zero_term = 0;
  for (auto& p : rep.zeros.partials) {
    const double m = std::abs(p.bracket_term);
    if (m > 0 && (rep.smallest_zero_term == 0 || m < rep.smallest_zero_term)) rep.smallest_zero_term = m;
  }
  rep.truncation_balanced = rep.smallest_zero_term == 0 || rep.lhs.tail_estimate < 0.1 * rep.smallest_zero_term;
  detail::add_printed_forms(rep);

  rep.warnings = rep.lhs.warnings;
  for (auto& w : rep.zeros.warnings) rep.warnings.push_back(w);
  if (!rep.truncation_balanced)
    rep.warnings.push_back("b_n-sum tail estimate exceeds 10% of the smallest retained zero-sum term");
  return rep;
}

}  // namespace dzeta
