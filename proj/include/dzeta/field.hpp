#pragma once

// Analytic invariants of Q and of quadratic fields Q(√d): discriminant,
// signature, η = 4^{r2} π^n / |d_K|, the Kronecker character (d_K / ·), and
// class number / regulator data through L(1, χ).

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "numeric.hpp"

namespace dzeta {

struct FieldDescriptor {
  std::optional<std::int64_t> d;  // absent for Q
  std::int64_t d_K = 1;
  int r1 = 1;
  int r2 = 0;
  int degree_n = 1;
  double eta = std::numbers::pi;
  int w = 2;
  int r = 0;

  bool is_rational() const { return !d.has_value(); }
  bool is_quadratic() const { return d.has_value(); }
  bool is_real_quadratic() const { return d && *d > 0; }
  bool is_imaginary_quadratic() const { return d && *d < 0; }
  std::int64_t conductor() const { return d_K < 0 ? -d_K : d_K; }

  /// η evaluated in the working precision.
  template <class Real>
  Real eta_as() const {
    Real v = std::pow(pi_v<Real>, Real(degree_n)) / Real(conductor());
    for (int i = 0; i < r2; ++i) v *= 4;
    return v;
  }

  /// Short label used in reports and file names ("Q" or the value of d).
  std::string label() const { return d ? std::to_string(*d) : std::string("Q"); }

  friend bool operator==(const FieldDescriptor&, const FieldDescriptor&) = default;
};

inline bool is_squarefree(std::int64_t v) {
  std::int64_t a = v < 0 ? -v : v;
  for (std::int64_t p = 2; p * p <= a; ++p) {
    if (a % (p * p) == 0) return false;
    if (a % p == 0) a /= p;
  }
  return true;
}

inline FieldDescriptor make_field(std::optional<std::int64_t> d) {
  FieldDescriptor f;
  if (!d) {
    f.eta = f.eta_as<double>();
    return f;
  }
  const std::int64_t v = *d;
  if (v == 0 || v == 1) throw std::invalid_argument("make_field: d must not be 0 or 1");
  if (!is_squarefree(v)) throw std::invalid_argument("make_field: d must be squarefree, got " + std::to_string(v));
  f.d = v;
  const std::int64_t mod4 = ((v % 4) + 4) % 4;
  f.d_K = mod4 == 1 ? v : 4 * v;
  if (v > 0) {
    f.r1 = 2;
    f.r2 = 0;
  } else {
    f.r1 = 0;
    f.r2 = 1;
  }
  f.degree_n = f.r1 + 2 * f.r2;
  f.r = f.r1 + f.r2 - 1;
  f.w = v == -1 ? 4 : (v == -3 ? 6 : 2);
  f.eta = f.eta_as<double>();
  return f;
}

/// Kronecker symbol (D / m) for m >= 1, by quadratic reciprocity.
inline int kronecker_symbol(std::int64_t D, std::int64_t m) {
  if (m <= 0) throw std::invalid_argument("kronecker_symbol: m must be positive");
  int result = 1;
  std::int64_t a = D;
  std::int64_t n = m;
  while (n % 2 == 0) {
    n /= 2;
    if (a % 2 == 0) return 0;
    std::int64_t r8 = ((a % 8) + 8) % 8;
    if (r8 == 3 || r8 == 5) result = -result;
  }
  // Jacobi symbol (a / n), n odd positive.
  a %= n;
  if (a < 0) a += n;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      std::int64_t r8 = n % 8;
      if (r8 == 3 || r8 == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

/// χ_{d_K}(m) = (d_K / m). Not defined for Q.
inline int kronecker_chi(const FieldDescriptor& field, std::int64_t m) {
  if (field.is_rational()) throw std::invalid_argument("kronecker_chi: Q has no quadratic character");
  return kronecker_symbol(field.d_K, m);
}

/// Periodic table of χ_{d_K} over one period, for hot loops.
class QuadraticCharacter {
 public:
  explicit QuadraticCharacter(const FieldDescriptor& field) : q_(field.conductor()), values_(q_) {
    for (std::int64_t a = 0; a < q_; ++a) values_[a] = static_cast<signed char>(a == 0 ? (q_ == 1 ? 1 : 0) : kronecker_chi(field, a));
  }
  int operator()(std::int64_t m) const { return values_[m % q_]; }
  std::int64_t modulus() const { return q_; }
  /// 0 for even characters (d_K > 0), 1 for odd.
  int parity() const { return values_[q_ - 1] == 1 ? 0 : 1; }

 private:
  std::int64_t q_;
  std::vector<signed char> values_;
};

struct FieldInvariants {
  long long h = 1;
  double R = 1.0;
  double hR = 1.0;
  double L1 = 1.0;
  double L1_error = 0.0;
  double h_residual = 0.0;   // |h_unrounded - h| when h was isolated
  bool product_only = false; // h and R could not be separated
  long long l1_terms = 0;
};

namespace detail {

inline std::int64_t isqrt64(std::int64_t n) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// log ε for the fundamental unit of the real quadratic order of
// discriminant D, as the sum of log complete quotients over one period of
// the continued fraction of (b + √D)/2.
inline std::optional<long double> regulator_by_continued_fraction(std::int64_t D, std::int64_t max_steps) {
  const std::int64_t s = isqrt64(D);
  const long double sqrtD = std::sqrt(static_cast<long double>(D));
  std::int64_t P = D % 2;
  std::int64_t Q = 2;
  auto step = [&](std::int64_t& p, std::int64_t& q) {
    std::int64_t a = (p + s) / q;
    std::int64_t pn = a * q - p;
    std::int64_t qn = (D - pn * pn) / q;
    p = pn;
    q = qn;
  };
  step(P, Q);
  const std::int64_t P0 = P, Q0 = Q;
  long double reg = 0;
  for (std::int64_t i = 0; i < max_steps; ++i) {
    reg += std::log((static_cast<long double>(P) + sqrtD) / static_cast<long double>(Q));
    step(P, Q);
    if (P == P0 && Q == Q0) return reg;
  }
  return std::nullopt;
}

}  // namespace detail

/// L(1, χ_{d_K}) by block partial sums S_K = Σ_{n<=Kq} χ(n)/n at K = K0·2^j,
/// Richardson-extrapolated in 1/K. Stops when successive diagonal entries
/// agree to `target`, or fails at `max_terms`.
inline std::pair<double, double> l_one_character_sum(const FieldDescriptor& field, double target,
                                                     long long max_terms = 10'000'000) {
  const QuadraticCharacter chi(field);
  const std::int64_t q = chi.modulus();
  compensated_sum<long double> s;
  std::int64_t n = 0;
  std::int64_t K = 8;
  std::vector<std::vector<long double>> tab;
  long double prev_best = 0;
  for (int level = 0;; ++level) {
    if (K * q > max_terms) break;
    for (; n < K * q;) {
      ++n;
      int c = chi(n);
      if (c != 0) s += static_cast<long double>(c) / static_cast<long double>(n);
    }
    tab.emplace_back(level + 1);
    tab[level][0] = s.value();
    long double fac = 1;
    for (int m = 1; m <= level; ++m) {
      fac *= 2;
      tab[level][m] = tab[level][m - 1] + (tab[level][m - 1] - tab[level - 1][m - 1]) / (fac - 1);
    }
    long double best = tab[level][level];
    if (level >= 3) {
      long double err = std::abs(best - prev_best);
      if (err < target) return {static_cast<double>(best), static_cast<double>(err)};
    }
    prev_best = best;
    K *= 2;
  }
  throw numeric_error("field_catalog", "L(1, chi) did not converge within the iteration cap");
}

inline FieldInvariants class_number_data(const FieldDescriptor& field, double precision_budget = 1e-10) {
  if (!field.is_quadratic()) throw std::invalid_argument("class_number_data: field must be quadratic");
  if (!(precision_budget > 0)) throw std::invalid_argument("class_number_data: precision budget must be positive");
  FieldInvariants inv;
  auto [L1, err] = l_one_character_sum(field, precision_budget);
  inv.L1 = L1;
  inv.L1_error = err;
  const double sqrt_disc = std::sqrt(static_cast<double>(field.conductor()));
  if (field.is_imaginary_quadratic()) {
    const double h_raw = field.w * sqrt_disc * L1 / (2 * std::numbers::pi);
    inv.h = std::llround(h_raw);
    inv.h_residual = std::abs(h_raw - static_cast<double>(inv.h));
    inv.R = 1.0;
    inv.hR = h_raw;
    return inv;
  }
  inv.hR = sqrt_disc * L1 / 2;
  if (auto reg = detail::regulator_by_continued_fraction(field.d_K, 1'000'000)) {
    inv.R = static_cast<double>(*reg);
    const double h_raw = inv.hR / inv.R;
    inv.h = std::llround(h_raw);
    inv.h_residual = std::abs(h_raw - static_cast<double>(inv.h));
  } else {
    inv.product_only = true;
    inv.h = 0;
    inv.R = 0;
  }
  return inv;
}

}  // namespace dzeta
