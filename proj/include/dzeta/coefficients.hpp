#pragma once

// Dirichlet coefficients of ζ_K and 1/ζ_K for Q and quadratic fields.
//
// a_n (ideals of norm n) = Σ_{d|n} χ(d); b_n is the Dirichlet inverse of a_n,
// built by an O(N log N) sieve. b_via_prime_ideals rebuilds b_n from its
// combinatorial definition (signed count of squarefree ideals) and is the
// oracle for the sieve.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "field.hpp"
#include "numeric.hpp"

namespace dzeta {

struct CoefficientTable {
  std::size_t N = 0;
  // Index 0 is unused so that a[n], b[n] follow the mathematical indexing.
  std::vector<std::int64_t> a;
  std::vector<std::int64_t> b;
  std::vector<std::int64_t> M;  // Σ_{k<=n} b_k
  std::vector<double> m;        // Σ_{k<=n} b_k / k
};

inline std::vector<std::int64_t> ideal_counts(const FieldDescriptor& field, std::size_t N) {
  if (N < 1) throw std::invalid_argument("ideal_counts: N must be positive");
  std::vector<std::int64_t> a(N + 1, 0);
  if (field.is_rational()) {
    for (std::size_t n = 1; n <= N; ++n) a[n] = 1;
    return a;
  }
  const QuadraticCharacter chi(field);
  for (std::size_t d = 1; d <= N; ++d) {
    const int c = chi(static_cast<std::int64_t>(d));
    if (c == 0) continue;
    for (std::size_t k = d; k <= N; k += d) a[k] += c;
  }
  return a;
}

inline std::vector<std::int64_t> dirichlet_inverse(const std::vector<std::int64_t>& a, std::size_t N) {
  if (N < 1 || a.size() < N + 1) throw std::invalid_argument("dirichlet_inverse: coefficient array shorter than N");
  if (a[1] != 1) throw std::invalid_argument("dirichlet_inverse: a_1 must be 1 for the series to be invertible");
  std::vector<std::int64_t> b(N + 1, 0);
  std::vector<std::int64_t> acc(N + 1, 0);
  for (std::size_t i = 1; i <= N; ++i) {
    b[i] = i == 1 ? 1 : -acc[i];
    if (b[i] == 0) continue;
    for (std::size_t k = 2; i * k <= N; ++k) {
      if (a[k] != 0) acc[i * k] += b[i] * a[k];
    }
  }
  return b;
}

namespace detail {

inline std::vector<std::int64_t> primes_up_to(std::size_t N) {
  std::vector<bool> composite(N + 1, false);
  std::vector<std::int64_t> primes;
  for (std::size_t p = 2; p <= N; ++p) {
    if (composite[p]) continue;
    primes.push_back(static_cast<std::int64_t>(p));
    for (std::size_t k = p * p; k <= N; k += p) composite[k] = true;
  }
  return primes;
}

}  // namespace detail

/// Norms of the prime ideals of norm <= N, one entry per prime ideal (a
/// split prime contributes two entries), sorted by norm.
inline std::vector<std::int64_t> prime_ideal_norms(const FieldDescriptor& field, std::size_t N) {
  std::vector<std::int64_t> norms;
  for (std::int64_t p : detail::primes_up_to(N)) {
    if (field.is_rational()) {
      norms.push_back(p);
      continue;
    }
    const int c = kronecker_chi(field, p);
    if (c == 1) {
      norms.push_back(p);
      norms.push_back(p);
    } else if (c == 0) {
      norms.push_back(p);
    } else if (static_cast<std::size_t>(p) * static_cast<std::size_t>(p) <= N) {
      norms.push_back(p * p);
    }
  }
  std::sort(norms.begin(), norms.end());
  return norms;
}

inline std::vector<std::int64_t> b_via_prime_ideals(const FieldDescriptor& field, std::size_t N) {
  if (N < 1) throw std::invalid_argument("b_via_prime_ideals: N must be positive");
  const auto norms = prime_ideal_norms(field, N);
  std::vector<std::int64_t> b(N + 1, 0);
  // Depth-first walk over products of distinct prime ideals in index order.
  std::function<void(std::size_t, std::int64_t, int)> walk = [&](std::size_t start, std::int64_t norm, int sign) {
    b[norm] += sign;
    for (std::size_t i = start; i < norms.size(); ++i) {
      if (norm * norms[i] > static_cast<std::int64_t>(N)) break;
      walk(i + 1, norm * norms[i], -sign);
    }
  };
  walk(0, 1, 1);
  return b;
}

inline void partial_sums(CoefficientTable& table) {
  table.M.assign(table.N + 1, 0);
  table.m.assign(table.N + 1, 0.0);
  std::int64_t running = 0;
  compensated_sum<long double> weighted;
  for (std::size_t n = 1; n <= table.N; ++n) {
    running += table.b[n];
    if (table.b[n] != 0) weighted += static_cast<long double>(table.b[n]) / static_cast<long double>(n);
    table.M[n] = running;
    table.m[n] = static_cast<double>(weighted.value());
  }
}

inline CoefficientTable build_coefficients(const FieldDescriptor& field, std::size_t N) {
  CoefficientTable t;
  t.N = N;
  t.a = ideal_counts(field, N);
  t.b = dirichlet_inverse(t.a, N);
  partial_sums(t);
  return t;
}

/// CSV with columns n, a_n, b_n, M_K(n), m_K(n).
inline void write_coefficients_csv(std::ostream& os, const CoefficientTable& t) {
  os << "n,a_n,b_n,M_K,m_K\n";
  char buf[64];
  for (std::size_t n = 1; n <= t.N; ++n) {
    std::snprintf(buf, sizeof buf, "%.17g", t.m[n]);
    os << n << ',' << t.a[n] << ',' << t.b[n] << ',' << t.M[n] << ',' << buf << '\n';
  }
}

}  // namespace dzeta
