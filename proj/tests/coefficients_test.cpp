#include <gtest/gtest.h>

#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

#include "dzeta/coefficients.hpp"

namespace {

using dzeta::make_field;

int mobius_by_trial_division(long long n) {
  int mu = 1;
  for (long long p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    mu = -mu;
  }
  if (n > 1) mu = -mu;
  return mu;
}

long long divisor_count(long long n) {
  long long c = 0;
  for (long long k = 1; k * k <= n; ++k)
    if (n % k == 0) c += (k * k == n) ? 1 : 2;
  return c;
}

// Ideal counts of Z[i] and Z[ω] from lattice points of the norm forms,
// divided by the unit count.
long long gaussian_ideals(long long n) {
  long long c = 0;
  for (long long x = -30; x <= 30; ++x)
    for (long long y = -30; y <= 30; ++y)
      if (x * x + y * y == n) ++c;
  return c / 4;
}

long long eisenstein_ideals(long long n) {
  long long c = 0;
  for (long long x = -30; x <= 30; ++x)
    for (long long y = -30; y <= 30; ++y)
      if (x * x + x * y + y * y == n) ++c;
  return c / 6;
}

void expect_convolution_identity(const dzeta::CoefficientTable& t) {
  std::vector<long long> conv(t.N + 1, 0);
  for (std::size_t d = 1; d <= t.N; ++d)
    for (std::size_t k = 1; d * k <= t.N; ++k) conv[d * k] += t.a[d] * t.b[k];
  for (std::size_t n = 1; n <= t.N; ++n) ASSERT_EQ(conv[n], n == 1 ? 1 : 0) << "n = " << n;
}

TEST(IdealCounts, SpecExamples) {
  auto a = dzeta::ideal_counts(make_field(-1), 30);
  EXPECT_EQ(a[5], 2);
  EXPECT_EQ(a[3], 0);
  auto q = dzeta::ideal_counts(make_field(std::nullopt), 10);
  for (int n = 1; n <= 10; ++n) EXPECT_EQ(q[n], 1);
}

TEST(IdealCounts, LatticePointOracle) {
  auto gi = dzeta::ideal_counts(make_field(-1), 500);
  auto ei = dzeta::ideal_counts(make_field(-3), 500);
  for (long long n = 1; n <= 500; ++n) {
    ASSERT_EQ(gi[n], gaussian_ideals(n)) << n;
    ASSERT_EQ(ei[n], eisenstein_ideals(n)) << n;
  }
}

TEST(DirichletInverse, MobiusForRationals) {
  auto t = dzeta::build_coefficients(make_field(std::nullopt), 100000);
  const long long first[] = {1, -1, -1, 0, -1, 1, -1, 0, 0, 1};
  for (int n = 1; n <= 10; ++n) EXPECT_EQ(t.b[n], first[n - 1]);
  for (long long n = 1; n <= 100000; ++n) ASSERT_EQ(t.b[n], mobius_by_trial_division(n)) << n;
}

TEST(DirichletInverse, ConvolutionIdentityAllFields) {
  for (std::optional<long long> d : {std::optional<long long>{}, std::optional<long long>{-1},
                                     std::optional<long long>{5}, std::optional<long long>{-3}}) {
    expect_convolution_identity(dzeta::build_coefficients(make_field(d), 100000));
  }
}

TEST(DirichletInverse, Rejections) {
  std::vector<std::int64_t> a{0, 2, 1, 1};
  EXPECT_THROW(dzeta::dirichlet_inverse(a, 3), std::invalid_argument);
  EXPECT_THROW(dzeta::dirichlet_inverse(a, 10), std::invalid_argument);
}

TEST(DirichletInverse, SmallValues) {
  auto b = dzeta::build_coefficients(make_field(-1), 30).b;
  EXPECT_EQ(b[1], 1);
  EXPECT_EQ(b[2], -1);
  EXPECT_EQ(b[25], 1);
}

TEST(PrimeIdealOracle, MatchesInversion) {
  for (std::optional<long long> d : {std::optional<long long>{}, std::optional<long long>{-1},
                                     std::optional<long long>{5}, std::optional<long long>{-3},
                                     std::optional<long long>{-5}, std::optional<long long>{2}}) {
    auto f = make_field(d);
    auto t = dzeta::build_coefficients(f, 10000);
    auto b = dzeta::b_via_prime_ideals(f, 10000);
    for (std::size_t n = 1; n <= 10000; ++n) ASSERT_EQ(t.b[n], b[n]) << f.label() << " n = " << n;
  }
  auto b = dzeta::b_via_prime_ideals(make_field(-1), 30);
  EXPECT_EQ(b[2], -1);
  EXPECT_EQ(b[25], 1);
  EXPECT_EQ(dzeta::b_via_prime_ideals(make_field(std::nullopt), 12)[12], 0);
}

TEST(DirichletInverse, DivisorBound) {
  for (long long d : {-1, 5, -3}) {
    auto t = dzeta::build_coefficients(make_field(d), 10000);
    for (long long n = 1; n <= 10000; ++n) ASSERT_LE(std::llabs(t.b[n]), divisor_count(n)) << n;
  }
}

TEST(PartialSums, SmallValues) {
  auto t = dzeta::build_coefficients(make_field(std::nullopt), 10);
  EXPECT_EQ(t.M[1], 1);
  EXPECT_EQ(t.m[1], 1.0);
  EXPECT_EQ(t.M[3], -1);
  EXPECT_NEAR(t.m[3], 1 - 0.5 - 1.0 / 3, 1e-16);
}

TEST(PartialSums, RationalTailDecay) {
  auto t = dzeta::build_coefficients(make_field(std::nullopt), 1000000);
  EXPECT_LT(std::abs(t.m[1000000]), 0.01) << "m(1e6) = " << t.m[1000000];
}

TEST(PartialSums, NoisyMonotoneTrend) {
  for (std::optional<long long> d : {std::optional<long long>{}, std::optional<long long>{-1},
                                     std::optional<long long>{5}}) {
    auto t = dzeta::build_coefficients(make_field(d), 1000000);
    for (int k = 2; k <= 5; ++k) {
      const auto lo = static_cast<std::size_t>(std::pow(10.0, k));
      EXPECT_LE(std::abs(t.m[lo * 10]), std::abs(t.m[lo]) + 0.05) << make_field(d).label() << " k = " << k;
    }
  }
}

TEST(CoefficientCsv, HeaderAndRows) {
  auto t = dzeta::build_coefficients(make_field(-1), 3);
  std::ostringstream os;
  dzeta::write_coefficients_csv(os, t);
  EXPECT_EQ(os.str(), "n,a_n,b_n,M_K,m_K\n1,1,1,1,1\n2,1,-1,0,0.5\n3,0,0,0,0.5\n");
}

}  // namespace
