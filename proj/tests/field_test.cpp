#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <optional>

#include "dzeta/field.hpp"

namespace {

using dzeta::make_field;

// Brute-force character: for odd prime p, (D/p) via Euler's criterion
// from the list of squares; built multiplicatively over m's factorization.
int legendre_by_squares(long long D, long long p) {
  long long a = ((D % p) + p) % p;
  if (a == 0) return 0;
  for (long long x = 1; x < p; ++x)
    if (x * x % p == a) return 1;
  return -1;
}

int kronecker_oracle(long long D, long long m) {
  int result = 1;
  for (long long p = 2; m > 1; ++p) {
    while (m % p == 0) {
      m /= p;
      int c;
      if (p == 2) {
        long long r = ((D % 8) + 8) % 8;
        c = (D % 2 == 0) ? 0 : ((r == 1 || r == 7) ? 1 : -1);
      } else {
        c = legendre_by_squares(D, p);
      }
      result *= c;
    }
  }
  return result;
}

// Smallest unit (x + y√D)/2 > 1 of norm ±1 by direct search over y.
double fundamental_unit_log(long long D) {
  for (long long y = 1; y < 100000; ++y) {
    for (long long s : {-4LL, 4LL}) {
      long long x2 = D * y * y + s;
      if (x2 <= 0) continue;
      long long x = std::llround(std::sqrt(double(x2)));
      if (x * x == x2 && (x - D * y) % 2 == 0)
        return std::log((x + y * std::sqrt(double(D))) / 2.0);
    }
  }
  return NAN;
}

TEST(MakeField, Rational) {
  auto f = make_field(std::nullopt);
  EXPECT_TRUE(f.is_rational());
  EXPECT_EQ(f.r1, 1);
  EXPECT_EQ(f.r2, 0);
  EXPECT_EQ(f.d_K, 1);
  EXPECT_EQ(f.r, 0);
  EXPECT_DOUBLE_EQ(f.eta, std::numbers::pi);
}

TEST(MakeField, RealQuadratic) {
  auto f = make_field(5);
  EXPECT_EQ(f.r1, 2);
  EXPECT_EQ(f.r2, 0);
  EXPECT_EQ(f.d_K, 5);
  EXPECT_EQ(f.degree_n, 2);
  EXPECT_EQ(f.r, 1);
  EXPECT_DOUBLE_EQ(f.eta, std::numbers::pi * std::numbers::pi / 5);
  EXPECT_EQ(make_field(2).d_K, 8);
  EXPECT_EQ(make_field(3).d_K, 12);
}

TEST(MakeField, ImaginaryQuadratic) {
  auto f = make_field(-1);
  EXPECT_EQ(f.r1, 0);
  EXPECT_EQ(f.r2, 1);
  EXPECT_EQ(f.d_K, -4);
  EXPECT_EQ(f.w, 4);
  EXPECT_EQ(f.r, 0);
  EXPECT_DOUBLE_EQ(f.eta, std::numbers::pi * std::numbers::pi);
  EXPECT_EQ(make_field(-3).w, 6);
  EXPECT_EQ(make_field(-3).d_K, -3);
  EXPECT_EQ(make_field(-5).w, 2);
  EXPECT_DOUBLE_EQ(make_field(-5).eta, 4 * std::numbers::pi * std::numbers::pi / 20);
}

TEST(MakeField, Rejections) {
  EXPECT_THROW(make_field(0), std::invalid_argument);
  EXPECT_THROW(make_field(1), std::invalid_argument);
  EXPECT_THROW(make_field(12), std::invalid_argument);
  EXPECT_THROW(make_field(-18), std::invalid_argument);
}

TEST(MakeField, DiscriminantCongruence) {
  for (long long d = -60; d <= 60; ++d) {
    if (d == 0 || d == 1 || !dzeta::is_squarefree(d)) continue;
    const long long dk = make_field(d).d_K;
    const long long r = ((dk % 4) + 4) % 4;
    EXPECT_TRUE(r == 0 || r == 1) << d;
  }
}

TEST(KroneckerChi, SpecExamples) {
  EXPECT_EQ(dzeta::kronecker_chi(make_field(-1), 2), 0);
  EXPECT_EQ(dzeta::kronecker_chi(make_field(-1), 3), -1);
  EXPECT_EQ(dzeta::kronecker_chi(make_field(5), 4), 1);
  EXPECT_THROW(dzeta::kronecker_chi(make_field(std::nullopt), 3), std::invalid_argument);
}

TEST(KroneckerChi, MatchesBruteForceResidues) {
  for (long long d : {-1, -2, -3, -5, -7, 2, 3, 5, 13, 17}) {
    auto f = make_field(d);
    for (long long m = 1; m <= 300; ++m) EXPECT_EQ(dzeta::kronecker_chi(f, m), kronecker_oracle(f.d_K, m)) << d << " " << m;
  }
}

TEST(KroneckerChi, PeriodicAndCompletelyMultiplicative) {
  for (long long d : {-1, -3, 5, 2}) {
    auto f = make_field(d);
    const long long q = f.conductor();
    const dzeta::QuadraticCharacter chi(f);
    for (long long m = 1; m <= 2000; ++m) ASSERT_EQ(dzeta::kronecker_chi(f, m), dzeta::kronecker_chi(f, m + q));
    for (long long a = 1; a <= 1000; ++a)
      for (long long b = 1; b <= 1000; ++b) ASSERT_EQ(chi(a * b), chi(a) * chi(b));
  }
}

TEST(QuadraticCharacter, Parity) {
  EXPECT_EQ(dzeta::QuadraticCharacter(make_field(5)).parity(), 0);
  EXPECT_EQ(dzeta::QuadraticCharacter(make_field(-1)).parity(), 1);
  EXPECT_EQ(dzeta::QuadraticCharacter(make_field(-3)).parity(), 1);
}

TEST(ClassNumber, GaussianField) {
  auto inv = dzeta::class_number_data(make_field(-1));
  EXPECT_NEAR(inv.L1, std::numbers::pi / 4, 1e-10);
  EXPECT_EQ(inv.h, 1);
  EXPECT_LT(inv.h_residual, 1e-6);
  EXPECT_EQ(inv.R, 1.0);
}

TEST(ClassNumber, EisensteinField) {
  auto inv = dzeta::class_number_data(make_field(-3));
  EXPECT_NEAR(inv.L1, std::numbers::pi / (3 * std::sqrt(3.0)), 1e-10);
  EXPECT_EQ(inv.h, 1);
}

TEST(ClassNumber, KnownImaginaryClassNumbers) {
  const struct {
    long long d, h;
  } table[] = {{-5, 2}, {-14, 4}, {-23, 3}, {-47, 5}, {-71, 7}};
  for (auto& t : table) EXPECT_EQ(dzeta::class_number_data(make_field(t.d)).h, t.h) << t.d;
}

TEST(ClassNumber, RealQuadraticAgainstUnitSearch) {
  for (long long d : {2, 3, 5, 13, 21, 10, 15}) {
    auto f = make_field(d);
    auto inv = dzeta::class_number_data(f);
    const double R = fundamental_unit_log(f.d_K);
    EXPECT_NEAR(inv.R, R, 1e-12) << d;
    EXPECT_NEAR(inv.hR, std::sqrt(double(f.d_K)) * inv.L1 / 2, 1e-14);
    EXPECT_LT(inv.h_residual, 1e-8) << d;
  }
  EXPECT_EQ(dzeta::class_number_data(make_field(10)).h, 2);
  EXPECT_EQ(dzeta::class_number_data(make_field(5)).h, 1);
  EXPECT_NEAR(dzeta::class_number_data(make_field(5)).hR, std::log((1 + std::sqrt(5.0)) / 2), 1e-10);
}

TEST(ClassNumber, RejectsRationalAndBadBudget) {
  EXPECT_THROW(dzeta::class_number_data(make_field(std::nullopt)), std::invalid_argument);
  EXPECT_THROW(dzeta::class_number_data(make_field(5), 0.0), std::invalid_argument);
}

TEST(ClassNumber, IterationCapFailure) {
  EXPECT_THROW(dzeta::l_one_character_sum(make_field(5), 1e-30, 10000), dzeta::numeric_error);
}

}  // namespace
