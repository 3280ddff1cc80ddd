#include <gtest/gtest.h>

#include <cmath>

#include "ms/mertens.hpp"
#include "ms/spectra.hpp"

using namespace ms;

namespace {

int mobius_by_factoring(std::int64_t n) {
  int r = 1;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    r = -r;
  }
  return n > 1 ? -r : r;
}

Spectrum dense_with_vectors(std::int64_t N) {
  SpectrumOptions o;
  o.solver = Solver::dense;
  o.vectors = true;
  return spectrum_of_Z(N, o);
}

}  // namespace

TEST(Mobius, Values) {
  const auto t = sieve_mobius(100);
  EXPECT_EQ(t.mu[1], 1);
  EXPECT_EQ(t.mu[12], 0);
  EXPECT_EQ(t.mu[6], 1);
  EXPECT_EQ(t.mu[97], -1);
  EXPECT_EQ(t.M_prefix[5], -2);
  EXPECT_EQ(mertens_M(t, 1.0), 1);
  EXPECT_EQ(mertens_M(t, 2.0), 0);
  EXPECT_EQ(mertens_M(t, 2.9), 0);
  EXPECT_THROW(mertens_M(t, 0.5), std::out_of_range);
  EXPECT_THROW(mertens_M(t, 101.0), std::out_of_range);
  EXPECT_THROW(sieve_mobius(0), std::domain_error);
  EXPECT_THROW(sieve_mobius(kSieveCap + 1), std::length_error);
}

TEST(Mobius, AgreesWithFactoring) {
  const auto t = sieve_mobius(20000);
  std::int64_t M = 0;
  for (std::int64_t n = 1; n <= 20000; ++n) {
    ASSERT_EQ(t.mu[n], mobius_by_factoring(n)) << n;
    M += t.mu[n];
    ASSERT_EQ(t.M_prefix[n], M);
  }
  // tabulated value M(10^4) = -23
  EXPECT_EQ(t.M_prefix[10000], -23);
}

TEST(HarmonicSum, ExactValues) {
  const auto t = sieve_mobius(100);
  EXPECT_EQ(harmonic_mobius_sum_exact(t, 1), mpq_class(1));
  EXPECT_EQ(harmonic_mobius_sum_exact(t, 2), mpq_class(1, 2));
  EXPECT_EQ(harmonic_mobius_sum_exact(t, 6), mpq_class(2, 15));
  EXPECT_NEAR(harmonic_mobius_sum(t, 100), harmonic_mobius_sum_exact(t, 100).get_d(), 1e-15);
  EXPECT_THROW(harmonic_mobius_sum(t, 101), std::out_of_range);
}

TEST(Identity, ExactlyZero) {
  const auto t = sieve_mobius(64 * 64);
  for (std::int64_t N = 1; N <= 64; ++N) {
    const auto r = verify_identity_exact(t, N);
    EXPECT_TRUE(r.is_exact);
    EXPECT_EQ(r.exact, 0) << N;
  }
  EXPECT_THROW(verify_identity_exact(t, 65), std::out_of_range);
  EXPECT_THROW(verify_identity_exact(sieve_mobius(600 * 600), 513), std::length_error);
}

TEST(Identity, ExactAtTen) {
  const auto t = sieve_mobius(100);
  const auto r = verify_identity_exact(t, 10);
  EXPECT_EQ(r.M_N, -1);
  EXPECT_EQ(r.M_N2, 1);
  EXPECT_EQ(r.exact, 0);
}

TEST(Identity, FloatingResidualSmall) {
  const auto t = sieve_mobius(2000 * 2000);
  for (std::int64_t N : {1, 10, 256, 2000}) {
    const auto r = verify_identity_float(t, N);
    EXPECT_LT(std::fabs(r.floating), 1e-6 * static_cast<double>(N) * N) << N;
  }
  EXPECT_THROW(verify_identity_float(t, kIdentityFloatCap + 1), std::length_error);
}

TEST(QuadraticForm, SingleEntry) {
  const auto t = sieve_mobius(1);
  const auto q = quadratic_form_spectral(t, dense_with_vectors(1), 0.0);
  EXPECT_DOUBLE_EQ(q.direct, 0.5);
  EXPECT_NEAR(q.spectral, 0.5, 1e-15);
}

TEST(QuadraticForm, LargeThresholdKeepsNothing) {
  const auto t = sieve_mobius(100);
  const auto q = quadratic_form_spectral(t, dense_with_vectors(100), 1.0);
  EXPECT_EQ(q.retained_terms, 0);
  EXPECT_EQ(q.truncated, 0.0);
  EXPECT_EQ(q.remainder, q.direct);
  EXPECT_TRUE(q.threshold_condition);
}

TEST(QuadraticForm, SpectralTheorem) {
  const auto t = sieve_mobius(256);
  for (std::int64_t N : {64, 128, 256}) {
    const auto q = quadratic_form_spectral(t, dense_with_vectors(N), 0.0);
    EXPECT_LE(std::fabs(q.direct - q.spectral) / std::max(1.0, std::fabs(q.direct)), 1e-9) << N;
    EXPECT_LE(std::fabs(q.direct - q.spectral), 1e-9 * N);
    if (N == 256) {
      EXPECT_NEAR(q.truncated, q.spectral, 1e-9);
      EXPECT_NEAR(q.remainder, 0.0, 1e-9 * N);
      EXPECT_FALSE(q.threshold_condition);
    }
  }
}

TEST(QuadraticForm, RetainedTermsMonotone) {
  const auto t = sieve_mobius(300);
  const auto s = dense_with_vectors(300);
  int prev = 1 << 30;
  for (double d : {0.0, 0.001, 0.003, 0.01, 0.03, 0.1, 0.3, 1.0}) {
    const auto q = quadratic_form_spectral(t, s, d);
    EXPECT_LE(q.retained_terms, prev);
    prev = q.retained_terms;
  }
}

TEST(QuadraticForm, ProjectionsBitStable) {
  const auto t = sieve_mobius(200);
  const auto a = quadratic_form_spectral(t, dense_with_vectors(200), 0.05);
  const auto b = quadratic_form_spectral(t, dense_with_vectors(200), 0.05);
  EXPECT_EQ(a.projections, b.projections);
  EXPECT_EQ(a.direct, b.direct);
}

TEST(QuadraticForm, NeedsVectorsAndDaggerModel) {
  const auto t = sieve_mobius(50);
  SpectrumOptions o;
  o.solver = Solver::dense;
  EXPECT_THROW(quadratic_form_spectral(t, spectrum_of_Z(50, o), 0.1), std::invalid_argument);
  auto s = dense_with_vectors(50);
  s.model = "triangle";
  EXPECT_THROW(quadratic_form_spectral(t, s, 0.1), std::invalid_argument);
}
