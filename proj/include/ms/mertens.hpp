#pragma once

// Moebius / Mertens arithmetic and the exact check of
//   M(N^2) = 2 M(N) - S^2 N^2 + M(N)^2 / 2 - sum_{m,n <= N} K(m/N, n/N) mu(m) mu(n),
// S = sum_{n <= N} mu(n)/n.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ms/common.hpp"
#include "ms/gram.hpp"
#include "ms/kernel.hpp"
#include "ms/spectra.hpp"

namespace ms {

inline constexpr std::int64_t kSieveCap = 1000000000;

struct MobiusTable {
  std::int64_t limit = 0;
  std::vector<std::int8_t> mu;       // index 0 unused
  std::vector<std::int64_t> M_prefix;  // M_prefix[n] = sum_{k <= n} mu(k)
};

// Linear sieve.
inline MobiusTable sieve_mobius(std::int64_t X, std::int64_t cap = kSieveCap) {
  if (X < 1) throw std::domain_error("sieve limit must be positive");
  if (X > cap) throw std::length_error("sieve limit above cap");
  MobiusTable t;
  t.limit = X;
  t.mu.assign(static_cast<std::size_t>(X + 1), 0);
  t.M_prefix.assign(static_cast<std::size_t>(X + 1), 0);
  std::vector<std::int32_t> primes;
  std::vector<bool> composite(static_cast<std::size_t>(X + 1), false);
  t.mu[1] = 1;
  for (std::int64_t i = 2; i <= X; ++i) {
    if (!composite[i]) {
      primes.push_back(static_cast<std::int32_t>(i));
      t.mu[i] = -1;
    }
    for (std::int32_t p : primes) {
      const std::int64_t ip = i * p;
      if (ip > X) break;
      composite[ip] = true;
      if (i % p == 0) {
        t.mu[ip] = 0;
        break;
      }
      t.mu[ip] = static_cast<std::int8_t>(-t.mu[i]);
    }
  }
  for (std::int64_t n = 1; n <= X; ++n) t.M_prefix[n] = t.M_prefix[n - 1] + t.mu[n];
  return t;
}

inline std::int64_t mertens_M(const MobiusTable& t, Real x) {
  if (!(x >= 1.0) || x >= static_cast<Real>(t.limit) + 1.0) throw std::out_of_range("argument outside sieve range");
  return t.M_prefix[static_cast<std::size_t>(std::floor(x))];
}

inline mpq_class harmonic_mobius_sum_exact(const MobiusTable& t, std::int64_t N) {
  if (N < 1 || N > t.limit) throw std::out_of_range("N outside sieve range");
  mpz_class L = 1;
  for (std::int64_t n = 2; n <= N; ++n) mpz_lcm_ui(L.get_mpz_t(), L.get_mpz_t(), static_cast<unsigned long>(n));
  mpz_class num = 0;
  for (std::int64_t n = 1; n <= N; ++n)
    if (t.mu[n] != 0) num += t.mu[n] * mpz_class(L / static_cast<unsigned long>(n));
  mpq_class r(num, L);
  r.canonicalize();
  return r;
}

inline Real harmonic_mobius_sum(const MobiusTable& t, std::int64_t N) {
  if (N < 1 || N > t.limit) throw std::out_of_range("N outside sieve range");
  std::vector<Real> v(static_cast<std::size_t>(N));
  for (std::int64_t n = 1; n <= N; ++n) v[n - 1] = static_cast<Real>(t.mu[n]) / static_cast<Real>(n);
  return pairwise_sum(v);
}

struct IdentityResidual {
  std::int64_t N = 0;
  std::int64_t M_N = 0;
  std::int64_t M_N2 = 0;
  mpq_class exact;        // exact mode
  Real floating = 0.0;    // float mode
  bool is_exact = false;
};

inline constexpr std::int64_t kIdentityExactCap = 512;
inline constexpr std::int64_t kIdentityFloatCap = 5000;

// Exact check: every fraction (N^2 mod mn)/(mn) is put over L^2 with
// L = lcm(1..N), so the double sum is a single integer numerator.
inline IdentityResidual verify_identity_exact(const MobiusTable& t, std::int64_t N) {
  if (N < 1) throw std::domain_error("N must be positive");
  if (N > kIdentityExactCap) throw std::length_error("exact identity cap exceeded");
  if (N * N > t.limit) throw std::out_of_range("sieve does not reach N^2");
  IdentityResidual r;
  r.N = N;
  r.is_exact = true;
  r.M_N = t.M_prefix[N];
  r.M_N2 = t.M_prefix[N * N];
  mpz_class L = 1;
  for (std::int64_t n = 2; n <= N; ++n) mpz_lcm_ui(L.get_mpz_t(), L.get_mpz_t(), static_cast<unsigned long>(n));
  std::vector<mpz_class> Lq(static_cast<std::size_t>(N + 1));
  for (std::int64_t n = 1; n <= N; ++n) Lq[n] = L / static_cast<unsigned long>(n);
  const std::int64_t NN = N * N;
  mpz_class frac_sum = 0;  // sum r_mn (L/m)(L/n) mu(m) mu(n)
  mpz_class row;
  for (std::int64_t m = 1; m <= N; ++m) {
    if (t.mu[m] == 0) continue;
    row = 0;
    for (std::int64_t n = 1; n <= N; ++n) {
      if (t.mu[n] == 0) continue;
      const std::int64_t rem = NN % (m * n);
      if (rem == 0) continue;
      if (t.mu[n] > 0) mpz_addmul_ui(row.get_mpz_t(), Lq[n].get_mpz_t(), static_cast<unsigned long>(rem));
      else mpz_submul_ui(row.get_mpz_t(), Lq[n].get_mpz_t(), static_cast<unsigned long>(rem));
    }
    row *= Lq[m];
    if (t.mu[m] > 0) frac_sum += row;
    else frac_sum -= row;
  }
  const mpq_class MN(r.M_N);
  mpq_class quad = MN * MN / 2 - mpq_class(frac_sum, L * L);
  quad.canonicalize();
  const mpq_class S = harmonic_mobius_sum_exact(t, N);
  mpq_class rhs = 2 * MN - S * S * mpq_class(NN) + MN * MN / 2 - quad;
  rhs.canonicalize();
  r.exact = mpq_class(r.M_N2) - rhs;
  r.exact.canonicalize();
  return r;
}

inline Real quadratic_form_direct(const MobiusTable& t, std::int64_t N) {
  std::vector<Real> rows(static_cast<std::size_t>(N), 0.0);
  parallel_for(static_cast<std::size_t>(N), [&](std::size_t mi) {
    const std::int64_t m = static_cast<std::int64_t>(mi) + 1;
    if (t.mu[m] == 0) return;
    std::vector<Real> v(static_cast<std::size_t>(N), 0.0);
    for (std::int64_t n = 1; n <= N; ++n)
      if (t.mu[n] != 0) v[n - 1] = gram_entry(N, m, n) * t.mu[m] * t.mu[n];
    rows[mi] = pairwise_sum(v);
  });
  return pairwise_sum(rows);
}

inline IdentityResidual verify_identity_float(const MobiusTable& t, std::int64_t N) {
  if (N < 1) throw std::domain_error("N must be positive");
  if (N > kIdentityFloatCap) throw std::length_error("float identity cap exceeded");
  if (N * N > t.limit) throw std::out_of_range("sieve does not reach N^2");
  IdentityResidual r;
  r.N = N;
  r.M_N = t.M_prefix[N];
  r.M_N2 = t.M_prefix[N * N];
  const Real MN = static_cast<Real>(r.M_N);
  const Real S = harmonic_mobius_sum(t, N);
  const Real n = static_cast<Real>(N);
  const Real rhs = 2.0 * MN - S * S * n * n + MN * MN / 2.0 - quadratic_form_direct(t, N);
  r.floating = static_cast<Real>(r.M_N2) - rhs;
  return r;
}

// Spectral decomposition of m^T Z m with m = (mu(1), ..., mu(N)).
struct QuadraticFormReport {
  Real direct = 0.0;
  Real spectral = 0.0;
  Real delta = 0.0;
  Real truncated = 0.0;
  Real remainder = 0.0;
  int retained_terms = 0;
  bool threshold_condition = false;  // delta^2 > (1 + log N)/N
  std::vector<Real> projections;     // N^{-1/2} <m, v_j>, plus block then minus block
};

inline QuadraticFormReport quadratic_form_spectral(const MobiusTable& t, const Spectrum& s, Real delta) {
  const std::int64_t N = s.n;
  if (s.model != "dagger") throw std::invalid_argument("needs a uniform-grid spectrum");
  if (s.vectors_plus.size() != s.nu_plus.size() || s.vectors_minus.size() != s.nu_minus.size())
    throw std::invalid_argument("spectrum lacks eigenvectors");
  if (!(delta >= 0.0)) throw std::domain_error("delta must be non-negative");
  QuadraticFormReport q;
  q.delta = delta;
  q.direct = quadratic_form_direct(t, N);
  const Real n = static_cast<Real>(N);
  q.threshold_condition = delta * delta > (1.0 + std::log(n)) / n;
  std::vector<Real> all, kept;
  auto add = [&](const std::vector<Real>& nu, const std::vector<std::vector<Real>>& vecs) {
    for (std::size_t j = 0; j < nu.size(); ++j) {
      std::vector<Real> prod(static_cast<std::size_t>(N));
      for (std::int64_t i = 0; i < N; ++i) prod[i] = vecs[j][i] * t.mu[i + 1];
      const Real dot = pairwise_sum(prod);
      q.projections.push_back(dot / std::sqrt(n));
      const Real term = nu[j] * n * dot * dot;
      all.push_back(term);
      if (std::fabs(nu[j]) > delta) {
        kept.push_back(term);
        ++q.retained_terms;
      }
    }
  };
  add(s.nu_plus, s.vectors_plus);
  add(s.nu_minus, s.vectors_minus);
  q.spectral = pairwise_sum(all);
  q.truncated = pairwise_sum(kept);
  q.remainder = q.direct - q.truncated;
  return q;
}

}  // namespace ms
