#pragma once

// Uniform-grid Gram matrix Z(N): z_mn = K(m/N, n/N) = 1/2 - (N^2 mod mn)/(mn).

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "ms/common.hpp"
#include "ms/kernel.hpp"

namespace ms {

inline constexpr std::int64_t kExactGramCap = 512;

inline mpz_class to_mpz(unsigned __int128 v) {
  const auto hi = static_cast<unsigned long>(v >> 64);
  const auto lo = static_cast<unsigned long>(v);
  mpz_class r = hi;
  r <<= 64;
  r += lo;
  return r;
}

// Entry as a double, correctly rounded while 2N^2 < 2^53.
inline Real gram_entry(std::int64_t N, std::int64_t m, std::int64_t n) { return eval_K_grid(N, m, n).to_real(); }

inline mpq_class gram_entry_exact(std::int64_t N, std::int64_t m, std::int64_t n) {
  const GridValue v = eval_K_grid(N, m, n);
  mpq_class q(to_mpz(v.denominator) - 2 * to_mpz(v.remainder), 2 * to_mpz(v.denominator));
  q.canonicalize();
  return q;
}

inline Eigen::MatrixXd build_Z(std::int64_t N) {
  if (N < 1) throw std::domain_error("N must be positive");
  if (static_cast<double>(N) * static_cast<double>(N) * 2.0 >= 9007199254740992.0)
    throw std::length_error("N too large for correctly rounded entries");
  const auto n = static_cast<Eigen::Index>(N);
  Eigen::MatrixXd Z(n, n);
  parallel_for(static_cast<std::size_t>(N), [&](std::size_t i) {
    for (Eigen::Index j = 0; j <= static_cast<Eigen::Index>(i); ++j) {
      const Real z = gram_entry(N, static_cast<std::int64_t>(i) + 1, j + 1);
      Z(static_cast<Eigen::Index>(i), j) = z;
    }
  });
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) Z(i, j) = Z(j, i);
  return Z;
}

struct ExactGram {
  std::int64_t N = 0;
  std::vector<mpq_class> entries;  // row-major
  const mpq_class& at(std::int64_t m, std::int64_t n) const { return entries[(m - 1) * N + (n - 1)]; }
};

inline ExactGram build_Z_exact(std::int64_t N, std::int64_t cap = kExactGramCap) {
  if (N < 1) throw std::domain_error("N must be positive");
  if (N > cap) throw std::length_error("exact Gram matrix size cap exceeded");
  ExactGram g;
  g.N = N;
  g.entries.resize(static_cast<std::size_t>(N * N));
  for (std::int64_t m = 1; m <= N; ++m)
    for (std::int64_t n = 1; n <= N; ++n) g.entries[(m - 1) * N + (n - 1)] = gram_entry_exact(N, m, n);
  return g;
}

}  // namespace ms
