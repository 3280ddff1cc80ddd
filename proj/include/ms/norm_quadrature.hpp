#pragma once

// Quadrature estimates of squared L2 norms of K and of the differences
// between K and its two discretizations, plus the absolute-deviation
// quantity D of the column-snapped kernel.

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ms/common.hpp"
#include "ms/geometry.hpp"
#include "ms/hankel.hpp"
#include "ms/kernel.hpp"
#include "ms/kernel_integrals.hpp"
#include "ms/oracles.hpp"

namespace ms {

// int int_{[0,1]^2} K^2
inline Real K_norm_sq_quadrature() { return static_cast<Real>(product_Psi(1.0L)); }

// || K - K_dagger ||^2, summed square by square over the N x N grid.
inline Real kdagger_norm_sq_quadrature(std::int64_t N, std::int64_t cap = 1000) {
  if (N < 1) throw std::domain_error("N must be positive");
  if (N > cap) throw std::length_error("grid size above quadrature cap");
  const std::int64_t NN = N * N;
  const Long inv = 1.0L / static_cast<Long>(NN);
  // the primitives depend only on the corner product r / N^2
  std::vector<Long> phi(NN + 1), psi(NN + 1);
  parallel_for(static_cast<std::size_t>(NN + 1), [&](std::size_t r) {
    const Long t = static_cast<Long>(r) * inv;
    phi[r] = product_Phi(t);
    psi[r] = product_Psi(t);
  });
  std::vector<Real> rows(static_cast<std::size_t>(N));
  parallel_for(static_cast<std::size_t>(N), [&](std::size_t mi) {
    const std::int64_t m = static_cast<std::int64_t>(mi) + 1;
    std::vector<Real> terms(static_cast<std::size_t>(N));
    for (std::int64_t n = 1; n <= N; ++n) {
      const std::int64_t a = m * n, b = (m - 1) * n, c = m * (n - 1), d = (m - 1) * (n - 1);
      const Long k1 = phi[a] - phi[b] - phi[c] + phi[d];
      const Long k2 = psi[a] - psi[b] - psi[c] + psi[d];
      const Long z = 0.5L - static_cast<Long>(NN % a) / static_cast<Long>(a);
      terms[n - 1] = static_cast<Real>(k2 - 2.0L * z * k1 + z * z * inv);
    }
    rows[mi] = pairwise_sum(terms);
  });
  return pairwise_sum(rows);
}

// Squared norm of K on the rectangles with i + j > N + 1, where the
// geometric approximation vanishes.  Row i covers (x_{i+1}, x_i) x (0, x_{N+2-i});
// its upper corner product is delta^N and its lower one delta^{N+1}
// (the last row starts at x = 0).
inline Real V1_quadrature(const EpsilonGeometry& g) {
  const Long e = g.epsilon;
  const Long N = static_cast<Long>(g.N);
  const Long up = product_Psi(std::exp(-N * e));
  const Long lo = product_Psi(std::exp(-(N + 1.0L) * e));
  return static_cast<Real>((N + 1.0L) * up - N * lo);
}

// Squared norm of K minus its rectangle means on the rectangles with
// i + j <= N + 1; row n of the anti-diagonal holds n congruent copies.
inline Real V0_quadrature(const HankelModel& m) {
  std::vector<Real> t(static_cast<std::size_t>(m.N()));
  parallel_for(t.size(), [&](std::size_t idx) {
    const std::int64_t n = static_cast<std::int64_t>(idx) + 1;
    t[idx] = static_cast<Real>(n) * I_tilde_quadrature(m.geom, n, m.mu_tilde[idx]);
  });
  return pairwise_sum(t);
}

// int_0^1 |K_percent(x, y)| dx for fixed y: each column strip
// ((m-1)/N, m/N] subtracts the constant K(m/N, y).
inline Real kpercent_row_integral(std::int64_t N, Real y) {
  if (y <= 0.0) return 0.0;
  const Long Y = y;
  Long s = 0.0L;
  for (std::int64_t m = 1; m <= N; ++m) {
    const Real c = eval_K(static_cast<Real>(m) / static_cast<Real>(N), y);
    const Long u0 = Y * static_cast<Long>(m - 1) / N;
    const Long u1 = Y * static_cast<Long>(m) / N;
    s += abs_profile_integral(u0, u1, c);
  }
  return static_cast<Real>(s / Y);
}

// D = int_0^1 ( int_0^1 |K_percent(x,y)| dx )^2 dy by composite
// Gauss-Legendre in y.
inline Real kpercent_D_estimate(std::int64_t N, int panels = 256, std::int64_t cap = 2000) {
  if (N < 1) throw std::domain_error("N must be positive");
  if (N > cap) throw std::length_error("grid size above quadrature cap");
  using GL = boost::math::quadrature::gauss<double, 10>;
  std::vector<Real> part(static_cast<std::size_t>(panels));
  parallel_for(part.size(), [&](std::size_t p) {
    const double a = static_cast<double>(p) / panels, b = static_cast<double>(p + 1) / panels;
    part[p] = GL::integrate(
        [&](double y) {
          const Real r = kpercent_row_integral(N, y);
          return r * r;
        },
        a, b);
  });
  return pairwise_sum(part);
}

}  // namespace ms
