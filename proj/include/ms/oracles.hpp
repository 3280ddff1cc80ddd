#pragma once

// Quadrature references for the rectangle means and the per-row square
// deviations of the geometric-grid approximation.

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ms/geometry.hpp"
#include "ms/hankel.hpp"
#include "ms/kernel_integrals.hpp"

namespace ms {

// Mean of K over R_{n,1} = (x_{n+1}, x_n) x (x_2, x_1).  The y-integral is
// taken exactly through the profile primitive; the x-integral is adaptive
// Gauss-Kronrod split where a hyperbola xy = 1/m meets a corner line.
inline Real mu_quadrature_oracle(const EpsilonGeometry& g, std::int64_t n) {
  if (n < 1 || n > g.N) throw std::out_of_range("row index outside [1,N]");
  const Long e = g.epsilon;
  const Long x_hi = std::exp(-static_cast<Long>(n - 1) * e);
  const Long x_lo = std::exp(-static_cast<Long>(n) * e);
  const Long y_lo = std::exp(-e);
  std::vector<Long> cuts{x_lo, x_hi};
  // x * 1 = 1/m and x * y_lo = 1/m
  for (Long scale : {1.0L, y_lo}) {
    const auto m_lo = static_cast<std::int64_t>(std::ceil(1.0L / (x_hi * scale)));
    const auto m_hi = static_cast<std::int64_t>(std::floor(1.0L / (x_lo * scale)));
    for (std::int64_t m = m_lo; m <= m_hi; ++m) {
      const Long c = 1.0L / (m * scale);
      if (c > x_lo && c < x_hi) cuts.push_back(c);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  auto f = [&](Long x) { return (profile_F(x) - profile_F(x * y_lo)) / x; };
  Long total = 0.0L;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    if (cuts[s + 1] <= cuts[s]) continue;
    total += boost::math::quadrature::gauss_kronrod<Long, 15>::integrate(f, cuts[s], cuts[s + 1], 12, 1e-16L);
  }
  const Long omd = -std::expm1(-e);
  const Long area = x_hi * omd * omd;  // (x_n - x_{n+1}) (1 - x_2)
  return static_cast<Real>(total / area);
}

// Integral of (K - kappa)^2 over R_{n,1} written in the logarithmic
// coordinate sigma along the anti-diagonal; Gauss-Legendre on the smooth
// pieces split at sigma = 0 and sigma = sigma_n.
inline Real I_tilde_quadrature(const EpsilonGeometry& g, std::int64_t n, Real kappa) {
  if (n < 1 || n > g.N) throw std::out_of_range("row index outside [1,N]");
  const auto row = detail::row_quantities(g, n);
  const Long e = g.epsilon;
  const Long ne = static_cast<Long>(n) * e;
  const Long kk = static_cast<Long>(row.k);
  const bool top = (row.sigma == 1.0L);
  // e^{(sigma+n) eps} - k_n
  auto lift = [&](Long s) {
    if (top) return std::exp(ne + s * e) - kk;
    return kk * std::expm1((s - row.sigma) * e);
  };
  auto integrand = [&](Long s, Long shift) {
    const Long v = static_cast<Long>(kappa) + lift(s) + shift;
    return v * v * (1.0L - std::fabs(s)) * std::exp(-s * e);
  };
  using GL = boost::math::quadrature::gauss<Long, 30>;
  auto piece = [&](Long a, Long b, Long shift) {
    if (b <= a) return 0.0L;
    return GL::integrate([&](Long s) { return integrand(s, shift); }, a, b);
  };
  const Long sn = row.sigma;
  Long total = 0.0L;
  // below sigma_n the profile sits at k_n - 1/2, above at k_n + 1/2
  total += piece(-1.0L, std::min(0.0L, sn), 0.5L);
  if (sn > 0.0L) total += piece(0.0L, sn, 0.5L);
  total += piece(sn, std::max(0.0L, sn), -0.5L);
  total += piece(std::max(0.0L, sn), 1.0L, -0.5L);
  return static_cast<Real>(e * e * std::exp(-ne) * total);
}

// Same quantity from rectangle integrals of K and K^2.
inline Real I_tilde_rectangle(const EpsilonGeometry& g, std::int64_t n, Real kappa) {
  if (n < 1 || n > g.N) throw std::out_of_range("row index outside [1,N]");
  const Long e = g.epsilon;
  const Long x_hi = std::exp(-static_cast<Long>(n - 1) * e);
  const Long x_lo = std::exp(-static_cast<Long>(n) * e);
  const Long y_lo = std::exp(-e);
  const Long omd = -std::expm1(-e);
  const Long area = x_hi * omd * omd;
  const Long k1 = rect_integral_K(x_lo, x_hi, y_lo, 1.0L);
  const Long k2 = rect_integral_K2(x_lo, x_hi, y_lo, 1.0L);
  const Long c = kappa;
  return static_cast<Real>(k2 - 2.0L * c * k1 + c * c * area);
}

// Closed form of I_tilde at the mean for rows with sigma_n = 1.
inline Real I_tilde_sigma_one(const EpsilonGeometry& g, std::int64_t n) {
  const Long e = g.epsilon;
  const Long h = std::sinh(e / 2) / (e / 2);
  return static_cast<Real>(e * e * std::exp(static_cast<Long>(n) * e) * (h * h - 1.0L / (h * h)));
}

}  // namespace ms
