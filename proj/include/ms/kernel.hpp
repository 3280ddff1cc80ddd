#pragma once

// Pointwise kernels on the unit square and periodic Bernoulli helpers.
//
//   K(x,y)        = 1/2 - {1/(xy)},              K = 0 on the axes
//   K_dagger(x,y) = 1/2 - {N^2/(ceil(Nx)ceil(Ny))}
//   K_percent     = K(x,y) - K(ceil(Nx)/N, y)

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "ms/common.hpp"

namespace ms {

namespace detail {
inline void check_unit_square(Real x, Real y) {
  if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0))
    throw std::domain_error("kernel argument outside [0,1]^2");
}

inline Real ceil_index(std::int64_t N, Real x) {
  // ceil(Nx) with the same lattice snap as the kernel itself
  const Real t = static_cast<Real>(N) * x;
  const Real r = std::nearbyint(t);
  if (std::fabs(t - r) <= 4.0 * std::numeric_limits<Real>::epsilon() * std::max(1.0, std::fabs(t))) return r;
  return std::ceil(t);
}
}  // namespace detail

inline Real eval_K(Real x, Real y) {
  detail::check_unit_square(x, y);
  if (x == 0.0 || y == 0.0) return 0.0;
  return 0.5 - snapped_frac(1.0 / (x * y));
}

// Exact K(m/N, n/N) = 1/2 - (N^2 mod mn)/(mn); returned as the remainder and
// denominator so callers can stay in integer arithmetic.
struct GridValue {
  unsigned __int128 remainder;
  unsigned __int128 denominator;
  // (mn - 2r) / (2mn) with an exact integer numerator: correctly rounded
  // while 2mn < 2^53
  Real to_real() const {
    const auto num = static_cast<__int128>(denominator) - 2 * static_cast<__int128>(remainder);
    return static_cast<Real>(num) / (2.0 * static_cast<Real>(denominator));
  }
};

inline GridValue eval_K_grid(std::int64_t N, std::int64_t m, std::int64_t n) {
  if (N < 1 || m < 1 || n < 1 || m > N || n > N) throw std::out_of_range("grid index outside [1,N]");
  const auto num = static_cast<unsigned __int128>(N) * static_cast<unsigned __int128>(N);
  const auto den = static_cast<unsigned __int128>(m) * static_cast<unsigned __int128>(n);
  return {num % den, den};
}

inline Real eval_K_dagger(std::int64_t N, Real x, Real y) {
  require(N >= 1, "N must be positive");
  detail::check_unit_square(x, y);
  if (x == 0.0 || y == 0.0) return 0.0;
  const auto m = std::max<std::int64_t>(1, static_cast<std::int64_t>(detail::ceil_index(N, x)));
  const auto n = std::max<std::int64_t>(1, static_cast<std::int64_t>(detail::ceil_index(N, y)));
  return eval_K_grid(N, m, n).to_real();
}

inline Real eval_K_percent(std::int64_t N, Real x, Real y) {
  require(N >= 1, "N must be positive");
  detail::check_unit_square(x, y);
  const Real g = detail::ceil_index(N, x) / static_cast<Real>(N);
  if (g == x) return 0.0;
  return eval_K(x, y) - eval_K(std::min(g, 1.0), y);
}

inline Real bernoulli_B1_tilde(Real t) { return (t - std::floor(t)) - 0.5; }

inline Real bernoulli_B4_tilde(Real t) {
  const Real x = t - std::floor(t);
  return x * x * (x * x - 2.0 * x + 1.0) - 1.0 / 30.0;
}

// Integral of B1~(u)^2 over [0, s]: s/12 + P({s})/3,
// P(tau) = (tau - 1/2)^3 - tau/4 + 1/8.
inline Real integral_B1_squared(Real s) {
  if (!(s >= 0.0)) throw std::domain_error("integral_B1_squared needs s >= 0");
  const Real tau = s - std::floor(s);
  const Real c = tau - 0.5;
  const Real P = c * c * c - 0.25 * tau + 0.125;
  return s / 12.0 + P / 3.0;
}

}  // namespace ms
