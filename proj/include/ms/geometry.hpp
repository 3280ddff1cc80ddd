#pragma once

#include <cmath>
#include <cstdint>

#include "ms/common.hpp"

namespace ms {

// Geometric partition of [0,1]: x_i = exp(-(i-1) eps), x_{N+2} = 0, where
// eps > 0 solves 2 sinh(eps) = exp(-N eps).
struct EpsilonGeometry {
  std::int64_t N = 0;
  Real epsilon = 0.0;
  Real delta = 0.0;  // exp(-eps)
  Real Delta = 0.0;  // exp(eps)

  Real residual() const { return std::fabs(2.0 * std::sinh(epsilon) - std::exp(-static_cast<Real>(N) * epsilon)); }
  Real one_minus_delta() const { return -std::expm1(-epsilon); }
};

namespace detail {
inline Real epsilon_residual(std::int64_t N, Real e) { return 2.0 * std::sinh(e) - std::exp(-static_cast<Real>(N) * e); }
}  // namespace detail

inline EpsilonGeometry solve_epsilon(std::int64_t N) {
  if (N < 3) throw std::domain_error("solve_epsilon needs N >= 3");
  // residual is strictly increasing in eps
  Real lo = 1e-18, hi = 0.25;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const Real mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (detail::epsilon_residual(N, mid) < 0.0) lo = mid;
    else hi = mid;
  }
  Real e = 0.5 * (lo + hi);
  const Real bisected = e;
  const Real n = static_cast<Real>(N);
  for (int it = 0; it < 5; ++it) {
    const Real f = detail::epsilon_residual(N, e);
    const Real df = 2.0 * std::cosh(e) + n * std::exp(-n * e);
    const Real next = e - f / df;
    if (!(next > 1e-18 && next < 0.25)) {
      e = bisected;
      break;
    }
    if (next == e) break;
    e = next;
  }
  if (std::fabs(detail::epsilon_residual(N, e)) > std::fabs(detail::epsilon_residual(N, bisected))) e = bisected;
  return EpsilonGeometry{N, e, std::exp(-e), std::exp(e)};
}

inline Real grid_point(const EpsilonGeometry& g, std::int64_t i) {
  if (i < 1 || i > g.N + 2) throw std::out_of_range("grid index outside [1, N+2]");
  if (i == g.N + 2) return 0.0;
  return std::exp(-static_cast<Real>(i - 1) * g.epsilon);
}

}  // namespace ms
