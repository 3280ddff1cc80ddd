#pragma once

// One- and two-variable integrals of K built from the profile
//   k(u) = 1/2 - {1/u},  K(x,y) = k(xy).
// On (1/(m+1), 1/m] the profile is m + 1/2 - 1/u, so every integral splits
// along the hyperbolas xy = 1/m into smooth pieces.
//
//   F(u) = int_0^u k,     G(u) = int_0^u k^2
//   Phi(t) = int_0^t F(u)/u du = integral of K over [0,X]x[0,Y] with XY = t
//   Psi(t) = int_0^t G(u)/u du = same for K^2

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

#include "ms/common.hpp"

namespace ms {

using Long = long double;

inline constexpr Long kEulerGamma = 0.577215664901532860606512090082402431L;

namespace detail {

// index M with u in (1/(M+1), 1/M]
inline std::int64_t profile_piece(Long u) {
  const Long t = 1.0L / u;
  const Long r = std::nearbyint(t);
  if (std::fabs(t - r) <= 8.0L * std::numeric_limits<Long>::epsilon() * t) return static_cast<std::int64_t>(r);
  return static_cast<std::int64_t>(std::floor(t));
}

inline constexpr std::int64_t kSquareTailStart = 1000;

// int_0^{1/n} k^2, n >= 1
inline Long tail_G(std::int64_t n) {
  auto asym = [](Long x) {
    const Long x2 = x * x;
    return 1.0L / (12.0L * x) + 1.0L / (180.0L * x * x2) - 1.0L / (630.0L * x * x2 * x2);
  };
  if (n >= kSquareTailStart) return asym(static_cast<Long>(n));
  static const std::vector<Long> table = [&] {
    std::vector<Long> t(kSquareTailStart + 1);
    t[kSquareTailStart] = asym(static_cast<Long>(kSquareTailStart));
    for (std::int64_t m = kSquareTailStart - 1; m >= 1; --m) {
      const Long c = m + 0.5L;
      const Long piece = c * c / (static_cast<Long>(m) * (m + 1)) - 2.0L * c * std::log1p(1.0L / m) + 1.0L;
      t[m] = t[m + 1] + piece;
    }
    return t;
  }();
  return table[n];
}

// int_0^{1/n} k = gamma - H_n + log n + 1/(2n)
inline Long tail_F(std::int64_t n) {
  const Long x = static_cast<Long>(n);
  if (n >= 30) {
    const Long x2 = x * x;
    const Long x4 = x2 * x2;
    return 1.0L / (12.0L * x2) - 1.0L / (120.0L * x4) + 1.0L / (252.0L * x4 * x2) - 1.0L / (240.0L * x4 * x4) +
           1.0L / (132.0L * x4 * x4 * x2);
  }
  Long H = 0.0L;
  for (std::int64_t j = n; j >= 1; --j) H += 1.0L / j;
  return kEulerGamma - H + std::log(x) + 0.5L / x;
}

}  // namespace detail

inline Long profile_F(Long u) {
  if (u <= 0.0L) return 0.0L;
  if (u > 1.0L) throw std::domain_error("profile_F needs u <= 1");
  const std::int64_t M = detail::profile_piece(u);
  const Long n = static_cast<Long>(M + 1);
  return detail::tail_F(M + 1) + (M + 0.5L) * (u - 1.0L / n) - std::log(u * n);
}

inline Long profile_G(Long u) {
  if (u <= 0.0L) return 0.0L;
  if (u > 1.0L) throw std::domain_error("profile_G needs u <= 1");
  const std::int64_t M = detail::profile_piece(u);
  const Long n = static_cast<Long>(M + 1);
  const Long c = M + 0.5L;
  return detail::tail_G(M + 1) + c * c * (u - 1.0L / n) - 2.0L * c * std::log(u * n) + (n - 1.0L / u);
}

namespace detail {

inline constexpr std::int64_t kProductPieces = 20000;

template <class Prim>
Long piece_integral(Prim prim, Long a, Long b) {
  return boost::math::quadrature::gauss<Long, 20>::integrate([&](Long u) { return prim(u) / u; }, a, b);
}

struct ProductTables {
  std::vector<Long> phi;  // Phi(1/n)
  std::vector<Long> psi;  // Psi(1/n)
};

inline const ProductTables& product_tables() {
  static const ProductTables t = [] {
    ProductTables r;
    const std::int64_t P = kProductPieces;
    r.phi.assign(P + 1, 0.0L);
    r.psi.assign(P + 1, 0.0L);
    // below 1/P: Phi = O(t^3), Psi = t/12 + O(t^3)
    r.psi[P] = 1.0L / (12.0L * P);
    for (std::int64_t m = P - 1; m >= 1; --m) {
      const Long a = 1.0L / (m + 1), b = 1.0L / m;
      r.phi[m] = r.phi[m + 1] + piece_integral([](Long u) { return profile_F(u); }, a, b);
      r.psi[m] = r.psi[m + 1] + piece_integral([](Long u) { return profile_G(u); }, a, b);
    }
    return r;
  }();
  return t;
}

}  // namespace detail

inline Long product_Phi(Long t) {
  if (t <= 0.0L) return 0.0L;
  if (t > 1.0L) throw std::domain_error("product_Phi needs t <= 1");
  const std::int64_t M = detail::profile_piece(t);
  if (M >= detail::kProductPieces) return 0.0L;
  const auto& tab = detail::product_tables();
  const Long a = 1.0L / (M + 1);
  return tab.phi[M + 1] + detail::piece_integral([](Long u) { return profile_F(u); }, a, t);
}

inline Long product_Psi(Long t) {
  if (t <= 0.0L) return 0.0L;
  if (t > 1.0L) throw std::domain_error("product_Psi needs t <= 1");
  const std::int64_t M = detail::profile_piece(t);
  if (M >= detail::kProductPieces) return t / 12.0L;
  const auto& tab = detail::product_tables();
  const Long a = 1.0L / (M + 1);
  return tab.psi[M + 1] + detail::piece_integral([](Long u) { return profile_G(u); }, a, t);
}

// Integrals of K and K^2 over [x0,x1] x [y0,y1] inside the unit square.
inline Long rect_integral_K(Long x0, Long x1, Long y0, Long y1) {
  return product_Phi(x1 * y1) - product_Phi(x0 * y1) - product_Phi(x1 * y0) + product_Phi(x0 * y0);
}

inline Long rect_integral_K2(Long x0, Long x1, Long y0, Long y1) {
  return product_Psi(x1 * y1) - product_Psi(x0 * y1) - product_Psi(x1 * y0) + product_Psi(x0 * y0);
}

// int_{u0}^{u1} |k(u) - c| du for |c| <= 1/2.  Below 1/cutoff the profile
// sweeps (-1/2, 1/2) almost uniformly on each piece and the mean 1/4 + c^2
// is used.
inline Long abs_profile_integral(Long u0, Long u1, Long c, std::int64_t cutoff = 4000) {
  if (u1 <= u0) return 0.0L;
  Long total = 0.0L;
  const Long lo_cut = 1.0L / cutoff;
  if (u0 < lo_cut) {
    const Long e = std::min(u1, lo_cut);
    total += (0.25L + c * c) * (e - u0);
    u0 = e;
    if (u1 <= u0) return total;
  }
  auto prim = [](Long A, Long u) { return A * u - std::log(u); };
  Long u = u0;
  while (u < u1) {
    std::int64_t j = detail::profile_piece(u);
    if (1.0L / j <= u) --j;
    const Long top = std::min(u1, 1.0L / j);
    const Long A = j + 0.5L - c;  // k - c = A - 1/u on this piece, zero at 1/A
    const Long z = 1.0L / A;
    if (z <= u) {
      total += prim(A, top) - prim(A, u);
    } else if (z >= top) {
      total += prim(A, u) - prim(A, top);
    } else {
      total += (prim(A, u) - prim(A, z)) + (prim(A, top) - prim(A, z));
    }
    u = top;
  }
  return total;
}

}  // namespace ms
