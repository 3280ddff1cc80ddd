#pragma once

// Explicit norm bounds for the two discretization errors, eigenvalue
// enclosures built from them, and evaluators for the asymptotic
// eigenvalue-decay formulas.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ms/common.hpp"
#include "ms/geometry.hpp"
#include "ms/hankel.hpp"
#include "ms/kernel.hpp"
#include "ms/oracles.hpp"
#include "ms/spectra.hpp"

namespace ms {

// Euler's constant and the first Stieltjes constant, 17 significant digits.
inline constexpr double kGamma0 = 0.57721566490153286;
inline constexpr double kGamma1 = -0.07281584548367673;

// int int K^2 over the unit square in closed form.
inline Real K_norm_squared_const() {
  const double pi = std::numbers::pi;
  const double l = std::log(2.0 * pi) - 1.0;
  return 0.75 - pi * pi / 24.0 - l * l / 2.0 + kGamma0 * kGamma0 / 2.0 + kGamma1;
}

// ---------------------------------------------------------------------------
// Squares of the uniform grid met by a hyperbola xy = 1/m.

inline constexpr std::int64_t kUCountCap = 100000;

// m0 * p * q < 2 N^2, so 64 bits suffice for N up to the enumeration cap.
inline bool U_member(std::int64_t N, std::int64_t p, std::int64_t q) {
  if (p == 0 || q == 0) return true;
  const auto NN = static_cast<std::uint64_t>(N) * static_cast<std::uint64_t>(N);
  const std::uint64_t m0 = NN / (static_cast<std::uint64_t>(p + 1) * static_cast<std::uint64_t>(q + 1)) + 1;
  return m0 * static_cast<std::uint64_t>(p) * static_cast<std::uint64_t>(q) < NN;
}

struct UCount {
  std::int64_t count = 0;
  std::vector<std::pair<std::int64_t, std::int64_t>> points;
};

inline UCount enumerate_U(std::int64_t N, bool want_points = false, std::int64_t cap = kUCountCap) {
  if (N < 1) throw std::domain_error("N must be positive");
  if (N > std::min(cap, kUCountCap)) throw std::length_error("enumeration cap exceeded");
  UCount r;
  std::vector<std::int64_t> rows(static_cast<std::size_t>(N), 0);
  parallel_for(static_cast<std::size_t>(N), [&](std::size_t p) {
    std::int64_t c = 0;
    for (std::int64_t q = 0; q < N; ++q) c += U_member(N, static_cast<std::int64_t>(p), q) ? 1 : 0;
    rows[p] = c;
  });
  for (auto c : rows) r.count += c;
  if (want_points)
    for (std::int64_t p = 0; p < N; ++p)
      for (std::int64_t q = 0; q < N; ++q)
        if (U_member(N, p, q)) r.points.emplace_back(p, q);
  return r;
}

inline Real lemma42_bound(std::int64_t N) {
  if (N < 2) throw std::domain_error("needs N >= 2");
  const double n = static_cast<double>(N), l = std::log(n);
  return (2.0 + (std::log(l) + 9.0) / l) * std::pow(n, 1.5) * std::sqrt(l);
}

namespace detail {
inline double dagger_tail_term(double n) {
  return std::pow(1.0 + 1.0 / std::sqrt(n), 8) * (4.0 / 9.0 + 23.0 / 30.0 * std::pow(n, -1.0 / 6.0));
}
}  // namespace detail

inline Real theorem1_bound(std::int64_t N) {
  if (N < 25) throw std::domain_error("needs N >= 25");
  const double n = static_cast<double>(N), l = std::log(n);
  return (2.0 * std::sqrt(l) + detail::dagger_tail_term(n) + (std::log(l) + 9.0) / std::sqrt(l)) / std::sqrt(n);
}

inline Real lemma41_bound(std::int64_t N, std::int64_t U_count) {
  if (N < 25) throw std::domain_error("needs N >= 25");
  if (U_count < 0) throw std::domain_error("count must be non-negative");
  const double n = static_cast<double>(N);
  return static_cast<double>(U_count) / (n * n) + detail::dagger_tail_term(n) / std::sqrt(n);
}

// ---------------------------------------------------------------------------
// Geometric grid.

inline Real V1_bound(const EpsilonGeometry& g) {
  const double ne = static_cast<double>(g.N) * g.epsilon;
  return (ne + 1.0) / 12.0 * std::exp(-ne) + ne / (18.0 * std::sqrt(3.0)) * std::exp(-2.0 * ne);
}

// How rows with sigma_n = 1 are treated: the four-term bound alone, or the
// smaller of it and the exact value at the mean.
enum class SigmaOneRule { four_term, exact_if_smaller };

inline Real lemma66_four_term(const HankelModel& m, std::int64_t n) {
  if (n < 1 || n > m.N()) throw std::out_of_range("row index outside [1,N]");
  const Long e = m.geom.epsilon;
  const Long s = m.sigma[n - 1];
  const Long c = chi(static_cast<Real>(s));
  const Long e2 = e * e, e3 = e2 * e, e4 = e2 * e2;
  const Long nn = static_cast<Long>(n);
  const Long t = (1.0L - c * c) / 4.0L * e2 * std::exp((1.0L - nn) * e) +
                 static_cast<Long>(psi(static_cast<Real>(s))) * e3 * std::exp((1.0L + s) * e) +
                 e4 * std::exp((nn + 1.0L + 2.0L * s) * e) / 6.0L + (1.0L / 6.0L + s * s) * std::exp(2.0L * e) * e4;
  return static_cast<Real>(t);
}

inline Real lemma66_term_bound(const HankelModel& m, std::int64_t n,
                               SigmaOneRule rule = SigmaOneRule::exact_if_smaller) {
  const Real b = lemma66_four_term(m, n);
  if (rule == SigmaOneRule::exact_if_smaller && m.sigma[n - 1] == 1.0)
    return std::min(b, I_tilde_sigma_one(m.geom, n));
  return b;
}

inline Real V0_bound(const HankelModel& m, SigmaOneRule rule = SigmaOneRule::four_term) {
  std::vector<Real> t(static_cast<std::size_t>(m.N()));
  parallel_for(t.size(), [&](std::size_t i) {
    const auto n = static_cast<std::int64_t>(i) + 1;
    t[i] = static_cast<Real>(n) * lemma66_term_bound(m, n, rule);
  });
  return pairwise_sum(t);
}

inline Real kbowtie_norm_bound(const HankelModel& m, SigmaOneRule rule = SigmaOneRule::four_term) {
  return std::sqrt(V0_bound(m, rule) + V1_bound(m.geom));
}

struct NormReport {
  std::int64_t N = 0;
  Real V0_bound = 0.0;
  Real V1_bound = 0.0;
  Real kbowtie_bound = 0.0;
  Real ktriangle_norm_sq = 0.0;
  std::optional<Real> kdagger_bound_thm1;
  std::optional<Real> kdagger_bound_lemma41;
  std::optional<std::int64_t> U_count;
  Real K_norm_sq = 0.0;
};

inline NormReport norm_report(std::int64_t N, bool with_U = true) {
  NormReport r;
  r.N = N;
  const auto g = solve_epsilon(N);
  const auto m = hankel_coefficients(g);
  r.V0_bound = V0_bound(m);
  r.V1_bound = V1_bound(g);
  r.kbowtie_bound = std::sqrt(r.V0_bound + r.V1_bound);
  r.ktriangle_norm_sq = ktriangle_norm_sq(m);
  r.K_norm_sq = K_norm_squared_const();
  if (N >= 25) {
    r.kdagger_bound_thm1 = theorem1_bound(N);
    if (with_U && N <= kUCountCap) {
      r.U_count = enumerate_U(N).count;
      r.kdagger_bound_lemma41 = lemma41_bound(N, *r.U_count);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Enclosures.

enum class Sign { plus, minus };

struct Enclosure {
  int k = 0;
  Sign sign = Sign::plus;
  Real lo = 0.0;
  Real hi = 0.0;
  Real center = 0.0;
  Real radius = 0.0;
  std::string source;
};

// Radius certified for the given discretization: sqrt of the uniform-grid
// bound, or the geometric-grid bound.
inline Real certified_radius(const std::string& model, std::int64_t N) {
  if (model == "dagger") return std::sqrt(theorem1_bound(N));
  if (model == "triangle") return kbowtie_norm_bound(hankel_coefficients(solve_epsilon(N)));
  throw std::invalid_argument("unknown model");
}

inline std::vector<Enclosure> enclose(const Spectrum& s, Real radius) {
  if (!(radius > 0.0)) throw std::domain_error("radius must be positive");
  std::vector<Enclosure> out;
  auto add = [&](const std::vector<Real>& nu, Sign sign) {
    for (std::size_t i = 0; i < nu.size(); ++i)
      out.push_back({static_cast<int>(i) + 1, sign, nu[i] - radius, nu[i] + radius, nu[i], radius, s.model});
  };
  add(s.nu_plus, Sign::plus);
  add(s.nu_minus, Sign::minus);
  return out;
}

// Intersect with |nu_k| <= 1/(2 sqrt k) and the sign of the sequence.
inline Enclosure cap_enclosure(Enclosure e) {
  const Real cap = 0.5 / std::sqrt(static_cast<Real>(e.k));
  if (e.sign == Sign::plus) {
    e.lo = std::max(e.lo, 0.0);
    e.hi = std::min(e.hi, cap);
  } else {
    e.lo = std::max(e.lo, -cap);
    e.hi = std::min(e.hi, 0.0);
  }
  return e;
}

inline bool intersects(const Enclosure& a, const Enclosure& b) { return a.lo <= b.hi && b.lo <= a.hi; }

// Lower bound for the gap between the i-th and j-th reciprocal eigenvalues of
// K on one side (absolute values on the negative side).
inline Real gap_lower_bound(const Spectrum& s, Real norm_bound, std::size_t i, std::size_t j, Sign sign) {
  const auto& nu = sign == Sign::plus ? s.nu_plus : s.nu_minus;
  if (i < 1 || j < 1 || i > nu.size() || j > nu.size() || i > j) throw std::out_of_range("index outside stored prefix");
  const Real d = std::fabs(nu[i - 1]) - std::fabs(nu[j - 1]);
  return d - std::sqrt(2.0) * norm_bound;
}

// ---------------------------------------------------------------------------
// Decay formulas.  These carry unspecified constants, so results are flagged
// asymptotic and never used as certificates.

struct AsymptoticValue {
  Real value = 0.0;
  bool asymptotic = true;
};

inline AsymptoticValue theorem6_bound(std::int64_t k) {
  if (k < 9) throw std::domain_error("needs k >= 9");
  const double kk = static_cast<double>(k), l = std::log(kk);
  return {21.0 / 40.0 * l * l * l / (kk * kk), true};
}

enum class SquareKind { dagger, triangle };

struct Theorem7Result {
  Real S = 0.0, T = 0.0, kappa = 0.0, theta1 = 0.0, theta1_residual = 0.0;
  Real bound_311 = 0.0;
  std::optional<Real> bound_316_first, bound_316_second;
  std::optional<Real> bound_317_first, bound_317_second;
  bool asymptotic = true;
};

// theta in (0,1) with (1-theta)^3 theta^-4 = kappa
inline Real solve_theta1(Real kappa) {
  if (!(kappa > 0.0)) throw std::domain_error("kappa must be positive");
  auto f = [kappa](double t) { return std::pow(1.0 - t, 3) / std::pow(t, 4) - kappa; };
  double lo = 0.0, hi = 1.0;  // f decreasing from +inf to -kappa
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) > 0.0) lo = mid;
    else hi = mid;
  }
  return std::fabs(f(lo)) <= std::fabs(f(hi)) ? lo : hi;
}

inline Real theorem7_objective(Real theta, Real S, Real T, Real k) {
  return S / (theta * k) + 1.0 / std::sqrt((1.0 - theta) * T * k);
}

inline Theorem7Result theorem7_eval(std::int64_t k, std::int64_t N, Real c, SquareKind kind) {
  if (k < 9 || N < k) throw std::domain_error("needs N >= k >= 9");
  if (!(c > 0.0)) throw std::domain_error("c must be positive");
  Theorem7Result r;
  const double kk = static_cast<double>(k), n = static_cast<double>(N), ln = std::log(n);
  r.S = std::sqrt(21.0 / 40.0) * std::pow(std::log(kk), 1.5);
  r.T = kind == SquareKind::dagger ? std::sqrt(n / (4.0 * ln)) : 60.0 * n / (7.0 * ln * ln * ln);
  r.kappa = kk / (4.0 * r.S * r.S * r.T);
  r.theta1 = solve_theta1(r.kappa);
  const double th = r.theta1;
  r.theta1_residual = std::fabs(std::pow(1.0 - th, 3) / std::pow(th, 4) / r.kappa - 1.0);
  const double ec = std::exp(c);
  r.bound_311 = ec * theorem7_objective(th, r.S, r.T, kk);
  if (r.kappa <= 2.0) {
    const double pre = ec * r.S / kk;
    r.bound_316_first = pre * (1.0 + 2.0 * std::cbrt(r.kappa * th)) / th;
    r.bound_316_second = pre * std::min(6.0, std::exp(3.0 * std::cbrt(r.kappa)));
  }
  if (r.kappa >= 2.0) {
    const double pre = ec / std::sqrt(r.T * kk);
    r.bound_317_first = pre * (1.0 + 0.5 * std::pow(r.kappa * (1.0 - th), -0.25)) / std::sqrt(1.0 - th);
    r.bound_317_second = pre * std::min(3.0 / std::sqrt(2.0), std::exp(std::pow(2.0 / r.kappa, 0.25)));
  }
  return r;
}

// -sum_{1 < k < Delta^{N+1}} (log k / k) B4~(log k / eps)
inline Real eval_R(const EpsilonGeometry& g) {
  const Long top = std::exp(static_cast<Long>(g.N + 1) * static_cast<Long>(g.epsilon));
  const auto kmax = static_cast<std::int64_t>(std::ceil(top)) - 1;
  std::vector<Real> t;
  for (std::int64_t k = 2; k <= kmax; ++k) {
    if (static_cast<Long>(k) >= top) break;
    const double lk = std::log(static_cast<double>(k));
    t.push_back(-lk / static_cast<double>(k) * bernoulli_B4_tilde(lk / g.epsilon));
  }
  return pairwise_sum(t);
}

}  // namespace ms
