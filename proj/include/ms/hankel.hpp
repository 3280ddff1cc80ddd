#pragma once

// Piecewise-constant approximation of K on the geometric grid and the Hankel
// matrix H(N) whose non-zero eigenvalues are its reciprocal eigenvalues.
//
// Rectangle R_{i,j} = (x_{i+1}, x_i) x (x_{j+1}, x_j).  On R_{i,j} with
// i + j <= N + 1 the approximation equals the mean mu_tilde_{i+j-1}; for
// i + j > N + 1 it is 0.  h_ij = sqrt(area_ij) * mean_ij = eta_{i+j-1}.

#include <fftw3.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <mutex>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "ms/common.hpp"
#include "ms/geometry.hpp"

namespace ms {

struct HankelModel {
  EpsilonGeometry geom;
  std::vector<std::int64_t> k;   // k_n, index n-1
  std::vector<Real> sigma;       // sigma_n in (-1, 1]
  std::vector<Real> mu_tilde;    // exact rectangle means
  std::vector<Real> mu_dprime;   // simple approximation of the means
  std::vector<Real> eta;         // length 2N-1, zero past index N-1

  std::int64_t N() const { return geom.N; }
};

inline Real chi(Real a) { return (2.0 - std::fabs(a)) * a; }
inline Real psi(Real a) {
  const Real b = std::fabs(a);
  return -2.0 / 3.0 * b * b * b + a * a - 1.0 / 3.0;
}

namespace detail {

inline std::int64_t floor_exp_plus_one(long double t) {
  // floor(e^t) + 1 with a 4-ulp snap to integers
  const long double v = std::exp(t);
  const long double r = std::nearbyint(v);
  const long double tol = 4.0L * std::numeric_limits<long double>::epsilon() * std::max(1.0L, v);
  if (std::fabs(v - r) <= tol) return static_cast<std::int64_t>(r) + 1;
  return static_cast<std::int64_t>(std::floor(v)) + 1;
}

struct RowQuantities {
  std::int64_t k;
  long double s;      // eps * sigma
  long double sigma;
  long double mu_tilde;
  long double mu_dprime;
};

inline RowQuantities row_quantities(const EpsilonGeometry& g, std::int64_t n) {
  const long double e = g.epsilon;
  const long double ne = static_cast<long double>(n) * e;
  RowQuantities r{};
  r.k = floor_exp_plus_one(static_cast<long double>(n - 1) * e);
  const long double lk = std::log(static_cast<long double>(r.k));
  r.s = std::min(e, lk - ne);
  r.sigma = (r.s == e) ? 1.0L : r.s / e;
  const long double sh = std::sinh(e / 2);
  const long double denom = 4.0L * sh * sh;  // 2(cosh eps - 1)
  const long double em = std::exp(-r.s);
  const long double bracket = e * e * std::exp(ne) + std::sinh(e) -
                              (std::fabs(std::expm1(-r.s)) + e * em * (1.0L - std::fabs(r.sigma)));
  r.mu_tilde = static_cast<long double>(r.k) - bracket / denom;
  const long double top = std::exp(ne + r.s);
  r.mu_dprime = static_cast<long double>(r.k) + (r.s - 1.0L) * top -
                0.5L * (2.0L - std::fabs(r.sigma)) * r.sigma;
  return r;
}

}  // namespace detail

inline HankelModel hankel_coefficients(const EpsilonGeometry& g) {
  require(g.N >= 3 && g.epsilon > 0.0, "invalid geometry");
  const std::int64_t N = g.N;
  HankelModel m;
  m.geom = g;
  m.k.resize(N);
  m.sigma.resize(N);
  m.mu_tilde.resize(N);
  m.mu_dprime.resize(N);
  m.eta.assign(2 * N - 1, 0.0);
  const long double e = g.epsilon;
  const long double omd = -std::expm1(-e);
  parallel_for(static_cast<std::size_t>(N), [&](std::size_t idx) {
    const std::int64_t n = static_cast<std::int64_t>(idx) + 1;
    const auto r = detail::row_quantities(g, n);
    m.k[idx] = r.k;
    m.sigma[idx] = static_cast<Real>(r.sigma);
    m.mu_tilde[idx] = static_cast<Real>(r.mu_tilde);
    m.mu_dprime[idx] = static_cast<Real>(r.mu_dprime);
    m.eta[idx] = static_cast<Real>(std::exp(-0.5L * static_cast<long double>(n - 1) * e) * omd * r.mu_tilde);
  });
  return m;
}

// Squared L2 norm of the piecewise-constant kernel: sum_n n * eta_n^2.
inline Real ktriangle_norm_sq(const HankelModel& m) {
  std::vector<Real> t(static_cast<std::size_t>(m.N()));
  for (std::int64_t n = 1; n <= m.N(); ++n) t[n - 1] = static_cast<Real>(n) * m.eta[n - 1] * m.eta[n - 1];
  return pairwise_sum(t);
}

// Row index i with x in (x_{i+1}, x_i); 0 when x sits on a grid line.
inline std::int64_t locate_cell(const EpsilonGeometry& g, Real x) {
  if (x <= 0.0 || x >= 1.0) return 0;
  const Real xN1 = grid_point(g, g.N + 1);
  if (x < xN1) return g.N + 1;
  if (x == xN1) return 0;
  auto i = static_cast<std::int64_t>(std::floor(-std::log(x) / g.epsilon)) + 1;
  i = std::clamp<std::int64_t>(i, 1, g.N);
  // repair the estimate against the exact grid points
  while (i > 1 && x >= grid_point(g, i)) --i;
  while (i < g.N && x <= grid_point(g, i + 1)) ++i;
  if (x == grid_point(g, i) || x == grid_point(g, i + 1)) return 0;
  return i;
}

inline Real eval_K_triangle(const HankelModel& m, Real x, Real y) {
  if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0)) throw std::domain_error("kernel argument outside [0,1]^2");
  const std::int64_t i = locate_cell(m.geom, x);
  const std::int64_t j = locate_cell(m.geom, y);
  if (i == 0 || j == 0) return 0.0;
  if (i + j > m.N() + 1) return 0.0;
  return m.mu_tilde[i + j - 2];
}

inline Eigen::MatrixXd hankel_dense(const HankelModel& m) {
  const auto N = static_cast<Eigen::Index>(m.N());
  Eigen::MatrixXd H(N, N);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = 0; j < N; ++j) H(i, j) = m.eta[i + j];
  return H;
}

// O(N^2) reference product.
inline std::vector<Real> hankel_matvec_direct(const HankelModel& m, std::span<const Real> v) {
  const auto N = static_cast<std::size_t>(m.N());
  if (v.size() != N) throw std::invalid_argument("vector length mismatch");
  std::vector<Real> out(N, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    Real s = 0.0;
    for (std::size_t j = 0; j + i < N; ++j) s += m.eta[i + j] * v[j];
    out[i] = s;
  }
  return out;
}

namespace detail {
inline std::mutex& fftw_planner_mutex() {
  static std::mutex mu;
  return mu;
}
}  // namespace detail

// FFT-based Hankel product: reverse v, linearly convolve with eta through a
// zero-padded real transform, read the product off the middle block.
class HankelOperator {
 public:
  explicit HankelOperator(const HankelModel& m) : n_(static_cast<std::size_t>(m.N())) {
    L_ = 1;
    while (L_ < 2 * n_ - 1) L_ <<= 1;
    const std::size_t nc = L_ / 2 + 1;
    real_ = fftw_alloc_real(L_);
    spec_ = fftw_alloc_complex(nc);
    kernel_ = fftw_alloc_complex(nc);
    if (!real_ || !spec_ || !kernel_) {
      release();
      throw std::bad_alloc();
    }
    {
      std::lock_guard<std::mutex> lk(detail::fftw_planner_mutex());
      fwd_ = fftw_plan_dft_r2c_1d(static_cast<int>(L_), real_, spec_, FFTW_ESTIMATE);
      inv_ = fftw_plan_dft_c2r_1d(static_cast<int>(L_), spec_, real_, FFTW_ESTIMATE);
    }
    std::fill(real_, real_ + L_, 0.0);
    std::copy(m.eta.begin(), m.eta.end(), real_);
    fftw_execute(fwd_);
    std::memcpy(kernel_, spec_, nc * sizeof(fftw_complex));
  }
  HankelOperator(const HankelOperator&) = delete;
  HankelOperator& operator=(const HankelOperator&) = delete;
  ~HankelOperator() { release(); }

  std::size_t size() const { return n_; }

  void apply(std::span<const Real> v, std::span<Real> out) const {
    if (v.size() != n_ || out.size() != n_) throw std::invalid_argument("vector length mismatch");
    std::lock_guard<std::mutex> lk(mu_);
    std::fill(real_, real_ + L_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) real_[n_ - 1 - j] = v[j];
    fftw_execute(fwd_);
    const std::size_t nc = L_ / 2 + 1;
    for (std::size_t t = 0; t < nc; ++t) {
      const double a = spec_[t][0], b = spec_[t][1];
      const double c = kernel_[t][0], d = kernel_[t][1];
      spec_[t][0] = a * c - b * d;
      spec_[t][1] = a * d + b * c;
    }
    fftw_execute(inv_);
    const double scale = 1.0 / static_cast<double>(L_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = real_[i + n_ - 1] * scale;
  }

  std::vector<Real> operator()(std::span<const Real> v) const {
    std::vector<Real> out(n_);
    apply(v, out);
    return out;
  }

 private:
  void release() {
    std::lock_guard<std::mutex> lk(detail::fftw_planner_mutex());
    if (fwd_) fftw_destroy_plan(fwd_);
    if (inv_) fftw_destroy_plan(inv_);
    if (real_) fftw_free(real_);
    if (spec_) fftw_free(spec_);
    if (kernel_) fftw_free(kernel_);
    fwd_ = inv_ = nullptr;
    real_ = nullptr;
    spec_ = kernel_ = nullptr;
  }

  std::size_t n_;
  std::size_t L_ = 0;
  double* real_ = nullptr;
  fftw_complex* spec_ = nullptr;
  fftw_complex* kernel_ = nullptr;
  fftw_plan fwd_ = nullptr;
  fftw_plan inv_ = nullptr;
  mutable std::mutex mu_;
};

inline std::vector<Real> hankel_matvec(const HankelModel& m, std::span<const Real> v) {
  if (v.size() != static_cast<std::size_t>(m.N())) throw std::invalid_argument("vector length mismatch");
  HankelOperator op(m);
  return op(v);
}

}  // namespace ms
