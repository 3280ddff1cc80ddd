#pragma once

// Restarted Lanczos (Krylov-Schur form) with full reorthogonalization for the
// k algebraically largest and k algebraically smallest eigenpairs of a
// symmetric operator given only through matrix-vector products.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "ms/common.hpp"
#include "ms/eigen_dense.hpp"

namespace ms {

struct LanczosOptions {
  int k = 6;
  std::uint64_t seed = 42;
  double tol = 1e-10;        // absolute residual target
  int max_matvecs = 0;       // 0: 10k + 200
  int max_basis = 0;         // 0: chosen from k
  std::function<void(int, double)> progress;  // (matvecs, worst residual)
};

struct EigenPair {
  double value = 0.0;
  std::vector<double> vector;
  double residual = 0.0;
};

struct LanczosResult {
  std::vector<EigenPair> largest;   // descending
  std::vector<EigenPair> smallest;  // ascending
  bool converged = false;
  int matvecs = 0;
  int restarts = 0;
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline void fill_seeded(std::uint64_t& state, Eigen::Ref<Eigen::VectorXd> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v[i] = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-52 - 1.0;
}

template <class Op>
LanczosResult lanczos_extreme(Op&& apply, std::size_t dim, const LanczosOptions& opt) {
  if (opt.k < 1) throw std::invalid_argument("k must be positive");
  if (static_cast<std::size_t>(opt.k) > dim) throw std::invalid_argument("k exceeds the operator dimension");
  const auto n = static_cast<Eigen::Index>(dim);
  const int k = opt.k;
  const int max_mv = opt.max_matvecs > 0 ? opt.max_matvecs : 10 * k + 200;
  Eigen::Index m = opt.max_basis > 0 ? opt.max_basis : 4 * k + 24;
  m = std::min<Eigen::Index>(std::max<Eigen::Index>(m, 2 * k + 4), n);
  const Eigen::Index extra = std::max<Eigen::Index>(1, (m - 2 * k) / 4);
  const Eigen::Index p = std::min<Eigen::Index>(k + extra, m / 2 - 1);  // kept per side at restart

  Eigen::MatrixXd Q(n, m + 1);
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
  std::uint64_t state = opt.seed;
  {
    Eigen::VectorXd v(n);
    fill_seeded(state, v);
    Q.col(0) = v / v.norm();
  }
  std::vector<double> in(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
  auto matvec = [&](const Eigen::Ref<const Eigen::VectorXd>& x, Eigen::Ref<Eigen::VectorXd> y) {
    std::copy(x.data(), x.data() + n, in.begin());
    apply(std::span<const double>(in), std::span<double>(out));
    std::copy(out.begin(), out.end(), y.data());
  };

  LanczosResult res;
  Eigen::Index cur = 0;  // columns of Q already in the basis
  double beta = 0.0;
  Eigen::VectorXd w(n);
  Eigen::VectorXd theta;
  Eigen::MatrixXd Y;
  while (true) {
    for (Eigen::Index j = cur; j < m; ++j) {
      matvec(Q.col(j), w);
      ++res.matvecs;
      Eigen::VectorXd h = Q.leftCols(j + 1).transpose() * w;
      w.noalias() -= Q.leftCols(j + 1) * h;
      const Eigen::VectorXd h2 = Q.leftCols(j + 1).transpose() * w;
      w.noalias() -= Q.leftCols(j + 1) * h2;
      h += h2;
      T.block(0, j, j + 1, 1) = h;
      T.block(j, 0, 1, j + 1) = h.transpose();
      beta = w.norm();
      if (j + 1 >= n) break;
      const double tnorm = std::max(1e-300, T.topLeftCorner(j + 1, j + 1).cwiseAbs().maxCoeff());
      if (beta <= 1e-14 * tnorm) {
        // invariant subspace: continue with a fresh direction
        Eigen::VectorXd r(n);
        fill_seeded(state, r);
        for (int pass = 0; pass < 2; ++pass) r -= Q.leftCols(j + 1) * (Q.leftCols(j + 1).transpose() * r);
        Q.col(j + 1) = r / r.norm();
        beta = 0.0;
      } else {
        Q.col(j + 1) = w / beta;
      }
    }
    const Eigen::Index used = std::min<Eigen::Index>(m, n);
    Eigen::MatrixXd Ts = 0.5 * (T.topLeftCorner(used, used) + T.topLeftCorner(used, used).transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Ts);
    theta = es.eigenvalues();
    Y = es.eigenvectors();
    const Eigen::Index want = std::min<Eigen::Index>(k, used);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < want; ++i) {
      worst = std::max(worst, std::fabs(beta * Y(used - 1, i)));
      worst = std::max(worst, std::fabs(beta * Y(used - 1, used - 1 - i)));
    }
    if (opt.progress) opt.progress(res.matvecs, worst);
    if (worst <= opt.tol || used == n) {
      res.converged = true;
      break;
    }
    if (res.matvecs >= max_mv) break;
    // restart on the p smallest and p largest Ritz vectors
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < p; ++i) keep.push_back(i);
    for (Eigen::Index i = used - p; i < used; ++i) keep.push_back(i);
    const auto nk = static_cast<Eigen::Index>(keep.size());
    Eigen::MatrixXd Yk(used, nk);
    for (Eigen::Index c = 0; c < nk; ++c) Yk.col(c) = Y.col(keep[c]);
    Eigen::MatrixXd Qk = Q.leftCols(used) * Yk;
    Q.col(nk) = Q.col(used);
    Q.leftCols(nk) = Qk;
    T.setZero();
    for (Eigen::Index c = 0; c < nk; ++c) T(c, c) = theta[keep[c]];
    cur = nk;
    ++res.restarts;
  }

  const Eigen::Index used = theta.size();
  const Eigen::Index want = std::min<Eigen::Index>(k, used);
  auto make_pair = [&](Eigen::Index idx) {
    EigenPair ep;
    ep.value = theta[idx];
    Eigen::VectorXd v = Q.leftCols(used) * Y.col(idx);
    v /= v.norm();
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v[arg] < 0.0) v = -v;
    Eigen::VectorXd Av(n);
    matvec(v, Av);
    ep.residual = (Av - ep.value * v).norm();
    ep.vector.assign(v.data(), v.data() + n);
    return ep;
  };
  for (Eigen::Index i = 0; i < want; ++i) res.largest.push_back(make_pair(used - 1 - i));
  for (Eigen::Index i = 0; i < want; ++i) res.smallest.push_back(make_pair(i));
  return res;
}

}  // namespace ms
