#pragma once

// Reciprocal-eigenvalue spectra of the two discretizations.
//   uniform grid:   nu = Lambda / N for each non-zero eigenvalue Lambda of Z(N)
//   geometric grid: nu = eigenvalue of H(N)

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ms/eigen_dense.hpp"
#include "ms/gram.hpp"
#include "ms/hankel.hpp"
#include "ms/lanczos.hpp"

namespace ms {

enum class Solver { dense, lanczos };

inline const char* solver_name(Solver s) { return s == Solver::dense ? "dense" : "lanczos"; }

struct Spectrum {
  std::string model;  // "dagger" or "triangle"
  std::int64_t n = 0;
  std::vector<Real> nu_plus;   // descending
  std::vector<Real> nu_minus;  // ascending, most negative first
  std::vector<std::vector<Real>> vectors_plus;
  std::vector<std::vector<Real>> vectors_minus;
  Solver solver = Solver::dense;
  std::uint64_t seed = 0;
  int iterations = 0;
  bool converged = true;
  std::vector<Real> residuals;  // plus block, then minus block; matrix eigenpair residuals
};

inline constexpr double kZeroThreshold = 1e-10;

struct SpectrumOptions {
  int k = 0;  // per side; 0 keeps everything (dense only)
  Solver solver = Solver::dense;
  std::uint64_t seed = 42;
  bool vectors = false;
  double rel_tol = 1e-12;  // Lanczos residual target relative to the Frobenius norm
  int max_matvecs = 0;
  std::function<void(int, double)> progress;
};

namespace detail {

// Collect non-zero eigenpairs of a matrix from a full dense decomposition.
inline void fill_from_dense(Spectrum& s, const Eigen::MatrixXd& A, double scale, const SpectrumOptions& o) {
  const DenseEigen de = eig_dense_symmetric(A, true);
  const double thr = kZeroThreshold * A.norm();
  const Eigen::Index n = de.values.size();
  auto take = [&](Eigen::Index idx, std::vector<Real>& nu, std::vector<std::vector<Real>>& vecs) {
    nu.push_back(de.values[idx] * scale);
    const Eigen::VectorXd v = de.vectors.col(idx);
    s.residuals.push_back((A * v - de.values[idx] * v).norm());
    if (o.vectors) vecs.emplace_back(v.data(), v.data() + v.size());
  };
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    if (de.values[i] <= thr) break;
    if (o.k > 0 && static_cast<int>(s.nu_plus.size()) >= o.k) break;
    take(i, s.nu_plus, s.vectors_plus);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (de.values[i] >= -thr) break;
    if (o.k > 0 && static_cast<int>(s.nu_minus.size()) >= o.k) break;
    take(i, s.nu_minus, s.vectors_minus);
  }
  s.iterations = 0;
  s.converged = true;
}

template <class Op>
void fill_from_lanczos(Spectrum& s, Op&& op, std::size_t dim, double fro, double scale, const SpectrumOptions& o) {
  if (o.k < 1) throw std::invalid_argument("Lanczos needs k >= 1");
  LanczosOptions lo;
  lo.k = std::min<int>(o.k, static_cast<int>(dim));
  lo.seed = o.seed;
  lo.tol = o.rel_tol * fro;
  lo.max_matvecs = o.max_matvecs;
  lo.progress = o.progress;
  const LanczosResult r = lanczos_extreme(op, dim, lo);
  const double thr = kZeroThreshold * fro;
  for (const auto& p : r.largest) {
    if (p.value <= thr) break;
    s.nu_plus.push_back(p.value * scale);
    s.residuals.push_back(p.residual);
    if (o.vectors) s.vectors_plus.push_back(p.vector);
  }
  for (const auto& p : r.smallest) {
    if (p.value >= -thr) break;
    s.nu_minus.push_back(p.value * scale);
    s.residuals.push_back(p.residual);
    if (o.vectors) s.vectors_minus.push_back(p.vector);
  }
  s.iterations = r.matvecs;
  s.converged = r.converged;
}

}  // namespace detail

inline Spectrum spectrum_of_Z(std::int64_t N, const SpectrumOptions& o = {}) {
  Spectrum s;
  s.model = "dagger";
  s.n = N;
  s.solver = o.solver;
  s.seed = o.seed;
  const Eigen::MatrixXd Z = build_Z(N);
  const double scale = 1.0 / static_cast<double>(N);
  if (o.solver == Solver::dense) {
    detail::fill_from_dense(s, Z, scale, o);
  } else {
    auto op = [&Z](std::span<const double> v, std::span<double> out) {
      Eigen::Map<const Eigen::VectorXd> x(v.data(), static_cast<Eigen::Index>(v.size()));
      Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size())).noalias() = Z * x;
    };
    detail::fill_from_lanczos(s, op, static_cast<std::size_t>(N), Z.norm(), scale, o);
  }
  return s;
}

inline Spectrum spectrum_of_H(const HankelModel& m, const SpectrumOptions& o = {}) {
  Spectrum s;
  s.model = "triangle";
  s.n = m.N();
  s.solver = o.solver;
  s.seed = o.seed;
  if (o.solver == Solver::dense) {
    detail::fill_from_dense(s, hankel_dense(m), 1.0, o);
  } else {
    HankelOperator op(m);
    const double fro = std::sqrt(ktriangle_norm_sq(m));
    detail::fill_from_lanczos(
        s, [&op](std::span<const double> v, std::span<double> out) { op.apply(v, out); },
        static_cast<std::size_t>(m.N()), fro, 1.0, o);
  }
  return s;
}

}  // namespace ms
