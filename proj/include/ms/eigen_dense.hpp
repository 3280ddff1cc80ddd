#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "ms/common.hpp"

namespace ms {

inline constexpr Eigen::Index kDenseCap = 4096;

struct DenseEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // column j belongs to values[j]
};

// Fix the sign of each column so the entry of largest magnitude is positive.
inline void canonicalize_signs(Eigen::MatrixXd& V) {
  for (Eigen::Index j = 0; j < V.cols(); ++j) {
    Eigen::Index arg = 0;
    V.col(j).cwiseAbs().maxCoeff(&arg);
    if (V(arg, j) < 0.0) V.col(j) *= -1.0;
  }
}

// Householder tridiagonalization followed by implicit-shift QR.
inline DenseEigen eig_dense_symmetric(const Eigen::MatrixXd& A, bool want_vectors = true,
                                      Eigen::Index cap = kDenseCap) {
  if (A.rows() != A.cols()) throw std::invalid_argument("matrix is not square");
  if (A.rows() > cap) throw std::length_error("dense eigensolver size cap exceeded");
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-14 * scale) throw std::invalid_argument("matrix is not symmetric");
  DenseEigen out;
  if (A.rows() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("dense eigensolver did not converge");
  out.values = es.eigenvalues();
  if (want_vectors) {
    out.vectors = es.eigenvectors();
    canonicalize_signs(out.vectors);
  }
  return out;
}

}  // namespace ms
