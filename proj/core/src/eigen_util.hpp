#pragma once

#include "khier/eigen_real.hpp"
#include "khier/symmat.hpp"

namespace khier::detail {

inline RealMat to_eigen(const SymMatrix<Real>& M) {
  RealMat E(M.n(), M.n());
  for (int i = 0; i < M.n(); ++i)
    for (int j = 0; j < M.n(); ++j) E(i, j) = M(i, j);
  return E;
}

inline RealMat to_eigen(const Matrix<Real>& M) {
  RealMat E(M.rows(), M.cols());
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j) E(i, j) = M(i, j);
  return E;
}

inline SymMatrix<Real> sym_from_eigen(const RealMat& E) {
  SymMatrix<Real> M(int(E.rows()));
  for (int i = 0; i < E.rows(); ++i)
    for (int j = i; j < E.cols(); ++j) M.set(i, j, (E(i, j) + E(j, i)) / 2);
  return M;
}

inline Matrix<Real> from_eigen(const RealMat& E) {
  Matrix<Real> M(int(E.rows()), int(E.cols()));
  for (int i = 0; i < E.rows(); ++i)
    for (int j = 0; j < E.cols(); ++j) M(i, j) = E(i, j);
  return M;
}

inline Real inner(const RealMat& A, const RealMat& B) { return A.cwiseProduct(B).sum(); }
inline Real frobenius(const RealMat& A) { return sqrt(inner(A, A)); }

// Eigenpairs in descending eigenvalue order.
struct EigenDesc {
  RealVec values;
  RealMat vectors;
};

inline EigenDesc eigen_desc(const RealMat& M) {
  Eigen::SelfAdjointEigenSolver<RealMat> es((M + M.transpose()) / 2);
  const Eigen::Index n = M.rows();
  EigenDesc out{RealVec(n), RealMat(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = es.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  return out;
}

}  // namespace khier::detail
