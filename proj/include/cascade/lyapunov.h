#pragma once

#include <complex>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "cascade/errors.h"

namespace cascade {

// Solves A^H X + X A = C by Bartels-Stewart on the complex Schur form of A.
template <class Derived, class DerivedC>
Eigen::Matrix<std::complex<typename Eigen::NumTraits<typename Derived::Scalar>::Real>, Eigen::Dynamic, Eigen::Dynamic>
solve_lyapunov(const Eigen::MatrixBase<Derived>& A, const Eigen::MatrixBase<DerivedC>& C) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  using Cx = std::complex<Real>;
  using Mat = Eigen::Matrix<Cx, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = A.rows();
  Eigen::ComplexSchur<Mat> schur(A.template cast<Cx>().eval());
  if (schur.info() != Eigen::Success) throw NumericError("Schur decomposition failed");
  const Mat& T = schur.matrixT();
  const Mat& U = schur.matrixU();
  Mat Ct = U.adjoint() * C.template cast<Cx>() * U;
  Mat Y = Mat::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      Cx s = Ct(i, j);
      for (Eigen::Index k = 0; k < i; ++k) s -= std::conj(T(k, i)) * Y(k, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= Y(i, k) * T(k, j);
      Cx d = std::conj(T(i, i)) + T(j, j);
      if (std::abs(d) < 1e-300) throw NumericError("Lyapunov operator is singular");
      Y(i, j) = s / d;
    }
  }
  return U * Y * U.adjoint();
}

// Same equation through the Kronecker-vectorised linear system; small sizes only.
template <class Derived, class DerivedC>
Eigen::Matrix<std::complex<typename Eigen::NumTraits<typename Derived::Scalar>::Real>, Eigen::Dynamic, Eigen::Dynamic>
solve_lyapunov_kronecker(const Eigen::MatrixBase<Derived>& A, const Eigen::MatrixBase<DerivedC>& C) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  using Cx = std::complex<Real>;
  using Mat = Eigen::Matrix<Cx, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Cx, Eigen::Dynamic, 1>;
  const Eigen::Index n = A.rows();
  Mat Ac = A.template cast<Cx>();
  Mat K = Mat::Zero(n * n, n * n);
  // vec(A^H X) = (I kron A^H) vec X, vec(X A) = (A^T kron I) vec X
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index k = 0; k < n; ++k) {
        K(j * n + i, j * n + k) += std::conj(Ac(k, i));
        K(j * n + i, k * n + i) += Ac(k, j);
      }
  Mat Cc = C.template cast<Cx>();
  Vec c = Eigen::Map<Vec>(Cc.data(), n * n);
  Vec x = K.partialPivLu().solve(c);
  return Eigen::Map<Mat>(x.data(), n, n);
}

}  // namespace cascade
