#pragma once

#include <Eigen/SVD>

#include "lse/core.hpp"

namespace lse {

// Moore-Penrose pseudoinverse via SVD. Singular values at or below
// max(rows,cols)*eps*sigma_max are treated as zero; a caller-supplied
// nonnegative tolerance overrides that default.
template <class Scalar>
Matrix<Scalar> pseudo_inverse(const Matrix<Scalar>& m, Scalar tol = Scalar(-1)) {
  if (m.rows() == 0 || m.cols() == 0) {
    return Matrix<Scalar>::Zero(m.cols(), m.rows());
  }
  Eigen::JacobiSVD<Matrix<Scalar>> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Vector<Scalar> sigma = svd.singularValues();
  if (tol < Scalar(0)) {
    tol = Scalar(std::max(m.rows(), m.cols())) * eps<Scalar>() * sigma(0);
  }
  Vector<Scalar> inv = Vector<Scalar>::Zero(sigma.size());
  for (Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > tol) inv(i) = Scalar(1) / sigma(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

}  // namespace lse
