#pragma once

#include <Eigen/SVD>

#include "lse/core.hpp"

namespace lse {

// Max absolute column sum. The summation order is fixed (down each column) so
// that one_norm(M) == infinity_norm(M.transpose()) holds exactly, not just up
// to rounding. A column vector is the m x 1 case, giving sum_i |v_i|.
template <class Derived>
typename Derived::Scalar one_norm(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  Scalar best = 0;
  for (Index j = 0; j < m.cols(); ++j) {
    Scalar s = 0;
    for (Index i = 0; i < m.rows(); ++i) s += std::abs(m(i, j));
    if (s > best) best = s;
  }
  return best;
}

// Max absolute row sum, summed left to right across each row. For a column
// vector this is max_i |v_i|.
template <class Derived>
typename Derived::Scalar infinity_norm(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  Scalar best = 0;
  for (Index i = 0; i < m.rows(); ++i) {
    Scalar s = 0;
    for (Index j = 0; j < m.cols(); ++j) s += std::abs(m(i, j));
    if (s > best) best = s;
  }
  return best;
}

template <class Derived>
typename Derived::Scalar frobenius_norm(const Eigen::MatrixBase<Derived>& m) {
  return m.norm();
}

// Largest singular value.
template <class Scalar>
Scalar spectral_norm(const Matrix<Scalar>& m) {
  if (m.rows() == 0 || m.cols() == 0) return Scalar(0);
  Eigen::JacobiSVD<Matrix<Scalar>> svd(m);
  return svd.singularValues()(0);
}

// sigma_max / sigma_min; +infinity when the smallest singular value is zero.
template <class Scalar>
Scalar condition_number_2(const Matrix<Scalar>& m) {
  if (m.rows() == 0 || m.cols() == 0) {
    throw DimensionError("condition_number_2: empty matrix");
  }
  Eigen::JacobiSVD<Matrix<Scalar>> svd(m);
  const auto& sigma = svd.singularValues();
  Scalar smin = sigma(sigma.size() - 1);
  if (smin == Scalar(0)) return std::numeric_limits<Scalar>::infinity();
  return sigma(0) / smin;
}

}  // namespace lse
