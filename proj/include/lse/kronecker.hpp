#pragma once

#include "lse/core.hpp"

namespace lse {

template <class Scalar>
Matrix<Scalar> kron(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  Matrix<Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Column-stacking vectorization.
template <class Scalar>
Vector<Scalar> vec(const Matrix<Scalar>& m) {
  return m.reshaped();
}

template <class Scalar>
Matrix<Scalar> diag_of(const Vector<Scalar>& v) {
  return Matrix<Scalar>(v.asDiagonal());
}

// Permutation P with P * vec(M) = vec(M^T) for M of shape rows x cols.
// vec(M)[j*rows + i] = M(i,j) lands at vec(M^T)[i*cols + j].
template <class Scalar>
Matrix<Scalar> vec_permutation(Index rows, Index cols) {
  Matrix<Scalar> out = Matrix<Scalar>::Zero(rows * cols, rows * cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      out(i * cols + j, j * rows + i) = Scalar(1);
    }
  }
  return out;
}

}  // namespace lse
