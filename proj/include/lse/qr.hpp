#pragma once

#include <Eigen/QR>

#include "lse/core.hpp"
#include "lse/norms.hpp"

namespace lse {

template <class Scalar>
struct QrFactors {
  Matrix<Scalar> Q;  // rows x rows, orthogonal
  Matrix<Scalar> R;  // rows x cols, upper triangular (diag >= 0)
};

// Full Householder QR of a tall matrix, with the sign convention that the
// diagonal of R is nonnegative wherever it is nonzero. Flipping row j of R
// together with column j of Q leaves the product unchanged.
template <class Scalar>
QrFactors<Scalar> householder_qr(const Matrix<Scalar>& m) {
  if (m.rows() < m.cols()) {
    throw DimensionError("householder_qr: matrix has more columns than rows");
  }
  Eigen::HouseholderQR<Matrix<Scalar>> qr(m);
  QrFactors<Scalar> out;
  out.Q = qr.householderQ() * Matrix<Scalar>::Identity(m.rows(), m.rows());
  out.R = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Index j = 0; j < m.cols(); ++j) {
    if (out.R(j, j) < Scalar(0)) {
      out.R.row(j) = -out.R.row(j);
      out.Q.col(j) = -out.Q.col(j);
    }
  }
  return out;
}

template <class Scalar>
struct RowTriangularization {
  Matrix<Scalar> Q;  // n x n, orthogonal
  Matrix<Scalar> S;  // p x p, lower triangular (diag >= 0), C Q = [S 0]
};

// Orthogonal column transformation compressing a wide full-row-rank candidate
// C (p x n, p <= n) to lower triangular form: C Q = [S 0]. Obtained from the
// Householder QR of C^T.
template <class Scalar>
RowTriangularization<Scalar> right_triangularize_rows(const Matrix<Scalar>& c) {
  if (c.rows() > c.cols()) {
    throw DimensionError("right_triangularize_rows: more rows than columns");
  }
  QrFactors<Scalar> qr = householder_qr<Scalar>(c.transpose());
  RowTriangularization<Scalar> out;
  out.Q = std::move(qr.Q);
  out.S = qr.R.topRows(c.rows()).transpose();
  return out;
}

enum class TriangularShape { Lower, Upper };

// Solves T y = rhs (or T^T y = rhs with transpose set) for triangular T.
// Refuses diagonals that are zero to within max(rows,cols)*eps*||T||_inf.
template <class Scalar>
Vector<Scalar> triangular_solve(const Matrix<Scalar>& t, const Vector<Scalar>& rhs,
                                TriangularShape shape, bool transpose = false) {
  const Index n = t.rows();
  if (t.cols() != n) throw DimensionError("triangular_solve: matrix not square");
  if (rhs.size() != n) throw DimensionError("triangular_solve: rhs size mismatch");
  const Scalar tol = Scalar(n) * eps<Scalar>() * infinity_norm(t);
  for (Index i = 0; i < n; ++i) {
    if (std::abs(t(i, i)) <= tol) {
      throw SingularityError("triangular_solve: diagonal entry " + std::to_string(i) +
                             " is zero to working precision");
    }
  }
  Vector<Scalar> out(n);
  if (shape == TriangularShape::Lower) {
    if (transpose) {
      out = t.transpose().template triangularView<Eigen::Upper>().solve(rhs);
    } else {
      out = t.template triangularView<Eigen::Lower>().solve(rhs);
    }
  } else {
    if (transpose) {
      out = t.transpose().template triangularView<Eigen::Lower>().solve(rhs);
    } else {
      out = t.template triangularView<Eigen::Upper>().solve(rhs);
    }
  }
  return out;
}

}  // namespace lse
