#pragma once

#include "lse/core.hpp"
#include "lse/norms.hpp"
#include "lse/qr.hpp"

namespace lse {

// Generalized QR factorization of the pair (A, C) with A m x n, C p x n,
// m + p >= n >= p:
//
//   U^T A Q = [ L11   0  ]   (m-n+p) rows      C Q = [ S  0 ]
//             [ L21  L22 ]   (n-p)   rows
//
// U (m x m) and Q (n x n) orthogonal, S (p x p) and L22 ((n-p) x (n-p)) lower
// triangular and nonsingular exactly when rank(C) = p and rank([A; C]) = n.
//
// With P = I - pinv(C) C the factors encode, without ever forming them,
//
//   K       = pinv(A P)   = Q [0 0; 0 inv(L22)] U^T
//   CAdag   = (I - K A) pinv(C) = Q [I; -inv(L22) L21] inv(S)
//   K K^T   = Q [0 0; 0 inv(L22) inv(L22)^T] Q^T
//
// which the apply_* members evaluate by triangular solves.
template <class Scalar>
struct GqrFactorization {
  Matrix<Scalar> U;    // m x m
  Matrix<Scalar> Q;    // n x n
  Matrix<Scalar> L11;  // (m-n+p) x p
  Matrix<Scalar> L21;  // (n-p) x p
  Matrix<Scalar> L22;  // (n-p) x (n-p), lower triangular
  Matrix<Scalar> S;    // p x p, lower triangular

  Index m() const { return U.rows(); }
  Index n() const { return Q.rows(); }
  Index p() const { return S.rows(); }

  // K v for v in R^m.
  Vector<Scalar> apply_K(const Vector<Scalar>& v) const {
    if (v.size() != m()) throw DimensionError("apply_K: size mismatch");
    const Index q = n() - p();
    Vector<Scalar> t = U.transpose() * v;
    Vector<Scalar> y = Vector<Scalar>::Zero(n());
    if (q > 0) {
      y.tail(q) = triangular_solve(L22, Vector<Scalar>(t.tail(q)), TriangularShape::Lower);
    }
    return Q * y;
  }

  // K^T v for v in R^n.
  Vector<Scalar> apply_Kt(const Vector<Scalar>& v) const {
    if (v.size() != n()) throw DimensionError("apply_Kt: size mismatch");
    const Index q = n() - p();
    Vector<Scalar> t = Q.transpose() * v;
    Vector<Scalar> y = Vector<Scalar>::Zero(m());
    if (q > 0) {
      y.tail(q) =
          triangular_solve(L22, Vector<Scalar>(t.tail(q)), TriangularShape::Lower, true);
    }
    return U * y;
  }

  // K K^T v for v in R^n.
  Vector<Scalar> apply_KKt(const Vector<Scalar>& v) const {
    if (v.size() != n()) throw DimensionError("apply_KKt: size mismatch");
    const Index q = n() - p();
    Vector<Scalar> t = Q.transpose() * v;
    Vector<Scalar> y = Vector<Scalar>::Zero(n());
    if (q > 0) {
      Vector<Scalar> z =
          triangular_solve(L22, Vector<Scalar>(t.tail(q)), TriangularShape::Lower, true);
      y.tail(q) = triangular_solve(L22, z, TriangularShape::Lower);
    }
    return Q * y;
  }

  // CAdag v for v in R^p.
  Vector<Scalar> apply_CAdag(const Vector<Scalar>& v) const {
    if (v.size() != p()) throw DimensionError("apply_CAdag: size mismatch");
    const Index q = n() - p();
    Vector<Scalar> w = triangular_solve(S, v, TriangularShape::Lower);
    Vector<Scalar> y(n());
    y.head(p()) = w;
    if (q > 0) {
      y.tail(q) = -triangular_solve(L22, Vector<Scalar>(L21 * w), TriangularShape::Lower);
    }
    return Q * y;
  }

  // CAdag^T v for v in R^n.
  Vector<Scalar> apply_CAdag_t(const Vector<Scalar>& v) const {
    if (v.size() != n()) throw DimensionError("apply_CAdag_t: size mismatch");
    const Index q = n() - p();
    Vector<Scalar> t = Q.transpose() * v;
    Vector<Scalar> g = t.head(p());
    if (q > 0) {
      Vector<Scalar> z =
          triangular_solve(L22, Vector<Scalar>(t.tail(q)), TriangularShape::Lower, true);
      g -= L21.transpose() * z;
    }
    return triangular_solve(S, g, TriangularShape::Lower, true);
  }

  // Dense n x m matrix of K, assembled from the factor blocks.
  Matrix<Scalar> dense_K() const {
    const Index q = n() - p();
    if (q == 0) return Matrix<Scalar>::Zero(n(), m());
    Matrix<Scalar> tmp = L22.template triangularView<Eigen::Lower>().solve(
        Matrix<Scalar>(U.rightCols(q).transpose()));
    return Q.rightCols(q) * tmp;
  }

  // Dense n x p matrix of CAdag.
  Matrix<Scalar> dense_CAdag() const {
    const Index q = n() - p();
    Matrix<Scalar> w(n(), p());
    w.topRows(p()) = Matrix<Scalar>::Identity(p(), p());
    if (q > 0) {
      w.bottomRows(q) = -L22.template triangularView<Eigen::Lower>().solve(L21);
    }
    Matrix<Scalar> z = S.template triangularView<Eigen::Lower>().transpose().solve(
        Matrix<Scalar>(w.transpose()));
    return Q * z.transpose();
  }

  // Dense n x n matrix of K K^T.
  Matrix<Scalar> dense_KKt() const {
    const Index q = n() - p();
    if (q == 0) return Matrix<Scalar>::Zero(n(), n());
    Matrix<Scalar> m22 = L22.template triangularView<Eigen::Lower>().transpose().solve(
        Matrix<Scalar>(Q.rightCols(q).transpose()));
    return m22.transpose() * m22;
  }
};

// Factorizes the pair (A, C). Throws RankError naming the violated rank
// condition when a triangular diagonal entry vanishes to working precision,
// DimensionError when the shapes are inadmissible.
template <class Scalar>
GqrFactorization<Scalar> gqr_factorize(const Matrix<Scalar>& a, const Matrix<Scalar>& c) {
  const Index m = a.rows(), n = a.cols(), p = c.rows();
  if (c.cols() != n) throw DimensionError("gqr_factorize: A and C column counts differ");
  if (n < p) throw DimensionError("gqr_factorize: n >= p required");
  if (m + p < n) throw DimensionError("gqr_factorize: m + p >= n required");

  GqrFactorization<Scalar> f;
  RowTriangularization<Scalar> rt = right_triangularize_rows(c);
  f.Q = std::move(rt.Q);
  f.S = std::move(rt.S);
  const Scalar tol_s = Scalar(std::max(p, n)) * eps<Scalar>() * infinity_norm(f.S);
  for (Index i = 0; i < p; ++i) {
    if (std::abs(f.S(i, i)) <= tol_s) {
      throw RankError("gqr_factorize: rank(C) = p fails, constraint rows are "
                      "linearly dependent (|S(" +
                      std::to_string(i) + "," + std::to_string(i) + ")| below tolerance)");
    }
  }

  const Index q = n - p;
  Matrix<Scalar> b = a * f.Q;
  if (q == 0) {
    f.U = Matrix<Scalar>::Identity(m, m);
    f.L22.resize(0, 0);
    f.L21.resize(0, p);
    f.L11 = b;
  } else {
    // Reversing rows and columns turns the wanted [0; L22] shape into an
    // ordinary tall QR problem.
    Matrix<Scalar> flipped = b.rightCols(q).reverse();
    QrFactors<Scalar> qr = householder_qr(flipped);
    f.U = qr.Q.reverse();
    f.L22 = qr.R.topRows(q).reverse();
    Matrix<Scalar> left = f.U.transpose() * b.leftCols(p);
    f.L11 = left.topRows(m - q);
    f.L21 = left.bottomRows(q);
  }
  const Scalar tol_l = Scalar(std::max(m, n)) * eps<Scalar>() * frobenius_norm(a);
  for (Index i = 0; i < q; ++i) {
    if (std::abs(f.L22(i, i)) <= tol_l) {
      throw RankError("gqr_factorize: rank([A; C]) = n fails, stacked matrix is "
                      "column rank deficient (|L22(" +
                      std::to_string(i) + "," + std::to_string(i) + ")| below tolerance)");
    }
  }
  return f;
}

}  // namespace lse
