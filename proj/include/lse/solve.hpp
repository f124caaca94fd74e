#pragma once

#include "lse/problem.hpp"

namespace lse {

template <class Scalar>
struct LseSolution {
  Vector<Scalar> x;       // minimizer
  Vector<Scalar> r;       // residual b - A x
  Vector<Scalar> lambda;  // constraint multipliers, A^T r + C^T lambda = 0
  GqrFactorization<Scalar> factors;
  Vector<Scalar> acad_r;  // (A CAdag)^T r, reused by the conditioning formulas
  Matrix<Scalar> A, C;    // problem data, kept for the conditioning formulas
  Vector<Scalar> b, d;
};

namespace detail {

// (A CAdag)^T r = S^-T L11^T (c1 - L11 y1), evaluated from the factors alone.
template <class Scalar>
Vector<Scalar> acad_t_r(const GqrFactorization<Scalar>& f, const Vector<Scalar>& b,
                        const Vector<Scalar>& d) {
  Vector<Scalar> y1 = triangular_solve(f.S, d, TriangularShape::Lower);
  Vector<Scalar> c1 = (f.U.transpose() * b).head(f.m() - f.n() + f.p());
  Vector<Scalar> w = c1 - f.L11 * y1;
  return triangular_solve(f.S, Vector<Scalar>(f.L11.transpose() * w),
                          TriangularShape::Lower, true);
}

}  // namespace detail

// Solve through the generalized QR factors: y1 = inv(S) d, then the free part
// y2 = inv(L22) (c2 - L21 y1) with c = U^T b, and x = Q [y1; y2]. The
// multipliers solve the full-column-rank least squares problem
// C^T lambda = -A^T r.
template <class Scalar>
LseSolution<Scalar> solve(const LseProblem<Scalar>& problem) {
  const GqrFactorization<Scalar>& f = problem.gqr();
  const Index q = f.n() - f.p();
  Vector<Scalar> y1 = triangular_solve(f.S, problem.d(), TriangularShape::Lower);
  Vector<Scalar> c = f.U.transpose() * problem.b();
  Vector<Scalar> y(f.n());
  y.head(f.p()) = y1;
  if (q > 0) {
    Vector<Scalar> rhs = c.tail(q) - f.L21 * y1;
    y.tail(q) = triangular_solve(f.L22, rhs, TriangularShape::Lower);
  }
  LseSolution<Scalar> sol;
  sol.x = f.Q * y;
  sol.r = problem.b() - problem.A() * sol.x;
  sol.lambda = Matrix<Scalar>(problem.C().transpose())
                   .colPivHouseholderQr()
                   .solve(Vector<Scalar>(-problem.A().transpose() * sol.r));
  sol.factors = f;
  sol.acad_r = detail::acad_t_r(f, problem.b(), problem.d());
  sol.A = problem.A();
  sol.C = problem.C();
  sol.b = problem.b();
  sol.d = problem.d();
  return sol;
}

// (p+m+n) x (p+m+n) saddle-point matrix whose solve reproduces (lambda, r, x):
//
//   [ 0    0    C  ] [lambda]   [d]
//   [ 0    I_m  A  ] [  r   ] = [b]
//   [ C^T  A^T  0  ] [  x   ]   [0]
template <class Scalar>
Matrix<Scalar> build_augmented(const LseProblem<Scalar>& problem) {
  const Index m = problem.m(), n = problem.n(), p = problem.p();
  Matrix<Scalar> aug = Matrix<Scalar>::Zero(p + m + n, p + m + n);
  aug.block(0, p + m, p, n) = problem.C();
  aug.block(p, p, m, m) = Matrix<Scalar>::Identity(m, m);
  aug.block(p, p + m, m, n) = problem.A();
  aug.block(p + m, 0, n, p) = problem.C().transpose();
  aug.block(p + m, p, n, m) = problem.A().transpose();
  return aug;
}

// Dense reference solve of the augmented system. Slower than solve() but
// independent of the generalized QR solve path.
template <class Scalar>
LseSolution<Scalar> augmented_solve(const LseProblem<Scalar>& problem) {
  const Index m = problem.m(), n = problem.n(), p = problem.p();
  Matrix<Scalar> aug = build_augmented(problem);
  Vector<Scalar> rhs = Vector<Scalar>::Zero(p + m + n);
  rhs.head(p) = problem.d();
  rhs.segment(p, m) = problem.b();
  Eigen::ColPivHouseholderQR<Matrix<Scalar>> qr(aug);
  if (qr.rank() < aug.rows()) {
    throw SingularityError("augmented_solve: augmented matrix is singular "
                           "(rank conditions violated)");
  }
  Vector<Scalar> y = qr.solve(rhs);
  LseSolution<Scalar> sol;
  sol.lambda = y.head(p);
  sol.r = y.segment(p, m);
  sol.x = y.tail(n);
  sol.factors = problem.gqr();
  sol.acad_r = detail::acad_t_r(problem.gqr(), problem.b(), problem.d());
  sol.A = problem.A();
  sol.C = problem.C();
  sol.b = problem.b();
  sol.d = problem.d();
  return sol;
}

}  // namespace lse
