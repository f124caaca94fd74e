#pragma once

#include <utility>

#include "lse/core.hpp"
#include "lse/gqr.hpp"

namespace lse {

// Equality-constrained least squares data: min ||A x - b||_2 over C x = d,
// with A m x n, C p x n, m + p >= n >= p. Construction validates shapes and
// finiteness and verifies both rank conditions (rank(C) = p, rank([A; C]) = n)
// through the generalized QR factors, which are kept for later solves.
template <class Scalar>
class LseProblem {
 public:
  LseProblem(Matrix<Scalar> a, Matrix<Scalar> c, Vector<Scalar> b, Vector<Scalar> d)
      : a_(std::move(a)), c_(std::move(c)), b_(std::move(b)), d_(std::move(d)) {
    if (c_.cols() != a_.cols()) {
      throw DimensionError("LseProblem: A and C column counts differ");
    }
    if (b_.size() != a_.rows()) throw DimensionError("LseProblem: b size != rows of A");
    if (d_.size() != c_.rows()) throw DimensionError("LseProblem: d size != rows of C");
    if (a_.cols() < c_.rows()) throw DimensionError("LseProblem: n >= p required");
    if (a_.rows() + c_.rows() < a_.cols()) {
      throw DimensionError("LseProblem: m + p >= n required");
    }
    require_finite(a_, "A");
    require_finite(c_, "C");
    require_finite(b_, "b");
    require_finite(d_, "d");
    gqr_ = gqr_factorize(a_, c_);
  }

  Index m() const { return a_.rows(); }
  Index n() const { return a_.cols(); }
  Index p() const { return c_.rows(); }

  const Matrix<Scalar>& A() const { return a_; }
  const Matrix<Scalar>& C() const { return c_; }
  const Vector<Scalar>& b() const { return b_; }
  const Vector<Scalar>& d() const { return d_; }

  const GqrFactorization<Scalar>& gqr() const { return gqr_; }

 private:
  Matrix<Scalar> a_, c_;
  Vector<Scalar> b_, d_;
  GqrFactorization<Scalar> gqr_;
};

template <class Scalar>
const GqrFactorization<Scalar>& gqr_factorize(const LseProblem<Scalar>& problem) {
  return problem.gqr();
}

}  // namespace lse
