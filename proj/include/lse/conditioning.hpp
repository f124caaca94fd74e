#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "lse/kronecker.hpp"
#include "lse/norms.hpp"
#include "lse/pseudo_inverse.hpp"
#include "lse/solve.hpp"

namespace lse {

// k x n map L picking out the solution functional L x whose conditioning is
// studied. Any dense matrix is accepted; factories cover the common cases of
// the identity and 0/1 row selections.
template <class Scalar>
class SelectionMatrix {
 public:
  explicit SelectionMatrix(Matrix<Scalar> l) : l_(std::move(l)) {
    if (l_.rows() < 1) throw DimensionError("SelectionMatrix: needs at least one row");
    require_finite(l_, "L");
  }

  static SelectionMatrix identity(Index n) {
    return SelectionMatrix(Matrix<Scalar>::Identity(n, n));
  }

  // 0-based row indices into I_n.
  static SelectionMatrix from_rows(Index n, const std::vector<Index>& rows) {
    if (rows.empty()) throw DimensionError("SelectionMatrix: empty row list");
    Matrix<Scalar> l = Matrix<Scalar>::Zero(static_cast<Index>(rows.size()), n);
    for (Index i = 0; i < static_cast<Index>(rows.size()); ++i) {
      if (rows[i] < 0 || rows[i] >= n) {
        throw DimensionError("SelectionMatrix: row index out of range");
      }
      l(i, rows[i]) = Scalar(1);
    }
    return SelectionMatrix(std::move(l));
  }

  Index k() const { return l_.rows(); }
  Index n() const { return l_.cols(); }
  const Matrix<Scalar>& matrix() const { return l_; }

 private:
  Matrix<Scalar> l_;
};

template <class Scalar>
struct PerturbationDirection {
  Matrix<Scalar> dA;  // m x n
  Matrix<Scalar> dC;  // p x n
  Vector<Scalar> db;  // m
  Vector<Scalar> dd;  // p
};

namespace detail {

template <class Scalar>
void check_selection(const LseSolution<Scalar>& sol, const SelectionMatrix<Scalar>& l) {
  if (l.n() != sol.factors.n()) {
    throw DimensionError("selection matrix has wrong column count");
  }
}

template <class Scalar>
void check_direction(const LseSolution<Scalar>& sol,
                     const PerturbationDirection<Scalar>& dir) {
  const Index m = sol.factors.m(), n = sol.factors.n(), p = sol.factors.p();
  if (dir.dA.rows() != m || dir.dA.cols() != n || dir.dC.rows() != p ||
      dir.dC.cols() != n || dir.db.size() != m || dir.dd.size() != p) {
    throw DimensionError("perturbation direction has wrong shape");
  }
}

}  // namespace detail

// Directional (Frechet) derivative of delta -> L x(A, C, b, d) at the solved
// problem:
//
//   L [ -K dA x + K K^T dA^T r - CAdag dC x - K K^T dC^T (A CAdag)^T r
//       + K db + CAdag dd ]
//
// evaluated with the implicit factor operators; no Kronecker matrix is formed.
template <class Scalar>
Vector<Scalar> frechet_apply(const LseSolution<Scalar>& sol,
                             const SelectionMatrix<Scalar>& l,
                             const PerturbationDirection<Scalar>& dir) {
  detail::check_selection(sol, l);
  detail::check_direction(sol, dir);
  const GqrFactorization<Scalar>& f = sol.factors;
  Vector<Scalar> t = -f.apply_K(Vector<Scalar>(dir.dA * sol.x));
  t += f.apply_KKt(Vector<Scalar>(dir.dA.transpose() * sol.r));
  t -= f.apply_CAdag(Vector<Scalar>(dir.dC * sol.x));
  t -= f.apply_KKt(Vector<Scalar>(dir.dC.transpose() * sol.acad_r));
  t += f.apply_K(dir.db);
  t += f.apply_CAdag(dir.dd);
  return l.matrix() * t;
}

// Adjoint of frechet_apply under the trace inner product: for every direction
// and every u in R^k, <u, frechet_apply(dir)> equals the sum of the slot-wise
// inner products <adjoint_apply(u), dir>.
template <class Scalar>
PerturbationDirection<Scalar> adjoint_apply(const LseSolution<Scalar>& sol,
                                            const SelectionMatrix<Scalar>& l,
                                            const Vector<Scalar>& u) {
  detail::check_selection(sol, l);
  if (u.size() != l.k()) throw DimensionError("adjoint_apply: u size != k");
  const GqrFactorization<Scalar>& f = sol.factors;
  Vector<Scalar> lt_u = l.matrix().transpose() * u;
  Vector<Scalar> g = f.apply_KKt(lt_u);     // K K^T L^T u
  Vector<Scalar> h = f.apply_Kt(lt_u);      // K^T L^T u
  Vector<Scalar> e = f.apply_CAdag_t(lt_u); // CAdag^T L^T u
  PerturbationDirection<Scalar> out;
  out.dA = sol.r * g.transpose() - h * sol.x.transpose();
  out.dC = -(e * sol.x.transpose() + sol.acad_r * g.transpose());
  out.db = h;
  out.dd = e;
  return out;
}

template <class Scalar>
struct DerivativeMatrices {
  Matrix<Scalar> H;      // n x mn, action dA -> K K^T dA^T r - K dA x
  Matrix<Scalar> J;      // n x np, action dC -> CAdag dC x + K K^T dC^T (A CAdag)^T r
  Matrix<Scalar> K;      // n x m
  Matrix<Scalar> CAdag;  // n x p
};

// Dense derivative blocks H = (K K^T) (x) r^T - x^T (x) K and
// J = x^T (x) CAdag + (K K^T) (x) [(A CAdag)^T r]^T, for oracle-grade
// cross-checks at desk scale only.
template <class Scalar>
DerivativeMatrices<Scalar> build_HJ(const LseSolution<Scalar>& sol) {
  if (sol.factors.m() * sol.factors.n() > Index(1000000)) {
    throw std::length_error("build_HJ: m*n too large for dense Kronecker blocks");
  }
  DerivativeMatrices<Scalar> out;
  out.K = sol.factors.dense_K();
  out.CAdag = sol.factors.dense_CAdag();
  Matrix<Scalar> g = sol.factors.dense_KKt();
  Matrix<Scalar> rt = sol.r.transpose();
  Matrix<Scalar> xt = sol.x.transpose();
  Matrix<Scalar> wt = sol.acad_r.transpose();
  out.H = kron(g, rt) - kron(xt, out.K);
  out.J = kron(xt, out.CAdag) + kron(g, wt);
  return out;
}

// Shared numerator of the mixed and componentwise condition numbers,
//
//   s = |L H| vec|A| + |L J| vec|C| + |L K| |b| + |L CAdag| |d|,
//
// accumulated column by column: the column of L H indexed by the (i,j) entry
// of A is r_i (L K K^T) e_j - x_j (L K) e_i, and the column of L J indexed by
// the (t,i) entry of C is x_i (L CAdag) e_t + w_t (L K K^T) e_i with
// w = (A CAdag)^T r. Only the small n x {m,n,p} operator images are formed.
template <class Scalar>
Vector<Scalar> kappa_numerator(const LseSolution<Scalar>& sol,
                               const SelectionMatrix<Scalar>& l) {
  detail::check_selection(sol, l);
  const GqrFactorization<Scalar>& f = sol.factors;
  const Index m = f.m(), n = f.n(), p = f.p(), k = l.k();
  const Matrix<Scalar>& lm = l.matrix();
  Matrix<Scalar> lk = lm * f.dense_K();      // L K, k x m
  Matrix<Scalar> lg = lm * f.dense_KKt();    // L K K^T, k x n
  Matrix<Scalar> lc = lm * f.dense_CAdag();  // L CAdag, k x p
  const Vector<Scalar>& x = sol.x;
  const Vector<Scalar>& r = sol.r;
  const Vector<Scalar>& w = sol.acad_r;
  Vector<Scalar> s = Vector<Scalar>::Zero(k);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < m; ++i) {
      const Scalar aij = std::abs(sol.A(i, j));
      if (aij != Scalar(0)) {
        s += aij * (r(i) * lg.col(j) - x(j) * lk.col(i)).cwiseAbs();
      }
    }
  }
  for (Index i = 0; i < n; ++i) {
    for (Index t = 0; t < p; ++t) {
      const Scalar cti = std::abs(sol.C(t, i));
      if (cti != Scalar(0)) {
        s += cti * (x(i) * lc.col(t) + w(t) * lg.col(i)).cwiseAbs();
      }
    }
  }
  s += lk.cwiseAbs() * sol.b.cwiseAbs();
  s += lc.cwiseAbs() * sol.d.cwiseAbs();
  return s;
}

// Mixed condition number of L x under componentwise data perturbations,
// absolute in the solution space: || s ||_inf for the shared numerator s.
template <class Scalar>
Scalar kappa_inf(const LseSolution<Scalar>& sol, const SelectionMatrix<Scalar>& l) {
  Vector<Scalar> s = kappa_numerator(sol, l);
  return s.size() ? s.maxCoeff() : Scalar(0);
}

// kappa_inf divided by ||L x||_inf.
template <class Scalar>
Scalar kappa_inf_rel(const LseSolution<Scalar>& sol, const SelectionMatrix<Scalar>& l) {
  Vector<Scalar> lx = l.matrix() * sol.x;
  Scalar denom = infinity_norm(lx);
  if (denom == Scalar(0)) {
    throw std::domain_error("kappa_inf_rel: ||L x||_inf is zero");
  }
  return kappa_inf(sol, l) / denom;
}

template <class Scalar>
struct ComponentwiseKappa {
  Scalar value;
  // True when some selected component of L x is exactly zero while its
  // numerator is positive; value is then +infinity.
  bool zero_component;
};

// Componentwise condition number max_i s_i / |(L x)_i|. A zero component with
// a zero numerator is excluded from the max; a zero component with a positive
// numerator makes the result +infinity, flagged.
template <class Scalar>
ComponentwiseKappa<Scalar> kappa_c(const LseSolution<Scalar>& sol,
                                   const SelectionMatrix<Scalar>& l) {
  Vector<Scalar> s = kappa_numerator(sol, l);
  Vector<Scalar> lx = l.matrix() * sol.x;
  ComponentwiseKappa<Scalar> out{Scalar(0), false};
  bool any = false;
  for (Index i = 0; i < s.size(); ++i) {
    if (lx(i) != Scalar(0)) {
      any = true;
      out.value = std::max(out.value, s(i) / std::abs(lx(i)));
    } else if (s(i) > Scalar(0)) {
      out.value = std::numeric_limits<Scalar>::infinity();
      out.zero_component = true;
      return out;
    }
  }
  if (!any) {
    throw std::domain_error("kappa_c: every selected component of L x is zero");
  }
  return out;
}

// sqrt(k) * kappa_inf, an upper bound on the mixed condition number measured
// in the 2-norm of the solution space.
template <class Scalar>
Scalar kappa_2_bound(const LseSolution<Scalar>& sol, const SelectionMatrix<Scalar>& l) {
  return std::sqrt(Scalar(l.k())) * kappa_inf(sol, l);
}

// Normwise condition number built from spectral norms of the explicit
// derivative blocks, with the transposition handled by vec-permutation
// matrices:
//
//   ( ||CAdag||_2 ||d||_2 + ||K||_2 ||b||_2
//     + || x^T (x) CAdag + [w^T (x) K K^T] Pi_{p,n} ||_2 ||C||_F
//     + || -x^T (x) K + [r^T (x) K K^T] Pi_{m,n} ||_2 ||A||_F ) / ||x||_2.
template <class Scalar>
Scalar kappa1_cox_higham(const LseSolution<Scalar>& sol) {
  const GqrFactorization<Scalar>& f = sol.factors;
  const Index m = f.m(), n = f.n(), p = f.p();
  if (m * n > Index(1000000)) {
    throw std::length_error("kappa1_cox_higham: m*n too large for dense blocks");
  }
  Scalar xnorm = sol.x.norm();
  if (xnorm == Scalar(0)) throw std::domain_error("kappa1_cox_higham: x is zero");
  Matrix<Scalar> k = f.dense_K();
  Matrix<Scalar> g = f.dense_KKt();
  Matrix<Scalar> cad = f.dense_CAdag();
  Matrix<Scalar> xt = sol.x.transpose();
  Matrix<Scalar> rt = sol.r.transpose();
  Matrix<Scalar> wt = sol.acad_r.transpose();
  Matrix<Scalar> block_a =
      -kron(xt, k) + Matrix<Scalar>(kron(rt, g) * vec_permutation<Scalar>(m, n));
  Matrix<Scalar> block_c =
      kron(xt, cad) + Matrix<Scalar>(kron(wt, g) * vec_permutation<Scalar>(p, n));
  return (spectral_norm(cad) * sol.d.norm() + spectral_norm(k) * sol.b.norm() +
          spectral_norm(block_c) * frobenius_norm(sol.C) +
          spectral_norm(block_a) * frobenius_norm(sol.A)) /
         xnorm;
}

// Weights of the normwise data measure used by kappa2_li_wang.
template <class Scalar>
struct NormWeights {
  Scalar alpha_A = 1, alpha_C = 1, alpha_b = 1, alpha_d = 1;
};

// Normwise condition number of L x from the closed-form Gram matrix of the
// derivative: kappa_2 = sqrt(||M||_2) / ||L x||_2 * sqrt(alpha_A^2 ||A||_F^2
// + alpha_C^2 ||C||_F^2 + alpha_b^2 ||b||_2^2 + alpha_d^2 ||d||_2^2) where,
// writing G = K K^T and w = (A CAdag)^T r,
//
//   M = (||r||^2/aA^2 + ||w||^2/aC^2) L G^2 L^T
//     + (||x||^2/aA^2 + 1/ab^2) L G L^T
//     + (||x||^2/aC^2 + 1/ad^2) L CAdag CAdag^T L^T
//     + (1/aC^2) [ (L G x)(L CAdag w)^T + (L CAdag w)(L G x)^T ].
template <class Scalar>
Scalar kappa2_li_wang(const LseSolution<Scalar>& sol, const SelectionMatrix<Scalar>& l,
                      const NormWeights<Scalar>& weights = {}) {
  detail::check_selection(sol, l);
  if (weights.alpha_A <= Scalar(0) || weights.alpha_C <= Scalar(0) ||
      weights.alpha_b <= Scalar(0) || weights.alpha_d <= Scalar(0)) {
    throw std::invalid_argument("kappa2_li_wang: weights must be positive");
  }
  Vector<Scalar> lx = l.matrix() * sol.x;
  Scalar lxnorm = lx.norm();
  if (lxnorm == Scalar(0)) throw std::domain_error("kappa2_li_wang: ||L x||_2 is zero");
  const GqrFactorization<Scalar>& f = sol.factors;
  Matrix<Scalar> g = f.dense_KKt();
  Matrix<Scalar> cad = f.dense_CAdag();
  Matrix<Scalar> lg = l.matrix() * g;      // k x n
  Matrix<Scalar> lcad = l.matrix() * cad;  // k x p
  const Scalar a2 = weights.alpha_A * weights.alpha_A;
  const Scalar c2 = weights.alpha_C * weights.alpha_C;
  const Scalar b2 = weights.alpha_b * weights.alpha_b;
  const Scalar d2 = weights.alpha_d * weights.alpha_d;
  Scalar rr = sol.r.squaredNorm(), xx = sol.x.squaredNorm(), ww = sol.acad_r.squaredNorm();
  Vector<Scalar> lgx = lg * sol.x;
  Vector<Scalar> lcw = lcad * sol.acad_r;
  Matrix<Scalar> mat = (rr / a2 + ww / c2) * (lg * lg.transpose());
  mat += (xx / a2 + Scalar(1) / b2) * (lg * l.matrix().transpose());
  mat += (xx / c2 + Scalar(1) / d2) * (lcad * lcad.transpose());
  mat += (Scalar(1) / c2) * (lgx * lcw.transpose() + lcw * lgx.transpose());
  Scalar data = a2 * sol.A.squaredNorm() + c2 * sol.C.squaredNorm() +
                b2 * sol.b.squaredNorm() + d2 * sol.d.squaredNorm();
  return std::sqrt(spectral_norm(mat)) / lxnorm * std::sqrt(data);
}

}  // namespace lse
