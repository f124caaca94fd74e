#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lse/estimate.hpp"

namespace lse {

// Direction of the residual component 1e-5 * b2 added to b: a unit vector in
// null(A^T) = span{e2, e4, e5, e6, e8}, either spread uniformly over that
// basis or concentrated on one coordinate.
enum class B2Mode { Spread, E2, E4, E5, E6, E8 };

inline std::string to_string(B2Mode mode) {
  switch (mode) {
    case B2Mode::Spread: return "spread";
    case B2Mode::E2: return "e2";
    case B2Mode::E4: return "e4";
    case B2Mode::E5: return "e5";
    case B2Mode::E6: return "e6";
    case B2Mode::E8: return "e8";
  }
  return "spread";
}

template <class Scalar>
struct TestProblemConfig {
  Scalar eta = Scalar(1e-3);    // size of 1/x_4
  Scalar delta = Scalar(1e-3);  // size of the small singular values of A
  B2Mode b2_mode = B2Mode::Spread;
};

// The 9x4 / 2x4 ill-conditioned family: A has unit entries at (1,1) and
// (3,2) and entries delta at (7,3) and (9,4) (1-based); C fixes x_2 = 1 and
// x_1 = 1; b = A v + 1e-5 b2 with v = (1, 1, 1, 1/eta) and b2 in null(A^T),
// so the exact solution is x = v with residual r = 1e-5 b2.
template <class Scalar>
LseProblem<Scalar> build_test_problem(const TestProblemConfig<Scalar>& cfg) {
  if (!(cfg.eta > Scalar(0)) || !(cfg.delta > Scalar(0))) {
    throw std::invalid_argument("build_test_problem: eta and delta must be positive");
  }
  Matrix<Scalar> a = Matrix<Scalar>::Zero(9, 4);
  a(0, 0) = 1;
  a(2, 1) = 1;
  a(6, 2) = cfg.delta;
  a(8, 3) = cfg.delta;
  Matrix<Scalar> c = Matrix<Scalar>::Zero(2, 4);
  c(0, 1) = 1;
  c(1, 0) = 1;
  Vector<Scalar> v(4);
  v << 1, 1, 1, Scalar(1) / cfg.eta;
  Vector<Scalar> b2 = Vector<Scalar>::Zero(9);
  switch (cfg.b2_mode) {
    case B2Mode::Spread: {
      const Scalar s = Scalar(1) / std::sqrt(Scalar(5));
      b2(1) = b2(3) = b2(4) = b2(5) = b2(7) = s;
      break;
    }
    case B2Mode::E2: b2(1) = 1; break;
    case B2Mode::E4: b2(3) = 1; break;
    case B2Mode::E5: b2(4) = 1; break;
    case B2Mode::E6: b2(5) = 1; break;
    case B2Mode::E8: b2(7) = 1; break;
  }
  Vector<Scalar> b = a * v + Scalar(1e-5) * b2;
  Vector<Scalar> d(2);
  d << 1, 1;
  return LseProblem<Scalar>(std::move(a), std::move(c), std::move(b), std::move(d));
}

template <class Scalar>
struct PerturbationSample {
  Matrix<Scalar> dA, dC;
  Vector<Scalar> db, dd;
};

// Componentwise random perturbation: each slot is magnitude * (uniform draw
// in [-1,1]) * (data entry), so zero entries stay exactly zero. Draws come
// from a seeded mt19937_64 in a fixed order (A, C, b, d; column-major within
// the matrices), making samples reproducible.
template <class Scalar>
PerturbationSample<Scalar> sample_perturbation(const LseProblem<Scalar>& problem,
                                               Scalar magnitude, std::uint64_t seed) {
  if (!(magnitude >= Scalar(0))) {
    throw std::invalid_argument("sample_perturbation: magnitude must be >= 0");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Scalar> uniform(Scalar(-1), Scalar(1));
  PerturbationSample<Scalar> out;
  out.dA.resize(problem.m(), problem.n());
  out.dC.resize(problem.p(), problem.n());
  out.db.resize(problem.m());
  out.dd.resize(problem.p());
  for (Index j = 0; j < problem.n(); ++j) {
    for (Index i = 0; i < problem.m(); ++i) {
      out.dA(i, j) = magnitude * uniform(rng) * problem.A()(i, j);
    }
  }
  for (Index j = 0; j < problem.n(); ++j) {
    for (Index i = 0; i < problem.p(); ++i) {
      out.dC(i, j) = magnitude * uniform(rng) * problem.C()(i, j);
    }
  }
  for (Index i = 0; i < problem.m(); ++i) out.db(i) = magnitude * uniform(rng) * problem.b()(i);
  for (Index i = 0; i < problem.p(); ++i) out.dd(i) = magnitude * uniform(rng) * problem.d()(i);
  return out;
}

namespace detail {

template <class Scalar>
void eps0_scan(const Matrix<Scalar>& delta, const Matrix<Scalar>& data, Scalar& worst) {
  for (Index j = 0; j < data.cols(); ++j) {
    for (Index i = 0; i < data.rows(); ++i) {
      const Scalar den = std::abs(data(i, j)), num = std::abs(delta(i, j));
      if (den > Scalar(0)) {
        worst = std::max(worst, num / den);
      } else if (num > Scalar(0)) {
        worst = std::numeric_limits<Scalar>::infinity();
      }
    }
  }
}

}  // namespace detail

// Smallest eps with |delta| <= eps * |data| entrywise; +infinity when the
// perturbation hits an exactly-zero data entry.
template <class Scalar>
Scalar epsilon0(const LseProblem<Scalar>& problem, const PerturbationSample<Scalar>& s) {
  Scalar worst = 0;
  detail::eps0_scan(s.dA, problem.A(), worst);
  detail::eps0_scan(s.dC, problem.C(), worst);
  detail::eps0_scan(Matrix<Scalar>(s.db), Matrix<Scalar>(problem.b()), worst);
  detail::eps0_scan(Matrix<Scalar>(s.dd), Matrix<Scalar>(problem.d()), worst);
  return worst;
}

// Largest of the four blockwise norm ratios ||dA||_F/||A||_F, ||dC||_F/||C||_F,
// ||db||_2/||b||_2, ||dd||_2/||d||_2.
template <class Scalar>
Scalar epsilon1(const LseProblem<Scalar>& problem, const PerturbationSample<Scalar>& s) {
  const Scalar na = problem.A().norm(), nc = problem.C().norm();
  const Scalar nb = problem.b().norm(), nd = problem.d().norm();
  if (na == Scalar(0) || nc == Scalar(0) || nb == Scalar(0) || nd == Scalar(0)) {
    throw std::domain_error("epsilon1: a data block has zero norm");
  }
  return std::max({s.dA.norm() / na, s.dC.norm() / nc, s.db.norm() / nb, s.dd.norm() / nd});
}

// Weighted root-sum-of-squares aggregate
// sqrt(aA^2 ||dA||_F^2 + aC^2 ||dC||_F^2 + ab^2 ||db||^2 + ad^2 ||dd||^2).
template <class Scalar>
Scalar epsilon2(const PerturbationSample<Scalar>& s, const NormWeights<Scalar>& w = {}) {
  using std::sqrt;
  const Scalar t = w.alpha_A * w.alpha_A * s.dA.squaredNorm() +
                   w.alpha_C * w.alpha_C * s.dC.squaredNorm() +
                   w.alpha_b * w.alpha_b * s.db.squaredNorm() +
                   w.alpha_d * w.alpha_d * s.dd.squaredNorm();
  return sqrt(t);
}

template <class Scalar>
struct RelativeErrors {
  Scalar r2;    // ||L xt - L x||_2 / ||L x||_2
  Scalar rinf;  // ||L xt - L x||_inf / ||L x||_inf
  Scalar rc;    // max_i |(L xt - L x)_i| / |(L x)_i| over nonzero components
};

template <class Scalar>
RelativeErrors<Scalar> relative_errors(const Vector<Scalar>& x, const Vector<Scalar>& xt,
                                       const SelectionMatrix<Scalar>& l) {
  if (x.size() != l.n() || xt.size() != x.size()) {
    throw DimensionError("relative_errors: size mismatch");
  }
  Vector<Scalar> lx = l.matrix() * x;
  Vector<Scalar> diff = l.matrix() * xt - lx;
  RelativeErrors<Scalar> out{};
  const Scalar n2 = lx.norm(), ninf = infinity_norm(lx);
  if (n2 == Scalar(0) || ninf == Scalar(0)) {
    throw std::domain_error("relative_errors: L x is zero");
  }
  out.r2 = diff.norm() / n2;
  out.rinf = infinity_norm(diff) / ninf;
  out.rc = 0;
  bool any = false;
  for (Index i = 0; i < lx.size(); ++i) {
    if (lx(i) != Scalar(0)) {
      any = true;
      out.rc = std::max(out.rc, std::abs(diff(i)) / std::abs(lx(i)));
    } else if (diff(i) != Scalar(0)) {
      out.rc = std::numeric_limits<Scalar>::infinity();
    }
  }
  if (!any) throw std::domain_error("relative_errors: every component of L x is zero");
  return out;
}

enum class KappaMode { Mixed, Componentwise };

// Exact maximizer of the first-order term over all sign patterns of the
// componentwise perturbation polytope: evaluates the directional derivative
// at every vertex sigma .* |data| and keeps the largest (scaled) image norm.
// Exponential cost, guarded to mn + pn + m + p <= 14 slots.
template <class Scalar>
Scalar brute_force_kappa(const LseProblem<Scalar>& problem, const SelectionMatrix<Scalar>& l,
                         KappaMode mode) {
  const Index m = problem.m(), n = problem.n(), p = problem.p();
  const Index slots = m * n + p * n + m + p;
  if (slots > 14) {
    throw std::length_error("brute_force_kappa: too many data entries to enumerate");
  }
  LseSolution<Scalar> sol = solve(problem);
  Vector<Scalar> lx = l.matrix() * sol.x;
  if (mode == KappaMode::Componentwise && lx.cwiseAbs().maxCoeff() == Scalar(0)) {
    throw std::domain_error("brute_force_kappa: L x is zero");
  }
  if (mode == KappaMode::Mixed && l.k() == 0) {
    throw DimensionError("brute_force_kappa: empty selection");
  }
  PerturbationDirection<Scalar> dir;
  dir.dA.resize(m, n);
  dir.dC.resize(p, n);
  dir.db.resize(m);
  dir.dd.resize(p);
  Scalar best = 0;
  bool usable = false;
  for (std::uint64_t bits = 0; bits < (std::uint64_t(1) << slots); ++bits) {
    Index s = 0;
    auto sign = [&](std::uint64_t b, Index i) {
      return ((b >> i) & 1u) ? Scalar(-1) : Scalar(1);
    };
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < m; ++i) dir.dA(i, j) = sign(bits, s++) * std::abs(problem.A()(i, j));
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < p; ++i) dir.dC(i, j) = sign(bits, s++) * std::abs(problem.C()(i, j));
    for (Index i = 0; i < m; ++i) dir.db(i) = sign(bits, s++) * std::abs(problem.b()(i));
    for (Index i = 0; i < p; ++i) dir.dd(i) = sign(bits, s++) * std::abs(problem.d()(i));
    Vector<Scalar> image = frechet_apply(sol, l, dir);
    if (mode == KappaMode::Mixed) {
      best = std::max(best, infinity_norm(image));
      usable = true;
    } else {
      for (Index i = 0; i < image.size(); ++i) {
        if (lx(i) != Scalar(0)) {
          best = std::max(best, std::abs(image(i)) / std::abs(lx(i)));
          usable = true;
        } else if (std::abs(image(i)) > Scalar(0)) {
          return std::numeric_limits<Scalar>::infinity();
        }
      }
    }
  }
  if (!usable) {
    throw std::domain_error("brute_force_kappa: no usable components");
  }
  return best;
}

template <class Scalar>
struct ExperimentRow {
  Scalar eta, delta;
  std::string selection;  // label of L
  Scalar cond_augmented;  // 2-norm condition number of the augmented matrix
  // first seeded draw, reported on its own as a representative sample
  Scalar eps0, eps1, eps2;
  Scalar r2, rinf, rc;
  // aggregates over all trials
  Scalar r2_max, rinf_max, rc_max;
  Scalar r2_median, rinf_median, rc_median;
  Scalar eps0_max, eps2_max;
  // exact and estimated condition numbers
  Scalar kappa_inf_rel, kappa_c, kappa_inf_u, kappa_c_u, kappa_1, kappa_2;
  // first-draw linear bounds
  Scalar bound_eps1_kappa1, bound_eps2_kappa2, bound_eps0_kappa_inf, bound_eps0_kappa_c;
  int trials;
  std::uint64_t seed;
};

template <class Scalar>
struct LabeledSelection {
  std::string label;
  SelectionMatrix<Scalar> matrix;
};

namespace detail {

template <class Scalar>
Scalar median(std::vector<Scalar> v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size();
  return k % 2 ? v[k / 2] : (v[k / 2 - 1] + v[k / 2]) / Scalar(2);
}

inline std::uint64_t trial_seed(std::uint64_t seed, int trial) {
  // splitmix64 step keeps per-trial streams decorrelated and reproducible
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (std::uint64_t(trial) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace detail

// Runs the perturbation experiment on the test family: for every (eta, delta)
// configuration and every selection, draws `trials` componentwise
// perturbations of size `magnitude`, re-solves, and collects observed errors
// next to the exact and estimated condition numbers and the first-order
// bounds.
template <class Scalar>
std::vector<ExperimentRow<Scalar>> run_experiment(
    const std::vector<TestProblemConfig<Scalar>>& configs,
    const std::vector<LabeledSelection<Scalar>>& selections, Scalar magnitude, int trials,
    std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("run_experiment: trials must be >= 1");
  std::vector<ExperimentRow<Scalar>> rows;
  for (const auto& cfg : configs) {
    LseProblem<Scalar> problem = build_test_problem(cfg);
    LseSolution<Scalar> sol = solve(problem);
    const Scalar cond_aug = condition_number_2(build_augmented(problem));
    std::vector<PerturbationSample<Scalar>> samples;
    std::vector<Vector<Scalar>> xts;
    samples.reserve(trials);
    xts.reserve(trials);
    for (int t = 0; t < trials; ++t) {
      samples.push_back(sample_perturbation(problem, magnitude, detail::trial_seed(seed, t)));
      const auto& s = samples.back();
      LseProblem<Scalar> perturbed(problem.A() + s.dA, problem.C() + s.dC,
                                   problem.b() + s.db, problem.d() + s.dd);
      xts.push_back(solve(perturbed).x);
    }
    for (const auto& sel : selections) {
      ExperimentRow<Scalar> row{};
      row.eta = cfg.eta;
      row.delta = cfg.delta;
      row.selection = sel.label;
      row.cond_augmented = cond_aug;
      row.trials = trials;
      row.seed = seed;
      std::vector<Scalar> r2s, rinfs, rcs;
      for (int t = 0; t < trials; ++t) {
        RelativeErrors<Scalar> err = relative_errors(sol.x, xts[t], sel.matrix);
        r2s.push_back(err.r2);
        rinfs.push_back(err.rinf);
        rcs.push_back(err.rc);
        row.eps0_max = std::max(row.eps0_max, epsilon0(problem, samples[t]));
        row.eps2_max = std::max(row.eps2_max, epsilon2(samples[t]));
      }
      row.r2 = r2s[0];
      row.rinf = rinfs[0];
      row.rc = rcs[0];
      row.r2_max = *std::max_element(r2s.begin(), r2s.end());
      row.rinf_max = *std::max_element(rinfs.begin(), rinfs.end());
      row.rc_max = *std::max_element(rcs.begin(), rcs.end());
      row.r2_median = detail::median(r2s);
      row.rinf_median = detail::median(rinfs);
      row.rc_median = detail::median(rcs);
      row.eps0 = epsilon0(problem, samples[0]);
      row.eps1 = epsilon1(problem, samples[0]);
      row.eps2 = epsilon2(samples[0]);
      row.kappa_inf_rel = kappa_inf_rel(sol, sel.matrix);
      row.kappa_c = kappa_c(sol, sel.matrix).value;
      row.kappa_inf_u = kappa_inf_upper(sol, sel.matrix).total;
      row.kappa_c_u = kappa_c_upper(sol, sel.matrix).total;
      row.kappa_1 = kappa1_cox_higham(sol);
      row.kappa_2 = kappa2_li_wang(sol, sel.matrix);
      row.bound_eps1_kappa1 = row.eps1 * row.kappa_1;
      row.bound_eps2_kappa2 = row.eps2 * row.kappa_2;
      row.bound_eps0_kappa_inf = row.eps0 * row.kappa_inf_rel;
      row.bound_eps0_kappa_c = row.eps0 * row.kappa_c;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

// The three selections reported for the test family: the full solution, the
// first three components, and the large component alone.
template <class Scalar>
std::vector<LabeledSelection<Scalar>> default_selections() {
  return {
      {"identity", SelectionMatrix<Scalar>::identity(4)},
      {"rows:1,2,3", SelectionMatrix<Scalar>::from_rows(4, {0, 1, 2})},
      {"rows:4", SelectionMatrix<Scalar>::from_rows(4, {3})},
  };
}

}  // namespace lse
