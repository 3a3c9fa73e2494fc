#pragma once

// Shared evaluation core for Luxemburg-type scalar solves.
//
// All norms in the library reduce to root finding for the decreasing map
//   F(u, v) = sum_i h^n (|f_i| e^{-u} )^{p_i} e^{-(p_i/q_i) v}
// over the cells with finite p_i, q_i, plus side constraints from the
// cells where p or q is infinite (u = log of the outer scale, v = log of
// the inner scale).  F is a posynomial in (u, v), hence log-convex, so a
// bracketed Newton iteration in log space is safe and quadratic.
//
// Cells are bucketed by their exact (p, p/q) value pair when few values
// occur (piecewise-constant exponents); then one evaluation costs
// O(#buckets) instead of O(#cells).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "varexp/exponent.hpp"
#include "varexp/grid.hpp"

namespace varexp::detail {

constexpr double kTie = 1e-14;        // tie tolerance at the 0/inf split
constexpr int kBucketLimit = 64;

struct ModularKernel {
  double cellVol = 0.0;

  // finite p, finite q cells
  bool bucketed = false;
  struct Bucket {
    double p, poq;
    double coef;  // h^n * sum |f_i|^p over the bucket
  };
  std::vector<Bucket> buckets;
  std::vector<double> logAbs, pArr, poqArr;  // generic path

  // p finite, q = inf: v-independent contribution h^n sum (|f_i| e^{-u})^{p_i}
  std::vector<double> qinfLogAbs, qinfP;

  // p = inf, q finite: constraint v >= q (log|f_i| - u - log(1+tie))
  std::vector<double> pinfLogAbs, pinfQ;

  // p = q = inf: constraint log|f_i| <= u + log(1+tie)
  double bothInfLogAbs = -kInf;

  bool empty() const {
    return buckets.empty() && logAbs.empty() && qinfLogAbs.empty() &&
           pinfLogAbs.empty() && bothInfLogAbs == -kInf;
  }

  double maxLogAbs = -kInf;   // over all nonzero cells
  double pMinFinite = kInf;   // min p over finite-p nonzero cells

  /// Builds the kernel for rho_p(f / (e^u e^{v/q(.)})).  Passing qOrNull
  /// = nullptr means q == 1 (plain Luxemburg solve in v with u = 0).
  static ModularKernel build(const GridFunction& f, const Exponent& p,
                             const Exponent* qOrNull);

  /// Finite-cell part of the modular and its v-derivative.
  double eval(double u, double v, double* dv = nullptr) const;

  /// v-independent part (q = inf cells).
  double evalQInf(double u) const;

  /// Lower admissible v from the p = inf cells; -inf when unconstrained.
  double vLowerBound(double u) const;

  /// False when a p = q = inf cell exceeds the threshold at this u.
  bool feasible(double u) const { return bothInfLogAbs <= u + std::log1p(kTie); }
};

struct LogSolveResult {
  double v = 0.0;       // log of the root
  double lo = 0.0, hi = 0.0;
  int iterations = 0;
  bool clamped = false;  // root determined by an ess-sup constraint
  bool infeasible = false;
};

/// Solves F(u, v) + evalQInf(u) = 1 for v (decreasing in v), respecting
/// the kernel's constraints; used with u = 0 for plain Luxemburg norms.
/// warmHint, if finite, seeds the bracket.
LogSolveResult solve_scale(const ModularKernel& k, double u, double relTol,
                           double warmHint = kInf);

}  // namespace varexp::detail
