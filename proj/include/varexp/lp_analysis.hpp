#pragma once

#include "varexp/exponent.hpp"
#include "varexp/grid.hpp"
#include "varexp/mixed.hpp"

namespace varexp {

enum class PairProfile { CosineBump, PolynomialBump };

/// Smooth dyadic resolution pair built from a radial low-pass profile u
/// with u = 1 on r <= 1 and u = 0 on r >= 2.  Level j >= 1 uses the
/// band profile v(r) = u(r) - u(2r) scaled to the annulus
/// 2^{j-1} <= |xi| <= 2^{j+1}; level 0 uses u itself.  lowerBound is
/// the measured minimum of v over 3/5 <= r <= 5/3 and must be positive
/// for the pair to resolve every frequency.
struct AdmissiblePair {
  PairProfile profile = PairProfile::CosineBump;
  double lowerBound = 0.0;

  double lowPass(double r) const;
  double band(double r) const { return lowPass(r) - lowPass(2.0 * r); }
  /// Symbol of level j at radius r (band for j >= 1, low-pass for 0).
  double symbol(int j, double r) const;

  static AdmissiblePair make(PairProfile profile);
};

/// Blocks phi_j * f for j = 0..Jmax, computed on the Fourier side.
/// The frequency grid must cover the top band: 2^{Jmax+1} <= pi/h.
FunctionSequence lp_blocks(const GridFunction& f, const AdmissiblePair& pair,
                           int Jmax);

/// max over grid frequencies |xi| <= 2^Jmax of |sum_j phihat_j(xi) - 1|.
double partition_residual(const Grid& g, const AdmissiblePair& pair, int Jmax);

/// || f | B^w_{p,q} ||: l_q(L_p) norm of (w_j . (phi_j * f))_{j=0..Jmax}
/// with Jmax = w.levels() - 1.
NormResult besov_norm(const GridFunction& f, const Exponent& p, const Exponent& q,
                      const WeightSequence& w, const AdmissiblePair& pair);

/// || f | F^w_{p,q} ||: L_p(l_q) of the same weighted blocks; requires
/// pMax, qMax < inf.
NormResult tl_norm(const GridFunction& f, const Exponent& p, const Exponent& q,
                   const WeightSequence& w, const AdmissiblePair& pair);

/// Peetre maximal function of one block:
/// (phi*_j f)(x) = max_y |b(y)| / (1 + 2^j |x - y|)^a.  Exact discrete
/// maximum, O(size^2).
GridFunction peetre_maximal(const GridFunction& block, int j, double a);

/// Default maximal exponent a = n / min(pMin, qMin) + alpha + 1.
double peetre_exponent(const Exponent& p, const Exponent& q,
                       const WeightSequence& w);

struct PairCompareReport {
  double first = 0.0;
  double second = 0.0;
  double ratio = 0.0;  // first / second
};

/// The same space norm through two different pairs; the ratio measures
/// the equivalence constant.
PairCompareReport pair_independence(const GridFunction& f, const Exponent& p,
                                    const Exponent& q, const WeightSequence& w,
                                    const AdmissiblePair& a,
                                    const AdmissiblePair& b, MixedSpace space);

}  // namespace varexp
