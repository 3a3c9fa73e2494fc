#pragma once

#include <utility>
#include <vector>

#include "varexp/atoms.hpp"
#include "varexp/exponent.hpp"
#include "varexp/grid.hpp"
#include "varexp/mixed.hpp"

namespace varexp {

/// Compactly supported analysis family phi_j plus dual Fourier
/// multipliers psihat_j forming an exact reconstruction on the band
/// |xi| <= 2^Jmax delta:
///
///   f = (2pi)^{-n} sum_j phi_j * (psi_j * f)     (band-limited f).
///
/// Level 0 is a plain bump; levels j >= 1 are iterated lattice
/// Laplacians of scaled bumps at a per-level lag, so discrete moments of
/// degree < 2r vanish exactly (summation by parts at any fixed lag).
/// The lag is tuned so the difference symbol -4 sum_a sin^2(lag h xi_a/2)
/// is order one on the level band, keeping the dual division
/// well-conditioned.  supp phi_j lies in |x| <= sigma 2^{-j}, which makes
/// the produced atoms live on d Q_{jm} with d = 1 + 2 sigma.
struct ReproducingSystem {
  Grid grid;
  int Jmax = 0;
  int K = 0;          // derivative orders controlled
  int L = 0;          // vanishing moments guaranteed (j >= 1)
  double sigma = 1.0;
  int r = 0;          // Laplacian applications per level
  double delta = 0.0; // partition knee, selected by measurement
  double cNorm = 0.0; // max_j max_{|b|<=K} 2^{-j(n+|b|)} sup|D^b phi_j|
  std::vector<int> lag;                   // difference lag per level
  std::vector<GridFunction> phi;
  std::vector<std::vector<cplx>> phiHat;  // measured symbols, DFT order
  std::vector<std::vector<cplx>> psiHat;  // dual multipliers, DFT order

  double d() const { return 1.0 + 2.0 * sigma; }
};

ReproducingSystem make_reproducing_system(const Grid& g, int Jmax, int K, int L,
                                          double sigma = 1.0);

/// max over grid frequencies |xi| <= 2^Jmax delta of
/// |sum_j phihat_j psihat_j / (2pi)^n - 1| with the stored multipliers.
double partition_identity_residual(const ReproducingSystem& sys);

/// One produced atom: values on its support window plus its coefficient.
/// clipped marks windows truncated by the box boundary; such atoms keep
/// the support and size bounds but lose the moment property and the
/// seam derivatives to the finite box, so they are validated with
/// K = L = 0.
struct Atom {
  DyadicCube cube;
  double lambda = 0.0;
  bool clipped = false;
  std::array<std::int64_t, 2> lo{0, 0};   // first grid index per axis
  std::array<std::int64_t, 2> len{1, 1};  // window extent per axis
  std::vector<cplx> values;               // row-major, last axis fastest

  GridFunction embed(const Grid& g) const;
};

struct AnalyzeResult {
  int Jmax = 0;
  double d = 0.0;
  int K = 0, L = 0;
  CoeffField lambda;
  std::vector<Atom> atoms;   // only tiles with lambda > 0
  int dropped = 0;           // coefficients zeroed by the relative floor
  int clipped = 0;           // j >= 1 atoms truncated by the box boundary
  int rescaled = 0;          // atoms renormalised by the safety hook
  int flagged = 0;           // atoms failing validation after the hook
  double worstDeriv = 0.0;
  double worstMoment = 0.0;
};

/// Decomposes f against the system: lambda_{jm} = C sup over the closed
/// cube of |psi_j * f|, atoms averaged over the half-open tile around
/// 2^{-j} m.  Coefficients below 1e-14 of the largest are dropped;
/// with validate set every atom is checked as a (K, L, d)-atom.
AnalyzeResult analyze(const GridFunction& f, const ReproducingSystem& sys,
                      bool validate = true);

/// sum over atoms of lambda_{jm} a_{jm}.
GridFunction synthesize(const AnalyzeResult& res, const Grid& g);

/// Atom windows sum linearly while the reproducing identity holds on
/// the periodic grid, so within sigma of the box boundary the two
/// models disagree by the kernel tails.  supIn/relIn restrict to the
/// faithful interior |x|_inf <= A - margin; sup/rel/l2rel are full-box.
struct ResidualReport {
  double sup = 0.0;     // max |f - rec|
  double rel = 0.0;     // sup residual / max |f|
  double l2rel = 0.0;
  double margin = 0.0;  // boundary zone width sigma
  double supIn = 0.0;
  double relIn = 0.0;
};

ResidualReport reconstruction_residual(const GridFunction& f,
                                       const AnalyzeResult& res);

/// Sequence-space norm of the coefficient tail (levels >= T).
NormResult tail_in_space(const AnalyzeResult& res, const Grid& g,
                         const Exponent& p, const Exponent& q,
                         const WeightSequence& w, MixedSpace space, int T);

/// Parameter gates for the synthesis bounds.  Atoms need K and L only;
/// molecules additionally need M.  All inequalities are strict.
struct GateReport {
  int K = 0, L = 0;
  double M = 0.0;
  double needK = 0.0, needL = 0.0, needM = 0.0;
  bool kOk = false, lOk = false, mOk = false;
  bool atomsOk() const { return kOk && lOk; }
  bool moleculesOk() const { return kOk && lOk && mOk; }
};

GateReport synthesis_gates(const Exponent& p, const Exponent& q,
                           const WeightSequence& w, MixedSpace space, int K,
                           int L, double M = kInf);

/// Partial sums in the order (j, |m|, m): returns (atoms used, relative
/// sup residual over the faithful interior) at doubling checkpoints,
/// demonstrating finite atomic sums exhausting f.
std::vector<std::pair<int, double>> density_demo(const GridFunction& f,
                                                 const AnalyzeResult& res);

/// Distributional pairing decay per level: |<g_j, test>| against
/// 2^{-j(alpha1 - n/pMin)} ||lambda | b^w_{p,inf}|| p_N(test) with
/// N = n + 2 + ceil(alpha).
struct SprimeTailReport {
  std::vector<double> lhs;
  std::vector<double> bound;
  double worstRatio = 0.0;
};

SprimeTailReport sprime_tail_diagnostic(const AnalyzeResult& res, const Grid& g,
                                        const Exponent& p,
                                        const WeightSequence& w,
                                        const GridFunction& test);

}  // namespace varexp
