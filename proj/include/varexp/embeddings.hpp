#pragma once

#include <vector>

#include "varexp/atoms.hpp"
#include "varexp/decomp.hpp"
#include "varexp/exponent.hpp"
#include "varexp/grid.hpp"
#include "varexp/lp_analysis.hpp"

namespace varexp {

/// sum_m lambda_{jm} chi_{jm} on the half-open dyadic tiling of g, the
/// weightless companion of coeff_step_functions.  Requires the grid to
/// resolve the level: 2^{-j} >= 4h.
GridFunction level_step(const CoeffLevel& lam, const Grid& g);

/// Level-wise norm transfer from L_{p0} to L_{p1} data: the p1-norm of
/// sum_m lambda_{jm} w_j chi_{jm} against the p0-norm of the same sum
/// carrying the extra factor 2^{j n (1/p0(x) - 1/p1(x))}.  When the
/// outer sequence exponent is constant, the discrete Sobolev embedding
/// reduces to this inequality holding with a j-independent constant.
struct NikolskiiReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  // lhs / rhs; 0 when both sides vanish
};

NikolskiiReport nikolskii_constant_q(const CoeffLevel& lam, const Grid& g,
                                     const Exponent& p0, const Exponent& p1,
                                     const WeightSequence& w);

/// Variable-q refinement.  With the per-level Luxemburg-type infima
///   inf{mu > 0 : rho_p(F / mu^{1/q(.)}) <= 1},
/// the left infimum of c0 * sum_m lambda w_j chi_{jm} under p1 stays
/// below the right infimum of the 2^{jn(1/p0-1/p1)}-weighted sum under
/// p0 plus the slack 2^{-j}, for a uniform c0 in (0,1] -- provided the
/// right infimum is at most one (skip otherwise).  c0Max is the largest
/// multiplier passing this level, found by bisection; a family
/// calibration takes the minimum over draws.
struct NikolskiiVarReport {
  double leftInf = 0.0;  // with the supplied c0 in place
  double rightInf = 0.0;
  double slack = 0.0;    // 2^{-j}
  double c0Max = 0.0;
  bool skip = false;     // proviso rightInf <= 1 failed
  bool pass = false;
};

NikolskiiVarReport nikolskii_variable_q(const CoeffLevel& lam, const Grid& g,
                                        const Exponent& p0, const Exponent& p1,
                                        const Exponent& q,
                                        const WeightSequence& w, double c0);

/// Sequence-space Sobolev embedding: when p0 <= p1 pointwise and
/// w0_j / w1_j = 2^{j n (1/p0 - 1/p1)} on the grid, the b^{w1}_{p1,q}
/// norm is at most 3^{1/qMin} / c0 times the b^{w0}_{p0,q} norm, c0
/// being the calibrated constant from the variable-q transfer step.
struct SeqEmbedReport {
  double source = 0.0;  // || lambda | b^{w0}_{p0,q} ||
  double target = 0.0;  // || lambda | b^{w1}_{p1,q} ||
  double ratio = 0.0;
  double bound = 0.0;   // 3^{1/qMin} / c0
  bool pass = false;
};

SeqEmbedReport sobolev_seq_embed(const CoeffField& lam, const Grid& g,
                                 const Exponent& p0, const Exponent& p1,
                                 const Exponent& q, const WeightSequence& w0,
                                 const WeightSequence& w1, double c0);

/// Function-space transfer of the embedding under the same weight
/// relation: || f | B^{w1}_{p1,q} || / || f | B^{w0}_{p0,q} ||.  The
/// atomic-transfer gates K > alpha2 and
/// L > sigma_{p1Min} - alpha1 + cLocal(1/q) (alphas of w1) are reported;
/// a failing gate flags the report but the ratio is still measured.
struct SpaceEmbedReport {
  double source = 0.0;
  double target = 0.0;
  double ratio = 0.0;
  double needK = 0.0, needL = 0.0;
  bool kOk = false, lOk = false;
};

SpaceEmbedReport sobolev_space_embed(const GridFunction& f, const Exponent& p0,
                                     const Exponent& p1, const Exponent& q,
                                     const WeightSequence& w0,
                                     const WeightSequence& w1,
                                     const AdmissiblePair& pair, int K, int L);

/// Lossy embedding with an epsilon gap: requires
/// 1 <= w0_j / w1_j = 2^{j (n/p0 - n/p1 + eps(x))} pointwise.  With
/// epsMin > 0 the gap absorbs even a swap of the sequence exponents
/// (q1 < q0); epsMin = 0 is accepted and reported as the contrast case.
struct EpsEmbedReport {
  double source = 0.0;  // || f | B^{w0}_{p0,q0} ||
  double target = 0.0;  // || f | B^{w1}_{p1,q1} ||
  double ratio = 0.0;
  double epsMin = 0.0;
  bool gatePass = false;  // epsMin > 0
};

EpsEmbedReport eps_embed_check(const GridFunction& f, const Exponent& p0,
                               const Exponent& p1, const Exponent& q0,
                               const Exponent& q1, const WeightSequence& w0,
                               const WeightSequence& w1, const GridFunction& eps,
                               const AdmissiblePair& pair);

/// Lower bound chi_{jm} <= c^{-1} (eta_{j,R} * chi_{jm}):  c is the
/// minimum of the convolution over the closed cube, evaluated by
/// fixed-count midpoint quadrature of the analytic kernel so the
/// discretisation error stays uniform in j.  Exactly m-invariant and
/// j-invariant up to quadrature noise.
struct ChiEtaReport {
  double c = 0.0;     // min over the cube samples
  double cMax = 0.0;  // max, for contrast
};

ChiEtaReport chi_eta_lower(const Grid& g, const DyadicCube& q, double R);

/// Decay of phi_j against a molecule on Q_{nu m}, measured through the
/// two-sided envelope
///   2^{-(nu-j)(L+n)} (1 + 2^j|x - c|)^{-N}     (j <= nu)
///   2^{-(j-nu)K}     (1 + 2^nu|x - c|)^{-M}    (j >  nu).
struct MoleculeDecayProbe {
  int j = 0, nu = 0;
  std::array<std::int64_t, 2> m{0, 0};
  double peak = 0.0;   // max_x |phi_j * u|
  double ratio = 0.0;  // max_x |phi_j * u| / envelope
};

/// Single probe against a caller-supplied molecule u (zero u gives
/// ratio 0).  Gate: M > N + L + n.
MoleculeDecayProbe molecule_envelope_ratio(const ReproducingSystem& sys, int j,
                                           const GridFunction& u,
                                           const DyadicCube& q, double M,
                                           double N);

/// Sweep over bump-atom molecules: all (j, nu) pairs up to topLevel at
/// m = 0 plus off-centre probes, collecting the envelope ratios and the
/// fitted log2 peak decay against nu - j at the deepest nu (expected
/// -(L+n)).
struct MoleculeDecayReport {
  std::vector<MoleculeDecayProbe> probes;
  double cMax = 0.0;
  double cMin = 0.0;   // over probes with a nonzero ratio
  double slope = 0.0;
};

MoleculeDecayReport molecule_convolution_decay(const ReproducingSystem& sys,
                                               double M, double N, int topLevel);

/// Pointwise envelope sum against the eta-convolution majorant: sup over
/// the grid of
///   sum_m |h_m| (1 + 2^{min(nu,j)}|x - 2^{-nu}m|)^{-R}
/// divided by
///   max{1, 2^{(nu-j)R}} (eta_{nu,Rt} * |sum_m h_m chi_{num}|^t)^{1/t}.
/// Gates: 0 < t <= 1 and R > n/t.
struct EtaMaximalReport {
  double c = 0.0;       // measured sup of lhs / rhs
  double factor = 0.0;  // max{1, 2^{(nu-j)R}}
};

EtaMaximalReport eta_maximal_bound(const CoeffLevel& h, const Grid& g, int j,
                                   double R, double t);

}  // namespace varexp
