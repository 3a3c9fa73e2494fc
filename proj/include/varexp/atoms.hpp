#pragma once

#include <string>

#include "varexp/exponent.hpp"
#include "varexp/grid.hpp"
#include "varexp/mixed.hpp"

namespace varexp {

/// Atom validation against (K, L, d): support in the closed cube d Q_{jm},
/// |D^gamma a| <= 2^{|gamma| j} for |gamma| <= K (finite differences, with
/// a resolution-dependent slack), and vanishing discrete moments of order
/// |beta| < L.  Level 0 carries no moment condition.
struct AtomReport {
  bool passSupport = false;
  bool passDerivs = false;
  bool passMoments = false;
  double worstDeriv = 0.0;   // max over gamma of sup|D^gamma a| / 2^{|gamma| j}
  double worstMoment = 0.0;  // max normalised |moment|
  double slack = 0.0;        // allowed derivative overshoot (1 + slack)
  bool pass() const { return passSupport && passDerivs && passMoments; }
};

AtomReport verify_atom(const GridFunction& a, const DyadicCube& q, int K, int L,
                       double d);

/// Molecule validation against (K, L, M): derivative decay
/// |D^gamma u(x)| <= 2^{|gamma| j} (1 + 2^j |x - x_Q|)^{-M} for
/// |gamma| <= K, and the same moment conditions as atoms.
struct MoleculeReport {
  bool passDecay = false;
  bool passMoments = false;
  double worstDecay = 0.0;
  double worstMoment = 0.0;
  double slack = 0.0;
  bool pass() const { return passDecay && passMoments; }
};

MoleculeReport verify_molecule(const GridFunction& u, const DyadicCube& q, int K,
                               int L, double M);

/// Every (K, L, d)-atom is a (K, L, M)-molecule once scaled by
/// (1 + d sqrt(n)/2)^{-M}; returns the scaled copy.
GridFunction atom_to_molecule(const GridFunction& a, double d, double M);

/// Synthetic (K, L, d)-atom on the cube: an iterated tight second
/// difference of a smooth bump (exact discrete moments), normalised to
/// sit safely inside the derivative bounds.
GridFunction make_bump_atom(const Grid& g, const DyadicCube& q, int K, int L,
                            double d);

/// Coefficients lambda_{jm} for one level: a dense box of m-indices.
struct CoeffLevel {
  int j = 0;
  std::array<std::int64_t, 2> mLo{0, 0};
  std::array<std::int64_t, 2> mCount{1, 1};
  std::vector<double> lambda;  // row-major, last axis fastest

  double at(std::int64_t m0, std::int64_t m1 = 0) const;  // 0 outside the box
  double& ref(std::int64_t m0, std::int64_t m1 = 0);
};

/// Coefficient field over levels j = 0..Jmax.
struct CoeffField {
  int n = 1;
  std::vector<CoeffLevel> levels;

  int count() const { return static_cast<int>(levels.size()); }
  /// All-zero field whose level boxes tile the grid box.
  static CoeffField zeros(const Grid& g, int Jmax);
  double absMax() const;
};

void save_coeffs(const std::string& path, const CoeffField& field);
CoeffField load_coeffs(const std::string& path);

/// || lambda | b^w_{p,q} ||: l_q(L_p) norm of the level step functions
/// sum_m lambda_{jm} w_j(2^{-j} m) chi_{jm} on g, with the half-open
/// tiling x -> m = floor(2^j x + 1/2).
NormResult seq_norm_b(const CoeffField& field, const Grid& g, const Exponent& p,
                      const Exponent& q, const WeightSequence& w);

/// || lambda | f^w_{p,q} ||: L_p(l_q) of the same step functions;
/// requires pMax, qMax < inf.
NormResult seq_norm_f(const CoeffField& field, const Grid& g, const Exponent& p,
                      const Exponent& q, const WeightSequence& w);

/// The level step functions themselves (shared by both norms).
FunctionSequence coeff_step_functions(const CoeffField& field, const Grid& g,
                                      const WeightSequence& w);

}  // namespace varexp
