#pragma once

#include "varexp/exponent.hpp"
#include "varexp/grid.hpp"
#include "varexp/modular.hpp"

namespace varexp {

/// Finite sequence (f_nu)_{nu=0..J} of functions on a common grid.
struct FunctionSequence {
  Grid grid;
  std::vector<GridFunction> levels;

  FunctionSequence() = default;
  FunctionSequence(const Grid& g, int count);
  void push(GridFunction f);
  int count() const { return static_cast<int>(levels.size()); }
  void validate() const;
};

enum class MixedSpace { LpLq, LqLp };  // L_p(l_q) vs l_q(L_p)

/// || (f_nu) | L_{p(.)}(l_{q(.)}) ||: pointwise l_{q(x)} norm of the
/// sequence followed by a Luxemburg norm.
NormResult norm_Lp_lq(const FunctionSequence& seq, const Exponent& p,
                      const Exponent& q, double relTol = 1e-10);

/// Modular of l_{q(.)}(L_{p(.)}): sum over nu of
/// inf{lambda > 0 : rho_p(f_nu / lambda^{1/q(.)}) <= 1}, each infimum
/// solved directly (the defining route).
double modular_lq_Lp(const FunctionSequence& seq, const Exponent& p,
                     const Exponent& q, double relTol = 1e-10);

/// Same modular through the identity with || |f_nu|^{q(.)} | L_{p/q} ||;
/// requires qMax < inf.
double modular_lq_Lp_fast(const FunctionSequence& seq, const Exponent& p,
                          const Exponent& q, double relTol = 1e-10);

/// || (f_nu) | l_{q(.)}(L_{p(.)}) || by scalarising the modular.
NormResult norm_lq_Lp(const FunctionSequence& seq, const Exponent& p,
                      const Exponent& q, double relTol = 1e-10);

/// Norm of the tail (f_nu)_{nu >= T}; T = count gives 0.
NormResult tail_norm(const FunctionSequence& seq, const Exponent& p,
                     const Exponent& q, MixedSpace space, int T,
                     double relTol = 1e-10);

struct MonotoneEmbedReport {
  double lqLp0 = 0.0, lqLp1 = 0.0;  // l_{q0}(L_p) vs l_{q1}(L_p)
  double LpLq0 = 0.0, LpLq1 = 0.0;  // L_p(l_{q0}) vs L_p(l_{q1})
  bool pass = false;                 // both ratios <= 1 + 1e-8
};

/// q0 <= q1 pointwise embeds with constant one in both space types.
MonotoneEmbedReport check_embeddings(const FunctionSequence& seq, const Exponent& p,
                                     const Exponent& q0, const Exponent& q1);

struct SandwichReport {
  double bMin = 0.0;   // l_{min(p,q)}(L_p)
  double mid = 0.0;    // L_p(l_q)
  double bMax = 0.0;   // l_{max(p,q)}(L_p)
  double ratioLeft = 0.0;   // mid / bMin
  double ratioRight = 0.0;  // bMax / mid
};

/// The three-space chain around L_p(l_q); requires pMax, qMax < inf.
SandwichReport mixed_sandwich(const FunctionSequence& seq, const Exponent& p,
                              const Exponent& q);

enum class EtaVariant { LpLq, LqLp };

struct EtaConvReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;      // measured constant
  double requiredR = 0.0;  // gate that R had to clear
};

/// Convolution stability against the kernels eta_{nu,R}: the sequence
/// (eta_{nu,R} * |f_nu|) measured against (f_nu) in the chosen mixed
/// space.  Gates: LpLq needs 1 < pMin <= pMax < inf, 1 < qMin <= qMax
/// < inf, R > n; LqLp needs pMin >= 1 and R > n + cLocal(1/q).
EtaConvReport check_eta_convolution(const FunctionSequence& seq, const Exponent& p,
                                    const Exponent& q, double R, EtaVariant variant);

/// Pointwise min / max of two exponents on a common grid.
Exponent pointwise_min(const Exponent& a, const Exponent& b);
Exponent pointwise_max(const Exponent& a, const Exponent& b);

}  // namespace varexp
