#pragma once

#include <string>

#include "varexp/exponent.hpp"
#include "varexp/grid.hpp"

namespace varexp {

/// phi_p(t): t^p for finite p; for p = inf, 0 when t <= 1 and inf
/// otherwise (ties resolved within relative 1e-14).
double phi_p(double t, double p);

/// rho_{p(.)}(f) = integral of phi_{p(x)}(|f(x)|); may be +inf.
double semimodular(const GridFunction& f, const Exponent& p);

/// Result of a norm computation: the value together with the final
/// enclosing bracket and iteration count of the scalar solve.
struct NormResult {
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int iterations = 0;
};

/// Luxemburg quasi-norm inf{lambda > 0 : rho(f/lambda) <= 1}.
/// relTol bounds the final bracket width relative to the value.
NormResult luxemburg_norm(const GridFunction& f, const Exponent& p,
                          double relTol = 1e-10);

struct UnitBallReport {
  double norm = 0.0;
  double modular = 0.0;
  bool consistent = false;  // norm <= 1 iff modular <= 1 (away from ties)
  bool boundary = false;    // within tolerance of the unit sphere
};

/// Checks the unit-ball property: the norm is <= 1 exactly when the
/// modular is <= 1.  Cases within 1e-9 of either boundary are flagged
/// and counted consistent.
UnitBallReport check_unit_ball(const GridFunction& f, const Exponent& p);

struct NormModularReport {
  double norm = 0.0;
  double modular = 0.0;
  double lower = 0.0;  // min(rho^{1/pMin}, rho^{1/pMax})
  double upper = 0.0;  // max(rho^{1/pMin}, rho^{1/pMax})
  bool pass = false;
};

/// min/max{rho^{1/pMin}, rho^{1/pMax}} sandwich around the norm.
/// Requires pMax < inf.
NormModularReport norm_modular_bounds(const GridFunction& f, const Exponent& p);

struct HolderReport {
  double lhs = 0.0;    // integral |f g|
  double rhs = 0.0;    // 2 ||f||_p ||g||_p'
  double ratio = 0.0;  // lhs / (||f||_p ||g||_p')
  bool pass = false;
};

/// integral |f g| <= 2 ||f|L_p|| ||g|L_p'||; requires pMin >= 1.
HolderReport holder_check(const GridFunction& f, const GridFunction& g,
                          const Exponent& p);

struct CharfunRow {
  int j = 0;
  double volume = 0.0;     // |Q|
  double norm = 0.0;       // ||chi_Q|L_p||
  double predicted = 0.0;  // |Q|^{1/p(center)} or |Q|^{1/pInfty}
  double ratio = 0.0;
};

struct CharfunReport {
  std::vector<CharfunRow> rows;
  double spread = 0.0;  // max ratio / min ratio
};

/// Norm of cube indicators across scales: side 2^{-j} for j in
/// [jMin, jMax] (negative j gives big cubes, handled through p at
/// infinity).  Cubes are centred at the origin.
CharfunReport charfun_norm_scaling(const Exponent& p, int jMin, int jMax);

/// Indicator of the axis-aligned box around `center` with half width
/// `halfWidth` (closed); shared by the big-cube paths.
GridFunction box_indicator(const Grid& g, std::array<double, 2> center,
                           double halfWidth);

}  // namespace varexp
