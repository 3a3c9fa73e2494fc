#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "varexp/grid.hpp"

namespace varexp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Variable exponent p : box -> (0, inf], stored through its reciprocal
/// 1/p in [0, 1/pMin] so that p = inf is the honest sample value 0 and
/// pointwise algebra (duality, quotients) stays exact.
struct Exponent {
  Grid grid;
  std::vector<double> recip;   // 1/p(x_i); 0 encodes p = inf
  double pMin = 1.0;           // essential inf over samples
  double pMax = 1.0;           // essential sup (may be kInf)
  std::optional<double> pInfty;  // declared limit at infinity, if any

  static Exponent constant(const Grid& g, double p);
  static Exponent fromFunction(const Grid& g,
                               const std::function<double(double, double)>& p);
  static Exponent fromSamples(const Grid& g, std::vector<double> pValues);

  double recipAt(std::int64_t i) const { return recip[i]; }
  double pAt(std::int64_t i) const;
  /// Value at an off-grid point (nearest sample).
  double evalAt(double x0, double x1 = 0.0) const;

  bool isConstant() const;

  /// Conjugate exponent 1/p + 1/p' = 1.  Requires pMin >= 1.
  Exponent conjugate() const;
  /// p/r for a positive scalar r.
  Exponent dividedBy(double r) const;
  /// Pointwise quotient p/q; requires q finite everywhere.
  static Exponent quotient(const Exponent& p, const Exponent& q);
};

/// Log-Holder diagnostics of the reciprocal 1/p: the local modulus
/// constant, the decay constant towards the limit value, and the limit
/// used.  When no limit is declared it is estimated from the average of
/// 1/p over the outermost shell of the box.
struct LogHolderReport {
  double cLocal = 0.0;   // max |g(x)-g(y)| log(e + 1/|x-y|)
  double cInfty = 0.0;   // max |g(x)-g_inf| log(e + |x|)
  double pInfty = 0.0;   // limit value of p used for cInfty
  std::int64_t pairsChecked = 0;
};

LogHolderReport log_holder_constants(const Exponent& p);

/// n(1/min{1,r,t} - 1); throws unless r, t > 0.
double sigma_rt(int n, double r, double t);
double sigma_r(int n, double r);

/// Weight sequence (w_j)_{j=0..levels-1}, each w_j positive on the grid,
/// with declared regularity: growth exponent alpha for the spatial
/// comparison w_j(x) <= c w_j(y) (1+2^j|x-y|)^alpha and the dyadic
/// jump window 2^{alpha1} w_j <= w_{j+1} <= 2^{alpha2} w_j.
struct WeightSequence {
  Grid grid;
  std::vector<std::vector<double>> w;
  double alpha = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;

  int levels() const { return static_cast<int>(w.size()); }
  double at(int j, std::int64_t i) const { return w[j][i]; }
  double atPoint(int j, double x0, double x1 = 0.0) const;
};

struct AdmissibilityReport {
  bool pass = false;
  double cSpatial = 0.0;     // measured constant for the comparison (i)
  double worstLower = 0.0;   // min over j,x of w_{j+1}/(2^{alpha1} w_j)
  double worstUpper = 0.0;   // max over j,x of w_{j+1}/(2^{alpha2} w_j)
  std::string detail;
};

/// Checks both admissibility conditions; (i) is reported through the
/// measured constant (finite => pass), (ii) within relative 1e-12.
AdmissibilityReport verify_admissible(const WeightSequence& w);

WeightSequence make_weight_constant_s(const Grid& g, int levels, double s);
WeightSequence make_weight_two_microlocal(const Grid& g, int levels, double s,
                                          double sprime, double x0, double x1 = 0.0);
/// w_j(x) = 2^{j s(x)}; alpha is derived from the measured log-Holder
/// constant of s.
WeightSequence make_weight_variable_s(const Grid& g, int levels,
                                      const std::function<double(double, double)>& s);

}  // namespace varexp
