#include "varexp/modular.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "modular_kernel.hpp"

namespace varexp {

double phi_p(double t, double p) {
  if (std::isnan(p) || p <= 0.0) throw std::invalid_argument("phi_p: p must be > 0");
  if (t < 0.0) throw std::invalid_argument("phi_p: t must be >= 0");
  if (std::isinf(p)) return t <= 1.0 + detail::kTie ? 0.0 : kInf;
  return std::pow(t, p);
}

double semimodular(const GridFunction& f, const Exponent& p) {
  if (!(f.grid == p.grid))
    throw std::invalid_argument("semimodular: grid mismatch");
  double sum = 0.0;
  for (std::int64_t i = 0; i < f.grid.size(); ++i) {
    double t = std::abs(f.v[i]);
    if (t == 0.0) continue;
    double r = p.recip[i];
    if (r == 0.0) {
      if (t > 1.0 + detail::kTie) return kInf;
    } else {
      sum += std::pow(t, 1.0 / r);
    }
  }
  return f.grid.cellVolume() * sum;
}

NormResult luxemburg_norm(const GridFunction& f, const Exponent& p, double relTol) {
  if (!(relTol > 0) || relTol >= 1)
    throw std::invalid_argument("luxemburg_norm: relTol must lie in (0,1)");
  detail::ModularKernel k = detail::ModularKernel::build(f, p, nullptr);
  if (k.empty()) return {};
  detail::LogSolveResult s = detail::solve_scale(k, 0.0, relTol);
  if (s.infeasible)
    throw std::runtime_error("luxemburg_norm: no admissible scale");  // cannot happen
  NormResult out;
  out.value = std::isinf(s.v) && s.v < 0 ? 0.0 : std::exp(s.v);
  out.lo = std::isinf(s.lo) && s.lo < 0 ? 0.0 : std::exp(s.lo);
  out.hi = std::isinf(s.hi) && s.hi < 0 ? 0.0 : std::exp(s.hi);
  out.iterations = s.iterations;
  return out;
}

UnitBallReport check_unit_ball(const GridFunction& f, const Exponent& p) {
  UnitBallReport rep;
  rep.norm = luxemburg_norm(f, p).value;
  rep.modular = semimodular(f, p);
  rep.boundary = std::abs(rep.norm - 1.0) <= 1e-9 ||
                 (std::isfinite(rep.modular) && std::abs(rep.modular - 1.0) <= 1e-9);
  rep.consistent = rep.boundary || ((rep.norm <= 1.0) == (rep.modular <= 1.0));
  return rep;
}

NormModularReport norm_modular_bounds(const GridFunction& f, const Exponent& p) {
  if (std::isinf(p.pMax))
    throw std::invalid_argument("norm_modular_bounds: requires pMax < inf");
  NormModularReport rep;
  rep.norm = luxemburg_norm(f, p).value;
  rep.modular = semimodular(f, p);
  double a = std::pow(rep.modular, 1.0 / p.pMin);
  double b = std::pow(rep.modular, 1.0 / p.pMax);
  rep.lower = std::min(a, b);
  rep.upper = std::max(a, b);
  rep.pass = rep.lower <= rep.norm * (1.0 + 1e-8) &&
             rep.norm <= rep.upper * (1.0 + 1e-8);
  return rep;
}

HolderReport holder_check(const GridFunction& f, const GridFunction& g,
                          const Exponent& p) {
  if (p.pMin < 1.0)
    throw std::invalid_argument("holder_check: requires p >= 1");
  HolderReport rep;
  rep.lhs = std::abs(integrate(abs(pointwiseMul(f, g))));
  double nf = luxemburg_norm(f, p).value;
  double ng = luxemburg_norm(g, p.conjugate()).value;
  rep.rhs = 2.0 * nf * ng;
  rep.ratio = nf * ng > 0.0 ? rep.lhs / (nf * ng) : 0.0;
  rep.pass = rep.lhs <= rep.rhs * (1.0 + 1e-9);
  return rep;
}

GridFunction box_indicator(const Grid& g, std::array<double, 2> center,
                           double halfWidth) {
  if (halfWidth < 2.0 * g.h - 1e-15) {
    int required = g.N;
    while (2.0 * g.A / required > halfWidth / 2.0) required *= 2;
    throw std::invalid_argument("box_indicator: grid too coarse, need N >= " +
                                std::to_string(required));
  }
  double tol = 1e-9 * g.h;
  GridFunction out(g);
  for (std::int64_t i = 0; i < g.size(); ++i) {
    auto p = g.point(i);
    bool in = true;
    for (int a = 0; a < g.n; ++a)
      if (p[a] < center[a] - halfWidth - tol || p[a] > center[a] + halfWidth + tol)
        in = false;
    if (in) out.v[i] = 1.0;
  }
  return out;
}

CharfunReport charfun_norm_scaling(const Exponent& p, int jMin, int jMax) {
  if (jMin > jMax) throw std::invalid_argument("charfun_norm_scaling: jMin > jMax");
  const Grid& g = p.grid;
  double pInfty = log_holder_constants(p).pInfty;

  CharfunReport rep;
  double rMin = kInf, rMax = 0.0;
  for (int j = jMin; j <= jMax; ++j) {
    double side = std::ldexp(1.0, -j);
    if (side / 2.0 > g.A) continue;  // cube would not fit in the box
    CharfunRow row;
    row.j = j;
    row.volume = std::pow(side, g.n);
    GridFunction chi = box_indicator(g, {0.0, 0.0}, side / 2.0);
    row.norm = luxemburg_norm(chi, p).value;
    double expo = row.volume <= 1.0 ? p.evalAt(0.0, 0.0) : pInfty;
    row.predicted = std::isinf(expo) ? 1.0 : std::pow(row.volume, 1.0 / expo);
    row.ratio = row.norm / row.predicted;
    rMin = std::min(rMin, row.ratio);
    rMax = std::max(rMax, row.ratio);
    rep.rows.push_back(row);
  }
  if (rep.rows.empty())
    throw std::invalid_argument("charfun_norm_scaling: no representable cubes");
  rep.spread = rMax / rMin;
  return rep;
}

}  // namespace varexp
