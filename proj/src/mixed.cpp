#include "varexp/mixed.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "modular_kernel.hpp"

namespace varexp {

FunctionSequence::FunctionSequence(const Grid& g, int count) : grid(g) {
  levels.assign(count, GridFunction(g));
}

void FunctionSequence::push(GridFunction f) {
  if (levels.empty()) grid = f.grid;
  levels.push_back(std::move(f));
}

void FunctionSequence::validate() const {
  if (levels.empty())
    throw std::invalid_argument("FunctionSequence: at least one level required");
  for (const auto& f : levels)
    if (!(f.grid == grid))
      throw std::invalid_argument("FunctionSequence: level grid mismatch");
}

namespace {

void checkGrids(const FunctionSequence& seq, const Exponent& p, const Exponent& q) {
  seq.validate();
  if (!(p.grid == seq.grid) || !(q.grid == seq.grid))
    throw std::invalid_argument("mixed norm: exponent grid mismatch");
}

// Per-level kernels for the lq(Lp) scalar solves.
std::vector<detail::ModularKernel> buildKernels(const FunctionSequence& seq,
                                                const Exponent& p,
                                                const Exponent& q) {
  std::vector<detail::ModularKernel> ks;
  ks.reserve(seq.levels.size());
  for (const auto& f : seq.levels)
    ks.push_back(detail::ModularKernel::build(f, p, &q));
  return ks;
}

// sum_nu inf{lambda : rho_p(f_nu / (e^u lambda^{1/q})) <= 1}, reusing
// previous inner roots as warm starts.
double levelSum(const std::vector<detail::ModularKernel>& ks, double u,
                double relTol, std::vector<double>& warm) {
  double total = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (ks[i].empty()) continue;
    detail::LogSolveResult s = detail::solve_scale(ks[i], u, relTol, warm[i]);
    if (s.infeasible) return kInf;
    warm[i] = s.v;
    if (!(std::isinf(s.v) && s.v < 0)) total += std::exp(s.v);
    if (total > 4.0) return total;  // early exit: far above the unit ball
  }
  return total;
}

}  // namespace

NormResult norm_Lp_lq(const FunctionSequence& seq, const Exponent& p,
                      const Exponent& q, double relTol) {
  checkGrids(seq, p, q);
  const Grid& g = seq.grid;
  GridFunction pointwise(g);
  for (std::int64_t i = 0; i < g.size(); ++i) {
    double m = 0.0;
    for (const auto& f : seq.levels) m = std::max(m, std::abs(f.v[i]));
    if (m == 0.0) continue;
    double rq = q.recip[i];
    if (rq == 0.0) {
      pointwise.v[i] = m;
      continue;
    }
    double qx = 1.0 / rq;
    double s = 0.0;
    for (const auto& f : seq.levels) s += std::pow(std::abs(f.v[i]) / m, qx);
    pointwise.v[i] = m * std::pow(s, rq);
  }
  return luxemburg_norm(pointwise, p, relTol);
}

double modular_lq_Lp(const FunctionSequence& seq, const Exponent& p,
                     const Exponent& q, double relTol) {
  checkGrids(seq, p, q);
  auto ks = buildKernels(seq, p, q);
  double total = 0.0;
  for (const auto& k : ks) {
    if (k.empty()) continue;
    detail::LogSolveResult s = detail::solve_scale(k, 0.0, relTol);
    if (s.infeasible) return kInf;
    if (!(std::isinf(s.v) && s.v < 0)) total += std::exp(s.v);
  }
  return total;
}

double modular_lq_Lp_fast(const FunctionSequence& seq, const Exponent& p,
                          const Exponent& q, double relTol) {
  checkGrids(seq, p, q);
  if (std::isinf(q.pMax))
    throw std::invalid_argument("modular_lq_Lp_fast: requires qMax < inf");
  Exponent poq = Exponent::quotient(p, q);
  double total = 0.0;
  for (const auto& f : seq.levels) {
    GridFunction g(seq.grid);
    for (std::int64_t i = 0; i < seq.grid.size(); ++i) {
      double t = std::abs(f.v[i]);
      g.v[i] = t == 0.0 ? 0.0 : std::pow(t, 1.0 / q.recip[i]);
    }
    total += luxemburg_norm(g, poq, relTol).value;
  }
  return total;
}

NormResult norm_lq_Lp(const FunctionSequence& seq, const Exponent& p,
                      const Exponent& q, double relTol) {
  if (!(relTol > 0) || relTol >= 1)
    throw std::invalid_argument("norm_lq_Lp: relTol must lie in (0,1)");
  checkGrids(seq, p, q);
  auto ks = buildKernels(seq, p, q);
  bool allEmpty = true;
  for (const auto& k : ks) allEmpty = allEmpty && k.empty();
  if (allEmpty) return {};

  // Inner roots get solved to a slightly tighter tolerance than the
  // outer scale so the predicate S(u) <= 1 stays reliable.
  double innerTol = relTol * 0.25;
  std::vector<double> warm(ks.size(), kInf);

  double u = 0.0;
  double S = levelSum(ks, u, innerTol, warm);
  double uLo, uHi;
  const double step = std::log(4.0);
  int guard = 0;
  if (S > 1.0) {
    uLo = u;
    do {
      u += step;
      S = levelSum(ks, u, innerTol, warm);
      if (++guard > 300) throw std::runtime_error("norm_lq_Lp: bracket failure");
    } while (S > 1.0);
    uHi = u;
  } else {
    uHi = u;
    do {
      u -= step;
      S = levelSum(ks, u, innerTol, warm);
      if (++guard > 300) throw std::runtime_error("norm_lq_Lp: bracket failure");
    } while (S <= 1.0);
    uLo = u;
  }

  double tol = std::log1p(relTol);
  int iter = 0;
  while (uHi - uLo > tol && iter < 300) {
    ++iter;
    double mid = 0.5 * (uLo + uHi);
    if (levelSum(ks, mid, innerTol, warm) > 1.0)
      uLo = mid;
    else
      uHi = mid;
  }
  NormResult out;
  out.value = std::exp(0.5 * (uLo + uHi));
  out.lo = std::exp(uLo);
  out.hi = std::exp(uHi);
  out.iterations = iter;
  return out;
}

NormResult tail_norm(const FunctionSequence& seq, const Exponent& p,
                     const Exponent& q, MixedSpace space, int T, double relTol) {
  seq.validate();
  if (T < 0 || T > seq.count())
    throw std::invalid_argument("tail_norm: T out of range [0, count]");
  if (T == seq.count()) return {};
  FunctionSequence tail;
  tail.grid = seq.grid;
  for (int nu = 0; nu < seq.count(); ++nu)
    tail.push(nu >= T ? seq.levels[nu] : GridFunction(seq.grid));
  return space == MixedSpace::LpLq ? norm_Lp_lq(tail, p, q, relTol)
                                   : norm_lq_Lp(tail, p, q, relTol);
}

MonotoneEmbedReport check_embeddings(const FunctionSequence& seq, const Exponent& p,
                                     const Exponent& q0, const Exponent& q1) {
  checkGrids(seq, p, q0);
  for (std::int64_t i = 0; i < seq.grid.size(); ++i)
    if (q0.recip[i] < q1.recip[i] - 1e-15)
      throw std::invalid_argument("check_embeddings: q0 <= q1 must hold pointwise");
  MonotoneEmbedReport rep;
  rep.lqLp0 = norm_lq_Lp(seq, p, q0).value;
  rep.lqLp1 = norm_lq_Lp(seq, p, q1).value;
  rep.LpLq0 = norm_Lp_lq(seq, p, q0).value;
  rep.LpLq1 = norm_Lp_lq(seq, p, q1).value;
  rep.pass = rep.lqLp1 <= rep.lqLp0 * (1.0 + 1e-8) &&
             rep.LpLq1 <= rep.LpLq0 * (1.0 + 1e-8);
  return rep;
}

SandwichReport mixed_sandwich(const FunctionSequence& seq, const Exponent& p,
                              const Exponent& q) {
  checkGrids(seq, p, q);
  if (std::isinf(p.pMax) || std::isinf(q.pMax))
    throw std::invalid_argument("mixed_sandwich: requires pMax, qMax < inf");
  SandwichReport rep;
  rep.bMin = norm_lq_Lp(seq, p, pointwise_min(p, q)).value;
  rep.mid = norm_Lp_lq(seq, p, q).value;
  rep.bMax = norm_lq_Lp(seq, p, pointwise_max(p, q)).value;
  rep.ratioLeft = rep.bMin > 0 ? rep.mid / rep.bMin : 0.0;
  rep.ratioRight = rep.mid > 0 ? rep.bMax / rep.mid : 0.0;
  return rep;
}

EtaConvReport check_eta_convolution(const FunctionSequence& seq, const Exponent& p,
                                    const Exponent& q, double R, EtaVariant variant) {
  checkGrids(seq, p, q);
  const int n = seq.grid.n;
  EtaConvReport rep;
  if (variant == EtaVariant::LpLq) {
    if (!(p.pMin > 1.0) || std::isinf(p.pMax) || !(q.pMin > 1.0) || std::isinf(q.pMax))
      throw std::invalid_argument(
          "check_eta_convolution: LpLq variant needs 1 < p,q < inf");
    rep.requiredR = n;
  } else {
    if (p.pMin < 1.0)
      throw std::invalid_argument("check_eta_convolution: LqLp variant needs p >= 1");
    rep.requiredR = n + log_holder_constants(q).cLocal;
  }
  if (!(R > rep.requiredR))
    throw std::invalid_argument("check_eta_convolution: R below the gate");

  FunctionSequence conv;
  conv.grid = seq.grid;
  for (int nu = 0; nu < seq.count(); ++nu)
    conv.push(convolve(eta_kernel(seq.grid, nu, R), abs(seq.levels[nu])));

  if (variant == EtaVariant::LpLq) {
    rep.lhs = norm_Lp_lq(conv, p, q).value;
    rep.rhs = norm_Lp_lq(seq, p, q).value;
  } else {
    rep.lhs = norm_lq_Lp(conv, p, q).value;
    rep.rhs = norm_lq_Lp(seq, p, q).value;
  }
  rep.ratio = rep.rhs > 0 ? rep.lhs / rep.rhs : 0.0;
  return rep;
}

namespace {
Exponent combineRecip(const Exponent& a, const Exponent& b, bool takeMin) {
  if (!(a.grid == b.grid))
    throw std::invalid_argument("pointwise exponent combine: grid mismatch");
  Exponent e;
  e.grid = a.grid;
  e.recip.resize(a.recip.size());
  for (std::size_t i = 0; i < a.recip.size(); ++i)
    // smaller p means larger reciprocal
    e.recip[i] = takeMin ? std::max(a.recip[i], b.recip[i])
                         : std::min(a.recip[i], b.recip[i]);
  double rMin = kInf, rMax = 0.0;
  for (double r : e.recip) {
    rMin = std::min(rMin, r);
    rMax = std::max(rMax, r);
  }
  e.pMax = rMin == 0.0 ? kInf : 1.0 / rMin;
  e.pMin = rMax == 0.0 ? kInf : 1.0 / rMax;
  return e;
}
}  // namespace

Exponent pointwise_min(const Exponent& a, const Exponent& b) {
  return combineRecip(a, b, true);
}
Exponent pointwise_max(const Exponent& a, const Exponent& b) {
  return combineRecip(a, b, false);
}

}  // namespace varexp
