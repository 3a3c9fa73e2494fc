#include "modular_kernel.hpp"

#include <map>
#include <stdexcept>

namespace varexp::detail {

namespace {
constexpr double kExpCap = 700.0;  // beyond this exp() overflows
}

ModularKernel ModularKernel::build(const GridFunction& f, const Exponent& p,
                                   const Exponent* qOrNull) {
  if (!(f.grid == p.grid))
    throw std::invalid_argument("modular: function/exponent grid mismatch");
  if (qOrNull && !(f.grid == qOrNull->grid))
    throw std::invalid_argument("modular: function/inner-exponent grid mismatch");

  ModularKernel k;
  k.cellVol = f.grid.cellVolume();

  // Group finite-exponent cells by their exact (p, p/q) pair; fall back
  // to per-cell storage when the exponents take too many values.
  std::map<std::pair<double, double>, std::pair<double, double>> groups;
  bool tooMany = false;
  std::vector<double> genLogAbs, genP, genPoq;

  for (std::int64_t i = 0; i < f.grid.size(); ++i) {
    double absVal = std::abs(f.v[i]);
    if (!(absVal > 0.0)) continue;
    double a = std::log(absVal);
    k.maxLogAbs = std::max(k.maxLogAbs, a);
    double rp = p.recip[i];
    double rq = qOrNull ? qOrNull->recip[i] : 1.0;
    if (rp == 0.0 && rq == 0.0) {
      k.bothInfLogAbs = std::max(k.bothInfLogAbs, a);
      continue;
    }
    if (rp == 0.0) {  // p = inf, q finite: pure constraint cell
      k.pinfLogAbs.push_back(a);
      k.pinfQ.push_back(1.0 / rq);
      continue;
    }
    double pv = 1.0 / rp;
    k.pMinFinite = std::min(k.pMinFinite, pv);
    if (rq == 0.0) {  // q = inf, p finite: v-independent mass
      k.qinfLogAbs.push_back(a);
      k.qinfP.push_back(pv);
      continue;
    }
    double poq = pv * rq;
    genLogAbs.push_back(a);
    genP.push_back(pv);
    genPoq.push_back(poq);
    if (!tooMany) {
      auto& slot = groups[{pv, poq}];
      if (slot.first == 0.0) slot.second = -kInf;
      slot.first += std::pow(absVal, pv);
      slot.second = std::max(slot.second, a);
      if (groups.size() > kBucketLimit) tooMany = true;
    }
  }

  if (!tooMany) {
    k.bucketed = true;
    for (const auto& [key, val] : groups) {
      k.buckets.push_back({key.first, key.second, k.cellVol * val.first});
      k.logAbs.push_back(val.second);  // per-bucket max log|f|
    }
  } else {
    k.logAbs = std::move(genLogAbs);
    k.pArr = std::move(genP);
    k.poqArr = std::move(genPoq);
  }
  return k;
}

namespace {

// Uniform view over bucketed / per-cell term storage.
struct TermView {
  const ModularKernel& k;
  std::size_t size() const { return k.bucketed ? k.buckets.size() : k.pArr.size(); }
  double lc(std::size_t i) const {
    return k.bucketed ? std::log(k.buckets[i].coef)
                      : std::log(k.cellVol) + k.pArr[i] * k.logAbs[i];
  }
  double p(std::size_t i) const { return k.bucketed ? k.buckets[i].p : k.pArr[i]; }
  double poq(std::size_t i) const {
    return k.bucketed ? k.buckets[i].poq : k.poqArr[i];
  }
  double aMax(std::size_t i) const { return k.logAbs[i]; }
};

}  // namespace

double ModularKernel::eval(double u, double v, double* dv) const {
  double F = 0.0, dF = 0.0;
  if (bucketed) {
    for (const Bucket& b : buckets) {
      double arg = -b.p * u - b.poq * v;
      if (arg > kExpCap) {
        if (dv) *dv = -kInf;
        return kInf;
      }
      double t = b.coef * std::exp(arg);
      F += t;
      dF -= b.poq * t;
    }
  } else {
    for (std::size_t i = 0; i < pArr.size(); ++i) {
      double arg = pArr[i] * (logAbs[i] - u) - poqArr[i] * v;
      if (arg > kExpCap) {
        if (dv) *dv = -kInf;
        return kInf;
      }
      double t = cellVol * std::exp(arg);
      F += t;
      dF -= poqArr[i] * t;
    }
  }
  if (dv) *dv = dF;
  return F;
}

double ModularKernel::evalQInf(double u) const {
  double F = 0.0;
  for (std::size_t i = 0; i < qinfP.size(); ++i) {
    double arg = qinfP[i] * (qinfLogAbs[i] - u);
    if (arg > kExpCap) return kInf;
    F += cellVol * std::exp(arg);
  }
  return F;
}

double ModularKernel::vLowerBound(double u) const {
  double v = -kInf;
  double slack = std::log1p(kTie);
  for (std::size_t i = 0; i < pinfQ.size(); ++i)
    v = std::max(v, pinfQ[i] * (pinfLogAbs[i] - u - slack));
  return v;
}

LogSolveResult solve_scale(const ModularKernel& k, double u, double relTol,
                           double warmHint) {
  if (!(relTol > 0) || relTol >= 1)
    throw std::invalid_argument("solve_scale: relTol must lie in (0,1)");
  LogSolveResult res;
  if (!k.feasible(u)) {
    res.infeasible = true;
    return res;
  }
  double C = k.evalQInf(u);
  double vMin = k.vLowerBound(u);

  TermView view{k};
  if (view.size() == 0) {
    if (C > 1.0 + kTie) {
      res.infeasible = true;
      return res;
    }
    res.v = res.lo = res.hi = vMin;  // may be -inf: scale can shrink to 0
    res.clamped = true;
    return res;
  }

  double target = 1.0 - C;
  if (!(target > 1e-300)) {
    res.infeasible = true;
    return res;
  }
  double lnTarget = std::log(target);

  double poqMin = kInf;
  for (std::size_t i = 0; i < view.size(); ++i)
    poqMin = std::min(poqMin, view.poq(i));

  // Analytic bracket: at vLo a single term alone reaches the target; at
  // vSafe every term is at most the cell mass, and one decay step of the
  // slowest rate poqMin pushes the whole sum below the target.
  double vLo = kInf, vSafe = -kInf;
  for (std::size_t i = 0; i < view.size(); ++i) {
    vLo = std::min(vLo, (view.lc(i) - view.p(i) * u - lnTarget) / view.poq(i));
    vSafe = std::max(vSafe, (view.p(i) / view.poq(i)) * (view.aMax(i) - u));
  }
  double fSafe = k.eval(u, vSafe);
  double vHi = vSafe + std::max(0.0, std::log(fSafe / target)) / poqMin + 1e-12;
  for (int guard = 0; k.eval(u, vHi) > target; ++guard) {
    if (guard > 100) throw std::runtime_error("solve_scale: bracket expansion failed");
    vHi += std::max(1.0, vHi - vLo);
  }

  if (std::isfinite(warmHint) && warmHint > vLo && warmHint < vHi) {
    if (k.eval(u, warmHint) > target)
      vLo = warmHint;
    else
      vHi = warmHint;
  }

  double tol = std::log1p(relTol);
  int iter = 0;
  while (vHi - vLo > tol && iter < 200) {
    ++iter;
    double dF;
    double F = k.eval(u, vLo, &dF);
    double vNext;
    if (std::isfinite(F) && F > 0.0 && dF < 0.0) {
      // Newton on ln F from the low side; by log-convexity the tangent
      // root never overshoots, so it is a fresh lower bound.
      vNext = vLo + std::log(F / target) * (F / -dF);
      if (!(vNext > vLo) || !(vNext < vHi)) vNext = 0.5 * (vLo + vHi);
    } else {
      vNext = 0.5 * (vLo + vHi);
    }
    if (k.eval(u, vNext) > target)
      vLo = vNext;
    else
      vHi = vNext;
  }
  res.iterations = iter;
  res.lo = vLo;
  res.hi = vHi;
  res.v = 0.5 * (vLo + vHi);
  if (vMin > res.v) {
    res.v = res.lo = res.hi = vMin;
    res.clamped = true;
  }
  return res;
}

}  // namespace varexp::detail
