#include "varexp/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace varexp {

namespace {

constexpr std::int64_t kFullPairLimit = 512;   // all pairs up to this size
constexpr std::int64_t kPairSamples = 1000000;  // otherwise this many random pairs
constexpr std::uint64_t kPairSeed = 0x9e3779b97f4a7c15ull;

void finishStats(Exponent& e) {
  double rMin = kInf, rMax = 0.0;
  for (double r : e.recip) {
    rMin = std::min(rMin, r);
    rMax = std::max(rMax, r);
  }
  e.pMax = rMin == 0.0 ? kInf : 1.0 / rMin;
  e.pMin = rMax == 0.0 ? kInf : 1.0 / rMax;
}

double toRecip(double p) {
  if (std::isnan(p) || p <= 0.0)
    throw std::invalid_argument("Exponent: values must satisfy p > 0");
  return std::isinf(p) ? 0.0 : 1.0 / p;
}

}  // namespace

Exponent Exponent::constant(const Grid& g, double p) {
  Exponent e;
  e.grid = g;
  e.recip.assign(g.size(), toRecip(p));
  finishStats(e);
  if (std::isinf(p)) e.pInfty = kInf;
  return e;
}

Exponent Exponent::fromFunction(const Grid& g,
                                const std::function<double(double, double)>& p) {
  Exponent e;
  e.grid = g;
  e.recip.resize(g.size());
  for (std::int64_t i = 0; i < g.size(); ++i) {
    auto pt = g.point(i);
    e.recip[i] = toRecip(p(pt[0], pt[1]));
  }
  finishStats(e);
  return e;
}

Exponent Exponent::fromSamples(const Grid& g, std::vector<double> pValues) {
  if (static_cast<std::int64_t>(pValues.size()) != g.size())
    throw std::invalid_argument("Exponent: sample count does not match grid");
  Exponent e;
  e.grid = g;
  e.recip.resize(g.size());
  for (std::size_t i = 0; i < pValues.size(); ++i) e.recip[i] = toRecip(pValues[i]);
  finishStats(e);
  return e;
}

double Exponent::pAt(std::int64_t i) const {
  double r = recip[i];
  return r == 0.0 ? kInf : 1.0 / r;
}

double Exponent::evalAt(double x0, double x1) const {
  auto clampIdx = [&](double x) {
    int i = static_cast<int>(std::lround((x + grid.A) / grid.h));
    return std::clamp(i, 0, grid.N - 1);
  };
  return pAt(grid.flatten(clampIdx(x0), grid.n == 2 ? clampIdx(x1) : 0));
}

bool Exponent::isConstant() const {
  for (double r : recip)
    if (r != recip[0]) return false;
  return true;
}

Exponent Exponent::conjugate() const {
  if (pMin < 1.0)
    throw std::invalid_argument("Exponent::conjugate requires p >= 1");
  Exponent e;
  e.grid = grid;
  e.recip.resize(recip.size());
  for (std::size_t i = 0; i < recip.size(); ++i) e.recip[i] = 1.0 - recip[i];
  finishStats(e);
  if (pInfty) e.pInfty = *pInfty == 1.0 ? kInf : (std::isinf(*pInfty) ? 1.0 : *pInfty / (*pInfty - 1.0));
  return e;
}

Exponent Exponent::dividedBy(double r) const {
  if (!(r > 0) || std::isinf(r))
    throw std::invalid_argument("Exponent::dividedBy requires finite r > 0");
  Exponent e;
  e.grid = grid;
  e.recip.resize(recip.size());
  for (std::size_t i = 0; i < recip.size(); ++i) e.recip[i] = recip[i] * r;
  finishStats(e);
  if (pInfty) e.pInfty = std::isinf(*pInfty) ? kInf : *pInfty / r;
  return e;
}

Exponent Exponent::quotient(const Exponent& p, const Exponent& q) {
  if (!(p.grid == q.grid)) throw std::invalid_argument("Exponent::quotient: grid mismatch");
  if (std::isinf(q.pMax))
    throw std::invalid_argument("Exponent::quotient requires q finite");
  Exponent e;
  e.grid = p.grid;
  e.recip.resize(p.recip.size());
  for (std::size_t i = 0; i < p.recip.size(); ++i)
    e.recip[i] = p.recip[i] / q.recip[i];  // 1/(p/q) = q * (1/p)
  finishStats(e);
  return e;
}

namespace {

// Visits either all index pairs or a seeded random subset, depending on
// grid size, and feeds them to cb(i, k, dist).
template <class F>
std::int64_t forPairs(const Grid& g, F&& cb) {
  std::int64_t size = g.size();
  std::int64_t count = 0;
  if (size <= kFullPairLimit) {
    for (std::int64_t i = 0; i < size; ++i) {
      auto pi = g.point(i);
      for (std::int64_t k = i + 1; k < size; ++k) {
        auto pk = g.point(k);
        double d = g.n == 1 ? std::abs(pi[0] - pk[0])
                            : std::hypot(pi[0] - pk[0], pi[1] - pk[1]);
        cb(i, k, d);
        ++count;
      }
    }
    return count;
  }
  std::mt19937_64 rng(kPairSeed);
  std::uniform_int_distribution<std::int64_t> pick(0, size - 1);
  for (std::int64_t t = 0; t < kPairSamples; ++t) {
    std::int64_t i = pick(rng), k = pick(rng);
    if (i == k) continue;
    auto pi = g.point(i), pk = g.point(k);
    double d = g.n == 1 ? std::abs(pi[0] - pk[0])
                        : std::hypot(pi[0] - pk[0], pi[1] - pk[1]);
    cb(i, k, d);
    ++count;
  }
  // Always include adjacent pairs: the local constant is usually
  // attained at the smallest separations, which random pairs miss.
  for (std::int64_t i = 0; i + 1 < size; ++i) {
    auto [i0, i1] = g.split(i);
    if (g.n == 2 && i1 + 1 >= g.N) continue;
    cb(i, i + 1, g.h);
    ++count;
  }
  return count;
}

}  // namespace

LogHolderReport log_holder_constants(const Exponent& p) {
  LogHolderReport rep;
  const Grid& g = p.grid;

  double gInf;
  if (p.pInfty) {
    gInf = std::isinf(*p.pInfty) ? 0.0 : 1.0 / *p.pInfty;
  } else {
    // Estimate the limit from the outermost 5% shell of the box.
    double lo = 0.95 * g.A;
    double sum = 0.0;
    std::int64_t cnt = 0;
    for (std::int64_t i = 0; i < g.size(); ++i) {
      auto pt = g.point(i);
      double linf = g.n == 1 ? std::abs(pt[0]) : std::max(std::abs(pt[0]), std::abs(pt[1]));
      if (linf >= lo) {
        sum += p.recip[i];
        ++cnt;
      }
    }
    gInf = cnt > 0 ? sum / cnt : p.recip[0];
  }
  rep.pInfty = gInf == 0.0 ? kInf : 1.0 / gInf;

  double cLoc = 0.0;
  rep.pairsChecked = forPairs(g, [&](std::int64_t i, std::int64_t k, double d) {
    if (d <= 0.0) return;
    double diff = std::abs(p.recip[i] - p.recip[k]);
    cLoc = std::max(cLoc, diff * std::log(std::numbers::e + 1.0 / d));
  });
  rep.cLocal = cLoc;

  double cInf = 0.0;
  for (std::int64_t i = 0; i < g.size(); ++i)
    cInf = std::max(cInf, std::abs(p.recip[i] - gInf) *
                              std::log(std::numbers::e + g.radius(i)));
  rep.cInfty = cInf;
  return rep;
}

double sigma_rt(int n, double r, double t) {
  if (!(r > 0) || !(t > 0))
    throw std::invalid_argument("sigma_rt: exponents must be positive");
  double m = std::min({1.0, r, t});
  return n * (1.0 / m - 1.0);
}

double sigma_r(int n, double r) { return sigma_rt(n, r, r); }

double WeightSequence::atPoint(int j, double x0, double x1) const {
  auto clampIdx = [&](double x) {
    int i = static_cast<int>(std::lround((x + grid.A) / grid.h));
    return std::clamp(i, 0, grid.N - 1);
  };
  return w[j][grid.flatten(clampIdx(x0), grid.n == 2 ? clampIdx(x1) : 0)];
}

AdmissibilityReport verify_admissible(const WeightSequence& ws) {
  AdmissibilityReport rep;
  if (ws.levels() < 2) throw std::invalid_argument("verify_admissible: need >= 2 levels");
  for (const auto& lvl : ws.w)
    for (double x : lvl)
      if (!(x > 0.0) || !std::isfinite(x))
        throw std::invalid_argument("verify_admissible: weights must be positive finite");

  double cSpatial = 0.0;
  for (int j = 0; j < ws.levels(); ++j) {
    double scale = std::ldexp(1.0, j);
    forPairs(ws.grid, [&](std::int64_t i, std::int64_t k, double d) {
      double bound = std::pow(1.0 + scale * d, ws.alpha);
      double r = std::max(ws.w[j][i] / ws.w[j][k], ws.w[j][k] / ws.w[j][i]);
      cSpatial = std::max(cSpatial, r / bound);
    });
  }
  rep.cSpatial = cSpatial;

  double lo = kInf, hi = 0.0;
  for (int j = 0; j + 1 < ws.levels(); ++j) {
    double dn = std::exp2(ws.alpha1), up = std::exp2(ws.alpha2);
    for (std::int64_t i = 0; i < ws.grid.size(); ++i) {
      lo = std::min(lo, ws.w[j + 1][i] / (dn * ws.w[j][i]));
      hi = std::max(hi, ws.w[j + 1][i] / (up * ws.w[j][i]));
    }
  }
  rep.worstLower = lo;
  rep.worstUpper = hi;
  bool jumpOk = lo >= 1.0 - 1e-12 && hi <= 1.0 + 1e-12;
  rep.pass = jumpOk && std::isfinite(cSpatial);
  if (!jumpOk) rep.detail = "dyadic jump window violated";
  return rep;
}

WeightSequence make_weight_constant_s(const Grid& g, int levels, double s) {
  WeightSequence ws;
  ws.grid = g;
  ws.alpha = 0.0;
  ws.alpha1 = ws.alpha2 = s;
  ws.w.resize(levels);
  for (int j = 0; j < levels; ++j)
    ws.w[j].assign(g.size(), std::exp2(j * s));
  return ws;
}

WeightSequence make_weight_two_microlocal(const Grid& g, int levels, double s,
                                          double sprime, double x0, double x1) {
  WeightSequence ws;
  ws.grid = g;
  ws.alpha = std::abs(sprime);
  ws.alpha1 = s + std::min(sprime, 0.0);
  ws.alpha2 = s + std::max(sprime, 0.0);
  ws.w.resize(levels);
  for (int j = 0; j < levels; ++j) {
    double scale = std::ldexp(1.0, j);
    ws.w[j].resize(g.size());
    for (std::int64_t i = 0; i < g.size(); ++i) {
      auto p = g.point(i);
      double dist = g.n == 1 ? std::abs(p[0] - x0) : std::hypot(p[0] - x0, p[1] - x1);
      ws.w[j][i] = std::exp2(j * s) * std::pow(1.0 + scale * dist, sprime);
    }
  }
  return ws;
}

WeightSequence make_weight_variable_s(const Grid& g, int levels,
                                      const std::function<double(double, double)>& s) {
  std::vector<double> sv(g.size());
  double sMin = kInf, sMax = -kInf;
  for (std::int64_t i = 0; i < g.size(); ++i) {
    auto p = g.point(i);
    sv[i] = s(p[0], p[1]);
    if (!std::isfinite(sv[i]))
      throw std::invalid_argument("make_weight_variable_s: s must be finite");
    sMin = std::min(sMin, sv[i]);
    sMax = std::max(sMax, sv[i]);
  }

  // Spatial regularity of 2^{j s(x)} is driven by the log-Holder modulus
  // of s; measure it and convert to a growth exponent in base 2.
  double cLog = 0.0;
  forPairs(g, [&](std::int64_t i, std::int64_t k, double d) {
    if (d <= 0.0) return;
    cLog = std::max(cLog, std::abs(sv[i] - sv[k]) * std::log(std::numbers::e + 1.0 / d));
  });

  WeightSequence ws;
  ws.grid = g;
  ws.alpha = cLog * std::log2(std::numbers::e);
  ws.alpha1 = sMin;
  ws.alpha2 = sMax;
  ws.w.resize(levels);
  for (int j = 0; j < levels; ++j) {
    ws.w[j].resize(g.size());
    for (std::int64_t i = 0; i < g.size(); ++i) ws.w[j][i] = std::exp2(j * sv[i]);
  }
  return ws;
}

}  // namespace varexp
