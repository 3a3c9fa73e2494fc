#include "varexp/lp_analysis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace varexp {

double AdmissiblePair::lowPass(double r) const {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  double t = r - 1.0;
  if (profile == PairProfile::CosineBump) {
    double c = std::cos(0.5 * std::numbers::pi * t);
    return c * c;
  }
  // quintic smoothstep taper: C^2 glue, all polynomial
  return 1.0 - t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double AdmissiblePair::symbol(int j, double r) const {
  if (j == 0) return lowPass(r);
  double rs = std::ldexp(r, -j);
  return lowPass(rs) - lowPass(2.0 * rs);
}

AdmissiblePair AdmissiblePair::make(PairProfile profile) {
  AdmissiblePair pair;
  pair.profile = profile;
  const int samples = 4096;
  double lo = 3.0 / 5.0, hi = 5.0 / 3.0;
  double minV = kInf;
  for (int i = 0; i <= samples; ++i) {
    double r = lo + (hi - lo) * i / samples;
    minV = std::min(minV, pair.band(r));
  }
  pair.lowerBound = minV;
  if (!(minV > 0.0))
    throw std::logic_error("AdmissiblePair: band profile vanishes on the core annulus");
  return pair;
}

namespace {

void requireBandCoverage(const Grid& g, int Jmax) {
  if (Jmax < 0) throw std::invalid_argument("lp_blocks: Jmax must be >= 0");
  double top = std::ldexp(1.0, Jmax + 1);
  double cutoff = std::numbers::pi / g.h;
  if (top > cutoff + 1e-12) {
    std::int64_t need = 16;
    while (std::numbers::pi * need / (2.0 * g.A) < top) need *= 2;
    throw std::invalid_argument(
        "lp_blocks: top band 2^{Jmax+1} exceeds the frequency grid; need N >= " +
        std::to_string(need));
  }
}

}  // namespace

FunctionSequence lp_blocks(const GridFunction& f, const AdmissiblePair& pair,
                           int Jmax) {
  requireBandCoverage(f.grid, Jmax);
  FunctionSequence blocks;
  for (int j = 0; j <= Jmax; ++j) {
    auto mhat = radial_multiplier(f.grid, [&](double r) { return pair.symbol(j, r); });
    blocks.push(apply_multiplier(f, mhat));
  }
  return blocks;
}

double partition_residual(const Grid& g, const AdmissiblePair& pair, int Jmax) {
  requireBandCoverage(g, Jmax);
  Grid fg = g.fourierGrid();
  double worst = 0.0;
  double cover = std::ldexp(1.0, Jmax);
  for (std::int64_t i = 0; i < fg.size(); ++i) {
    auto xi = fg.point(i);
    double r = g.n == 1 ? std::abs(xi[0]) : std::hypot(xi[0], xi[1]);
    if (r > cover) continue;
    double sum = 0.0;
    for (int j = 0; j <= Jmax; ++j) sum += pair.symbol(j, r);
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

namespace {

FunctionSequence weightedBlocks(const GridFunction& f, const WeightSequence& w,
                                const AdmissiblePair& pair) {
  if (w.levels() < 1)
    throw std::invalid_argument("weighted blocks: weight sequence is empty");
  if (!(w.grid == f.grid))
    throw std::invalid_argument("weighted blocks: weight grid mismatch");
  FunctionSequence blocks = lp_blocks(f, pair, w.levels() - 1);
  for (int j = 0; j < blocks.count(); ++j)
    for (std::int64_t i = 0; i < f.grid.size(); ++i)
      blocks.levels[j].v[i] *= w.at(j, i);
  return blocks;
}

}  // namespace

NormResult besov_norm(const GridFunction& f, const Exponent& p, const Exponent& q,
                      const WeightSequence& w, const AdmissiblePair& pair) {
  return norm_lq_Lp(weightedBlocks(f, w, pair), p, q);
}

NormResult tl_norm(const GridFunction& f, const Exponent& p, const Exponent& q,
                   const WeightSequence& w, const AdmissiblePair& pair) {
  if (p.pMax == kInf || q.pMax == kInf)
    throw std::invalid_argument("tl_norm: requires pMax, qMax < inf");
  return norm_Lp_lq(weightedBlocks(f, w, pair), p, q);
}

GridFunction peetre_maximal(const GridFunction& block, int j, double a) {
  if (!(a > 0.0)) throw std::invalid_argument("peetre_maximal: a must be positive");
  const Grid& g = block.grid;
  double scale = std::ldexp(1.0, j);
  GridFunction out(g);
  if (g.n == 1) {
    // per-lag denominators, then an exact O(N^2) max
    std::vector<double> den(g.N);
    for (std::int64_t d = 0; d < g.N; ++d)
      den[d] = std::pow(1.0 + scale * g.h * d, -a);
    std::vector<double> mag(g.N);
    for (std::int64_t k = 0; k < g.N; ++k) mag[k] = std::abs(block.v[k]);
    for (std::int64_t i = 0; i < g.N; ++i) {
      double best = 0.0;
      for (std::int64_t k = 0; k < g.N; ++k)
        best = std::max(best, mag[k] * den[std::abs(i - k)]);
      out.v[i] = best;
    }
    return out;
  }
  std::vector<double> mag(g.size());
  for (std::int64_t k = 0; k < g.size(); ++k) mag[k] = std::abs(block.v[k]);
  for (std::int64_t i = 0; i < g.size(); ++i) {
    auto xi = g.point(i);
    double best = 0.0;
    for (std::int64_t k = 0; k < g.size(); ++k) {
      auto xk = g.point(k);
      double dist = std::hypot(xi[0] - xk[0], xi[1] - xk[1]);
      best = std::max(best, mag[k] * std::pow(1.0 + scale * dist, -a));
    }
    out.v[i] = best;
  }
  return out;
}

double peetre_exponent(const Exponent& p, const Exponent& q,
                       const WeightSequence& w) {
  return p.grid.n / std::min(p.pMin, q.pMin) + w.alpha + 1.0;
}

PairCompareReport pair_independence(const GridFunction& f, const Exponent& p,
                                    const Exponent& q, const WeightSequence& w,
                                    const AdmissiblePair& a,
                                    const AdmissiblePair& b, MixedSpace space) {
  PairCompareReport rep;
  if (space == MixedSpace::LqLp) {
    rep.first = besov_norm(f, p, q, w, a).value;
    rep.second = besov_norm(f, p, q, w, b).value;
  } else {
    rep.first = tl_norm(f, p, q, w, a).value;
    rep.second = tl_norm(f, p, q, w, b).value;
  }
  rep.ratio = rep.second > 0.0 ? rep.first / rep.second : kInf;
  return rep;
}

}  // namespace varexp
