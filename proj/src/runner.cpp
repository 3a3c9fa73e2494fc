#include "varexp/runner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "varexp/atoms.hpp"
#include "varexp/decomp.hpp"
#include "varexp/embeddings.hpp"
#include "varexp/families.hpp"
#include "varexp/lp_analysis.hpp"
#include "varexp/mixed.hpp"
#include "varexp/modular.hpp"

namespace varexp {

namespace {

const Grid& boxGrid() {
  static Grid g = Grid::make(1, 8.0, 4096);
  return g;
}

const Grid& smallGrid() {
  static Grid g = Grid::make(1, 2.0, 4096);
  return g;
}

GridFunction gaussf(const Grid& g, double a) {
  return GridFunction::sample(
      g, [a](double x, double) { return cplx{std::exp(-a * x * x), 0.0}; });
}

Exponent bumpExponent(const Grid& g, double base, double amp, double ctr,
                      double wid) {
  return Exponent::fromFunction(g, [=](double x, double) {
    double t = (x - ctr) / wid;
    return base + amp * std::exp(-t * t);
  });
}

// the shared variable-exponent fixtures: smooth, log-Holder, well separated
Exponent varP0(const Grid& g) { return bumpExponent(g, 1.4, 0.4, 0.0, 1.0); }
Exponent varP1(const Grid& g) { return bumpExponent(g, 2.2, 0.5, 1.0, 1.0); }
Exponent varQ(const Grid& g) {
  return bumpExponent(g, 1.8, 0.6, 0.0, std::numbers::sqrt2);
}

double unif(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int unifInt(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

std::string id(const char* stem, int k) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%02d", stem, k);
  return buf;
}

std::string fm(const char* f, auto... args) {
  char buf[192];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void scaleFn(GridFunction& f, double c) {
  for (auto& v : f.v) v *= c;
}

// ---------------------------------------------------------------- 1
SuiteReport suiteClosedForms(std::uint64_t seed, const GoldenValues*) {
  SuiteReport rep{"norm-closed-forms", {}};
  const Grid& g = boxGrid();
  Rng rng = family_rng(seed, rep.suite);
  const double ps[] = {0.5, 1.0, 2.0, 4.0, kInf};
  for (int k = 0; k < 50; ++k) {
    GridFunction f =
        k % 2 == 0 ? random_step(g, rng) : random_gaussian_mix(g, rng);
    double worst = 0.0, worstP = ps[0];
    for (double p : ps) {
      double oracle;
      if (p == kInf) {
        oracle = f.absMax();
      } else {
        double s = 0.0;
        for (const auto& v : f.v) s += std::pow(std::abs(v), p);
        oracle = std::pow(g.cellVolume() * s, 1.0 / p);
      }
      double norm = luxemburg_norm(f, Exponent::constant(g, p)).value;
      double rel = std::abs(norm - oracle) / oracle;
      if (rel > worst) {
        worst = rel;
        worstP = p;
      }
    }
    rep.add(id("draw", k),
            fm("%s; worst p = %g", k % 2 == 0 ? "step" : "gaussian mix", worstP),
            worst, 1e-8, worst <= 1e-8);
  }
  return rep;
}

// ---------------------------------------------------------------- 2
SuiteReport suiteTwopiece(std::uint64_t, const GoldenValues*) {
  SuiteReport rep{"norm-twopiece", {}};
  const Grid& g = boxGrid();
  const double cs[] = {0.3, 1.0, 2.7, 10.0};
  int k = 0;
  for (int order = 0; order < 2; ++order) {
    double l = order == 0 ? 2.0 : 4.0;
    double r = 6.0 - l;
    Exponent p = Exponent::fromFunction(
        g, [=](double x, double) { return x < 0.5 ? l : r; });
    for (double c : cs) {
      // half-open support [0,1) splits the mass exactly 1/2 : 1/2, so the
      // modular of f/c is t^2/2 + t^4/2 at t = 1 and the norm equals c
      GridFunction f = GridFunction::sample(g, [c](double x, double) {
        return cplx{x >= 0.0 && x < 1.0 ? c : 0.0, 0.0};
      });
      double norm = luxemburg_norm(f, p).value;
      double rel = std::abs(norm - c) / c;
      rep.add(id("case", k++), fm("p = %g|%g split 1/2, c = %g", l, r, c), rel,
              1e-8, rel <= 1e-8);
    }
  }
  return rep;
}

// ---------------------------------------------------------------- 3
SuiteReport suiteUnitBall(std::uint64_t seed, const GoldenValues*) {
  SuiteReport rep{"unit-ball", {}};
  const Grid& g = boxGrid();
  Rng rng = family_rng(seed, rep.suite);
  for (int k = 0; k < 120; ++k) {
    Exponent p = k % 3 == 2 ? random_twopiece_exponent(g, rng, 0.7, 3.5)
                            : random_smooth_exponent(g, rng, 0.7, 3.5);
    GridFunction f =
        k % 2 == 0 ? random_gaussian_mix(g, rng) : random_step(g, rng);
    double target = std::exp(unif(rng, std::log(0.3), std::log(3.0)));
    if (std::abs(target - 1.0) < 1e-3) target *= 1.01;
    scaleFn(f, target / luxemburg_norm(f, p).value);
    UnitBallReport u = check_unit_ball(f, p);
    rep.add(id("fn", k),
            fm("norm target %g%s", target, u.boundary ? "; boundary excluded" : ""),
            u.modular, 1.0, u.consistent);
  }
  for (int k = 0; k < 80; ++k) {
    Exponent p = random_smooth_exponent(g, rng, 0.8, 3.2);
    Exponent q = random_smooth_exponent(g, rng, 0.7, 2.8);
    FunctionSequence seq = random_sequence(g, 4, rng);
    double target = std::exp(unif(rng, std::log(0.3), std::log(3.0)));
    if (std::abs(target - 1.0) < 1e-3) target *= 1.01;
    double n0 = norm_lq_Lp(seq, p, q).value;
    for (auto& lvl : seq.levels) scaleFn(lvl, target / n0);
    double mod = modular_lq_Lp(seq, p, q);
    bool band = std::abs(mod - 1.0) <= 1e-8;
    bool ok = band || ((target <= 1.0) == (mod <= 1.0));
    rep.add(id("seq", k),
            fm("norm %g vs modular%s", target, band ? "; boundary excluded" : ""),
            mod, 1.0, ok);
  }
  return rep;
}

// ---------------------------------------------------------------- 4
SuiteReport suiteSandwich(std::uint64_t seed, const GoldenValues*) {
  SuiteReport rep{"norm-modular-sandwich", {}};
  const Grid& g = boxGrid();
  Rng rng = family_rng(seed, rep.suite);
  for (int k = 0; k < 200; ++k) {
    Exponent p = random_smooth_exponent(g, rng, 0.6, 4.5);
    GridFunction f =
        k % 2 == 0 ? random_step(g, rng) : random_gaussian_mix(g, rng);
    scaleFn(f, std::exp(unif(rng, std::log(0.01), std::log(100.0))));
    NormModularReport r = norm_modular_bounds(f, p);
    double viol = std::max(r.lower / r.norm, r.norm / r.upper);
    rep.add(id("case", k), fm("norm %.6g in [%.6g, %.6g]", r.norm, r.lower, r.upper),
            viol, 1.0, r.pass);
  }
  return rep;
}

// ---------------------------------------------------------------- 5
SuiteReport suiteHolder(std::uint64_t seed, const GoldenValues*) {
  SuiteReport rep{"holder", {}};
  const Grid& g = boxGrid();
  Rng rng = family_rng(seed, rep.suite);
  for (int k = 0; k < 100; ++k) {
    Exponent p = random_smooth_exponent(g, rng, 1.0, 4.0);
    GridFunction f = random_gaussian_mix(g, rng);
    GridFunction h = random_step(g, rng);
    HolderReport r = k % 2 == 0 ? holder_check(f, h, p) : holder_check(h, f, p);
    rep.add(id("case", k), "integral |f g| against 2 ||f||_p ||g||_p'", r.ratio,
            2.0, r.pass);
  }
  return rep;
}

// ---------------------------------------------------------------- 6
SuiteReport suiteIterated(std::uint64_t seed, const GoldenValues*) {
  SuiteReport rep{"iterated-identity", {}};
  const Grid& g = boxGrid();
  Rng rng = family_rng(seed, rep.suite);
  const double qs[] = {0.5, 1.0, 2.0, kInf};
  int row = 0;
  for (int k = 0; k < 8; ++k) {
    FunctionSequence seq = random_sequence(g, 5, rng);
    Exponent p = random_smooth_exponent(g, rng, 0.9, 3.0);
    std::vector<double> lvl;
    for (const auto& f : seq.levels) lvl.push_back(luxemburg_norm(f, p).value);
    for (double q : qs) {
      double oracle;
      if (q == kInf) {
        oracle = *std::max_element(lvl.begin(), lvl.end());
      } else {
        double s = 0.0;
        for (double v : lvl) s += std::pow(v, q);
        oracle = std::pow(s, 1.0 / q);
      }
      double direct = norm_lq_Lp(seq, p, Exponent::constant(g, q)).value;
      double rel = std::abs(direct - oracle) / oracle;
      rep.add(id("two-route", row++), fm("q = %g; iterated vs scalarised", q),
              rel, 1e-6, rel <= 1e-6);
    }
  }
  for (int k = 0; k < 8; ++k) {
    Exponent p = random_smooth_exponent(g, rng, 0.9, 3.0);
    Exponent q = random_smooth_exponent(g, rng, 0.7, 3.0);
    GridFunction f = random_gaussian_mix(g, rng);
    FunctionSequence seq(g, 4);
    seq.levels[k % 4] = f;
    double direct = norm_lq_Lp(seq, p, q).value;
    double oracle = luxemburg_norm(f, p).value;
    double rel = std::abs(direct - oracle) / oracle;
    rep.add(id("single", k), fm("one entry at level %d", k % 4), rel, 1e-6,
            rel <= 1e-6);
  }
  for (int k = 0; k < 8; ++k) {
    FunctionSequence seq = random_sequence(g, 4, rng);
    Exponent p = random_smooth_exponent(g, rng, 0.9, 3.0);
    Exponent q = random_smooth_exponent(g, rng, 0.8, 3.5);
    double m1 = modular_lq_Lp(seq, p, q);
    double m2 = modular_lq_Lp_fast(seq, p, q);
    double rel = std::abs(m1 - m2) / std::max(m2, 1e-300);
    rep.add(id("two-path", k), "variable q; defining vs quotient route", rel,
            1e-6, rel <= 1e-6);
  }
  return rep;
}

// ---------------------------------------------------------------- 7
SuiteReport suiteLqMonotone(std::uint64_t seed, const GoldenValues*) {
  SuiteReport rep{"lq-monotone", {}};
  const Grid& g = boxGrid();
  Rng rng = family_rng(seed, rep.suite);
  for (int k = 0; k < 100; ++k) {
    FunctionSequence seq = random_sequence(g, 3, rng);
    Exponent p = random_smooth_exponent(g, rng, 0.9, 3.0);
    Exponent q0 = random_smooth_exponent(g, rng, 0.7, 2.2);
    Exponent gap = random_smooth_exponent(g, rng, 0.05, 1.4);
    std::vector<double> vals(g.size());
    for (std::int64_t i = 0; i < g.size(); ++i) vals[i] = q0.pAt(i) + gap.pAt(i);
    Exponent q1 = Exponent::fromSamples(g, std::move(vals));
    MonotoneEmbedReport r = check_embeddings(seq, p, q0, q1);
    double ratio = std::max(r.lqLp1 / r.lqLp0, r.LpLq1 / r.LpLq0);
    rep.add(id("case", k), "q0 <= q1 embeds with constant one in both types",
            ratio, 1.0 + 1e-8, r.pass);
  }
  return rep;
}

// ---------------------------------------------------------------- 8
SuiteReport suiteCharfun(std::uint64_t, const GoldenValues*) {
  SuiteReport rep{"charfunc-scaling", {}};
  const Grid& g = boxGrid();
  int k = 0;
  for (double p : {1.0, 2.0, 3.7}) {
    CharfunReport r = charfun_norm_scaling(Exponent::constant(g, p), 0, 6);
    double worstRel = 0.0, worstExcess = -kInf;
    for (const CharfunRow& row : r.rows) {
      // the closed cube carries one extra sample row per axis
      double exact = std::pow(std::exp2(-row.j) + g.h, 1.0 / p);
      worstRel = std::max(worstRel, std::abs(row.norm - exact) / exact);
      double budget = std::pow(1.0 + std::exp2(row.j) * g.h, 1.0 / p);
      worstExcess = std::max(worstExcess, row.ratio - budget);
    }
    rep.add(id("exact", k), fm("constant p = %g; norm vs (|Q| + h^n)^{1/p}", p),
            worstRel, 1e-8, worstRel <= 1e-8);
    rep.add(id("budget", k++),
            fm("constant p = %g; ratio excess over the sample-bias budget", p),
            worstExcess, 1e-9, worstExcess <= 1e-9);
  }
  Grid g2 = Grid::make(1, 8.0, 8192);
  double s1 = charfun_norm_scaling(varQ(g), 0, 6).spread;
  double s2 = charfun_norm_scaling(varQ(g2), 0, 6).spread;
  double drift = std::abs(s2 / s1 - 1.0);
  rep.add("spread-n", "log-Holder p; ratio spread at N", s1, 0.0, s1 >= 1.0);
  rep.add("spread-2n", "log-Holder p; ratio spread at 2N", s2, 0.0, s2 >= 1.0);
  rep.add("drift", "spread drift under N -> 2N", drift, 0.10, drift < 0.10);
  return rep;
}

// ---------------------------------------------------------------- 9
SuiteReport suitePairIndep(std::uint64_t, const GoldenValues*) {
  SuiteReport rep{"pair-independence", {}};
  AdmissiblePair pa = AdmissiblePair::make(PairProfile::CosineBump);
  AdmissiblePair pb = AdmissiblePair::make(PairProfile::PolynomialBump);
  std::array<double, 2> spread{};
  int gi = 0;
  for (int N : {4096, 8192}) {
    Grid g = Grid::make(1, 8.0, N);
    Exponent p = varP0(g), q = varQ(g);
    WeightSequence w = make_weight_constant_s(g, 7, 0.5);
    double lo = kInf, hi = 0.0;
    for (int i = 0; i < 10; ++i) {
      GridFunction f = standard_function(g, i);
      PairCompareReport r = pair_independence(f, p, q, w, pa, pb, MixedSpace::LqLp);
      lo = std::min(lo, r.ratio);
      hi = std::max(hi, r.ratio);
      if (N == 4096)
        rep.add(id("fn", i), fm("B-norm through two profiles, panel entry %d", i),
                r.ratio, 0.0, r.ratio > 1e-6 && r.ratio < 1e6);
    }
    spread[gi++] = hi / lo;
  }
  rep.add("spread-n", "max/min panel ratio at N", spread[0], 10.0,
          spread[0] < 10.0);
  double drift = std::abs(spread[1] / spread[0] - 1.0);
  rep.add("drift", "spread drift under N -> 2N", drift, 0.10, drift < 0.10);
  return rep;
}

// ---------------------------------------------------------------- 10
SuiteReport suiteReproducing(std::uint64_t, const GoldenValues*) {
  SuiteReport rep{"reproducing-identity", {}};
  const Grid& g = smallGrid();
  GridFunction f0 = gaussf(g, 64.0);
  double twoPiN = std::pow(2.0 * std::numbers::pi, g.n);
  for (int L : {0, 2}) {
    ReproducingSystem sys = make_reproducing_system(g, 6, 2, L);
    double part = partition_identity_residual(sys);
    rep.add(fm("partition-L%d", L), "stored multipliers close the band", part,
            1e-12, part <= 1e-12);

    // hard band limitation under the covered band 2^Jmax delta
    double cut = std::ldexp(sys.delta, sys.Jmax);
    auto prof = [cut](double r) {
      double lo = 0.5 * cut;
      if (r <= lo) return 1.0;
      if (r >= cut) return 0.0;
      double c = std::cos(0.5 * std::numbers::pi * (r - lo) / (cut - lo));
      return c * c;
    };
    GridFunction f = apply_multiplier(f0, radial_multiplier(g, prof));
    double fmax = f.absMax();

    GridFunction rec1(g), rec2(g);
    for (int j = 0; j <= sys.Jmax; ++j) {
      std::vector<cplx> m(sys.phiHat[j].size());
      for (std::size_t b = 0; b < m.size(); ++b)
        m[b] = sys.phiHat[j][b] * sys.psiHat[j][b] / twoPiN;
      rec1 += apply_multiplier(f, m);
      rec2 += convolve(sys.phi[j], apply_multiplier(f, sys.psiHat[j]));
    }
    rec2 *= cplx{1.0 / twoPiN, 0.0};

    double sup1 = 0.0, sup2 = 0.0;
    for (std::int64_t i = 0; i < g.size(); ++i) {
      sup1 = std::max(sup1, std::abs(f.v[i] - rec1.v[i]));
      if (std::abs(g.point(i)[0]) <= g.A - sys.sigma)
        sup2 = std::max(sup2, std::abs(f.v[i] - rec2.v[i]));
    }
    rep.add(fm("spectral-L%d", L), "multiplier-route sup residual / ||f||_inf",
            sup1 / fmax, 1e-6, sup1 <= 1e-6 * fmax);
    rep.add(fm("physical-L%d", L),
            "compact-window route, residual inside the margin", sup2 / fmax,
            1e-6, sup2 <= 1e-6 * fmax);
  }
  return rep;
}

// ---------------------------------------------------------------- 11
GridFunction taperWindow(const Grid& g, double inner, double outer) {
  return GridFunction::sample(g, [=](double x, double) -> cplx {
    double a = std::abs(x);
    if (a <= inner) return 1.0;
    if (a >= outer) return 0.0;
    double c = std::cos(0.5 * std::numbers::pi * (a - inner) / (outer - inner));
    return {c * c, 0.0};
  });
}

struct RoundtripCurve {
  double base = 0.0;
  std::array<double, 9> rel{};  // indexed by jcut, valid 2..8
};

// reconstruction error against the cut level, measured in the space norm
// behind a window supported in the faithful interior (the uncut boundary
// zone carries the linear-vs-periodic kernel mismatch, not decomposition
// error)
RoundtripCurve roundtripCurve() {
  const Grid& g = smallGrid();
  GridFunction f = gaussf(g, 4096.0);
  ReproducingSystem sys = make_reproducing_system(g, 8, 2, 2);
  AnalyzeResult res = analyze(f, sys, false);
  Exponent p = Exponent::constant(g, 2.0), q = Exponent::constant(g, 2.0);
  WeightSequence w = make_weight_constant_s(g, 9, 0.4);
  AdmissiblePair pair = AdmissiblePair::make(PairProfile::CosineBump);
  GridFunction win = taperWindow(g, 0.85, 1.0);

  RoundtripCurve c;
  c.base = besov_norm(f, p, q, w, pair).value;
  for (int jcut = 2; jcut <= 8; ++jcut) {
    AnalyzeResult part = res;
    part.atoms.clear();
    for (const Atom& a : res.atoms)
      if (a.cube.j <= jcut) part.atoms.push_back(a);
    GridFunction err = f - synthesize(part, g);
    for (std::int64_t i = 0; i < g.size(); ++i) err.v[i] *= win.v[i];
    c.rel[jcut] = besov_norm(err, p, q, w, pair).value / c.base;
  }
  return c;
}

SuiteReport suiteRoundtrip(std::uint64_t, const GoldenValues* golden) {
  SuiteReport rep{"roundtrip-floor", {}};
  RoundtripCurve c = roundtripCurve();
  double frozen = golden ? golden->roundtripRel : c.rel[8];
  for (int jcut = 2; jcut <= 8; ++jcut)
    rep.add(fm("rel-j%d", jcut), fm("windowed space-norm error at cut %d", jcut),
            c.rel[jcut], 0.0, true);
  for (int jcut = 3; jcut <= 8; ++jcut)
    rep.add(fm("drop-j%d", jcut), fm("strict decrease %d -> %d", jcut - 1, jcut),
            c.rel[jcut], c.rel[jcut - 1], c.rel[jcut] < c.rel[jcut - 1]);
  rep.add("floor-abs", "deepest cut against the absolute budget", c.rel[8],
          1e-3, c.rel[8] <= 1e-3);
  double bound = std::max(100.0 * frozen, 1e-12);
  rep.add("floor-frozen", "deepest cut against the frozen calibration",
          c.rel[8], bound, c.rel[8] <= bound);
  return rep;
}

// ---------------------------------------------------------------- 12
double optimalRatio(const GridFunction& f, const ReproducingSystem& sys,
                    const Exponent& p, const Exponent& q,
                    const WeightSequence& w, const AdmissiblePair& pair) {
  AnalyzeResult res = analyze(f, sys, false);
  double sn = seq_norm_b(res.lambda, sys.grid, p, q, w).value;
  double fn = besov_norm(f, p, q, w, pair).value;
  return sn / fn;
}

double calibrateOptimalC() {
  const Grid& g = smallGrid();
  ReproducingSystem sys = make_reproducing_system(g, 6, 2, 2);
  Exponent p = Exponent::constant(g, 2.0), q = Exponent::constant(g, 2.0);
  WeightSequence w = make_weight_constant_s(g, 7, 0.4);
  AdmissiblePair pair = AdmissiblePair::make(PairProfile::CosineBump);
  double lo = kInf, hi = 0.0;
  for (int i = 0; i < 10; ++i) {
    double r = optimalRatio(standard_function(g, i), sys, p, q, w, pair);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return 1.05 * std::max(hi, 1.0 / lo);
}

GridFunction smallMix(const Grid& g, Rng& rng) {
  int parts = unifInt(rng, 1, 3);
  GridFunction f(g);
  for (int k = 0; k < parts; ++k) {
    double c = unif(rng, -0.4, 0.4);
    double a = unif(rng, 8.0, 200.0);
    double amp = unif(rng, 0.3, 2.0) * (unifInt(rng, 0, 1) ? 1.0 : -1.0);
    double freq = unifInt(rng, 0, 2) == 0 ? unif(rng, 2.0, 10.0) : 0.0;
    for (std::int64_t i = 0; i < g.size(); ++i) {
      double x = g.point(i)[0];
      f.v[i] += amp * std::exp(-a * (x - c) * (x - c)) *
                (freq > 0.0 ? std::cos(freq * x) : 1.0);
    }
  }
  return f;
}

SuiteReport suiteOptimalDecomp(std::uint64_t seed, const GoldenValues* golden) {
  SuiteReport rep{"optimal-decomp", {}};
  double C = golden ? golden->optimalC : calibrateOptimalC();
  rep.add("constant", "calibrated two-sided constant", C, 0.0, C > 1.0);

  const Grid& g = smallGrid();
  ReproducingSystem sys = make_reproducing_system(g, 6, 2, 2);
  Exponent p = Exponent::constant(g, 2.0), q = Exponent::constant(g, 2.0);
  WeightSequence w = make_weight_constant_s(g, 7, 0.4);
  AdmissiblePair pair = AdmissiblePair::make(PairProfile::CosineBump);
  for (int i = 0; i < 10; ++i) {
    double r = optimalRatio(standard_function(g, i), sys, p, q, w, pair);
    bool ok = r >= 1.0 / C && r <= C;
    rep.add(id("panel", i), "||lambda(f)|b|| / ||f|B|| within [1/C, C]", r, C, ok);
  }
  Rng rng = family_rng(seed, rep.suite);
  for (int k = 0; k < 10; ++k) {
    double r = optimalRatio(smallMix(g, rng), sys, p, q, w, pair);
    bool ok = r >= 1.0 / (1.5 * C) && r <= 1.5 * C;
    rep.add(id("fresh", k), "fresh draw within [1/(1.5C), 1.5C]", r, 1.5 * C, ok);
  }
  return rep;
}

// ---------------------------------------------------------------- 13
SuiteReport suiteTailConvergence(std::uint64_t, const GoldenValues*) {
  SuiteReport rep{"tail-convergence", {}};
  const Grid& g = smallGrid();
  ReproducingSystem sys = make_reproducing_system(g, 8, 2, 2);
  AnalyzeResult res = analyze(gaussf(g, 512.0), sys, false);

  struct Config {
    const char* name;
    Exponent p, q;
    WeightSequence w;
    MixedSpace space;
  };
  std::vector<Config> cfgs;
  Exponent p2 = Exponent::constant(g, 2.0), q2 = Exponent::constant(g, 2.0);
  cfgs.push_back({"b-const", p2, q2, make_weight_constant_s(g, 9, 0.5),
                  MixedSpace::LqLp});
  cfgs.push_back({"b-varp", varP0(g), Exponent::constant(g, 1.5),
                  make_weight_constant_s(g, 9, 0.3), MixedSpace::LqLp});
  cfgs.push_back({"b-varq", Exponent::constant(g, 2.2), varQ(g),
                  make_weight_constant_s(g, 9, 0.5), MixedSpace::LqLp});
  cfgs.push_back({"f-const", p2, q2, make_weight_constant_s(g, 9, 0.5),
                  MixedSpace::LpLq});

  for (const Config& c : cfgs) {
    std::array<double, 9> tail{};
    for (int T = 0; T <= 8; ++T)
      tail[T] = tail_in_space(res, g, c.p, c.q, c.w, c.space, T).value;
    double worstRise = -kInf;
    for (int T = 1; T <= 8; ++T) worstRise = std::max(worstRise, tail[T] - tail[T - 1]);
    rep.add(fm("%s-mono", c.name), "tail nonincreasing in T", worstRise,
            1e-10 * tail[0], worstRise <= 1e-10 * tail[0]);
    rep.add(fm("%s-floor", c.name), fm("tail at T = 8 against 1e-3 of full (%g)",
            tail[0]), tail[8], 1e-3 * tail[0], tail[8] <= 1e-3 * tail[0]);
  }
  return rep;
}

// ---------------------------------------------------------------- 14
SuiteReport suiteAtomValidators(std::uint64_t, const GoldenValues*) {
  SuiteReport rep{"atom-validators", {}};
  const Grid& g = smallGrid();
  ReproducingSystem sys = make_reproducing_system(g, 6, 2, 2);
  // narrow enough to emit atoms on every level of the system
  AnalyzeResult res = analyze(gaussf(g, 64.0), sys, true);
  rep.add("emitted", fm("analyze flagged %d of %zu atoms", res.flagged,
          res.atoms.size()), res.flagged, 0.0, res.flagged == 0);

  int row = 0;
  for (int j = 1; j <= 6; ++j) {
    const Atom* pick = nullptr;
    for (const Atom& a : res.atoms)
      if (a.cube.j == j && !a.clipped) {
        pick = &a;
        break;
      }
    if (!pick) {
      rep.add(id("good", row++), fm("no unclipped atom at level %d", j), 0.0,
              0.0, false);
      continue;
    }
    AtomReport r = verify_atom(pick->embed(g), pick->cube, sys.K, sys.L, sys.d());
    rep.add(id("good", row++), fm("emitted atom at level %d accepted", j),
            r.worstDeriv, 1.0 + r.slack, r.pass());
  }
  for (int j : {2, 3, 4}) {
    DyadicCube q{j, {0, 0}};
    GridFunction u = make_bump_atom(g, q, sys.K, sys.L, sys.d());
    scaleFn(u, 2.0);
    AtomReport r = verify_atom(u, q, sys.K, sys.L, sys.d());
    bool ok = !r.pass() && !r.passDerivs;
    rep.add(id("scaled", j), fm("synthetic atom at level %d scaled x2 rejected", j),
            r.worstDeriv, 1.0 + r.slack, ok);
  }
  for (int j : {2, 3, 4}) {
    DyadicCube q{j, {0, 0}};
    GridFunction u = make_bump_atom(g, q, sys.K, 0, sys.d());
    AtomReport r = verify_atom(u, q, sys.K, 2, sys.d());
    bool ok = !r.pass() && !r.passMoments && r.passSupport && r.passDerivs;
    rep.add(id("moment", j), fm("plain bump at level %d fails the moment test", j),
            r.worstMoment, 0.0, ok);
  }
  return rep;
}

// ---------------------------------------------------------------- 15
SuiteReport suiteNikolskiiConst(std::uint64_t seed, const GoldenValues*) {
  SuiteReport rep{"nikolskii-constant-q", {}};
  const Grid& g = boxGrid();
  Rng rng = family_rng(seed, rep.suite);
  Exponent p0 = varP0(g), p1 = varP1(g);
  WeightSequence w = make_weight_constant_s(g, 7, 0.5);

  double lo = kInf, hi = 0.0;
  for (int j = 0; j <= 6; ++j) {
    double lvlMax = 0.0;
    for (int k = 0; k < 12; ++k) {
      CoeffLevel lam = random_coeff_level(g, rng, j, k % 2);
      NikolskiiReport r = nikolskii_constant_q(lam, g, p0, p1, w);
      lvlMax = std::max(lvlMax, r.ratio);
    }
    lo = std::min(lo, lvlMax);
    hi = std::max(hi, lvlMax);
    rep.add(fm("level-j%d", j), "largest transfer ratio at the level", lvlMax,
            0.0, lvlMax > 0.0);
  }
  double spread = hi / lo;
  rep.add("spread", "max/min of the per-level ratios across j <= 6", spread,
          1.2, spread <= 1.2);
  for (int k = 0; k < 5; ++k) {
    CoeffLevel lam = random_coeff_level(g, rng, k % 7, k % 2);
    NikolskiiReport r = nikolskii_constant_q(lam, g, p0, p0, w);
    double dev = std::abs(r.ratio - 1.0);
    rep.add(id("equal", k), "p0 = p1 collapses the transfer to the identity",
            dev, 1e-8, dev <= 1e-8);
  }
  return rep;
}

// ---------------------------------------------------------------- 16
double calibrateC0(std::uint64_t seed) {
  const Grid& g = boxGrid();
  Exponent p0 = varP0(g), p1 = varP1(g), q = varQ(g);
  WeightSequence w = make_weight_constant_s(g, 7, 0.5);
  Rng rng = family_rng(seed, "calibrate-c0");
  double cmin = kInf;
  for (int k = 0; k < 200; ++k) {
    CoeffLevel lam = random_coeff_level(g, rng, k % 7, k % 2);
    NikolskiiVarReport r = nikolskii_variable_q(lam, g, p0, p1, q, w, 0.5);
    if (r.skip) continue;
    cmin = std::min(cmin, r.c0Max);
  }
  if (!std::isfinite(cmin)) cmin = 1.0;  // every draw skipped the proviso
  return std::min(1.0, 0.9 * cmin);
}

SuiteReport suiteNikolskiiVar(std::uint64_t seed, const GoldenValues* golden) {
  SuiteReport rep{"nikolskii-variable-q", {}};
  const Grid& g = boxGrid();
  double c0 = golden ? golden->nikolskiiC0 : calibrateC0(seed);
  rep.add("c0", "calibrated multiplier in (0, 1]", c0, 1.0,
          c0 > 0.0 && c0 <= 1.0);

  Exponent p0 = varP0(g), p1 = varP1(g), q = varQ(g);
  WeightSequence w = make_weight_constant_s(g, 7, 0.5);
  Rng rng = family_rng(seed, rep.suite);
  for (int k = 0; k < 50; ++k) {
    CoeffLevel lam = random_coeff_level(g, rng, k % 7, k % 2);
    NikolskiiVarReport r{};
    int halved = 0;
    for (; halved < 8; ++halved) {
      r = nikolskii_variable_q(lam, g, p0, p1, q, w, c0);
      if (!r.skip) break;
      for (auto& v : lam.lambda) v *= 0.5;  // shrink into the proviso
    }
    if (r.skip) {
      rep.add(id("fresh", k), "proviso unattainable after halving", 0.0, 0.0,
              false);
      continue;
    }
    rep.add(id("fresh", k),
            fm("level %d%s; left vs right + slack", k % 7,
               halved ? " (rescaled into the proviso)" : ""),
            r.leftInf, r.rightInf + r.slack, r.pass);
  }
  return rep;
}

// ---------------------------------------------------------------- 17
SuiteReport suiteSeqEmbed(std::uint64_t seed, const GoldenValues* golden) {
  SuiteReport rep{"sobolev-seq-embed", {}};
  const Grid& g = boxGrid();
  double c0 = golden ? golden->nikolskiiC0 : calibrateC0(seed);
  Exponent p0 = varP0(g), p1 = varP1(g), q = varQ(g);
  WeightSequence w1 = make_weight_constant_s(g, 7, 0.5);
  WeightSequence w0 = w1;
  for (int j = 0; j < w0.levels(); ++j)
    for (std::int64_t i = 0; i < g.size(); ++i)
      w0.w[j][i] *= std::exp2(j * g.n * (p0.recip[i] - p1.recip[i]));

  Rng rng = family_rng(seed, rep.suite);
  for (int k = 0; k < 50; ++k) {
    CoeffField lam = random_coeff_field(g, 6, rng);
    SeqEmbedReport r = sobolev_seq_embed(lam, g, p0, p1, q, w0, w1, c0);
    rep.add(id("field", k), "target norm against 3^{1/q^-}/c0 times source",
            r.ratio, r.bound, r.pass);
  }
  return rep;
}

// ---------------------------------------------------------------- 18
SuiteReport suiteEtaLemmas(std::uint64_t seed, const GoldenValues*) {
  SuiteReport rep{"eta-lemmas", {}};
  Grid gN = boxGrid();
  Grid g2 = Grid::make(1, 8.0, 8192);

  {  // convolution stability in the mixed space
    std::array<double, 2> ratio{};
    int gi = 0;
    for (const Grid* g : {&gN, &g2}) {
      Rng rng = family_rng(seed, "eta-lemmas/seq");
      FunctionSequence seq = random_sequence(*g, 5, rng);
      EtaConvReport r =
          check_eta_convolution(seq, varP0(*g), varQ(*g), 2.0, EtaVariant::LqLp);
      ratio[gi++] = r.ratio;
    }
    double drift = std::abs(ratio[1] / ratio[0] - 1.0);
    rep.add("conv-const", "eta-convolution constant at N", ratio[0], 0.0,
            ratio[0] > 0.0);
    rep.add("conv-drift", "constant drift under N -> 2N", drift, 0.20,
            drift < 0.20);
  }
  {  // indicator lower bound through the kernel
    double c1 = chi_eta_lower(gN, {2, {3, 0}}, 2.0).c;
    double c2 = chi_eta_lower(g2, {2, {3, 0}}, 2.0).c;
    double drift = std::abs(c2 / c1 - 1.0);
    rep.add("chi-const", "cube indicator lower constant at N", c1, 0.0, c1 > 0.4);
    rep.add("chi-drift", "constant drift under N -> 2N", drift, 0.20,
            drift < 0.20);
  }
  {  // molecule decay envelope
    Grid gm = smallGrid();
    Grid gf = Grid::make(1, 2.0, 8192);
    MoleculeDecayReport r1 = molecule_convolution_decay(
        make_reproducing_system(gm, 6, 2, 2), 6.0, 2.0, 4);
    MoleculeDecayReport r2 = molecule_convolution_decay(
        make_reproducing_system(gf, 6, 2, 2), 6.0, 2.0, 4);
    double want = 3.0;  // L + n
    rep.add("mol-slope-n", "fitted log2 peak decay vs -(L+n) at N",
            std::abs(r1.slope + want), 0.15 * want,
            std::abs(r1.slope + want) <= 0.15 * want);
    rep.add("mol-slope-2n", "fitted log2 peak decay vs -(L+n) at 2N",
            std::abs(r2.slope + want), 0.15 * want,
            std::abs(r2.slope + want) <= 0.15 * want);
    double drift = std::abs(r2.cMax / r1.cMax - 1.0);
    rep.add("mol-cmax", "envelope constant at N", r1.cMax, 0.05,
            r1.cMax > 1e-4 && r1.cMax < 0.05);
    rep.add("mol-drift", "constant drift under N -> 2N", drift, 0.30,
            drift < 0.30);
  }
  {  // pointwise envelope sum vs the maximal-kernel majorant
    Rng rng = family_rng(seed, "eta-lemmas/max");
    CoeffLevel lam = random_coeff_level(gN, rng, 3, 1);
    double c1 = eta_maximal_bound(lam, gN, 3, 2.0, 0.7).c;
    double c2 = eta_maximal_bound(lam, g2, 3, 2.0, 0.7).c;
    double drift = std::abs(c2 / c1 - 1.0);
    rep.add("max-const", "majorant constant at N", c1, 0.0,
            c1 > 0.0 && std::isfinite(c1));
    rep.add("max-drift", "constant drift under N -> 2N", drift, 0.30,
            drift < 0.30);
  }
  return rep;
}

using SuiteFn = SuiteReport (*)(std::uint64_t, const GoldenValues*);

struct SuiteEntry {
  const char* name;
  SuiteFn fn;
};

const SuiteEntry kSuites[] = {
    {"norm-closed-forms", suiteClosedForms},
    {"norm-twopiece", suiteTwopiece},
    {"unit-ball", suiteUnitBall},
    {"norm-modular-sandwich", suiteSandwich},
    {"holder", suiteHolder},
    {"iterated-identity", suiteIterated},
    {"lq-monotone", suiteLqMonotone},
    {"charfunc-scaling", suiteCharfun},
    {"pair-independence", suitePairIndep},
    {"reproducing-identity", suiteReproducing},
    {"roundtrip-floor", suiteRoundtrip},
    {"optimal-decomp", suiteOptimalDecomp},
    {"tail-convergence", suiteTailConvergence},
    {"atom-validators", suiteAtomValidators},
    {"nikolskii-constant-q", suiteNikolskiiConst},
    {"nikolskii-variable-q", suiteNikolskiiVar},
    {"sobolev-seq-embed", suiteSeqEmbed},
    {"eta-lemmas", suiteEtaLemmas},
};

}  // namespace

GoldenValues calibrate_golden(std::uint64_t seed) {
  GoldenValues gv;
  gv.roundtripRel = roundtripCurve().rel[8];
  gv.optimalC = calibrateOptimalC();
  gv.nikolskiiC0 = calibrateC0(seed);
  return gv;
}

GoldenValues load_golden(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open golden file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  GoldenValues gv;
  gv.roundtripRel = j.at("roundtripRel").get<double>();
  gv.optimalC = j.at("optimalC").get<double>();
  gv.nikolskiiC0 = j.at("nikolskiiC0").get<double>();
  return gv;
}

void save_golden(const std::string& path, const GoldenValues& gv) {
  nlohmann::ordered_json j;
  j["roundtripRel"] = gv.roundtripRel;
  j["optimalC"] = gv.optimalC;
  j["nikolskiiC0"] = gv.nikolskiiC0;
  write_text_atomic(path, j.dump(2) + "\n");
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& e : kSuites) v.push_back(e.name);
    return v;
  }();
  return names;
}

SuiteReport run_suite(const std::string& name, std::uint64_t seed,
                      const GoldenValues* golden) {
  for (const auto& e : kSuites)
    if (name == e.name) return e.fn(seed, golden);
  throw std::invalid_argument("unknown suite '" + name + "'");
}

}  // namespace varexp
