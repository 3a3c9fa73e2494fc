#include "varexp/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <tuple>

namespace varexp {

namespace {

constexpr double kBandFloorLow = 0.25;   // level-0 conditioning floor
constexpr double kBandFloor = 1e-2;      // conditioning floor, j >= 1
constexpr double kCoeffFloor = 1e-14;    // relative coefficient floor

double glue(double t) {
  return t < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0;
}

/// 1 for rho <= delta, 0 for rho >= 2 delta, exponential glue between.
double knee(double rho, double delta) {
  if (rho <= delta) return 1.0;
  if (rho >= 2.0 * delta) return 0.0;
  double t = rho / delta - 1.0;
  double a = std::exp(-1.0 / (1.0 - t));
  double b = std::exp(-1.0 / t);
  return a / (a + b);
}

/// V_j(|xi|): the level symbol targets, telescoping to 1 on the band.
double levelTarget(int j, double r, double delta) {
  if (j == 0) return knee(r, delta);
  double u = std::ldexp(r, -j);
  return knee(u, delta) - knee(2.0 * u, delta);
}

/// f(x+kh e) - 2 f(x) + f(x-kh e) summed over axes, zero extension.
GridFunction latticeLaplacian(const GridFunction& f, int k) {
  const Grid& g = f.grid;
  GridFunction out(g);
  if (g.n == 1) {
    for (std::int64_t i = 0; i < g.N; ++i) {
      cplx acc = -2.0 * f.v[i];
      if (i + k < g.N) acc += f.v[i + k];
      if (i - k >= 0) acc += f.v[i - k];
      out.v[i] = acc;
    }
    return out;
  }
  for (int i0 = 0; i0 < g.N; ++i0)
    for (int i1 = 0; i1 < g.N; ++i1) {
      cplx acc = -4.0 * f.v[g.flatten(i0, i1)];
      if (i0 + k < g.N) acc += f.v[g.flatten(i0 + k, i1)];
      if (i0 - k >= 0) acc += f.v[g.flatten(i0 - k, i1)];
      if (i1 + k < g.N) acc += f.v[g.flatten(i0, i1 + k)];
      if (i1 - k >= 0) acc += f.v[g.flatten(i0, i1 - k)];
      out.v[g.flatten(i0, i1)] = acc;
    }
  return out;
}

/// Samples of fhat at the DFT bin frequencies (bin order).
std::vector<cplx> measuredHat(const GridFunction& f) {
  const Grid& g = f.grid;
  std::vector<cplx> data = f.v;
  dft(data, g, -1);
  double hn = g.cellVolume();
  for (std::int64_t k = 0; k < g.size(); ++k) {
    auto s = g.split(k);
    double xs = dft_frequency(g, s[0]);
    if (g.n == 2) xs += dft_frequency(g, s[1]);
    data[k] *= hn * std::exp(cplx{0.0, g.A * xs});
  }
  return data;
}

double binRadius(const Grid& g, std::int64_t k) {
  auto s = g.split(k);
  double f0 = dft_frequency(g, s[0]);
  if (g.n == 1) return std::abs(f0);
  return std::hypot(f0, dft_frequency(g, s[1]));
}

std::vector<std::array<int, 2>> derivOrders(int n, int K) {
  std::vector<std::array<int, 2>> out;
  if (n == 1) {
    for (int k = 0; k <= K; ++k) out.push_back({k, 0});
  } else {
    for (int k0 = 0; k0 <= K; ++k0)
      for (int k1 = 0; k0 + k1 <= K; ++k1) out.push_back({k0, k1});
  }
  return out;
}

}  // namespace

ReproducingSystem make_reproducing_system(const Grid& g, int Jmax, int K, int L,
                                          double sigma) {
  if (Jmax < 0 || K < 0 || L < 0)
    throw std::invalid_argument("make_reproducing_system: Jmax, K, L must be >= 0");
  if (!(sigma > 0.0) || sigma > std::numbers::pi)
    throw std::invalid_argument(
        "make_reproducing_system: need 0 < sigma <= pi for the size margin");

  ReproducingSystem sys;
  sys.grid = g;
  sys.Jmax = Jmax;
  sys.K = K;
  sys.L = L;
  sys.sigma = sigma;
  sys.r = (L + 1) / 2;

  auto levelBump = [&](int j, double rho) {
    double amp = std::ldexp(1.0, j * g.n);
    GridFunction b(g);
    for (std::int64_t i = 0; i < g.size(); ++i) {
      double t = g.radius(i) / rho;
      if (t < 1.0) b.v[i] = amp * glue(t);
    }
    return b;
  };
  auto tooThin = [&](int j) -> std::invalid_argument {
    std::int64_t need = g.N;
    while (sigma * std::ldexp(1.0, -Jmax) <
           (3.0 + sigma) * (2.0 * g.A / static_cast<double>(need)))
      need *= 2;
    return std::invalid_argument(
        "make_reproducing_system: level " + std::to_string(j) +
        " bump too thin, need N >= " + std::to_string(need));
  };

  GridFunction bump0 = levelBump(0, sigma - g.h);
  std::vector<cplx> hat0 = measuredHat(bump0);

  // first zero of the level-0 symbol along the positive axis
  double rho0 = std::numbers::pi / (2.0 * g.h);
  for (int k = 1; k < g.N / 2; ++k) {
    std::int64_t bin = g.n == 1 ? k : g.flatten(k, 0);
    if (hat0[bin].real() <= 0.0) {
      rho0 = dft_frequency(g, k);
      break;
    }
  }

  double cutoff = std::numbers::pi / g.h;
  sys.delta = 0.0;
  for (int ci = 0; ci < 8 && sys.delta == 0.0; ++ci) {
    double delta = (0.45 - 0.05 * ci) * rho0;
    if (std::ldexp(delta, Jmax + 1) > cutoff) continue;

    // rebuild the upper levels with the lag tuned to this knee: the
    // difference symbol argument stays ~0.8 at the band top
    std::vector<int> lag(Jmax + 1, 0);
    std::vector<GridFunction> phi;
    std::vector<std::vector<cplx>> hat;
    phi.push_back(bump0);
    hat.push_back(hat0);
    for (int j = 1; j <= Jmax; ++j) {
      double side = std::ldexp(1.0, -j);
      int k = 0;
      double rho = sigma * side - g.h;  // r = 0: plain scaled bump, no lag
      if (sys.r > 0) {
        k = std::max<int>(
            1, static_cast<int>(std::llround(0.8 * side / (sys.r * delta * g.h))));
        int cap = static_cast<int>(
            std::floor((sigma * side - 3.0 * g.h) / (sys.r * g.h)));
        k = std::min(k, cap);
        if (k < 1) throw tooThin(j);
        rho = sigma * side - sys.r * k * g.h;
      } else if (rho < 3.0 * g.h) {
        throw tooThin(j);
      }
      GridFunction b = levelBump(j, rho);
      for (int it = 0; it < sys.r; ++it) b = latticeLaplacian(b, k);
      lag[j] = k;
      hat.push_back(measuredHat(b));
      phi.push_back(std::move(b));
    }

    bool ok = true;
    for (int j = 0; j <= Jmax && ok; ++j) {
      double lo = j == 0 ? 0.0 : std::ldexp(delta, j - 1);
      double hi = std::ldexp(delta, j + 1);
      double maxBand = 0.0, minBand = kInf;
      for (std::int64_t k = 0; k < g.size(); ++k) {
        double r = binRadius(g, k);
        if (r < lo || r > hi) continue;
        double mag = std::abs(hat[j][k]);
        maxBand = std::max(maxBand, mag);
        minBand = std::min(minBand, mag);
      }
      double floor = j == 0 ? kBandFloorLow : kBandFloor;
      ok = maxBand > 0.0 && minBand >= floor * maxBand;
    }
    if (ok) {
      sys.delta = delta;
      sys.lag = std::move(lag);
      sys.phi = std::move(phi);
      sys.phiHat = std::move(hat);
    }
  }
  if (sys.delta == 0.0)
    throw std::runtime_error(
        "make_reproducing_system: no admissible partition knee; refine the "
        "grid or lower Jmax");

  double tp = std::pow(2.0 * std::numbers::pi, g.n);
  for (int j = 0; j <= Jmax; ++j) {
    std::vector<cplx> psi(g.size(), cplx{0.0, 0.0});
    for (std::int64_t k = 0; k < g.size(); ++k) {
      double target = levelTarget(j, binRadius(g, k), sys.delta);
      if (target != 0.0) psi[k] = tp * target / sys.phiHat[j][k];
    }
    sys.psiHat.push_back(std::move(psi));
  }

  sys.cNorm = 0.0;
  for (int j = 0; j <= Jmax; ++j)
    for (const auto& beta : derivOrders(g.n, K)) {
      double scale = std::ldexp(1.0, -j * (g.n + beta[0] + beta[1]));
      sys.cNorm = std::max(
          sys.cNorm, scale * finite_difference(sys.phi[j], beta).absMax());
    }
  return sys;
}

double partition_identity_residual(const ReproducingSystem& sys) {
  const Grid& g = sys.grid;
  double cover = std::ldexp(sys.delta, sys.Jmax);
  double tp = std::pow(2.0 * std::numbers::pi, g.n);
  double worst = 0.0;
  for (std::int64_t k = 0; k < g.size(); ++k) {
    if (binRadius(g, k) > cover) continue;
    cplx sum = 0.0;
    for (int j = 0; j <= sys.Jmax; ++j)
      sum += sys.phiHat[j][k] * sys.psiHat[j][k];
    worst = std::max(worst, std::abs(sum / tp - 1.0));
  }
  return worst;
}

GridFunction Atom::embed(const Grid& g) const {
  GridFunction out(g);
  for (std::int64_t t0 = 0; t0 < len[0]; ++t0)
    for (std::int64_t t1 = 0; t1 < len[1]; ++t1) {
      std::int64_t idx =
          g.n == 1 ? lo[0] + t0
                   : g.flatten(static_cast<int>(lo[0] + t0),
                               static_cast<int>(lo[1] + t1));
      out.v[idx] = values[static_cast<std::size_t>(t0 * len[1] + t1)];
    }
  return out;
}

namespace {

struct AxisRange {
  std::int64_t first = 0;
  std::int64_t last = -1;  // inclusive; empty when last < first
};

/// Grid indices of the closed interval [a, b] on one axis.
AxisRange closedRange(const Grid& g, double a, double b) {
  AxisRange r;
  r.first = static_cast<std::int64_t>(std::ceil((a + g.A) / g.h - 1e-9));
  r.last = static_cast<std::int64_t>(std::floor((b + g.A) / g.h + 1e-9));
  r.first = std::max<std::int64_t>(r.first, 0);
  r.last = std::min<std::int64_t>(r.last, g.N - 1);
  return r;
}

/// Grid indices of the half-open tile [a, b).
AxisRange tileRange(const Grid& g, double a, double b) {
  AxisRange r;
  r.first = static_cast<std::int64_t>(std::ceil((a + g.A) / g.h - 1e-9));
  r.last = static_cast<std::int64_t>(std::ceil((b + g.A) / g.h - 1e-9)) - 1;
  r.first = std::max<std::int64_t>(r.first, 0);
  r.last = std::min<std::int64_t>(r.last, g.N - 1);
  return r;
}

}  // namespace

AnalyzeResult analyze(const GridFunction& f, const ReproducingSystem& sys,
                      bool validate) {
  const Grid& g = f.grid;
  if (!(g == sys.grid)) throw std::invalid_argument("analyze: grid mismatch");
  f.checkFinite("analyze: input");

  AnalyzeResult res;
  res.Jmax = sys.Jmax;
  res.d = sys.d();
  res.K = sys.K;
  res.L = sys.L;
  res.lambda = CoeffField::zeros(g, sys.Jmax);

  std::vector<GridFunction> fields;
  fields.reserve(sys.Jmax + 1);
  for (int j = 0; j <= sys.Jmax; ++j)
    fields.push_back(apply_multiplier(f, sys.psiHat[j]));

  double lamMax = 0.0;
  for (int j = 0; j <= sys.Jmax; ++j) {
    CoeffLevel& lvl = res.lambda.levels[j];
    double side = std::ldexp(1.0, -j);
    for (std::int64_t m0 = lvl.mLo[0]; m0 < lvl.mLo[0] + lvl.mCount[0]; ++m0)
      for (std::int64_t m1 = lvl.mLo[1]; m1 < lvl.mLo[1] + lvl.mCount[1];
           ++m1) {
        AxisRange r0 = closedRange(g, side * m0 - side / 2, side * m0 + side / 2);
        AxisRange r1 = g.n == 2 ? closedRange(g, side * m1 - side / 2,
                                              side * m1 + side / 2)
                                : AxisRange{0, 0};
        double sup = 0.0;
        for (std::int64_t i0 = r0.first; i0 <= r0.last; ++i0)
          for (std::int64_t i1 = r1.first; i1 <= r1.last; ++i1) {
            std::int64_t idx = g.n == 1
                                   ? i0
                                   : g.flatten(static_cast<int>(i0),
                                               static_cast<int>(i1));
            sup = std::max(sup, std::abs(fields[j].v[idx]));
          }
        double lam = sys.cNorm * sup;
        lvl.ref(m0, m1) = lam;
        lamMax = std::max(lamMax, lam);
      }
  }

  double floorVal = kCoeffFloor * lamMax;
  for (auto& lvl : res.lambda.levels)
    for (double& lam : lvl.lambda)
      if (lam > 0.0 && lam < floorVal) {
        lam = 0.0;
        ++res.dropped;
      }

  double pref = g.cellVolume() / std::pow(2.0 * std::numbers::pi, g.n);
  for (int j = 0; j <= sys.Jmax; ++j) {
    CoeffLevel& lvl = res.lambda.levels[j];
    double side = std::ldexp(1.0, -j);
    std::int64_t width =
        static_cast<std::int64_t>(std::ceil(sys.sigma * side / g.h)) + 1;
    for (std::int64_t m0 = lvl.mLo[0]; m0 < lvl.mLo[0] + lvl.mCount[0]; ++m0)
      for (std::int64_t m1 = lvl.mLo[1]; m1 < lvl.mLo[1] + lvl.mCount[1];
           ++m1) {
        double lam = lvl.at(m0, m1);
        if (lam == 0.0) continue;
        AxisRange t0 = tileRange(g, side * m0 - side / 2, side * m0 + side / 2);
        AxisRange t1 = g.n == 2 ? tileRange(g, side * m1 - side / 2,
                                            side * m1 + side / 2)
                                : AxisRange{0, 0};
        if (t0.last < t0.first || (g.n == 2 && t1.last < t1.first)) continue;

        Atom atom;
        atom.cube = DyadicCube{j, {m0, m1}};
        atom.lambda = lam;
        atom.clipped = t0.first - width < 0 || t0.last + width > g.N - 1;
        atom.lo[0] = std::max<std::int64_t>(t0.first - width, 0);
        atom.len[0] = std::min<std::int64_t>(t0.last + width, g.N - 1) -
                      atom.lo[0] + 1;
        if (g.n == 2) {
          atom.clipped = atom.clipped || t1.first - width < 0 ||
                         t1.last + width > g.N - 1;
          atom.lo[1] = std::max<std::int64_t>(t1.first - width, 0);
          atom.len[1] = std::min<std::int64_t>(t1.last + width, g.N - 1) -
                        atom.lo[1] + 1;
        }
        if (atom.clipped && j >= 1) ++res.clipped;
        atom.values.assign(
            static_cast<std::size_t>(atom.len[0] * atom.len[1]), cplx{});

        const GridFunction& field = fields[j];
        const GridFunction& phi = sys.phi[j];
        std::int64_t half = g.N / 2;
        for (std::int64_t x0 = 0; x0 < atom.len[0]; ++x0)
          for (std::int64_t x1 = 0; x1 < atom.len[1]; ++x1) {
            cplx acc = 0.0;
            for (std::int64_t y0 = t0.first; y0 <= t0.last; ++y0) {
              std::int64_t o0 = atom.lo[0] + x0 - y0 + half;
              if (o0 < 0 || o0 >= g.N) continue;
              if (g.n == 1) {
                acc += phi.v[o0] * field.v[y0];
              } else {
                for (std::int64_t y1 = t1.first; y1 <= t1.last; ++y1) {
                  std::int64_t o1 = atom.lo[1] + x1 - y1 + half;
                  if (o1 < 0 || o1 >= g.N) continue;
                  acc += phi.v[g.flatten(static_cast<int>(o0),
                                         static_cast<int>(o1))] *
                         field.v[g.flatten(static_cast<int>(y0),
                                           static_cast<int>(y1))];
                }
              }
            }
            atom.values[static_cast<std::size_t>(x0 * atom.len[1] + x1)] =
                acc * pref / lam;
          }

        if (validate) {
          // box truncation invalidates differences across the seam and
          // the moment sums; size and support still have to hold
          int effK = atom.clipped ? 0 : sys.K;
          int effL = atom.clipped ? 0 : sys.L;
          GridFunction a = atom.embed(g);
          AtomReport rep = verify_atom(a, atom.cube, effK, effL, res.d);
          if (rep.worstDeriv > 1.0) {
            double s = rep.worstDeriv * (1.0 + 1e-9);
            for (auto& z : atom.values) z /= s;
            atom.lambda *= s;
            lvl.ref(m0, m1) = atom.lambda;
            ++res.rescaled;
            rep = verify_atom(atom.embed(g), atom.cube, effK, effL, res.d);
          }
          res.worstDeriv = std::max(res.worstDeriv, rep.worstDeriv);
          res.worstMoment = std::max(res.worstMoment, rep.worstMoment);
          if (!rep.pass()) ++res.flagged;
        }
        res.atoms.push_back(std::move(atom));
      }
  }
  return res;
}

GridFunction synthesize(const AnalyzeResult& res, const Grid& g) {
  GridFunction out(g);
  for (const Atom& a : res.atoms)
    for (std::int64_t t0 = 0; t0 < a.len[0]; ++t0)
      for (std::int64_t t1 = 0; t1 < a.len[1]; ++t1) {
        std::int64_t idx = g.n == 1
                               ? a.lo[0] + t0
                               : g.flatten(static_cast<int>(a.lo[0] + t0),
                                           static_cast<int>(a.lo[1] + t1));
        out.v[idx] +=
            a.lambda * a.values[static_cast<std::size_t>(t0 * a.len[1] + t1)];
      }
  return out;
}

ResidualReport reconstruction_residual(const GridFunction& f,
                                       const AnalyzeResult& res) {
  const Grid& g = f.grid;
  GridFunction rec = synthesize(res, g);
  ResidualReport rep;
  rep.margin = (res.d - 1.0) / 2.0;
  double inner = g.A - rep.margin;
  double fMax = f.absMax();
  double num2 = 0.0, den2 = 0.0;
  for (std::int64_t i = 0; i < g.size(); ++i) {
    double d = std::abs(rec.v[i] - f.v[i]);
    rep.sup = std::max(rep.sup, d);
    num2 += d * d;
    den2 += std::norm(f.v[i]);
    auto x = g.point(i);
    double far = std::abs(x[0]);
    if (g.n == 2) far = std::max(far, std::abs(x[1]));
    if (far <= inner) rep.supIn = std::max(rep.supIn, d);
  }
  rep.rel = fMax > 0.0 ? rep.sup / fMax : rep.sup;
  rep.relIn = fMax > 0.0 ? rep.supIn / fMax : rep.supIn;
  rep.l2rel = den2 > 0.0 ? std::sqrt(num2 / den2) : std::sqrt(num2);
  return rep;
}

NormResult tail_in_space(const AnalyzeResult& res, const Grid& g,
                         const Exponent& p, const Exponent& q,
                         const WeightSequence& w, MixedSpace space, int T) {
  if (T < 0 || T > res.Jmax + 1)
    throw std::invalid_argument("tail_in_space: T out of range [0, Jmax+1]");
  CoeffField masked = res.lambda;
  for (auto& lvl : masked.levels)
    if (lvl.j < T) std::fill(lvl.lambda.begin(), lvl.lambda.end(), 0.0);
  return space == MixedSpace::LqLp ? seq_norm_b(masked, g, p, q, w)
                                   : seq_norm_f(masked, g, p, q, w);
}

GateReport synthesis_gates(const Exponent& p, const Exponent& q,
                           const WeightSequence& w, MixedSpace space, int K,
                           int L, double M) {
  GateReport rep;
  rep.K = K;
  rep.L = L;
  rep.M = M;
  int n = p.grid.n;
  double cLogP = log_holder_constants(p).cLocal;
  double cLogQ = log_holder_constants(q).cLocal;
  rep.needK = w.alpha2;
  if (space == MixedSpace::LqLp) {
    double sig = sigma_r(n, p.pMin);
    rep.needL = sig - w.alpha1 + cLogQ;
    rep.needM = L + 2.0 * n + 2.0 * w.alpha +
                std::max(1.0, 2.0 * cLogP) * sig + cLogQ;
  } else {
    double sig = sigma_rt(n, p.pMin, q.pMin);
    rep.needL = sig - w.alpha1;
    rep.needM = L + 2.0 * n + 2.0 * w.alpha + std::max(1.0, 2.0 * cLogP) * sig;
  }
  rep.kOk = K > rep.needK;
  rep.lOk = L > rep.needL;
  rep.mOk = M > rep.needM;
  return rep;
}

std::vector<std::pair<int, double>> density_demo(const GridFunction& f,
                                                 const AnalyzeResult& res) {
  const Grid& g = f.grid;
  std::vector<std::size_t> order(res.atoms.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const DyadicCube& ca = res.atoms[a].cube;
    const DyadicCube& cb = res.atoms[b].cube;
    auto key = [](const DyadicCube& c) {
      return std::tuple<int, std::int64_t, std::int64_t, std::int64_t>(
          c.j, std::abs(c.m[0]) + std::abs(c.m[1]), c.m[0], c.m[1]);
    };
    return key(ca) < key(cb);
  });

  GridFunction acc(g);
  double fMax = std::max(f.absMax(), 1e-300);
  double inner = g.A - (res.d - 1.0) / 2.0;
  std::vector<std::pair<int, double>> out;
  int used = 0, next = 1;
  auto residual = [&]() {
    double worst = 0.0;
    for (std::int64_t i = 0; i < g.size(); ++i) {
      auto x = g.point(i);
      double far = std::abs(x[0]);
      if (g.n == 2) far = std::max(far, std::abs(x[1]));
      if (far <= inner) worst = std::max(worst, std::abs(acc.v[i] - f.v[i]));
    }
    return worst / fMax;
  };
  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    const Atom& a = res.atoms[order[oi]];
    for (std::int64_t t0 = 0; t0 < a.len[0]; ++t0)
      for (std::int64_t t1 = 0; t1 < a.len[1]; ++t1) {
        std::int64_t idx = g.n == 1
                               ? a.lo[0] + t0
                               : g.flatten(static_cast<int>(a.lo[0] + t0),
                                           static_cast<int>(a.lo[1] + t1));
        acc.v[idx] +=
            a.lambda * a.values[static_cast<std::size_t>(t0 * a.len[1] + t1)];
      }
    ++used;
    if (used == next || oi + 1 == order.size()) {
      out.emplace_back(used, residual());
      next *= 2;
    }
  }
  if (out.empty()) out.emplace_back(0, residual());
  return out;
}

SprimeTailReport sprime_tail_diagnostic(const AnalyzeResult& res, const Grid& g,
                                        const Exponent& p,
                                        const WeightSequence& w,
                                        const GridFunction& test) {
  int order = g.n + 2 + static_cast<int>(std::ceil(w.alpha - 1e-12));
  if (order > 4)
    throw std::invalid_argument(
        "sprime_tail_diagnostic: seminorm order beyond grid support");
  double sem = schwartz_seminorm(test, order);
  Exponent qinf = Exponent::constant(g, kInf);
  double normB = seq_norm_b(res.lambda, g, p, qinf, w).value;

  SprimeTailReport rep;
  for (int j = 0; j <= res.Jmax; ++j) {
    GridFunction gj(g);
    for (const Atom& a : res.atoms) {
      if (a.cube.j != j) continue;
      for (std::int64_t t0 = 0; t0 < a.len[0]; ++t0)
        for (std::int64_t t1 = 0; t1 < a.len[1]; ++t1) {
          std::int64_t idx = g.n == 1
                                 ? a.lo[0] + t0
                                 : g.flatten(static_cast<int>(a.lo[0] + t0),
                                             static_cast<int>(a.lo[1] + t1));
          gj.v[idx] += a.lambda *
                       a.values[static_cast<std::size_t>(t0 * a.len[1] + t1)];
        }
    }
    cplx pairing = 0.0;
    for (std::int64_t i = 0; i < g.size(); ++i) pairing += gj.v[i] * test.v[i];
    double lhs = std::abs(pairing) * g.cellVolume();
    double bound =
        std::pow(2.0, -j * (w.alpha1 - g.n / p.pMin)) * normB * sem;
    rep.lhs.push_back(lhs);
    rep.bound.push_back(bound);
    if (bound > 0.0)
      rep.worstRatio = std::max(rep.worstRatio, lhs / bound);
  }
  return rep;
}

}  // namespace varexp
