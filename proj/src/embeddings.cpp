#include "varexp/embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "modular_kernel.hpp"
#include "varexp/modular.hpp"

namespace varexp {

namespace {

void requireGrid(const Grid& g, const Grid& other, const char* who) {
  if (!(other == g))
    throw std::invalid_argument(std::string(who) + ": grid mismatch");
}

void requireOrdered(const Exponent& p0, const Exponent& p1, const char* who) {
  for (std::size_t i = 0; i < p0.recip.size(); ++i)
    if (p0.recip[i] < p1.recip[i] - 1e-15)
      throw std::invalid_argument(std::string(who) +
                                  ": p0 <= p1 must hold pointwise");
}

void requireLevels(const WeightSequence& w, int levels, const char* who) {
  if (w.levels() < levels)
    throw std::invalid_argument(std::string(who) + ": weight sequence too short");
}

// w0_j / w1_j = 2^{j n (1/p0 - 1/p1)} on the grid, within relative 1e-9.
void requireWeightRatio(const WeightSequence& w0, const WeightSequence& w1,
                        const Exponent& p0, const Exponent& p1, int levels,
                        const char* who) {
  const Grid& g = w0.grid;
  for (int j = 0; j < levels; ++j)
    for (std::int64_t i = 0; i < g.size(); ++i) {
      double want = std::exp2(j * g.n * (p0.recip[i] - p1.recip[i]));
      double got = w0.at(j, i) / w1.at(j, i);
      if (!(std::abs(got / want - 1.0) <= 1e-9))
        throw std::invalid_argument(
            std::string(who) + ": weight ratio does not match 2^{jn(1/p0-1/p1)}");
    }
}

// The two sides of the level-j transfer: lambda w_j chi (left) and the
// same sum carrying 2^{jn(1/p0-1/p1)} (right).
struct TransferSides {
  GridFunction left, right;
};

TransferSides transferSides(const CoeffLevel& lam, const Grid& g,
                            const Exponent& p0, const Exponent& p1,
                            const WeightSequence& w) {
  GridFunction base = level_step(lam, g);
  TransferSides s{GridFunction(g), GridFunction(g)};
  for (std::int64_t i = 0; i < g.size(); ++i) {
    cplx b = base.v[i];
    if (b == cplx{0.0, 0.0}) continue;
    double wj = w.at(lam.j, i);
    s.left.v[i] = b * wj;
    s.right.v[i] = b * wj * std::exp2(lam.j * g.n * (p0.recip[i] - p1.recip[i]));
  }
  return s;
}

// inf{mu > 0 : rho_p(e^{-u} F / mu^{1/q(.)}) <= 1} through the shared
// scalar solver; u carries a uniform multiplier of F into the solve.
double levelInfimum(const detail::ModularKernel& k, double u) {
  if (k.empty()) return 0.0;
  detail::LogSolveResult s = detail::solve_scale(k, u, 1e-11);
  if (s.infeasible) return kInf;
  if (std::isinf(s.v) && s.v < 0) return 0.0;
  return std::exp(s.v);
}

}  // namespace

GridFunction level_step(const CoeffLevel& lam, const Grid& g) {
  if (lam.j < 0)
    throw std::invalid_argument("level_step: level must be nonnegative");
  if (std::ldexp(1.0, -lam.j) < 4.0 * g.h * (1.0 - 1e-12))
    throw std::invalid_argument("level_step: grid does not resolve the level");
  double scale = std::ldexp(1.0, lam.j);
  GridFunction f(g);
  for (std::int64_t i = 0; i < g.size(); ++i) {
    auto x = g.point(i);
    auto m0 = static_cast<std::int64_t>(std::floor(x[0] * scale + 0.5));
    auto m1 = g.n == 2
                  ? static_cast<std::int64_t>(std::floor(x[1] * scale + 0.5))
                  : 0;
    f.v[i] = lam.at(m0, m1);
  }
  return f;
}

NikolskiiReport nikolskii_constant_q(const CoeffLevel& lam, const Grid& g,
                                     const Exponent& p0, const Exponent& p1,
                                     const WeightSequence& w) {
  requireGrid(g, p0.grid, "nikolskii_constant_q");
  requireGrid(g, p1.grid, "nikolskii_constant_q");
  requireGrid(g, w.grid, "nikolskii_constant_q");
  requireOrdered(p0, p1, "nikolskii_constant_q");
  requireLevels(w, lam.j + 1, "nikolskii_constant_q");

  TransferSides s = transferSides(lam, g, p0, p1, w);
  NikolskiiReport rep;
  rep.lhs = luxemburg_norm(s.left, p1).value;
  rep.rhs = luxemburg_norm(s.right, p0).value;
  rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
  return rep;
}

NikolskiiVarReport nikolskii_variable_q(const CoeffLevel& lam, const Grid& g,
                                        const Exponent& p0, const Exponent& p1,
                                        const Exponent& q,
                                        const WeightSequence& w, double c0) {
  requireGrid(g, p0.grid, "nikolskii_variable_q");
  requireGrid(g, p1.grid, "nikolskii_variable_q");
  requireGrid(g, q.grid, "nikolskii_variable_q");
  requireGrid(g, w.grid, "nikolskii_variable_q");
  requireOrdered(p0, p1, "nikolskii_variable_q");
  requireLevels(w, lam.j + 1, "nikolskii_variable_q");
  if (!(q.pMin < kInf))
    throw std::invalid_argument(
        "nikolskii_variable_q: q is everywhere infinite; use the constant-q form");
  if (!(c0 > 0.0))
    throw std::invalid_argument("nikolskii_variable_q: c0 must be positive");

  TransferSides s = transferSides(lam, g, p0, p1, w);
  auto kLeft = detail::ModularKernel::build(s.left, p1, &q);
  auto kRight = detail::ModularKernel::build(s.right, p0, &q);

  NikolskiiVarReport rep;
  rep.slack = std::ldexp(1.0, -lam.j);
  rep.rightInf = levelInfimum(kRight, 0.0);
  rep.leftInf = levelInfimum(kLeft, -std::log(c0));
  rep.skip = !(rep.rightInf <= 1.0 + 1e-12);
  double cap = rep.rightInf + rep.slack;
  auto passes = [&](double inf) { return inf <= cap * (1.0 + 1e-9); };
  rep.pass = passes(rep.leftInf);

  const double cHi = 4.0, cLo = 1e-9;
  if (passes(levelInfimum(kLeft, -std::log(cHi)))) {
    rep.c0Max = cHi;
  } else if (!passes(levelInfimum(kLeft, -std::log(cLo)))) {
    rep.c0Max = 0.0;
  } else {
    double uGood = std::log(cLo), uBad = std::log(cHi);
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (uGood + uBad);
      (passes(levelInfimum(kLeft, -mid)) ? uGood : uBad) = mid;
    }
    rep.c0Max = std::exp(uGood);
  }
  return rep;
}

SeqEmbedReport sobolev_seq_embed(const CoeffField& lam, const Grid& g,
                                 const Exponent& p0, const Exponent& p1,
                                 const Exponent& q, const WeightSequence& w0,
                                 const WeightSequence& w1, double c0) {
  requireGrid(g, p0.grid, "sobolev_seq_embed");
  requireGrid(g, p1.grid, "sobolev_seq_embed");
  requireGrid(g, q.grid, "sobolev_seq_embed");
  requireGrid(g, w0.grid, "sobolev_seq_embed");
  requireGrid(g, w1.grid, "sobolev_seq_embed");
  requireOrdered(p0, p1, "sobolev_seq_embed");
  requireLevels(w0, lam.count(), "sobolev_seq_embed");
  requireLevels(w1, lam.count(), "sobolev_seq_embed");
  requireWeightRatio(w0, w1, p0, p1, lam.count(), "sobolev_seq_embed");
  if (!(c0 > 0.0))
    throw std::invalid_argument("sobolev_seq_embed: c0 must be positive");

  SeqEmbedReport rep;
  rep.source = seq_norm_b(lam, g, p0, q, w0).value;
  rep.target = seq_norm_b(lam, g, p1, q, w1).value;
  rep.ratio = rep.source > 0.0 ? rep.target / rep.source : 0.0;
  rep.bound = std::pow(3.0, 1.0 / q.pMin) / c0;
  rep.pass = rep.ratio <= rep.bound * (1.0 + 1e-9);
  return rep;
}

SpaceEmbedReport sobolev_space_embed(const GridFunction& f, const Exponent& p0,
                                     const Exponent& p1, const Exponent& q,
                                     const WeightSequence& w0,
                                     const WeightSequence& w1,
                                     const AdmissiblePair& pair, int K, int L) {
  const Grid& g = f.grid;
  requireGrid(g, p0.grid, "sobolev_space_embed");
  requireGrid(g, p1.grid, "sobolev_space_embed");
  requireGrid(g, q.grid, "sobolev_space_embed");
  requireGrid(g, w0.grid, "sobolev_space_embed");
  requireGrid(g, w1.grid, "sobolev_space_embed");
  requireOrdered(p0, p1, "sobolev_space_embed");
  if (w0.levels() != w1.levels())
    throw std::invalid_argument("sobolev_space_embed: weight level counts differ");
  requireWeightRatio(w0, w1, p0, p1, w0.levels(), "sobolev_space_embed");

  SpaceEmbedReport rep;
  rep.source = besov_norm(f, p0, q, w0, pair).value;
  rep.target = besov_norm(f, p1, q, w1, pair).value;
  rep.ratio = rep.source > 0.0 ? rep.target / rep.source : 0.0;
  rep.needK = w1.alpha2;
  rep.needL = sigma_r(g.n, p1.pMin) - w1.alpha1 + log_holder_constants(q).cLocal;
  rep.kOk = K > rep.needK;
  rep.lOk = L > rep.needL;
  return rep;
}

EpsEmbedReport eps_embed_check(const GridFunction& f, const Exponent& p0,
                               const Exponent& p1, const Exponent& q0,
                               const Exponent& q1, const WeightSequence& w0,
                               const WeightSequence& w1, const GridFunction& eps,
                               const AdmissiblePair& pair) {
  const Grid& g = f.grid;
  requireGrid(g, p0.grid, "eps_embed_check");
  requireGrid(g, p1.grid, "eps_embed_check");
  requireGrid(g, q0.grid, "eps_embed_check");
  requireGrid(g, q1.grid, "eps_embed_check");
  requireGrid(g, w0.grid, "eps_embed_check");
  requireGrid(g, w1.grid, "eps_embed_check");
  requireGrid(g, eps.grid, "eps_embed_check");
  if (w0.levels() != w1.levels())
    throw std::invalid_argument("eps_embed_check: weight level counts differ");

  for (int j = 0; j < w0.levels(); ++j)
    for (std::int64_t i = 0; i < g.size(); ++i) {
      double got = w0.at(j, i) / w1.at(j, i);
      double want = std::exp2(
          j * (g.n * (p0.recip[i] - p1.recip[i]) + eps.v[i].real()));
      if (!(std::abs(got / want - 1.0) <= 1e-9) || got < 1.0 - 1e-12)
        throw std::invalid_argument(
            "eps_embed_check: weight ratio must equal 2^{j(n/p0-n/p1+eps)} >= 1");
    }

  EpsEmbedReport rep;
  rep.epsMin = kInf;
  for (std::int64_t i = 0; i < g.size(); ++i)
    rep.epsMin = std::min(rep.epsMin, eps.v[i].real());
  rep.gatePass = rep.epsMin > 0.0;
  rep.source = besov_norm(f, p0, q0, w0, pair).value;
  rep.target = besov_norm(f, p1, q1, w1, pair).value;
  rep.ratio = rep.source > 0.0 ? rep.target / rep.source : 0.0;
  return rep;
}

ChiEtaReport chi_eta_lower(const Grid& g, const DyadicCube& q, double R) {
  if (!(R > 0.0))
    throw std::invalid_argument("chi_eta_lower: R must be positive");
  GridFunction chi = cube_indicator(g, q);  // validates level and overlap
  auto c = q.center();
  double side = q.side();
  double scale = std::ldexp(1.0, q.j);
  double amp = std::pow(scale, g.n);
  const int nodes = g.n == 1 ? 256 : 64;
  double du = side / nodes;
  double lo0 = c[0] - 0.5 * side, lo1 = c[1] - 0.5 * side;

  ChiEtaReport rep;
  rep.c = kInf;
  for (std::int64_t i = 0; i < g.size(); ++i) {
    if (chi.v[i].real() < 0.5) continue;
    auto x = g.point(i);
    double s = 0.0;
    if (g.n == 1) {
      for (int k = 0; k < nodes; ++k) {
        double y = lo0 + (k + 0.5) * du;
        s += std::pow(1.0 + scale * std::abs(x[0] - y), -R);
      }
      s *= du * amp;
    } else {
      for (int k0 = 0; k0 < nodes; ++k0)
        for (int k1 = 0; k1 < nodes; ++k1) {
          double y0 = lo0 + (k0 + 0.5) * du;
          double y1 = lo1 + (k1 + 0.5) * du;
          s += std::pow(1.0 + scale * std::hypot(x[0] - y0, x[1] - y1), -R);
        }
      s *= du * du * amp;
    }
    rep.c = std::min(rep.c, s);
    rep.cMax = std::max(rep.cMax, s);
  }
  if (!(rep.c < kInf)) rep.c = 0.0;  // cube missed every sample
  return rep;
}

MoleculeDecayProbe molecule_envelope_ratio(const ReproducingSystem& sys, int j,
                                           const GridFunction& u,
                                           const DyadicCube& q, double M,
                                           double N) {
  const Grid& g = sys.grid;
  requireGrid(g, u.grid, "molecule_envelope_ratio");
  if (j < 0 || j > sys.Jmax)
    throw std::invalid_argument("molecule_envelope_ratio: level out of range");
  if (q.j < 0)
    throw std::invalid_argument("molecule_envelope_ratio: cube level negative");
  if (!(N >= 0.0))
    throw std::invalid_argument("molecule_envelope_ratio: N must be nonnegative");
  if (!(M > N + sys.L + g.n))
    throw std::invalid_argument("molecule_envelope_ratio: need M > N + L + n");

  MoleculeDecayProbe probe;
  probe.j = j;
  probe.nu = q.j;
  probe.m = q.m;
  GridFunction conv = convolve(sys.phi[j], u);
  auto c = q.center();
  double levelFac = j <= q.j ? std::exp2(-(q.j - j) * (sys.L + g.n))
                             : std::exp2(-(j - q.j) * sys.K);
  double decay = j <= q.j ? N : M;
  double eScale = std::ldexp(1.0, std::min(j, q.j));
  for (std::int64_t i = 0; i < g.size(); ++i) {
    double a = std::abs(conv.v[i]);
    if (a == 0.0) continue;
    probe.peak = std::max(probe.peak, a);
    auto x = g.point(i);
    double dist = g.n == 1 ? std::abs(x[0] - c[0])
                           : std::hypot(x[0] - c[0], x[1] - c[1]);
    double env = levelFac * std::pow(1.0 + eScale * dist, -decay);
    probe.ratio = std::max(probe.ratio, a / env);
  }
  return probe;
}

MoleculeDecayReport molecule_convolution_decay(const ReproducingSystem& sys,
                                               double M, double N,
                                               int topLevel) {
  const Grid& g = sys.grid;
  if (topLevel < 0 || topLevel > sys.Jmax)
    throw std::invalid_argument("molecule_convolution_decay: topLevel out of range");
  if (!(N >= 0.0))
    throw std::invalid_argument("molecule_convolution_decay: N must be nonnegative");
  if (!(M > N + sys.L + g.n))
    throw std::invalid_argument("molecule_convolution_decay: need M > N + L + n");

  MoleculeDecayReport rep;
  double d = sys.d();
  for (int nu = 0; nu <= topLevel; ++nu) {
    DyadicCube q{nu, {0, 0}};
    GridFunction mol =
        atom_to_molecule(make_bump_atom(g, q, sys.K, sys.L, d), d, M);
    for (int j = 0; j <= topLevel; ++j)
      rep.probes.push_back(molecule_envelope_ratio(sys, j, mol, q, M, N));
    if (nu >= 2) {  // off-centre companions probe m-uniformity
      DyadicCube qm{nu, {std::int64_t{1} << (nu - 2), 0}};
      GridFunction molm =
          atom_to_molecule(make_bump_atom(g, qm, sys.K, sys.L, d), d, M);
      rep.probes.push_back(molecule_envelope_ratio(sys, nu, molm, qm, M, N));
      rep.probes.push_back(
          molecule_envelope_ratio(sys, nu - 2, molm, qm, M, N));
    }
  }

  rep.cMin = kInf;
  for (const auto& p : rep.probes) {
    rep.cMax = std::max(rep.cMax, p.ratio);
    if (p.ratio > 0.0) rep.cMin = std::min(rep.cMin, p.ratio);
  }
  if (!(rep.cMin < kInf)) rep.cMin = 0.0;

  // log2 peak against nu - j on the centred deepest-level series
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (const auto& p : rep.probes) {
    if (p.nu != topLevel || p.j >= p.nu || p.m != std::array<std::int64_t, 2>{0, 0})
      continue;
    if (!(p.peak > 0.0)) continue;
    double dx = p.nu - p.j, dy = std::log2(p.peak);
    sx += dx;
    sy += dy;
    sxx += dx * dx;
    sxy += dx * dy;
    ++count;
  }
  if (count >= 2) {
    double det = count * sxx - sx * sx;
    rep.slope = (count * sxy - sx * sy) / det;
  }
  return rep;
}

EtaMaximalReport eta_maximal_bound(const CoeffLevel& h, const Grid& g, int j,
                                   double R, double t) {
  if (!(t > 0.0) || t > 1.0)
    throw std::invalid_argument("eta_maximal_bound: t must lie in (0,1]");
  if (!(R > g.n / t))
    throw std::invalid_argument("eta_maximal_bound: need R > n/t");
  if (j < 0)
    throw std::invalid_argument("eta_maximal_bound: j must be nonnegative");

  int nu = h.j;
  GridFunction base = level_step(h, g);
  EtaMaximalReport rep;
  rep.factor = std::max(1.0, std::exp2((nu - j) * R));
  if (base.isZero()) return rep;

  // eta_{nu,Rt} * |F|^t by direct summation with the analytic kernel;
  // the grid-sampled kernel would vanish where x - y leaves the box,
  // zeroing the majorant on edge slivers that the lhs still reaches.
  std::vector<std::int64_t> support;
  for (std::int64_t i = 0; i < g.size(); ++i)
    if (base.v[i].real() != 0.0) support.push_back(i);
  double kScale = std::ldexp(1.0, nu);
  double kAmp = std::pow(kScale, g.n);
  double cell = std::pow(g.h, g.n);
  std::vector<double> conv(g.size(), 0.0);
  for (std::int64_t i = 0; i < g.size(); ++i) {
    auto x = g.point(i);
    double s = 0.0;
    for (std::int64_t k : support) {
      auto y = g.point(k);
      double dist = g.n == 1 ? std::abs(x[0] - y[0])
                             : std::hypot(x[0] - y[0], x[1] - y[1]);
      s += std::pow(std::abs(base.v[k].real()), t) *
           std::pow(1.0 + kScale * dist, -R * t);
    }
    conv[i] = s * kAmp * cell;
  }

  std::vector<double> lhs(g.size(), 0.0);
  double eScale = std::ldexp(1.0, std::min(nu, j));
  double side = std::ldexp(1.0, -nu);
  for (std::int64_t a = 0; a < h.mCount[0]; ++a)
    for (std::int64_t b = 0; b < h.mCount[1]; ++b) {
      double lam = std::abs(h.at(h.mLo[0] + a, h.mLo[1] + b));
      if (lam == 0.0) continue;
      double c0 = side * (h.mLo[0] + a), c1 = side * (h.mLo[1] + b);
      for (std::int64_t i = 0; i < g.size(); ++i) {
        auto x = g.point(i);
        double dist = g.n == 1 ? std::abs(x[0] - c0)
                               : std::hypot(x[0] - c0, x[1] - c1);
        lhs[i] += lam * std::pow(1.0 + eScale * dist, -R);
      }
    }

  for (std::int64_t i = 0; i < g.size(); ++i) {
    if (lhs[i] <= 0.0) continue;
    double rhs = rep.factor * std::pow(conv[i], 1.0 / t);
    rep.c = rhs > 0.0 ? std::max(rep.c, lhs[i] / rhs) : kInf;
  }
  return rep;
}

}  // namespace varexp
