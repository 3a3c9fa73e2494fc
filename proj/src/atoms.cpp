#include "varexp/atoms.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace varexp {

namespace {

constexpr double kMomentTol = 1e-8;

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

std::vector<std::array<int, 2>> momentOrders(int n, int L) {
  std::vector<std::array<int, 2>> out;
  if (n == 1) {
    for (int b = 0; b < L; ++b) out.push_back({b, 0});
  } else {
    for (int b0 = 0; b0 < L; ++b0)
      for (int b1 = 0; b0 + b1 < L; ++b1) out.push_back({b0, b1});
  }
  return out;
}

double derivSlack(const Grid& g, int j, int K) {
  return 10.0 * std::max(1, K) * g.h * std::ldexp(1.0, j);
}

/// max normalised discrete moment |h^n sum x^beta f| over |beta| < L.
double worstMomentOf(const GridFunction& f, int L) {
  const Grid& g = f.grid;
  double l1 = 0.0, rsup = 0.0, amax = f.absMax();
  for (std::int64_t i = 0; i < g.size(); ++i) {
    double m = std::abs(f.v[i]);
    l1 += m;
    if (m > 1e-15 * amax) rsup = std::max(rsup, g.radius(i));
  }
  l1 *= g.cellVolume();
  if (l1 == 0.0) return 0.0;
  double worst = 0.0;
  for (const auto& beta : momentOrders(g.n, L)) {
    cplx mom = 0.0;
    for (std::int64_t i = 0; i < g.size(); ++i) {
      auto x = g.point(i);
      double xb = 1.0;
      for (int r = 0; r < beta[0]; ++r) xb *= x[0];
      for (int r = 0; r < beta[1]; ++r) xb *= x[1];
      mom += xb * f.v[i];
    }
    mom *= g.cellVolume();
    double ref = l1 * std::pow(std::max(1.0, rsup), beta[0] + beta[1]);
    worst = std::max(worst, std::abs(mom) / ref);
  }
  return worst;
}

}  // namespace

AtomReport verify_atom(const GridFunction& a, const DyadicCube& q, int K, int L,
                       double d) {
  if (K < 0 || L < 0 || !(d > 1.0))
    throw std::invalid_argument("verify_atom: need K, L >= 0 and d > 1");
  const Grid& g = a.grid;
  AtomReport rep;
  rep.slack = derivSlack(g, q.j, K);

  auto c = q.center();
  double half = q.scaledHalfWidth(d);
  double tol = 1e-9 * g.h;
  double outside = 0.0;
  for (std::int64_t i = 0; i < g.size(); ++i) {
    auto x = g.point(i);
    bool in = true;
    for (int ax = 0; ax < g.n; ++ax)
      if (std::abs(x[ax] - c[ax]) > half + tol) in = false;
    if (!in) outside = std::max(outside, std::abs(a.v[i]));
  }
  rep.passSupport = outside <= 1e-13 * std::max(a.absMax(), 1e-300);

  for (const auto& gamma : derivOrders(g.n, K)) {
    double bound = std::ldexp(1.0, (gamma[0] + gamma[1]) * q.j);
    double measured = finite_difference(a, gamma).absMax();
    rep.worstDeriv = std::max(rep.worstDeriv, measured / bound);
  }
  rep.passDerivs = rep.worstDeriv <= 1.0 + rep.slack;

  rep.worstMoment = q.j == 0 ? 0.0 : worstMomentOf(a, L);
  rep.passMoments = rep.worstMoment <= kMomentTol;
  return rep;
}

MoleculeReport verify_molecule(const GridFunction& u, const DyadicCube& q, int K,
                               int L, double M) {
  if (K < 0 || L < 0 || !(M > 0.0))
    throw std::invalid_argument("verify_molecule: need K, L >= 0 and M > 0");
  const Grid& g = u.grid;
  MoleculeReport rep;
  rep.slack = derivSlack(g, q.j, K);

  auto c = q.center();
  double scale = std::ldexp(1.0, q.j);
  for (const auto& gamma : derivOrders(g.n, K)) {
    double bound = std::ldexp(1.0, (gamma[0] + gamma[1]) * q.j);
    GridFunction df = finite_difference(u, gamma);
    double worst = 0.0;
    for (std::int64_t i = 0; i < g.size(); ++i) {
      auto x = g.point(i);
      double dist = g.n == 1 ? std::abs(x[0] - c[0])
                             : std::hypot(x[0] - c[0], x[1] - c[1]);
      double decay = std::pow(1.0 + scale * dist, -M);
      worst = std::max(worst, std::abs(df.v[i]) / (bound * decay));
    }
    rep.worstDecay = std::max(rep.worstDecay, worst);
  }
  rep.passDecay = rep.worstDecay <= 1.0 + rep.slack;

  rep.worstMoment = q.j == 0 ? 0.0 : worstMomentOf(u, L);
  rep.passMoments = rep.worstMoment <= kMomentTol;
  return rep;
}

GridFunction atom_to_molecule(const GridFunction& a, double d, double M) {
  double scale =
      std::pow(1.0 + d * std::sqrt(static_cast<double>(a.grid.n)) / 2.0, -M);
  return cplx{scale, 0.0} * a;
}

GridFunction make_bump_atom(const Grid& g, const DyadicCube& q, int K, int L,
                            double d) {
  if (q.j < 0 || K < 0 || L < 0 || !(d > 1.0))
    throw std::invalid_argument("make_bump_atom: bad parameters");
  int diffs = q.j == 0 ? 0 : L;
  double half = q.scaledHalfWidth(d);
  double rho = 0.9 * half - (diffs + 1) * g.h;
  if (rho < 4.0 * g.h) {
    std::int64_t need = g.N;
    while (0.9 * half - (diffs + 1) * (2.0 * g.A / need) <
           4.0 * (2.0 * g.A / need))
      need *= 2;
    throw std::invalid_argument("make_bump_atom: grid too coarse, need N >= " +
                                std::to_string(need));
  }
  auto c = q.center();
  GridFunction b(g);
  for (std::int64_t i = 0; i < g.size(); ++i) {
    auto x = g.point(i);
    double dist = g.n == 1 ? std::abs(x[0] - c[0])
                           : std::hypot(x[0] - c[0], x[1] - c[1]);
    double t = dist / rho;
    if (t < 1.0) b.v[i] = std::exp(-1.0 / (1.0 - t * t));
  }
  // central differences along the first axis kill all moments |beta| < L
  // exactly (summation by parts on the lattice)
  GridFunction a = diffs > 0 ? finite_difference(b, {diffs, 0}) : b;
  double worst = 0.0;
  for (const auto& gamma : derivOrders(g.n, K)) {
    double bound = std::ldexp(1.0, (gamma[0] + gamma[1]) * q.j);
    worst = std::max(worst, finite_difference(a, gamma).absMax() / bound);
  }
  if (worst == 0.0) throw std::logic_error("make_bump_atom: empty bump");
  return cplx{0.9 / worst, 0.0} * a;
}

double CoeffLevel::at(std::int64_t m0, std::int64_t m1) const {
  std::int64_t i0 = m0 - mLo[0], i1 = m1 - mLo[1];
  if (i0 < 0 || i0 >= mCount[0] || i1 < 0 || i1 >= mCount[1]) return 0.0;
  return lambda[static_cast<std::size_t>(i0 * mCount[1] + i1)];
}

double& CoeffLevel::ref(std::int64_t m0, std::int64_t m1) {
  std::int64_t i0 = m0 - mLo[0], i1 = m1 - mLo[1];
  if (i0 < 0 || i0 >= mCount[0] || i1 < 0 || i1 >= mCount[1])
    throw std::out_of_range("CoeffLevel: m outside the stored box");
  return lambda[static_cast<std::size_t>(i0 * mCount[1] + i1)];
}

CoeffField CoeffField::zeros(const Grid& g, int Jmax) {
  if (Jmax < 0) throw std::invalid_argument("CoeffField: Jmax must be >= 0");
  CoeffField field;
  field.n = g.n;
  for (int j = 0; j <= Jmax; ++j) {
    CoeffLevel lvl;
    lvl.j = j;
    double scale = std::ldexp(1.0, j);
    for (int ax = 0; ax < g.n; ++ax) {
      lvl.mLo[ax] = static_cast<std::int64_t>(std::floor(-g.A * scale + 0.5));
      std::int64_t hi =
          static_cast<std::int64_t>(std::floor((g.A - g.h) * scale + 0.5));
      lvl.mCount[ax] = hi - lvl.mLo[ax] + 1;
    }
    lvl.lambda.assign(
        static_cast<std::size_t>(lvl.mCount[0] * lvl.mCount[1]), 0.0);
    field.levels.push_back(std::move(lvl));
  }
  return field;
}

double CoeffField::absMax() const {
  double m = 0.0;
  for (const auto& lvl : levels)
    for (double v : lvl.lambda) m = std::max(m, std::abs(v));
  return m;
}

void save_coeffs(const std::string& path, const CoeffField& field) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_coeffs: cannot open " + path);
  out << "# coeff-field n " << field.n << " levels " << field.count() << "\n";
  char buf[64];
  for (const auto& lvl : field.levels) {
    out << "# level " << lvl.j << " mLo " << lvl.mLo[0] << " " << lvl.mLo[1]
        << " mCount " << lvl.mCount[0] << " " << lvl.mCount[1] << "\n";
    for (std::int64_t i0 = 0; i0 < lvl.mCount[0]; ++i0)
      for (std::int64_t i1 = 0; i1 < lvl.mCount[1]; ++i1) {
        double v = lvl.lambda[static_cast<std::size_t>(i0 * lvl.mCount[1] + i1)];
        if (v == 0.0) continue;
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << lvl.j << "," << (lvl.mLo[0] + i0) << "," << (lvl.mLo[1] + i1)
            << "," << buf << "\n";
      }
  }
  if (!out) throw std::runtime_error("save_coeffs: write failed for " + path);
}

CoeffField load_coeffs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_coeffs: cannot open " + path);
  CoeffField field;
  std::string line;
  bool sawHeader = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      int n, count;
      if (std::sscanf(line.c_str(), "# coeff-field n %d levels %d", &n,
                      &count) == 2) {
        field.n = n;
        sawHeader = true;
        continue;
      }
      CoeffLevel lvl;
      long long lo0, lo1, c0, c1;
      if (std::sscanf(line.c_str(), "# level %d mLo %lld %lld mCount %lld %lld",
                      &lvl.j, &lo0, &lo1, &c0, &c1) == 5) {
        lvl.mLo = {lo0, lo1};
        lvl.mCount = {c0, c1};
        lvl.lambda.assign(static_cast<std::size_t>(c0 * c1), 0.0);
        field.levels.push_back(std::move(lvl));
        continue;
      }
      throw std::runtime_error("load_coeffs: bad header line: " + line);
    }
    long long j, m0, m1;
    double v;
    if (std::sscanf(line.c_str(), "%lld,%lld,%lld,%lf", &j, &m0, &m1, &v) != 4)
      throw std::runtime_error("load_coeffs: bad row: " + line);
    CoeffLevel* lvl = nullptr;
    for (auto& l : field.levels)
      if (l.j == j) lvl = &l;
    if (!lvl) throw std::runtime_error("load_coeffs: row before level header");
    lvl->ref(m0, m1) = v;
  }
  if (!sawHeader) throw std::runtime_error("load_coeffs: missing file header");
  return field;
}

FunctionSequence coeff_step_functions(const CoeffField& field, const Grid& g,
                                      const WeightSequence& w) {
  if (field.n != g.n)
    throw std::invalid_argument("coeff_step_functions: dimension mismatch");
  if (field.count() == 0)
    throw std::invalid_argument("coeff_step_functions: empty coefficient field");
  FunctionSequence seq;
  for (const auto& lvl : field.levels) {
    if (lvl.j >= w.levels())
      throw std::invalid_argument(
          "coeff_step_functions: weight sequence too short");
    double scale = std::ldexp(1.0, lvl.j);
    double side = std::ldexp(1.0, -lvl.j);
    GridFunction f(g);
    for (std::int64_t i = 0; i < g.size(); ++i) {
      auto x = g.point(i);
      std::int64_t m0 = static_cast<std::int64_t>(std::floor(x[0] * scale + 0.5));
      std::int64_t m1 =
          g.n == 2 ? static_cast<std::int64_t>(std::floor(x[1] * scale + 0.5))
                   : 0;
      double lam = lvl.at(m0, m1);
      if (lam == 0.0) continue;
      f.v[i] = lam * w.atPoint(lvl.j, side * m0, side * m1);
    }
    seq.push(std::move(f));
  }
  return seq;
}

NormResult seq_norm_b(const CoeffField& field, const Grid& g, const Exponent& p,
                      const Exponent& q, const WeightSequence& w) {
  return norm_lq_Lp(coeff_step_functions(field, g, w), p, q);
}

NormResult seq_norm_f(const CoeffField& field, const Grid& g, const Exponent& p,
                      const Exponent& q, const WeightSequence& w) {
  if (p.pMax == kInf || q.pMax == kInf)
    throw std::invalid_argument("seq_norm_f: requires pMax, qMax < inf");
  return norm_Lp_lq(coeff_step_functions(field, g, w), p, q);
}

}  // namespace varexp
