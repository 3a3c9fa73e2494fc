#include "varexp/families.hpp"

#include <cmath>

#include "varexp/report.hpp"

namespace varexp {

namespace {

double unif(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int unifInt(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

}  // namespace

Rng family_rng(std::uint64_t seed, const std::string& label) {
  return Rng(seed ^ fnv1a(label));
}

GridFunction random_step(const Grid& g, Rng& rng) {
  int blocks = unifInt(rng, 3, 8);
  GridFunction f(g);
  for (int b = 0; b < blocks; ++b) {
    double lo = unif(rng, -g.A / 2, g.A / 2 - 0.2);
    double len = unif(rng, 0.1, g.A / 4);
    double hi = std::min(lo + len, g.A / 2);
    double c = unif(rng, -2.0, 2.0);
    for (std::int64_t i = 0; i < g.size(); ++i) {
      double x = g.point(i)[0];
      if (x >= lo && x < hi) f.v[i] += c;
    }
  }
  return f;
}

GridFunction random_gaussian_mix(const Grid& g, Rng& rng) {
  int parts = unifInt(rng, 1, 4);
  bool modulated = unifInt(rng, 0, 3) == 0;
  double freq = modulated ? unif(rng, 2.0, 12.0) : 0.0;
  GridFunction f(g);
  for (int k = 0; k < parts; ++k) {
    double c = unif(rng, -g.A / 4, g.A / 4);
    double wdt = unif(rng, 0.2, 1.5);
    double amp = unif(rng, -2.0, 2.0);
    for (std::int64_t i = 0; i < g.size(); ++i) {
      double x = g.point(i)[0];
      double t = (x - c) / wdt;
      f.v[i] += amp * std::exp(-t * t);
    }
  }
  if (modulated)
    for (std::int64_t i = 0; i < g.size(); ++i)
      f.v[i] *= std::cos(freq * g.point(i)[0]);
  return f;
}

GridFunction standard_function(const Grid& g, int index) {
  auto fn = [index](double x) -> double {
    switch (index) {
      case 0: return std::exp(-8 * x * x);
      case 1: return std::exp(-20 * x * x);
      case 2: return std::exp(-8 * x * x) * std::cos(8 * x);
      case 3: return std::exp(-8 * x * x) * std::cos(24 * x);
      case 4: {
        double t = std::abs(x);
        return t < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0;
      }
      case 5:
        return std::exp(-14 * (x - 0.6) * (x - 0.6)) +
               0.6 * std::exp(-10 * (x + 0.5) * (x + 0.5));
      case 6: return (x >= -0.5 && x < 0.25) ? 1.0 : 0.0;
      case 7: return x * std::exp(-9 * x * x);
      case 8: return std::exp(-11 * x * x) * std::sin(40 * x);
      default: return std::cos(3 * x) * std::exp(-6 * x * x);
    }
  };
  return GridFunction::sample(g, [&](double x, double) { return fn(x); });
}

Exponent random_smooth_exponent(const Grid& g, Rng& rng, double lo, double hi) {
  double base = unif(rng, lo, 0.5 * (lo + hi));
  int bumps = unifInt(rng, 1, 3);
  struct Bump { double c, w, a; };
  std::vector<Bump> bs;
  double room = hi - base;
  for (int k = 0; k < bumps; ++k)
    bs.push_back({unif(rng, -g.A / 3, g.A / 3), unif(rng, 0.5, 2.0),
                  unif(rng, 0.1, room / bumps)});
  return Exponent::fromFunction(g, [=](double x, double) {
    double v = base;
    for (const auto& b : bs) {
      double t = (x - b.c) / b.w;
      v += b.a * std::exp(-t * t);
    }
    return v;
  });
}

Exponent random_twopiece_exponent(const Grid& g, Rng& rng, double lo, double hi) {
  double split = unif(rng, -g.A / 2, g.A / 2);
  double left = unif(rng, lo, hi);
  double right = unif(rng, lo, hi);
  return Exponent::fromFunction(
      g, [=](double x, double) { return x < split ? left : right; });
}

CoeffLevel random_coeff_level(const Grid& g, Rng& rng, int j, int kind) {
  CoeffLevel lvl;
  lvl.j = j;
  std::int64_t box = (std::int64_t(1) << j) * std::int64_t(g.A);
  std::int64_t lim = std::max<std::int64_t>(box * 7 / 8 - 9, 1);
  std::uniform_int_distribution<std::int64_t> pos(-lim, lim);
  std::normal_distribution<double> dist;
  int count = kind == 0 ? 1 : 17;
  lvl.mLo = {pos(rng), 0};
  lvl.mCount = {count, 1};
  lvl.lambda.assign(count, 0.0);
  for (auto& v : lvl.lambda) v = dist(rng);
  return lvl;
}

CoeffField random_coeff_field(const Grid& g, int Jmax, Rng& rng) {
  CoeffField field = CoeffField::zeros(g, Jmax);
  for (int j = 0; j <= Jmax; ++j)
    field.levels[j] = random_coeff_level(g, rng, j, j % 2);
  return field;
}

FunctionSequence random_sequence(const Grid& g, int count, Rng& rng) {
  FunctionSequence seq(g, 0);
  for (int nu = 0; nu < count; ++nu) {
    GridFunction f = random_gaussian_mix(g, rng);
    double fac = std::exp2(-0.4 * nu);
    for (auto& v : f.v) v *= fac;
    seq.push(std::move(f));
  }
  return seq;
}

}  // namespace varexp
