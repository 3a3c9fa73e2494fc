#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "varexp/modular.hpp"

using namespace varexp;

namespace {

GridFunction randomStep(const Grid& g, std::mt19937_64& rng, int blocks = 4) {
  std::uniform_real_distribution<double> pos(-g.A * 0.8, g.A * 0.8);
  std::uniform_real_distribution<double> width(0.1, g.A * 0.4);
  std::uniform_real_distribution<double> height(0.2, 2.0);
  GridFunction f(g);
  for (int b = 0; b < blocks; ++b) {
    double c = pos(rng), w = width(rng), v = height(rng);
    for (std::int64_t i = 0; i < g.size(); ++i)
      if (std::abs(g.point(i)[0] - c) < w) f.v[i] += v;
  }
  return f;
}

GridFunction randomGauss(const Grid& g, std::mt19937_64& rng, int k = 3) {
  std::uniform_real_distribution<double> pos(-g.A * 0.5, g.A * 0.5);
  std::uniform_real_distribution<double> sharp(2.0, 20.0);
  std::uniform_real_distribution<double> height(0.2, 2.0);
  GridFunction f(g);
  for (int b = 0; b < k; ++b) {
    double c = pos(rng), a = sharp(rng), v = height(rng);
    for (std::int64_t i = 0; i < g.size(); ++i) {
      double x = g.point(i)[0];
      f.v[i] += v * std::exp(-a * (x - c) * (x - c));
    }
  }
  return f;
}

// closed-form norm for constant p: (h sum |f|^p)^{1/p}, or max |f|
double classicalNorm(const GridFunction& f, double p) {
  if (std::isinf(p)) return f.absMax();
  double s = 0.0;
  for (auto z : f.v) s += std::pow(std::abs(z), p);
  return std::pow(f.grid.cellVolume() * s, 1.0 / p);
}

}  // namespace

TEST_CASE("phi_p branches") {
  CHECK(phi_p(2.0, 2.0) == 4.0);
  CHECK(phi_p(0.0, 0.5) == 0.0);
  CHECK(phi_p(0.9, kInf) == 0.0);
  CHECK(phi_p(1.0, kInf) == 0.0);
  CHECK(std::isinf(phi_p(1.1, kInf)));
  CHECK(phi_p(1.0 + 5e-15, kInf) == 0.0);  // tie tolerance
  CHECK_THROWS_AS(phi_p(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(phi_p(-1.0, 2.0), std::invalid_argument);
}

TEST_CASE("semimodular on split exponent regions") {
  Grid g = Grid::make(1, 2.0, 256);
  Exponent p = Exponent::fromFunction(
      g, [](double x, double) { return x < 0 ? 2.0 : kInf; });
  GridFunction f = GridFunction::sample(
      g, [](double x, double) { return x < 0 ? 1.0 : 0.5; });
  // finite part integrates 1^2 over [-2,0), the sup part stays below 1
  CHECK(semimodular(f, p) == doctest::Approx(2.0).epsilon(1e-12));

  GridFunction hot = GridFunction::sample(
      g, [](double x, double) { return x < 0 ? 1.0 : 1.5; });
  CHECK(std::isinf(semimodular(hot, p)));
}

TEST_CASE("luxemburg norm matches the classical norm for constant p") {
  Grid g = Grid::make(1, 8.0, 1024);
  std::mt19937_64 rng(7101);
  for (double p : {0.5, 1.0, 2.0, 4.0, kInf}) {
    for (int rep = 0; rep < 8; ++rep) {
      GridFunction f = rep % 2 ? randomStep(g, rng) : randomGauss(g, rng);
      double want = classicalNorm(f, p);
      NormResult got = luxemburg_norm(f, Exponent::constant(g, p));
      CHECK(std::abs(got.value - want) <= 1e-8 * want);
      CHECK(got.hi - got.lo <= 2e-10 * got.value + 1e-300);
    }
  }
}

TEST_CASE("two-piece exponent: balanced split has norm exactly c") {
  // f = c on [0,1) sampled half-open, p = 2 on [0,1/2), 4 on [1/2,1):
  // rho(f/lambda) = (t^2 + t^4)/2 with t = c/lambda, so the norm is c.
  Grid g = Grid::make(1, 2.0, 256);
  double c = 1.7;
  GridFunction f(g);
  for (std::int64_t i = 0; i < g.size(); ++i) {
    double x = g.point(i)[0];
    if (x >= 0.0 && x < 1.0) f.v[i] = c;
  }
  Exponent p = Exponent::fromFunction(
      g, [](double x, double) { return x >= 0.5 ? 4.0 : 2.0; });
  NormResult r = luxemburg_norm(f, p);
  CHECK(r.value == doctest::Approx(c).epsilon(1e-8));
}

TEST_CASE("unit ball property on random functions") {
  Grid g = Grid::make(1, 8.0, 512);
  std::mt19937_64 rng(20207);
  Exponent p = Exponent::fromFunction(
      g, [](double x, double) { return 1.5 + std::exp(-x * x); });
  for (int rep = 0; rep < 30; ++rep) {
    GridFunction f = randomGauss(g, rng);
    double norm = luxemburg_norm(f, p).value;
    // push strictly inside / outside the ball and re-check both sides
    std::uniform_real_distribution<double> margin(0.05, 0.5);
    double m = margin(rng);
    GridFunction inside = cplx{(1.0 - m) / norm, 0.0} * f;
    GridFunction outside = cplx{(1.0 + m) / norm, 0.0} * f;
    UnitBallReport ri = check_unit_ball(inside, p);
    UnitBallReport ro = check_unit_ball(outside, p);
    CHECK(ri.consistent);
    CHECK(ro.consistent);
    CHECK(ri.modular <= 1.0 + 1e-12);
    CHECK(ro.modular >= 1.0 - 1e-12);
  }
}

TEST_CASE("norm-modular sandwich for finite pMax") {
  Grid g = Grid::make(1, 8.0, 512);
  std::mt19937_64 rng(333);
  Exponent p = Exponent::fromFunction(
      g, [](double x, double) { return 1.5 + 1.5 / (1.0 + x * x); });
  for (int rep = 0; rep < 20; ++rep) {
    GridFunction f = rep % 2 ? randomStep(g, rng) : randomGauss(g, rng);
    NormModularReport r = norm_modular_bounds(f, p);
    CHECK(r.pass);
  }
  Exponent withInf = Exponent::fromFunction(
      g, [](double x, double) { return x < 0 ? 2.0 : kInf; });
  GridFunction f = randomGauss(g, rng);
  CHECK_THROWS_AS(norm_modular_bounds(f, withInf), std::invalid_argument);
}

TEST_CASE("r-power identity relates L_p and L_{p/r}") {
  Grid g = Grid::make(1, 8.0, 512);
  std::mt19937_64 rng(99);
  Exponent p = Exponent::fromFunction(
      g, [](double x, double) { return 1.0 + 2.0 * std::exp(-0.5 * x * x); });
  double r = 0.7;
  for (int rep = 0; rep < 10; ++rep) {
    GridFunction f = randomGauss(g, rng);
    double lhs = std::pow(luxemburg_norm(f, p).value, r);
    GridFunction fr(g);
    for (std::int64_t i = 0; i < g.size(); ++i)
      fr.v[i] = std::pow(std::abs(f.v[i]), r);
    double rhs = luxemburg_norm(fr, p.dividedBy(r)).value;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
  }
}

TEST_CASE("quasi-triangle inequality with constant max(1, 2^{1/pMin - 1})") {
  Grid g = Grid::make(1, 8.0, 512);
  std::mt19937_64 rng(555);
  for (double pmin : {0.5, 1.0, 2.0}) {
    Exponent p = Exponent::fromFunction(g, [pmin](double x, double) {
      return pmin + std::abs(std::sin(x));
    });
    double cq = std::max(1.0, std::exp2(1.0 / p.pMin - 1.0));
    for (int rep = 0; rep < 10; ++rep) {
      GridFunction f = randomGauss(g, rng), w = randomStep(g, rng);
      double lhs = luxemburg_norm(f + w, p).value;
      double rhs = cq * (luxemburg_norm(f, p).value + luxemburg_norm(w, p).value);
      CHECK(lhs <= rhs * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("holder inequality with constant 2") {
  Grid g = Grid::make(1, 8.0, 512);
  std::mt19937_64 rng(777);
  Exponent p = Exponent::fromFunction(
      g, [](double x, double) { return 1.2 + 1.0 / (1.0 + 0.3 * x * x); });
  for (int rep = 0; rep < 15; ++rep) {
    GridFunction f = randomGauss(g, rng), w = randomGauss(g, rng, 2);
    HolderReport r = holder_check(f, w, p);
    CHECK(r.pass);
    CHECK(r.ratio <= 2.0 + 1e-9);
  }
  Exponent bad = Exponent::constant(g, 0.8);
  CHECK_THROWS_AS(holder_check(randomGauss(g, rng), randomGauss(g, rng), bad),
                  std::invalid_argument);
}

TEST_CASE("ess-sup region dominates the norm when it must") {
  Grid g = Grid::make(1, 2.0, 256);
  Exponent p = Exponent::fromFunction(
      g, [](double x, double) { return x < 0 ? kInf : 2.0; });
  GridFunction f = GridFunction::sample(g, [](double x, double) {
    return x < 0 ? 3.0 : 0.1;
  });
  double norm = luxemburg_norm(f, p).value;
  // the sup part alone forces lambda >= 3 (up to the tie tolerance); the
  // small finite part cannot push it below
  CHECK(norm == doctest::Approx(3.0).epsilon(1e-10));

  // with a heavy finite part the norm exceeds the sup clamp
  GridFunction heavy = GridFunction::sample(g, [](double x, double) {
    return x < 0 ? 3.0 : 40.0;
  });
  CHECK(luxemburg_norm(heavy, p).value > 3.0 + 1.0);
}

TEST_CASE("zero function and degenerate inputs") {
  Grid g = Grid::make(1, 2.0, 64);
  Exponent p = Exponent::constant(g, 2.0);
  NormResult r = luxemburg_norm(GridFunction(g), p);
  CHECK(r.value == 0.0);
  CHECK(r.iterations == 0);
  CHECK_THROWS_AS(luxemburg_norm(GridFunction(g), p, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(luxemburg_norm(GridFunction(g), p, 2.0), std::invalid_argument);
}

TEST_CASE("charfun norm scaling: constant p is exact up to quadrature") {
  Grid g = Grid::make(1, 8.0, 4096);
  Exponent p = Exponent::constant(g, 2.0);
  CharfunReport rep = charfun_norm_scaling(p, 0, 6);
  for (const CharfunRow& row : rep.rows) {
    double budget = 2.0 * g.h * std::ldexp(1.0, row.j);
    CHECK(row.ratio >= 1.0 - 1e-12);
    CHECK(row.ratio <= 1.0 + budget);
  }
}

TEST_CASE("charfun norm scaling: big cubes use the limit exponent") {
  Grid g = Grid::make(1, 8.0, 1024);
  Exponent p = Exponent::fromFunction(
      g, [](double x, double) { return 2.0 + std::exp(-2.0 * x * x); });
  p.pInfty = 2.0;
  CharfunReport rep = charfun_norm_scaling(p, -2, 4);
  CHECK(rep.rows.size() == 7);
  CHECK(rep.spread < 1.35);
  for (const CharfunRow& row : rep.rows) CHECK(row.ratio > 0.6);
}
