#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "varexp/lp_analysis.hpp"

using namespace varexp;

namespace {

GridFunction gauss4(const Grid& g) {
  return GridFunction::sample(
      g, [](double x, double) { return std::exp(-4.0 * x * x); });
}

}  // namespace

TEST_CASE("profile shapes and measured annulus minima") {
  AdmissiblePair cosPair = AdmissiblePair::make(PairProfile::CosineBump);
  AdmissiblePair polyPair = AdmissiblePair::make(PairProfile::PolynomialBump);

  for (const auto& pr : {cosPair, polyPair}) {
    CHECK(pr.lowPass(0.3) == 1.0);
    CHECK(pr.lowPass(1.0) == 1.0);
    CHECK(pr.lowPass(2.0) == 0.0);
    CHECK(pr.lowPass(3.7) == 0.0);
    double prev = 1.0;
    for (int i = 0; i <= 200; ++i) {
      double u = pr.lowPass(1.0 + i / 100.0);
      CHECK(u <= prev + 1e-15);
      prev = u;
    }
    CHECK(pr.band(0.5) == 0.0);   // u and u(2.) both one
    CHECK(pr.band(2.0) == 0.0);   // both zero
    CHECK(pr.band(1.0) == 1.0);
  }

  // minima over [3/5, 5/3] sit at the left edge; closed forms
  double s = std::sin(std::numbers::pi / 10.0);
  CHECK(cosPair.lowerBound == doctest::Approx(s * s).epsilon(1e-6));
  double t = 0.2;  // v(3/5) = S(0.2) for the quintic taper
  double S = t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
  CHECK(polyPair.lowerBound == doctest::Approx(S).epsilon(1e-6));
  CHECK(polyPair.lowerBound > 0.05);
}

TEST_CASE("dyadic symbols tile the covered ball exactly") {
  Grid g = Grid::make(1, 8.0, 512);
  for (auto profile : {PairProfile::CosineBump, PairProfile::PolynomialBump}) {
    AdmissiblePair pair = AdmissiblePair::make(profile);
    CHECK(partition_residual(g, pair, 5) <= 1e-12);
  }
}

TEST_CASE("blocks reassemble a band-limited function") {
  Grid g = Grid::make(1, 8.0, 512);
  AdmissiblePair pair = AdmissiblePair::make(PairProfile::CosineBump);
  GridFunction f = gauss4(g);
  FunctionSequence blocks = lp_blocks(f, pair, 5);
  GridFunction sum(g);
  for (const auto& b : blocks.levels) sum = sum + b;
  GridFunction diff = sum - f;
  CHECK(diff.absMax() <= 1e-10 * f.absMax());
}

TEST_CASE("blocks of a single band touch only adjacent levels") {
  Grid g = Grid::make(1, 8.0, 512);
  AdmissiblePair pair = AdmissiblePair::make(PairProfile::CosineBump);
  GridFunction f3 = lp_blocks(gauss4(g), pair, 5).levels[3];
  REQUIRE(f3.absMax() > 1e-6);
  FunctionSequence again = lp_blocks(f3, pair, 5);
  for (int j = 0; j <= 5; ++j) {
    double m = again.levels[j].absMax();
    if (std::abs(j - 3) >= 2)
      CHECK(m <= 1e-12 * f3.absMax());
    else if (j == 3)
      CHECK(m > 0.1 * f3.absMax());
  }
}

TEST_CASE("order-one smoothness norm against the Fourier-side oracle") {
  Grid g = Grid::make(1, 8.0, 512);
  AdmissiblePair pair = AdmissiblePair::make(PairProfile::CosineBump);
  GridFunction f = gauss4(g);
  Exponent two = Exponent::constant(g, 2.0);
  WeightSequence w = make_weight_constant_s(g, 6, 1.0);
  double besov = besov_norm(f, two, two, w, pair).value;

  // same quantity straight from Plancherel on the frequency grid
  GridFunction fhat = fourier_transform(f);
  Grid fg = g.fourierGrid();
  double direct = 0.0;
  for (std::int64_t i = 0; i < fg.size(); ++i) {
    double xi = fg.point(i)[0];
    double sym = 0.0;
    for (int j = 0; j <= 5; ++j)
      sym += std::ldexp(1.0, 2 * j) * std::pow(pair.symbol(j, std::abs(xi)), 2);
    direct += sym * std::norm(fhat.v[i]);
  }
  direct = std::sqrt(direct * fg.h / (2.0 * std::numbers::pi));
  CHECK(besov == doctest::Approx(direct).epsilon(1e-7));

  // classical first-order Sobolev norm of exp(-4x^2):
  // (2pi)^{-1} int (1+xi^2)|fhat|^2 = (2pi)^{-1} (5 pi/4) sqrt(8 pi)
  double sobolev = std::sqrt((5.0 * std::numbers::pi / 4.0) *
                             std::sqrt(8.0 * std::numbers::pi) /
                             (2.0 * std::numbers::pi));
  double gMin = kInf, gMax = 0.0;
  for (std::int64_t i = 0; i < fg.size(); ++i) {
    double xi = std::abs(fg.point(i)[0]);
    double sym = 0.0;
    for (int j = 0; j <= 5; ++j)
      sym += std::ldexp(1.0, 2 * j) * std::pow(pair.symbol(j, xi), 2);
    double gval = sym / (1.0 + xi * xi);
    gMax = std::max(gMax, gval);
    if (xi <= 8.0) gMin = std::min(gMin, gval);
  }
  double ratio = besov / sobolev;
  CHECK(ratio * ratio >= 0.95 * gMin);
  CHECK(ratio * ratio <= gMax * (1.0 + 1e-4));
}

TEST_CASE("flat weight at p = q = 2 stays inside the partition bracket") {
  Grid g = Grid::make(1, 8.0, 512);
  AdmissiblePair pair = AdmissiblePair::make(PairProfile::CosineBump);
  GridFunction f = gauss4(g);
  Exponent two = Exponent::constant(g, 2.0);
  WeightSequence w = make_weight_constant_s(g, 6, 0.0);
  double besov = besov_norm(f, two, two, w, pair).value;
  double l2 = luxemburg_norm(f, two).value;
  // sum of squared symbols lies in [1/2, 1] wherever the tiling holds
  double ratio = besov / l2;
  CHECK(ratio >= 0.70);
  CHECK(ratio <= 1.0 + 1e-9);
}

TEST_CASE("the two scales agree when p = q") {
  Grid g = Grid::make(1, 8.0, 512);
  AdmissiblePair pair = AdmissiblePair::make(PairProfile::CosineBump);
  GridFunction f = gauss4(g);
  Exponent p = Exponent::fromFunction(
      g, [](double x, double) { return 1.8 + 0.4 * std::exp(-x * x); });
  WeightSequence w = make_weight_two_microlocal(g, 6, 0.5, -0.25, 0.0);
  double b = besov_norm(f, p, p, w, pair).value;
  double fnorm = tl_norm(f, p, p, w, pair).value;
  CHECK(b == doctest::Approx(fnorm).epsilon(1e-6));
}

TEST_CASE("pair independence holds up to a moderate constant") {
  Grid g = Grid::make(1, 8.0, 512);
  AdmissiblePair a = AdmissiblePair::make(PairProfile::CosineBump);
  AdmissiblePair b = AdmissiblePair::make(PairProfile::PolynomialBump);
  GridFunction f = gauss4(g);
  Exponent p = Exponent::fromFunction(
      g, [](double x, double) { return 1.6 + 0.6 * std::exp(-x * x); });
  Exponent q = Exponent::constant(g, 2.5);
  WeightSequence w = make_weight_constant_s(g, 6, 0.8);
  for (auto space : {MixedSpace::LqLp, MixedSpace::LpLq}) {
    Exponent qq = space == MixedSpace::LpLq ? Exponent::constant(g, 2.5) : q;
    PairCompareReport rep = pair_independence(f, p, qq, w, a, b, space);
    CHECK(rep.first > 0.0);
    CHECK(rep.second > 0.0);
    CHECK(rep.ratio > 0.2);
    CHECK(rep.ratio < 5.0);
  }
}

TEST_CASE("maximal function dominates the block and shrinks with a") {
  Grid g = Grid::make(1, 8.0, 512);
  AdmissiblePair pair = AdmissiblePair::make(PairProfile::CosineBump);
  GridFunction block = lp_blocks(gauss4(g), pair, 5).levels[2];
  GridFunction m1 = peetre_maximal(block, 2, 1.0);
  GridFunction m2 = peetre_maximal(block, 2, 2.0);
  for (std::int64_t i = 0; i < g.size(); ++i) {
    CHECK(m2.v[i].real() >= std::abs(block.v[i]) - 1e-15);
    CHECK(m1.v[i].real() >= m2.v[i].real() - 1e-15);
  }
  // a constant block is its own maximal function
  GridFunction flat(Grid::make(1, 2.0, 64));
  for (auto& z : flat.v) z = 1.0;
  GridFunction mf = peetre_maximal(flat, 0, 3.0);
  for (auto& z : mf.v) CHECK(z.real() == doctest::Approx(1.0).epsilon(1e-14));

  Exponent p = Exponent::constant(g, 1.5);
  Exponent q = Exponent::constant(g, 0.5);
  WeightSequence w = make_weight_two_microlocal(g, 6, 1.0, -0.5, 0.0);
  CHECK(peetre_exponent(p, q, w) == doctest::Approx(1.0 / 0.5 + 0.5 + 1.0));
}

TEST_CASE("coverage and argument gates") {
  Grid g = Grid::make(1, 8.0, 512);  // pi/h = 32 pi < 2^7
  AdmissiblePair pair = AdmissiblePair::make(PairProfile::CosineBump);
  GridFunction f = gauss4(g);
  CHECK_THROWS_WITH_AS(lp_blocks(f, pair, 6),
                       doctest::Contains("need N >="), std::invalid_argument);
  CHECK_THROWS_AS(lp_blocks(f, pair, -1), std::invalid_argument);

  Exponent two = Exponent::constant(g, 2.0);
  Exponent inf = Exponent::constant(g, kInf);
  WeightSequence w = make_weight_constant_s(g, 6, 0.0);
  CHECK_THROWS_AS(tl_norm(f, two, inf, w, pair), std::invalid_argument);
  WeightSequence wrongGrid = make_weight_constant_s(Grid::make(1, 4.0, 512), 4, 0.0);
  CHECK_THROWS_AS(besov_norm(f, two, two, wrongGrid, pair), std::invalid_argument);
}
