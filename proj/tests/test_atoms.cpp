#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "varexp/atoms.hpp"

using namespace varexp;

namespace {

GridFunction plainBump(const Grid& g, double center, double rho) {
  return GridFunction::sample(g, [=](double x, double) {
    double t = std::abs(x - center) / rho;
    return t < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0;
  });
}

}  // namespace

TEST_CASE("synthetic atoms satisfy all three conditions across levels") {
  Grid g = Grid::make(1, 2.0, 1024);
  for (int j = 0; j <= 4; ++j) {
    DyadicCube q{j, {j, 0}};  // anchor drifts off the origin with the level
    GridFunction a = make_bump_atom(g, q, 2, 2, 3.0);
    REQUIRE(a.absMax() > 0.0);
    AtomReport rep = verify_atom(a, q, 2, 2, 3.0);
    CHECK(rep.passSupport);
    CHECK(rep.passDerivs);
    CHECK(rep.passMoments);
    CHECK(rep.pass());
    CHECK(rep.worstDeriv <= 0.9 + 1e-12);  // built with explicit headroom
  }
}

TEST_CASE("difference construction gives near-exact discrete moments") {
  Grid g = Grid::make(1, 2.0, 1024);
  DyadicCube q{3, {5, 0}};
  GridFunction a = make_bump_atom(g, q, 1, 4, 3.0);
  AtomReport rep = verify_atom(a, q, 1, 4, 3.0);
  CHECK(rep.passMoments);
  CHECK(rep.worstMoment <= 1e-12);
}

TEST_CASE("level zero carries no moment condition") {
  Grid g = Grid::make(1, 2.0, 1024);
  DyadicCube q{0, {0, 0}};
  GridFunction a = make_bump_atom(g, q, 2, 5, 3.0);
  CHECK(std::abs(integrate(a)) > 1e-3);  // genuinely nonzero mean
  AtomReport rep = verify_atom(a, q, 2, 5, 3.0);
  CHECK(rep.pass());
}

TEST_CASE("broken atoms are flagged for the right reason") {
  Grid g = Grid::make(1, 2.0, 1024);
  DyadicCube q{2, {1, 0}};
  GridFunction good = make_bump_atom(g, q, 2, 2, 3.0);
  REQUIRE(verify_atom(good, q, 2, 2, 3.0).pass());

  // mass outside d Q
  GridFunction farBump = plainBump(g, -1.5, 0.1);
  GridFunction offSupport = good + cplx{1e-3, 0.0} * farBump;
  AtomReport rep = verify_atom(offSupport, q, 2, 2, 3.0);
  CHECK_FALSE(rep.passSupport);
  CHECK_FALSE(rep.pass());

  // derivative bounds blown by a factor
  AtomReport big = verify_atom(cplx{50.0, 0.0} * good, q, 2, 2, 3.0);
  CHECK(big.passSupport);
  CHECK_FALSE(big.passDerivs);

  // a smooth lump inside the cube ruins the moments but nothing else
  GridFunction lump = plainBump(g, q.center()[0], 0.05);
  AtomReport mom = verify_atom(good + cplx{0.01, 0.0} * lump, q, 2, 2, 3.0);
  CHECK(mom.passSupport);
  CHECK(mom.passDerivs);
  CHECK_FALSE(mom.passMoments);
  CHECK(mom.worstMoment > 1e-6);

  CHECK_THROWS_AS(verify_atom(good, q, 2, 2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(verify_atom(good, q, -1, 2, 3.0), std::invalid_argument);
}

TEST_CASE("scaled atoms are molecules and decay violations are caught") {
  Grid g = Grid::make(1, 2.0, 1024);
  DyadicCube q{2, {-2, 0}};
  GridFunction a = make_bump_atom(g, q, 2, 2, 3.0);
  GridFunction u = atom_to_molecule(a, 3.0, 4.0);
  // scale factor (1 + 3/2)^{-4}
  CHECK(u.absMax() == doctest::Approx(a.absMax() * std::pow(2.5, -4.0)));
  MoleculeReport rep = verify_molecule(u, q, 2, 2, 4.0);
  CHECK(rep.passDecay);
  CHECK(rep.passMoments);

  MoleculeReport blown = verify_molecule(cplx{10.0, 0.0} * u, q, 2, 2, 4.0);
  CHECK_FALSE(blown.passDecay);

  // a flat floor violates the far decay even though it is tiny
  GridFunction floor = u;
  for (auto& z : floor.v) z += 1e-3;
  MoleculeReport tail = verify_molecule(floor, q, 2, 2, 4.0);
  CHECK_FALSE(tail.passDecay);

  CHECK_THROWS_AS(verify_molecule(u, q, 2, 2, 0.0), std::invalid_argument);
}

TEST_CASE("coefficient boxes tile the grid and guard their bounds") {
  Grid g = Grid::make(1, 2.0, 1024);
  CoeffField field = CoeffField::zeros(g, 4);
  REQUIRE(field.count() == 5);
  for (int j = 0; j <= 4; ++j) {
    const CoeffLevel& lvl = field.levels[j];
    CHECK(lvl.j == j);
    CHECK(lvl.mLo[0] == -(std::int64_t{2} << j));       // -A 2^j
    CHECK(lvl.mCount[0] == (std::int64_t{4} << j) + 1);  // 2 A 2^j + 1
    CHECK(lvl.mCount[1] == 1);
  }
  field.levels[2].ref(-3) = 1.5;
  CHECK(field.levels[2].at(-3) == 1.5);
  CHECK(field.levels[2].at(5000) == 0.0);
  CHECK(field.absMax() == 1.5);
  CHECK_THROWS_AS(field.levels[2].ref(5000), std::out_of_range);
  CHECK_THROWS_AS(CoeffField::zeros(g, -1), std::invalid_argument);
}

TEST_CASE("coefficient csv round trip is exact") {
  Grid g = Grid::make(1, 2.0, 256);
  CoeffField field = CoeffField::zeros(g, 3);
  field.levels[0].ref(-1) = -0.125;
  field.levels[1].ref(3) = 1.0 / 3.0;
  field.levels[2].ref(0) = 1e-17;
  field.levels[3].ref(7) = 9.87654321e12;
  std::string path = "coeff_roundtrip.csv";
  save_coeffs(path, field);
  CoeffField back = load_coeffs(path);
  REQUIRE(back.count() == field.count());
  CHECK(back.n == 1);
  for (int j = 0; j < field.count(); ++j) {
    REQUIRE(back.levels[j].lambda.size() == field.levels[j].lambda.size());
    for (std::size_t k = 0; k < field.levels[j].lambda.size(); ++k)
      CHECK(back.levels[j].lambda[k] == field.levels[j].lambda[k]);
  }
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_coeffs("does_not_exist.csv"), std::runtime_error);
}

TEST_CASE("sequence norms match hand computations on disjoint tiles") {
  Grid g = Grid::make(1, 2.0, 1024);
  Exponent p = Exponent::constant(g, 2.0);
  Exponent q = Exponent::constant(g, 1.5);
  WeightSequence w = make_weight_two_microlocal(g, 5, 1.0, -0.5, 0.0);

  // one coefficient: norm = w_j(2^{-j} m) |Q|^{1/2}, half-open tiles exact
  CoeffField single = CoeffField::zeros(g, 4);
  single.levels[3].ref(5) = 1.0;
  double wAnchor = std::ldexp(1.0, 3) * std::pow(1.0 + 5.0, -0.5);
  double want = wAnchor * std::sqrt(std::ldexp(1.0, -3));
  CHECK(seq_norm_b(single, g, p, q, w).value ==
        doctest::Approx(want).epsilon(1e-8));

  // two tiles on one level add in L_p
  CoeffField pairF = CoeffField::zeros(g, 4);
  pairF.levels[2].ref(-1) = 2.0;
  pairF.levels[2].ref(3) = 0.5;
  double w1 = std::ldexp(1.0, 2) * std::pow(2.0, -0.5);  // |m| = 1
  double w2 = std::ldexp(1.0, 2) * std::pow(4.0, -0.5);  // |m| = 3
  double ref = std::sqrt((4.0 * w1 * w1 + 0.25 * w2 * w2) * std::ldexp(1.0, -2));
  CHECK(seq_norm_b(pairF, g, p, q, w).value ==
        doctest::Approx(ref).epsilon(1e-8));

  // several levels stack through l_q
  CoeffField multi = CoeffField::zeros(g, 4);
  multi.levels[0].ref(0) = 1.0;
  multi.levels[2].ref(0) = 1.0;
  multi.levels[4].ref(0) = 1.0;
  double sum = 0.0;
  for (int j : {0, 2, 4}) {
    double lvl = std::ldexp(1.0, j) * std::sqrt(std::ldexp(1.0, -j));
    sum += std::pow(lvl, 1.5);
  }
  CHECK(seq_norm_b(multi, g, p, q, w).value ==
        doctest::Approx(std::pow(sum, 1.0 / 1.5)).epsilon(1e-8));

  // p = q: both sequence space norms coincide
  CHECK(seq_norm_b(multi, g, p, p, w).value ==
        doctest::Approx(seq_norm_f(multi, g, p, p, w).value).epsilon(1e-6));

  // gates
  Exponent qinf = Exponent::constant(g, kInf);
  CHECK_THROWS_AS(seq_norm_f(multi, g, p, qinf, w), std::invalid_argument);
  WeightSequence wShort = make_weight_constant_s(g, 3, 0.0);
  CHECK_THROWS_AS(seq_norm_b(multi, g, p, q, wShort), std::invalid_argument);
  CoeffField wrongDim = CoeffField::zeros(g, 2);
  wrongDim.n = 2;
  CHECK_THROWS_AS(seq_norm_b(wrongDim, g, p, q, w), std::invalid_argument);
}
