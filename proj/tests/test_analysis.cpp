#include <cmath>
#include <vector>

#include "doctest.h"
#include "sel/analysis.hpp"
#include "sel/oracle.hpp"
#include "sel/solver.hpp"

using namespace sel;

namespace {

ProblemParams params_ab(double a, double b) {
  ProblemParams p;
  p.alpha = a;
  p.beta = b;
  p.epsilon = 0.01;
  p.c0 = 0.5;
  return p;
}

std::size_t origin_node(const Grid& g) { return g.index(g.n / 2, g.n / 2); }

}  // namespace

TEST_CASE("growth exponent on the radial oracle") {
  const Grid g = Grid::square(-1.0, 1.0, 129);  // h = 1/64
  const std::vector<double> radii{0.25, 0.125, 0.0625, 0.03125};
  for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{0.5, 1.0},
                      std::pair{0.0, 2.0}, std::pair{2.0, 0.0}}) {
    const ProblemParams p = params_ab(a, b);
    const double gam = p.gamma();
    const ScalarField u = radial_profile(g, 1.0, gam);
    const PositivitySet ps = extract_positivity_set(u, 0.0);
    const ExponentFit fit =
        growth_exponent(u, ps, origin_node(g), radii, p);
    CHECK(fit.slope == doctest::Approx(gam).epsilon(0.02));
    CHECK(fit.target_gamma == doctest::Approx(gam).epsilon(1e-12));
    CHECK(fit.max_abs_residual <= 0.05);
  }
}

TEST_CASE("growth exponent of a Lipschitz cone is 1") {
  const Grid g = Grid::square(-1.0, 1.0, 129);
  const ProblemParams p = params_ab(1.0, 2.0);  // any beta with alpha = 1
  const ScalarField u = radial_profile(g, 3.0, 1.0);
  const PositivitySet ps = extract_positivity_set(u, 0.0);
  const ExponentFit fit = growth_exponent(u, ps, origin_node(g),
                                          {0.25, 0.125, 0.0625, 0.03125}, p);
  CHECK(fit.slope == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("growth exponent rejects bad inputs") {
  const Grid g = Grid::square(-1.0, 1.0, 33);
  const ProblemParams p = params_ab(1.0, 1.0);
  const ScalarField c(g, 2.0);
  const PositivitySet none = extract_positivity_set(c, 0.0);
  // a strictly positive field has no free-boundary centers
  CHECK_THROWS_AS(growth_exponent(c, none, origin_node(g),
                                  {0.25, 0.125, 0.0625}, p),
                  std::invalid_argument);
  const ScalarField u = radial_profile(g, 1.0, 1.0);
  const PositivitySet ps = extract_positivity_set(u, 0.0);
  // all radii below 2h
  CHECK_THROWS_AS(growth_exponent(u, ps, origin_node(g), {0.05, 0.03, 0.01}, p),
                  std::invalid_argument);
}

TEST_CASE("dyadic growth table on the radial oracle") {
  const Grid g = Grid::square(-1.0, 1.0, 129);  // h = 1/64, 2h = 1/32
  const double gam = 1.2;
  const double c = 0.9;
  const ScalarField u = radial_profile(g, c, gam);
  const DyadicTable t = dyadic_growth_table(u, {0.0, 0.0}, 4, gam, 2.0);
  REQUIRE(t.rows.size() == 4);
  for (const DyadicRow& row : t.rows)
    CHECK(row.ratio == doctest::Approx(c).epsilon(1e-9));
  CHECK(t.spread() == doctest::Approx(1.0).epsilon(1e-9));

  const DyadicTable single = dyadic_growth_table(u, {0.0, 0.0}, 1, gam, 4.0);
  CHECK(single.rows.size() == 1);

  CHECK_THROWS_AS(dyadic_growth_table(u, {0.0, 0.0}, 6, gam, 4.0),
                  std::invalid_argument);
}

TEST_CASE("dyadic ratios of a subcritical field stay below one") {
  const Grid g = Grid::square(-1.0, 1.0, 129);
  const double gam = 1.0;
  const ScalarField u = radial_profile(g, 0.5, gam);  // sup_{B_r} = r/2
  const DyadicTable t = dyadic_growth_table(u, {0.0, 0.0}, 4, gam, 2.0);
  for (const DyadicRow& row : t.rows) CHECK(row.ratio <= 1.0);
}

TEST_CASE("nondegeneracy report") {
  const Grid g = Grid::square(-1.0, 1.0, 65);
  const ProblemParams p = params_ab(1.0, 1.0);
  const double c = 0.8;
  const ScalarField u = radial_profile(g, c, p.gamma());
  const PositivitySet ps = extract_positivity_set(u, 0.0);
  const NondegeneracyReport rep = nondegeneracy_check(
      u, ps, origin_node(g), {0.25, 0.125, 0.0625}, p);
  CHECK(rep.min_ratio == doctest::Approx(c).epsilon(1e-9));

  // a field far below the cone scale reports a small ratio, never asserts
  const ScalarField tiny = radial_profile(g, 0.01, p.gamma());
  const PositivitySet pt = extract_positivity_set(tiny, 0.0);
  const NondegeneracyReport weak = nondegeneracy_check(
      tiny, pt, origin_node(g), {0.25, 0.125, 0.0625}, p);
  CHECK(weak.min_ratio < 0.05);
}

TEST_CASE("modulus estimate on model fields") {
  const Grid g = Grid::line(0.0, 1.0, 101);  // h = 0.01
  const ScalarField lin =
      ScalarField::sample(g, [](const Point& p) { return p[0]; });
  const std::vector<double> bins{0.1, 0.2, 0.4, 0.8};
  const ModulusCurve c = modulus_estimate(lin, bins, 0.05);
  REQUIRE(c.modulus.size() == bins.size());
  // oscillation of x over the margin-shrunk box, capped by bin width
  for (std::size_t i = 0; i < bins.size(); ++i) {
    const double expect = std::min(bins[i], 0.9);
    CHECK(c.modulus[i] == doctest::Approx(expect).epsilon(0.02));
  }
  // non-decreasing bin by bin
  for (std::size_t i = 1; i < c.modulus.size(); ++i)
    CHECK(c.modulus[i] >= c.modulus[i - 1]);

  const ScalarField flat(g, 4.2);
  const ModulusCurve fc = modulus_estimate(flat, bins, 0.05);
  for (double m : fc.modulus) CHECK(m == 0.0);
}

TEST_CASE("modulus estimate is deterministic in 2D") {
  const Grid g = Grid::square(-1.0, 1.0, 65);
  const ScalarField u = radial_profile(g, 1.0, 1.0);
  const std::vector<double> bins{0.1, 0.3, 0.9};
  const ModulusCurve a = modulus_estimate(u, bins, 0.25);
  const ModulusCurve b = modulus_estimate(u, bins, 0.25);
  for (std::size_t i = 0; i < bins.size(); ++i)
    CHECK(a.modulus[i] == b.modulus[i]);
}

TEST_CASE("modulus_from_omega power laws") {
  auto table_for = [](double M) {
    std::vector<std::pair<double, double>> t;
    for (int i = 0; i <= 40; ++i) {
      const double d = std::pow(10.0, -3.0 + 3.0 * i / 40.0);
      t.push_back({d, std::pow(d, -M)});
    }
    return t;
  };
  // Omega = delta^{-M}  =>  varpi(t) = t^{1/(M+1)}
  for (double M : {1.0, 2.0}) {
    const ModulusTable mt = modulus_from_omega(table_for(M));
    for (double t : {1e-4, 1e-3, 0.01, 0.1}) {
      const double expect = std::pow(t, 1.0 / (M + 1.0));
      CHECK(mt.eval(t) == doctest::Approx(expect).epsilon(0.01));
    }
  }
  // Omega = K constant  =>  varpi(t) = K t  (Lipschitz case)
  std::vector<std::pair<double, double>> flat;
  const double K = 3.0;
  for (int i = 0; i <= 20; ++i) {
    const double d = std::pow(10.0, -3.0 + 3.0 * i / 20.0);
    flat.push_back({d, K * (1.0 + 1e-12 * (20 - i))});  // strictly decreasing
  }
  const ModulusTable lip = modulus_from_omega(flat);
  for (double t : {1e-3, 0.01, 0.1})
    CHECK(lip.eval(t) == doctest::Approx(K * t).epsilon(0.01));

  // varpi is nondecreasing with varpi(0+) -> 0 on the sampled range
  const ModulusTable mt = modulus_from_omega(table_for(1.0));
  for (std::size_t i = 1; i < mt.varpi.size(); ++i)
    CHECK(mt.varpi[i] >= mt.varpi[i - 1]);
  CHECK(mt.varpi.front() <= 0.02);

  std::vector<std::pair<double, double>> bad{{0.1, 1.0}, {0.2, 2.0}};
  CHECK_THROWS_AS(modulus_from_omega(bad), std::invalid_argument);
}

TEST_CASE("doubling probe basics") {
  const Grid g1 = Grid::line(-1.0, 1.0, 65);
  const ScalarField c(g1, 0.7);
  const DoublingProbeResult rc = doubling_probe(c, 1.0, 1.0, 0.0, 0.1, 1.0);
  CHECK(rc.sup_value <= 0.0 + 1e-12);
  CHECK(rc.pass);

  // d = 2 covers the full diameter, so L = 2 dominates the unit slope
  const ScalarField lin =
      ScalarField::sample(g1, [](const Point& p) { return p[0]; });
  const DoublingProbeResult rl = doubling_probe(lin, 2.0, 2.0, 0.0, 0.1, 1.0);
  CHECK(rl.sup_value <= 1e-12);

  // kappa auto obeys the paper's lower bound
  const DoublingProbeResult ra = doubling_probe(lin, 1.0, 1.0, -1.0, 0.1, 1.0);
  CHECK(ra.kappa >= 8.0 * lin.sup_abs() / 1.0 - 1e-12);
}

TEST_CASE("doubling probe sup is monotone in L and kappa") {
  const Grid g = Grid::square(-1.0, 1.0, 33);
  const ScalarField u = radial_profile(g, 1.0, 1.0);
  double prev = doubling_probe(u, 2.0, 0.25, 0.0, 0.1, 1.0).sup_value;
  for (double L : {0.5, 1.0, 2.0, 4.0}) {
    const double s = doubling_probe(u, 2.0, L, 0.0, 0.1, 1.0).sup_value;
    CHECK(s <= prev + 1e-12);
    prev = s;
  }
  prev = doubling_probe(u, 2.0, 1.0, 0.0, 0.1, 1.0).sup_value;
  for (double kap : {0.5, 1.0, 2.0}) {
    const double s = doubling_probe(u, 2.0, 1.0, kap, 0.1, 1.0).sup_value;
    CHECK(s <= prev + 1e-12);
    prev = s;
  }
}

TEST_CASE("doubling ladder finds a certificate") {
  const Grid g = Grid::square(-1.0, 1.0, 33);
  const ScalarField u = radial_profile(g, 1.0, 1.0);
  const auto res = doubling_ladder_search(u, 2.0, 0.1);
  REQUIRE(res.has_value());
  CHECK(res->pass);
  CHECK(res->sup_value <= 0.1);
}

TEST_CASE("flatness check") {
  const Grid g = Grid::square(-1.0, 1.0, 65);
  ProblemParams p = params_ab(1.0, 1.0);
  const double eta = 0.25;
  p.forcing = ForcingSpec::constant(std::pow(eta, 3.0));
  p.c0 = std::pow(eta, 3.0);  // keep the constant forcing admissible
  const double gam = p.gamma();
  const double theta = std::pow(4.0, -gam);

  // cone scaled so sup over the box corners is exactly 1; inf over
  // B_{1/2}(0) is 0 <= eta, sup over B_{1/4} = 0.25 / sqrt(2) < theta
  const double cc = 1.0 / std::sqrt(2.0);
  const ScalarField cone = radial_profile(g, cc, gam);
  CHECK(flatness_check(cone, p, {0.0, 0.0}, theta, eta));
  // monotone in theta
  CHECK(flatness_check(cone, p, {0.0, 0.0}, 2.0 * theta, eta));
  // fails when theta undercuts the cone's own ball sup
  CHECK_FALSE(flatness_check(cone, p, {0.0, 0.0}, 0.1, eta));

  // vacuous branch: inf over the half ball exceeds eta
  const ScalarField high(g, 0.9);
  CHECK(flatness_check(high, p, {0.0, 0.0}, theta, eta));

  // normalization guards
  const ScalarField big(g, 2.0);
  CHECK_THROWS_AS(flatness_check(big, p, {0.0, 0.0}, theta, eta),
                  std::invalid_argument);
  ProblemParams loud = p;
  loud.forcing = ForcingSpec::constant(1.0);
  loud.c0 = 1.0;
  CHECK_THROWS_AS(flatness_check(cone, loud, {0.0, 0.0}, theta, eta),
                  std::invalid_argument);
}

TEST_CASE("harnack quotient") {
  const Grid g = Grid::line(-1.0, 1.0, 65);
  const ScalarField c(g, 0.4);
  CHECK(harnack_quotient(c, {0.0, 0.0}, 0.25) == 1.0);

  const ScalarField lin =
      ScalarField::sample(g, [](const Point& p) { return 1.0 + p[0]; });
  CHECK(harnack_quotient(lin, {0.0, 0.0}, 0.25) ==
        doctest::Approx(5.0 / 3.0).epsilon(1e-12));

  const ScalarField touch =
      ScalarField::sample(g, [](const Point& p) { return p[0] + 0.1; });
  CHECK_THROWS_AS(harnack_quotient(touch, {0.0, 0.0}, 0.5),
                  std::invalid_argument);
}

TEST_CASE("holder seminorm") {
  const Grid g = Grid::line(0.0, 1.0, 65);
  const ScalarField lin =
      ScalarField::sample(g, [](const Point& p) { return p[0]; });
  CHECK(holder_seminorm(lin, {0.5, 0.0}, 0.25, 1.0) ==
        doctest::Approx(1.0).epsilon(1e-12));
  const ScalarField flat(g, 1.0);
  CHECK(holder_seminorm(flat, {0.5, 0.0}, 0.25, 0.5) == 0.0);
  CHECK_THROWS_AS(holder_seminorm(lin, {0.5, 0.0}, 0.01, 1.0),
                  std::invalid_argument);
}

TEST_CASE("spearman rank correlation") {
  CHECK(spearman({1, 2, 3, 4}, {10, 20, 30, 40}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(spearman({1, 2, 3, 4}, {4, 3, 2, 1}) ==
        doctest::Approx(-1.0).epsilon(1e-12));
  const double s = spearman({1, 2, 3, 4}, {7, 7, 7, 7});
  CHECK(std::abs(s) <= 1e-12);
}
