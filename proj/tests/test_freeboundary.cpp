#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "sel/freeboundary.hpp"
#include "sel/oracle.hpp"
#include "sel/solver.hpp"

using namespace sel;

TEST_CASE("positivity classification") {
  const Grid g = Grid::line(0.0, 1.0, 9);  // h = 0.125

  const ScalarField one(g, 1.0);
  const PositivitySet all = extract_positivity_set(one, 0.0);
  CHECK(all.positive_nodes.size() == 7);
  CHECK(all.boundary_nodes.empty());
  CHECK(all.zero_nodes.empty());

  const ScalarField ramp = ScalarField::sample(
      g, [](const Point& p) { return std::max(p[0] - 0.5, 0.0); });
  const PositivitySet ps = extract_positivity_set(ramp, 0.0);
  // interior x in {0.125..0.875}; positive for x > 0.5
  CHECK(ps.zero_nodes.size() == 4);    // 0.125, 0.25, 0.375, 0.5
  CHECK(ps.boundary_nodes.size() == 1);
  CHECK(g.node(ps.boundary_nodes[0])[0] == doctest::Approx(0.625));
  CHECK(ps.positive_nodes.size() == 2);  // 0.75, 0.875 strictly inside
  // the three classes partition the interior
  CHECK(ps.zero_nodes.size() + ps.boundary_nodes.size() +
            ps.positive_nodes.size() ==
        7);
  // interface contains both sides
  CHECK(std::find(ps.interface_nodes.begin(), ps.interface_nodes.end(),
                  ps.boundary_nodes[0]) != ps.interface_nodes.end());
}

TEST_CASE("threshold monotonicity") {
  const Grid g = Grid::square(-1.0, 1.0, 33);
  const ScalarField u = radial_profile(g, 1.0, 1.0);
  std::size_t prev = g.total_nodes();
  for (double thr : {0.0, 0.1, 0.3, 0.7}) {
    const PositivitySet ps = extract_positivity_set(u, thr);
    const std::size_t pos = ps.positive_nodes.size() + ps.boundary_nodes.size();
    CHECK(pos <= prev);
    prev = pos;
  }
}

TEST_CASE("distance to zero set") {
  const Grid g = Grid::line(-1.0, 1.0, 9);
  const ScalarField u = radial_profile(g, 1.0, 1.0);  // |x|, zero at origin
  const PositivitySet ps = extract_positivity_set(u, 0.0);
  REQUIRE(!ps.zero_nodes.empty());
  CHECK(distance_to_zero_set(ps, g, {0.25, 0.0}) ==
        doctest::Approx(0.25).epsilon(1e-15));
  CHECK(distance_to_zero_set(ps, g, {0.0, 0.0}) == 0.0);

  const ScalarField ramp = ScalarField::sample(
      g, [](const Point& p) { return std::max(p[0] - 0.5, 0.0); });
  const PositivitySet pr = extract_positivity_set(ramp, 0.0);
  const double d = distance_to_zero_set(pr, g, {0.75, 0.0});
  CHECK(std::abs(d - 0.25) <= g.h + 1e-12);

  const ScalarField pos(g, 1.0);
  const PositivitySet none = extract_positivity_set(pos, 0.0);
  CHECK_THROWS_AS(distance_to_zero_set(none, g, {0.0, 0.0}),
                  std::invalid_argument);
}

TEST_CASE("distance is 1-Lipschitz in the query point") {
  const Grid g = Grid::square(-1.0, 1.0, 17);
  const ScalarField u = radial_profile(g, 1.0, 1.0);
  const PositivitySet ps = extract_positivity_set(u, 0.3);
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Point a{coord(rng), coord(rng)};
    const Point b{coord(rng), coord(rng)};
    const double da = distance_to_zero_set(ps, g, a);
    const double db = distance_to_zero_set(ps, g, b);
    CHECK(std::abs(da - db) <= distance(a, b, 2) + 1e-12);
  }
}

TEST_CASE("distance bound check on the radial oracle") {
  const Grid g = Grid::square(-1.0, 1.0, 65);
  ProblemParams p;
  p.alpha = 1.0;
  p.beta = 1.0;
  p.epsilon = 0.01;
  p.c0 = 0.5;
  const double c = 0.7;
  const ScalarField u = radial_profile(g, c, p.gamma());
  const PositivitySet ps = extract_positivity_set(u, 0.0);
  REQUIRE(ps.zero_nodes.size() == 1);  // the origin only
  const DistanceBoundReport rep = distance_bound_check(u, ps, p, 10.0);
  CHECK(rep.pass);
  // u / dist^gamma is identically c for the cone
  CHECK(rep.worst_ratio == doctest::Approx(c).epsilon(1e-9));
  CHECK(rep.nodes_checked > 0);

  const DistanceBoundReport tight = distance_bound_check(u, ps, p, c / 2.0);
  CHECK_FALSE(tight.pass);
}

TEST_CASE("distance bound check demands a zero set") {
  const Grid g = Grid::line(0.0, 1.0, 9);
  ProblemParams p;
  p.alpha = 1.0;
  p.beta = 0.0;
  p.epsilon = 0.01;
  p.c0 = 0.5;
  const ScalarField u(g, 2.0);
  const PositivitySet ps = extract_positivity_set(u, 0.0);
  CHECK_THROWS_AS(distance_bound_check(u, ps, p, 1.0), std::invalid_argument);
}

TEST_CASE("scaling leaves the worst ratio invariant") {
  const Grid g = Grid::square(-1.0, 1.0, 65);
  ProblemParams p;
  p.alpha = 1.0;
  p.beta = 1.0;
  p.epsilon = 0.01;
  p.c0 = 0.5;
  const double gam = p.gamma();
  const ScalarField u = radial_profile(g, 0.7, gam);
  const ScalarField v = scaled_restriction(u, gam, 2);
  const PositivitySet pu = extract_positivity_set(u, 0.0);
  const PositivitySet pv = extract_positivity_set(v, 0.0);
  const double ru = distance_bound_check(u, pu, p, 10.0).worst_ratio;
  const double rv = distance_bound_check(v, pv, p, 10.0).worst_ratio;
  CHECK(ru == doctest::Approx(rv).epsilon(1e-9));
}

TEST_CASE("positivity csv export") {
  const Grid g = Grid::line(0.0, 1.0, 5);
  const ScalarField ramp = ScalarField::sample(
      g, [](const Point& p) { return std::max(p[0] - 0.5, 0.0); });
  const PositivitySet ps = extract_positivity_set(ramp, 0.0);
  const std::string path = "test_positivity.csv";
  write_positivity_csv(ps, g, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header == "x,class");
  std::string body, line;
  while (std::getline(in, line)) body += line + "\n";
  CHECK(body.find("zero") != std::string::npos);
  CHECK(body.find("fb") != std::string::npos);
  in.close();
  std::filesystem::remove(path);
}
