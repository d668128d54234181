#include <array>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "sel/params.hpp"

using namespace sel;

TEST_CASE("gamma exponent values") {
  CHECK(gamma_exponent(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gamma_exponent(0.0, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(gamma_exponent(3.0, 1.0) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(gamma_exponent(2.0, 0.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(gamma_exponent(0.0, -0.5), std::domain_error);
  CHECK_THROWS_AS(gamma_exponent(-2.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(gamma_exponent(-2.5, 1.5), std::domain_error);
}

TEST_CASE("gamma identities and monotonicity") {
  for (double beta : {0.0, 0.25, 0.5, 1.0, 2.0, 3.0, 7.5})
    CHECK(gamma_exponent(1.0, beta) == doctest::Approx(1.0).epsilon(1e-15));
  // strictly decreasing in alpha at fixed beta
  for (double beta : {0.0, 1.0, 2.0}) {
    double prev = gamma_exponent(-0.5, beta);
    for (double alpha : {0.0, 0.5, 1.0, 2.0, 4.0}) {
      const double g = gamma_exponent(alpha, beta);
      CHECK(g < prev);
      prev = g;
    }
  }
  // strictly increasing in beta at fixed alpha > 1
  for (double alpha : {1.5, 2.0, 3.0}) {
    double prev = gamma_exponent(alpha, 0.0);
    for (double beta : {0.5, 1.0, 2.0, 4.0}) {
      const double g = gamma_exponent(alpha, beta);
      CHECK(g > prev);
      prev = g;
    }
  }
  CHECK(gamma_exponent(0.5, 1.0) > 0.0);
}

TEST_CASE("zeta cutoff branches") {
  CHECK(zeta_cutoff(0.5, 2.0, 0.1) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(zeta_cutoff(0.05, 2.0, 0.1) == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(zeta_cutoff(0.05, -1.0, 0.1) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK_THROWS_AS(zeta_cutoff(-0.1, 2.0, 0.1), std::domain_error);
  CHECK_THROWS_AS(zeta_cutoff(0.5, 2.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(zeta_cutoff(0.5, 2.0, -1.0), std::domain_error);
}

TEST_CASE("zeta cutoff continuity and exactness") {
  for (double phi : {-1.0, 0.5, 1.0, 2.0, 3.0}) {
    for (double eps : {0.01, 0.1, 0.5}) {
      const double below = zeta_cutoff(std::nextafter(eps, 0.0), phi, eps);
      const double at = zeta_cutoff(eps, phi, eps);
      CHECK(std::abs(below - at) <= 1e-12 * std::max(std::abs(at), 1.0));
      for (double s : {eps, 2.0 * eps, 1.0 + eps})
        CHECK(zeta_cutoff(s, phi, eps) == std::pow(s, phi));
      // constant on [0, eps]
      CHECK(zeta_cutoff(0.0, phi, eps) == std::pow(eps, phi));
      CHECK(zeta_cutoff(0.5 * eps, phi, eps) == std::pow(eps, phi));
    }
  }
}

TEST_CASE("cutoff bound check") {
  const std::array<double, 4> s1{0.0, 0.05, 0.1, 1.0};
  CHECK(cutoff_bound_check(2.0, 0.1, s1));
  const std::array<double, 1> s2{0.25};
  CHECK(cutoff_bound_check(1.0, 0.5, s2));
  const std::array<double, 1> s3{2.0};
  CHECK(cutoff_bound_check(1.0, 0.5, s3));
  CHECK_THROWS_AS(cutoff_bound_check(0.0, 0.1, s1), std::domain_error);
  CHECK_THROWS_AS(cutoff_bound_check(-1.0, 0.1, s1), std::domain_error);
}

TEST_CASE("hea forcing values") {
  CHECK(hea_forcing(2.0, 1.0) == 0.0);
  CHECK(hea_forcing(0.5, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(hea_forcing(0.25, 0.5) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(hea_forcing(1.0, 1.0) == 0.0);  // support boundary
  CHECK(hea_forcing(0.0, 1.0) == 0.0);
  CHECK_THROWS_AS(hea_forcing(-0.1, 1.0), std::domain_error);
  CHECK_THROWS_AS(hea_forcing(0.5, 0.0), std::domain_error);
}

TEST_CASE("hea forcing integral is scale invariant") {
  auto integral = [](double eps_a) {
    const int m = 20000;
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
      const double u = (i + 0.5) * eps_a / m;
      acc += hea_forcing(u, eps_a) * (eps_a / m);
    }
    return acc;
  };
  const double ref = integral(1.0);
  CHECK(ref == doctest::Approx(8.0 / 15.0).epsilon(1e-6));  // 16 B(3,3)
  for (double eps_a : {0.1, 0.37, 2.0})
    CHECK(integral(eps_a) == doctest::Approx(ref).epsilon(1e-9));
}

TEST_CASE("forcing spec") {
  const ForcingSpec c = ForcingSpec::constant(2.0);
  CHECK(c.eval(17, 0.0) == 2.0);
  CHECK(c.sup() == 2.0);

  const ForcingSpec t = ForcingSpec::sampled({1.0, -3.0, 2.0});
  CHECK(t.eval(1, 99.0) == -3.0);
  CHECK(t.sup() == 3.0);
  CHECK_THROWS_AS(t.eval(3, 0.0), std::out_of_range);

  const ForcingSpec h = ForcingSpec::hea(0.5);
  CHECK(h.sup() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(h.eval(0, 0.25) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("problem params validation") {
  ProblemParams p;
  p.alpha = 1.0;
  p.beta = 1.0;
  p.epsilon = 0.01;
  p.c0 = 0.5;
  CHECK_NOTHROW(p.validate());
  CHECK(p.gamma() == doctest::Approx(1.0).epsilon(1e-15));

  ProblemParams bad = p;
  bad.beta = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = p;
  bad.alpha = -3.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = p;
  bad.epsilon = -1e-9;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = p;
  bad.c0 = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = p;
  bad.c0 = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = p;
  bad.forcing = ForcingSpec::constant(0.1);  // below c0
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = p;
  bad.forcing = ForcingSpec::constant(3.0);  // above 1/c0
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
