#pragma once

#include <cmath>

#include "sel/grid.hpp"
#include "sel/params.hpp"

namespace sel {

/// Constant forcing that makes u = c |X - center|^gamma an exact solution
/// of u^a |Du|^b Lap u = f: substituting the profile cancels the radial
/// power exactly, leaving c^{1+a+b} gamma^{1+b} (gamma + dim - 2).
inline double radial_profile_forcing(double c, double alpha, double beta,
                                     int dim) {
  const double g = gamma_exponent(alpha, beta);
  return std::pow(c, 1.0 + alpha + beta) * std::pow(g, 1.0 + beta) *
         (g + dim - 2.0);
}

inline ScalarField radial_profile(const Grid& grid, double c, double gamma,
                                  const Point& center = {0.0, 0.0}) {
  return ScalarField::sample(grid, [&](const Point& p) {
    return c * std::pow(distance(p, center, grid.dim), gamma);
  });
}

/// Max interior |residual|, skipping nodes within `exclude_r` of `center`.
double max_interior_residual(const ScalarField& u, const ProblemParams& p,
                             const Point& center, double exclude_r);

}  // namespace sel
