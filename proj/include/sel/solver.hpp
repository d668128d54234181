#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sel/grid.hpp"
#include "sel/params.hpp"

namespace sel {

using BoundaryFn = std::function<double(const Point&)>;

struct SolverOptions {
  /// Max complementarity residual for acceptance; NaN means the scaled
  /// default 1e-8 * ||f||_inf * h^2.
  double tol = std::numeric_limits<double>::quiet_NaN();
  long max_iters = 200000;
  double relax = 0.7;
  double floor = 0.0;
  /// Residual check period in sweeps (history granularity).
  int check_every = 1;

  double resolved_tol(const ProblemParams& p, double h) const {
    if (tol == tol) return tol;
    return 1e-8 * p.forcing.sup() * h * h;
  }
};

struct SolveReport {
  long iterations = 0;
  double final_residual = 0.0;
  std::vector<double> residual_history;
  bool max_principle_ok = false;
  double inf_attained = 0.0;
  double wall_time_s = 0.0;
  /// Interior nodes pinned at opts.floor by the positivity clamp; the
  /// residual there is one-sided (equation pressing below the floor).
  long contact_nodes = 0;
};

struct SolverError : std::runtime_error {
  SolveReport report;
  SolverError(const std::string& what, SolveReport r)
      : std::runtime_error(what), report(std::move(r)) {}
};

/// Damped symmetric nonlinear Gauss-Seidel for the regularized Dirichlet
/// problem. Boundary nodes carry `boundary` exactly; interior nodes are
/// clamped at opts.floor (contact nodes satisfy the one-sided residual
/// condition instead of |residual| <= tol).
std::pair<ScalarField, SolveReport> solve_dirichlet(
    const Grid& grid, const ProblemParams& params, const BoundaryFn& boundary,
    const SolverOptions& opts, const ScalarField* warm_start = nullptr);

/// Chain of Dirichlet solves with boundary level * base(X), each
/// warm-started from the previous solution clamped to the new level's
/// boundary maximum. `base` defaults to the constant 1 (plain levels).
struct ContinuationStep {
  double level = 0.0;
  ScalarField field;
  SolveReport report;
  /// Max pointwise increase over the previous step (comparison
  /// diagnostic; expected <= tol for alpha >= 0).
  double monotonicity_violation = 0.0;
};

std::vector<ContinuationStep> continuation_in_boundary(
    const Grid& grid, const ProblemParams& params,
    const std::vector<double>& levels, const SolverOptions& opts,
    const BoundaryFn& base = nullptr);

struct LimitingSolution {
  ScalarField field;
  /// (epsilon or boundary level, sup-norm gap to the next iterate).
  std::vector<std::pair<double, double>> history;
  double cauchy_gap = 0.0;
  std::vector<SolveReport> reports;
  bool divergence_warning = false;
};

/// Decreasing-epsilon continuation toward a limiting solution, each solve
/// warm-started from the previous. Stops early once the consecutive
/// sup-norm gap falls below 10 * tol.
LimitingSolution limit_in_epsilon(const Grid& grid, ProblemParams params,
                                  const std::vector<double>& eps_schedule,
                                  const BoundaryFn& boundary,
                                  const SolverOptions& opts);

/// Zoom-in v(X) = u(center + rho X) on the unit box [-1,1]^dim with
/// rho = eta_star^{1/gamma} ||f||_inf^{-1/(2+beta)}; the forcing becomes
/// the table rho^{2+beta} f(center + rho X), with sup <= eta_star^{1+a+b}.
/// Field values are sampled multilinearly.
std::pair<ScalarField, ProblemParams> normalize_rhs(const ScalarField& u,
                                                    const ProblemParams& params,
                                                    double eta_star);

/// Zoom anchored at an arbitrary point, carrying the forcing along as a
/// table scaled by rho^{2+beta} (same sampling rules as normalize_rhs).
std::pair<ScalarField, ProblemParams> zoom_problem(const ScalarField& u,
                                                   const ProblemParams& params,
                                                   const Point& anchor,
                                                   double rho);

/// Zoom of a field about an arbitrary anchor point: v(X) = u(anchor+rho X)
/// on [-1,1]^dim with n nodes per axis (multilinear sampling). Throws if
/// the zoomed box leaves the field's extent.
ScalarField zoom_field(const ScalarField& u, const Point& anchor, double rho,
                       int n);

/// Exact dyadic restriction for the scaling covariance check: given u on
/// its grid and rho = 1/m, returns v(X) = rho^{-gamma} u(rho X) on the
/// same box with (n-1)/m + 1 nodes, sampling u at exact node locations.
/// Requires the box to be symmetric about 0 and indices to align.
ScalarField scaled_restriction(const ScalarField& u, double gamma, int m);

}  // namespace sel
