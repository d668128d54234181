#include "sel/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>

namespace sel {

namespace {

inline double fast_pow(double x, double p) {
  if (p == 0.0) return 1.0;
  if (p == 1.0) return x;
  if (p == 2.0) return x * x;
  return std::pow(x, p);
}

struct Kernel {
  const Grid& g;
  const ProblemParams& p;
  double zeta_floor;  // eps^alpha, or 0 when eps == 0
  double h2_over_2d;
  double inv_h2;

  explicit Kernel(const Grid& grid, const ProblemParams& params)
      : g(grid), p(params) {
    zeta_floor = params.epsilon > 0.0
                     ? fast_pow(params.epsilon, params.alpha)
                     : 0.0;
    h2_over_2d = g.h * g.h / (2.0 * g.dim);
    inv_h2 = 1.0 / (g.h * g.h);
  }

  double zeta(double u) const {
    if (p.epsilon > 0.0 && u < p.epsilon) return zeta_floor;
    return fast_pow(u, p.alpha);
  }

  // coefficient zeta(u) * max(|Du|,floor)^beta and neighbor mean at k
  struct Local {
    double mean;
    double coef;
    double lap;
  };

  Local local(const std::vector<double>& v, std::size_t k) const {
    const double xm = v[k - 1], xp = v[k + 1];
    double sum = xm + xp;
    double gx = (xp - xm) * 0.5 / g.h;
    double g2 = gx * gx;
    if (g.dim == 2) {
      const std::size_t n = static_cast<std::size_t>(g.n);
      const double ym = v[k - n], yp = v[k + n];
      sum += ym + yp;
      const double gy = (yp - ym) * 0.5 / g.h;
      g2 += gy * gy;
    }
    Local l;
    l.mean = sum / (2.0 * g.dim);
    const double gm = std::max(std::sqrt(g2), kGradFloor);
    l.coef = zeta(std::max(v[k], 0.0)) * fast_pow(gm, p.beta);
    l.lap = (sum - 2.0 * g.dim * v[k]) * inv_h2;
    return l;
  }
};

// Complementarity residual: |res| off the floor, positive part on it.
// `noise` receives the rounding floor of the residual evaluation itself:
// the h^-2 in the Laplacian amplifies ulps of u, so at an exact float
// fixed point the residual plateaus near eps_mach * coef * |u| * 2d/h^2
// and no tolerance below that is reachable in doubles.
double convergence_residual(const Kernel& ker, const std::vector<double>& v,
                            const std::vector<std::size_t>& interior,
                            double floor, long* contacts,
                            double* noise = nullptr) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double worst = 0.0, nf = 0.0;
  long nc = 0;
  for (std::size_t k : interior) {
    const auto l = ker.local(v, k);
    const double f = ker.p.forcing.eval(k, std::max(v[k], 0.0));
    const double res = l.coef * l.lap - f;
    if (v[k] <= floor) {
      ++nc;
      worst = std::max(worst, res);  // only upward pressure violates
    } else {
      worst = std::max(worst, std::abs(res));
    }
    if (noise) {
      const double scale = std::max(std::abs(v[k]), std::abs(l.mean));
      nf = std::max(nf, 4.0 * eps * (l.coef * 2.0 * ker.g.dim * ker.inv_h2 *
                                         scale +
                                     std::abs(f)));
    }
  }
  if (contacts) *contacts = nc;
  if (noise) *noise = nf;
  return worst;
}

}  // namespace

std::pair<ScalarField, SolveReport> solve_dirichlet(
    const Grid& grid, const ProblemParams& params, const BoundaryFn& boundary,
    const SolverOptions& opts, const ScalarField* warm_start) {
  params.validate();
  if (!boundary) throw std::invalid_argument("solve_dirichlet: no boundary");
  if (!(opts.relax > 0.0 && opts.relax <= 1.0))
    throw std::invalid_argument("solve_dirichlet: relax must be in (0,1]");
  const double tol = opts.resolved_tol(params, grid.h);
  if (!(tol > 0.0)) throw std::invalid_argument("solve_dirichlet: tol <= 0");

  const auto t0 = std::chrono::steady_clock::now();

  ScalarField u(grid);
  double bmax = -std::numeric_limits<double>::infinity();
  double bmin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < u.values.size(); ++k) {
    if (grid.is_boundary(k)) {
      u[k] = boundary(grid.node(k));
      if (!(u[k] >= 0.0))
        throw std::invalid_argument("solve_dirichlet: boundary value < 0");
      bmax = std::max(bmax, u[k]);
      bmin = std::min(bmin, u[k]);
    }
  }
  if (!(params.epsilon > 0.0) && !(bmin > 0.0))
    throw std::invalid_argument(
        "solve_dirichlet: epsilon = 0 requires positive boundary data");

  std::vector<std::size_t> interior;
  interior.reserve(u.values.size());
  for (std::size_t k = 0; k < u.values.size(); ++k)
    if (grid.is_interior(k)) interior.push_back(k);

  if (warm_start) {
    if (!(warm_start->grid == grid))
      throw std::invalid_argument("solve_dirichlet: warm start grid mismatch");
    for (std::size_t k : interior)
      u[k] = std::max(warm_start->values[k], opts.floor);
  } else {
    for (std::size_t k : interior) u[k] = std::max(bmax, opts.floor);
  }

  Kernel ker(grid, params);
  SolveReport rep;
  const double relax = opts.relax;
  const double omr = 1.0 - relax;

  auto update = [&](std::size_t k) {
    const auto l = ker.local(u.values, k);
    const double f = ker.p.forcing.eval(k, std::max(u[k], 0.0));
    const double cand = l.mean - ker.h2_over_2d * f / l.coef;
    u[k] = std::max(omr * u[k] + relax * cand, opts.floor);
  };

  bool converged = false;
  long it = 0;
  for (; it < opts.max_iters; ++it) {
    for (auto k = interior.begin(); k != interior.end(); ++k) update(*k);
    for (auto k = interior.rbegin(); k != interior.rend(); ++k) update(*k);
    if ((it + 1) % opts.check_every == 0 || it + 1 == opts.max_iters) {
      double noise = 0.0;
      const double r =
          convergence_residual(ker, u.values, interior, opts.floor,
                               &rep.contact_nodes, &noise);
      rep.residual_history.push_back(r);
      if (r <= std::max(tol, noise)) {
        converged = true;
        ++it;
        break;
      }
    }
  }
  rep.iterations = it;
  rep.final_residual = convergence_residual(ker, u.values, interior,
                                            opts.floor, &rep.contact_nodes);
  double imax = -std::numeric_limits<double>::infinity();
  double inf = std::numeric_limits<double>::infinity();
  for (std::size_t k : interior) imax = std::max(imax, u[k]);
  for (double v : u.values) inf = std::min(inf, v);
  rep.max_principle_ok = imax <= bmax + 1e-12 * std::max(1.0, std::abs(bmax));
  rep.inf_attained = inf;
  u.lower_bound = std::max(inf, 0.0) > 0.0 ? inf : 0.0;
  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (!converged) {
    char msg[128];
    std::snprintf(msg, sizeof msg,
                  "solve_dirichlet: no convergence (residual %.3e > tol %.3e)",
                  rep.final_residual, tol);
    throw SolverError(msg, rep);
  }
  return {std::move(u), std::move(rep)};
}

std::vector<ContinuationStep> continuation_in_boundary(
    const Grid& grid, const ProblemParams& params,
    const std::vector<double>& levels, const SolverOptions& opts,
    const BoundaryFn& base) {
  if (levels.empty())
    throw std::invalid_argument("continuation_in_boundary: no levels");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!(levels[i] >= 0.0))
      throw std::invalid_argument("continuation_in_boundary: negative level");
    if (i > 0 && !(levels[i] < levels[i - 1]))
      throw std::invalid_argument(
          "continuation_in_boundary: levels must be strictly decreasing");
  }
  BoundaryFn b = base ? base : BoundaryFn([](const Point&) { return 1.0; });

  std::vector<ContinuationStep> chain;
  const ScalarField* prev = nullptr;
  for (double level : levels) {
    BoundaryFn scaled = [&b, level](const Point& p) { return level * b(p); };
    ScalarField warm;
    const ScalarField* ws = nullptr;
    if (!prev) {
      // first level: seed from the boundary formula itself
      warm = ScalarField::sample(grid, scaled);
      ws = &warm;
    } else {
      // clamp the previous solution to the new boundary ceiling
      double cap = 0.0;
      for (std::size_t k = 0; k < prev->values.size(); ++k)
        if (grid.is_boundary(k))
          cap = std::max(cap, scaled(grid.node(k)));
      warm = *prev;
      for (double& v : warm.values) v = std::min(v, cap);
      ws = &warm;
    }
    auto [field, report] = solve_dirichlet(grid, params, scaled, opts, ws);
    ContinuationStep step;
    step.level = level;
    if (prev) {
      double viol = 0.0;
      for (std::size_t k = 0; k < field.values.size(); ++k)
        viol = std::max(viol, field[k] - prev->values[k]);
      step.monotonicity_violation = viol;
    }
    step.field = std::move(field);
    step.report = std::move(report);
    chain.push_back(std::move(step));
    prev = &chain.back().field;
  }
  return chain;
}

LimitingSolution limit_in_epsilon(const Grid& grid, ProblemParams params,
                                  const std::vector<double>& eps_schedule,
                                  const BoundaryFn& boundary,
                                  const SolverOptions& opts) {
  if (eps_schedule.empty())
    throw std::invalid_argument("limit_in_epsilon: empty schedule");
  for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
    if (!(eps_schedule[i] > 0.0))
      throw std::invalid_argument("limit_in_epsilon: eps must be positive");
    if (i > 0 && !(eps_schedule[i] < eps_schedule[i - 1]))
      throw std::invalid_argument(
          "limit_in_epsilon: schedule must be strictly decreasing");
  }
  const double tol = opts.resolved_tol(params, grid.h);

  LimitingSolution lim;
  // seed the first solve from the boundary formula; a flat start has zero
  // gradient everywhere and the degenerate coefficient stalls the sweep
  ScalarField current = ScalarField::sample(grid, boundary);
  for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
    params.epsilon = eps_schedule[i];
    auto [field, report] =
        solve_dirichlet(grid, params, boundary, opts, &current);
    if (i > 0) {
      double gap = 0.0;
      for (std::size_t k = 0; k < field.values.size(); ++k)
        gap = std::max(gap, std::abs(field[k] - current.values[k]));
      lim.history.push_back({eps_schedule[i - 1], gap});
      lim.cauchy_gap = gap;
    }
    current = std::move(field);
    lim.reports.push_back(std::move(report));
    if (i > 0 && lim.cauchy_gap <= 10.0 * tol) break;
  }
  // divergence diagnostic: gaps should not grow over the last three steps
  const auto& h = lim.history;
  if (h.size() >= 3) {
    const std::size_t m = h.size();
    if (h[m - 1].second > h[m - 2].second &&
        h[m - 2].second > h[m - 3].second)
      lim.divergence_warning = true;
  }
  lim.field = std::move(current);
  return lim;
}

namespace {

double interp(const ScalarField& u, const Point& p) {
  const Grid& g = u.grid;
  const double fx = (p[0] - g.lo[0]) / g.h;
  const int i = std::clamp(static_cast<int>(std::floor(fx)), 0, g.n - 2);
  const double tx = fx - i;
  if (g.dim == 1)
    return (1.0 - tx) * u[g.index(i)] + tx * u[g.index(i + 1)];
  const double fy = (p[1] - g.lo[1]) / g.h;
  const int j = std::clamp(static_cast<int>(std::floor(fy)), 0, g.n - 2);
  const double ty = fy - j;
  const double v00 = u[g.index(i, j)], v10 = u[g.index(i + 1, j)];
  const double v01 = u[g.index(i, j + 1)], v11 = u[g.index(i + 1, j + 1)];
  return (1.0 - ty) * ((1.0 - tx) * v00 + tx * v10) +
         ty * ((1.0 - tx) * v01 + tx * v11);
}

std::size_t nearest_node(const Grid& g, const Point& p) {
  const int i = std::clamp(
      static_cast<int>(std::lround((p[0] - g.lo[0]) / g.h)), 0, g.n - 1);
  int j = 0;
  if (g.dim == 2)
    j = std::clamp(static_cast<int>(std::lround((p[1] - g.lo[1]) / g.h)), 0,
                   g.n - 1);
  return g.index(i, j);
}

}  // namespace

ScalarField zoom_field(const ScalarField& u, const Point& anchor, double rho,
                       int n) {
  const Grid& g = u.grid;
  const double slack = 1e-12 * (g.hi[0] - g.lo[0]);
  for (int a = 0; a < g.dim; ++a) {
    if (anchor[a] - rho < g.lo[a] - slack || anchor[a] + rho > g.hi[a] + slack)
      throw std::invalid_argument("zoom_field: zoomed box leaves the domain");
  }
  Grid zg = g.dim == 1 ? Grid::line(-1.0, 1.0, n) : Grid::square(-1.0, 1.0, n);
  return ScalarField::sample(zg, [&](const Point& x) {
    Point p{anchor[0] + rho * x[0], g.dim == 2 ? anchor[1] + rho * x[1] : 0.0};
    return interp(u, p);
  });
}

std::pair<ScalarField, ProblemParams> zoom_problem(const ScalarField& u,
                                                   const ProblemParams& params,
                                                   const Point& anchor,
                                                   double rho) {
  ScalarField v = zoom_field(u, anchor, rho, u.grid.n);
  const double scale = std::pow(rho, 2.0 + params.beta);
  std::vector<double> table(v.values.size());
  for (std::size_t k = 0; k < table.size(); ++k) {
    const Point x = v.grid.node(k);
    const Point p{anchor[0] + rho * x[0],
                  u.grid.dim == 2 ? anchor[1] + rho * x[1] : 0.0};
    table[k] = scale * params.forcing.eval(nearest_node(u.grid, p), v[k]);
  }
  ProblemParams q = params;
  q.forcing = ForcingSpec::sampled(std::move(table));
  return {std::move(v), std::move(q)};
}

std::pair<ScalarField, ProblemParams> normalize_rhs(const ScalarField& u,
                                                    const ProblemParams& params,
                                                    double eta_star) {
  params.validate();
  const double fsup = params.forcing.sup();
  if (!(fsup > 0.0))
    throw std::invalid_argument("normalize_rhs: ||f||_inf must be positive");
  const double g = params.gamma();
  const double rho =
      std::pow(eta_star, 1.0 / g) * std::pow(fsup, -1.0 / (2.0 + params.beta));
  const Point anchor{(u.grid.lo[0] + u.grid.hi[0]) / 2.0,
                     (u.grid.lo[1] + u.grid.hi[1]) / 2.0};
  return zoom_problem(u, params, anchor, rho);
}

ScalarField scaled_restriction(const ScalarField& u, double gamma, int m) {
  const Grid& g = u.grid;
  if (m < 1) throw std::invalid_argument("scaled_restriction: m must be >= 1");
  if ((g.n - 1) % m != 0)
    throw std::invalid_argument("scaled_restriction: (n-1) not divisible by m");
  if (std::abs(g.hi[0] + g.lo[0]) > 1e-12 * (g.hi[0] - g.lo[0]))
    throw std::invalid_argument("scaled_restriction: box must be centered at 0");
  // coarse node x_j maps to fine node at x_j / m; verify index alignment
  const double off = -g.lo[0] * (m - 1) / (m * g.h);
  const long o = std::lround(off);
  if (std::abs(off - o) > 1e-9)
    throw std::invalid_argument("scaled_restriction: node sets do not align");
  const int nc = (g.n - 1) / m + 1;
  Grid cg = g.dim == 1 ? Grid::line(g.lo[0], g.hi[0], nc)
                       : Grid::square(g.lo[0], g.hi[0], nc);
  ScalarField v(cg);
  const double amp = std::pow(static_cast<double>(m), gamma);
  for (std::size_t k = 0; k < v.values.size(); ++k) {
    const int i = cg.ix(k), j = cg.iy(k);
    const std::size_t fk =
        g.index(static_cast<int>(o) + i, g.dim == 2 ? static_cast<int>(o) + j : 0);
    v[k] = amp * u[fk];
  }
  v.lower_bound = amp * u.lower_bound;
  return v;
}

}  // namespace sel
