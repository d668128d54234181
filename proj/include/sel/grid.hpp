#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "sel/params.hpp"

namespace sel {

using Point = std::array<double, 2>;  // y ignored in 1D

inline double distance(const Point& a, const Point& b, int dim) {
  double dx = a[0] - b[0];
  double dy = dim == 2 ? a[1] - b[1] : 0.0;
  return std::sqrt(dx * dx + dy * dy);
}

/// Uniform tensor grid on [lo,hi]^dim with n nodes per axis and
/// isotropic spacing h = (hi-lo)/(n-1).
struct Grid {
  int dim = 1;
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{1.0, 1.0};
  int n = 3;
  double h = 0.0;

  Grid() = default;
  Grid(int dim_, Point lo_, Point hi_, int n_)
      : dim(dim_), lo(lo_), hi(hi_), n(n_) {
    if (dim != 1 && dim != 2)
      throw std::invalid_argument("Grid: dim must be 1 or 2");
    if (n < 3) throw std::invalid_argument("Grid: need at least 3 nodes per axis");
    h = (hi[0] - lo[0]) / (n - 1);
    if (!(h > 0.0)) throw std::invalid_argument("Grid: empty extent");
    if (dim == 2) {
      const double hy = (hi[1] - lo[1]) / (n - 1);
      if (std::abs(hy - h) > 1e-12 * std::abs(h))
        throw std::invalid_argument("Grid: spacing must be equal on all axes");
    }
  }

  static Grid line(double a, double b, int n) {
    return Grid(1, {a, 0.0}, {b, 0.0}, n);
  }
  static Grid square(double a, double b, int n) {
    return Grid(2, {a, a}, {b, b}, n);
  }

  std::size_t total_nodes() const {
    return dim == 1 ? static_cast<std::size_t>(n)
                    : static_cast<std::size_t>(n) * n;
  }
  std::size_t index(int i, int j = 0) const {
    return static_cast<std::size_t>(j) * n + i;
  }
  int ix(std::size_t k) const { return static_cast<int>(k % n); }
  int iy(std::size_t k) const { return static_cast<int>(k / n); }

  Point node(std::size_t k) const {
    Point p{lo[0] + ix(k) * h, 0.0};
    if (dim == 2) p[1] = lo[1] + iy(k) * h;
    return p;
  }

  bool is_interior(std::size_t k) const {
    const int i = ix(k);
    if (i <= 0 || i >= n - 1) return false;
    if (dim == 2) {
      const int j = iy(k);
      if (j <= 0 || j >= n - 1) return false;
    }
    return true;
  }
  bool is_boundary(std::size_t k) const { return !is_interior(k); }

  bool operator==(const Grid& o) const {
    return dim == o.dim && n == o.n && lo == o.lo && hi == o.hi;
  }
};

/// Nodal scalar values on a grid. `lower_bound` is a certified positive
/// infimum when known (0 otherwise).
struct ScalarField {
  Grid grid;
  std::vector<double> values;
  double lower_bound = 0.0;

  ScalarField() = default;
  explicit ScalarField(const Grid& g, double fill = 0.0)
      : grid(g), values(g.total_nodes(), fill) {}

  double& operator[](std::size_t k) { return values[k]; }
  double operator[](std::size_t k) const { return values[k]; }

  double sup_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  double min_value() const {
    double m = values.empty() ? 0.0 : values[0];
    for (double v : values) m = std::min(m, v);
    return m;
  }

  template <class F>
  static ScalarField sample(const Grid& g, F&& f) {
    ScalarField u(g);
    for (std::size_t k = 0; k < u.values.size(); ++k)
      u.values[k] = f(g.node(k));
    return u;
  }
};

struct StencilEval {
  double grad_mag = 0.0;
  double laplacian = 0.0;
  std::array<double, 2> grad{0.0, 0.0};
};

/// Gradient floor inside the beta-power; far below any resolvable
/// gradient at desk-scale spacings.
inline constexpr double kGradFloor = 1e-10;

/// Centered second-order differences at a strictly interior node.
inline StencilEval stencil(const ScalarField& u, std::size_t k) {
  const Grid& g = u.grid;
  if (!g.is_interior(k))
    throw std::out_of_range("stencil: node not strictly interior");
  const double h = g.h;
  StencilEval s;
  const double c = u[k];
  const double xm = u[k - 1], xp = u[k + 1];
  s.grad[0] = (xp - xm) / (2.0 * h);
  s.laplacian = (xp - 2.0 * c + xm) / (h * h);
  if (g.dim == 2) {
    const std::size_t n = static_cast<std::size_t>(g.n);
    const double ym = u[k - n], yp = u[k + n];
    s.grad[1] = (yp - ym) / (2.0 * h);
    s.laplacian += (yp - 2.0 * c + ym) / (h * h);
  }
  s.grad_mag = std::sqrt(s.grad[0] * s.grad[0] + s.grad[1] * s.grad[1]);
  return s;
}

/// Pointwise discrete residual of the regularized equation:
/// zeta(u) * max(|Du|, floor)^beta * Lap(u) - f.
inline double residual(const ScalarField& u, const ProblemParams& p,
                       std::size_t k) {
  p.validate();
  const StencilEval s = stencil(u, k);
  const double uk = std::max(u[k], 0.0);
  const double z = p.epsilon > 0.0
                       ? zeta_cutoff(uk, p.alpha, p.epsilon)
                       : std::pow(uk, p.alpha);
  const double g = std::max(s.grad_mag, kGradFloor);
  return z * std::pow(g, p.beta) * s.laplacian - p.forcing.eval(k, uk);
}

/// Max of values over the closed Euclidean ball; membership absorbs
/// rounding at dyadic radii via an h-scaled slack.
inline double sup_over_ball(const ScalarField& u, const Point& center,
                            double r) {
  const Grid& g = u.grid;
  const double slack = r + g.h * 1e-12;
  bool found = false;
  double m = 0.0;
  // index window around the ball
  auto clampi = [&](double x) {
    return std::max(0, std::min(g.n - 1, static_cast<int>(std::floor(x))));
  };
  const int i0 = clampi((center[0] - r - g.h) / g.h - g.lo[0] / g.h);
  const int i1 = clampi((center[0] + r + g.h - g.lo[0]) / g.h) ;
  const int j0 = g.dim == 2 ? clampi((center[1] - r - g.h - g.lo[1]) / g.h) : 0;
  const int j1 = g.dim == 2 ? clampi((center[1] + r + g.h - g.lo[1]) / g.h) : 0;
  for (int j = j0; j <= j1; ++j) {
    for (int i = i0; i <= i1; ++i) {
      const std::size_t k = g.index(i, j);
      if (distance(g.node(k), center, g.dim) <= slack) {
        const double v = u[k];
        m = found ? std::max(m, v) : v;
        found = true;
      }
    }
  }
  if (!found)
    throw std::invalid_argument("sup_over_ball: no grid node inside ball");
  return m;
}

void write_field_csv(const ScalarField& u, const std::string& path);

}  // namespace sel
