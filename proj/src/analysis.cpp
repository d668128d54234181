#include "sel/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "sel/solver.hpp"

namespace sel {

namespace {

std::vector<std::size_t> ball_nodes(const Grid& g, const Point& center,
                                    double r) {
  const double slack = r + g.h * 1e-12;
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < g.total_nodes(); ++k)
    if (distance(g.node(k), center, g.dim) <= slack) out.push_back(k);
  return out;
}

double inf_over_ball(const ScalarField& u, const Point& center, double r) {
  const auto nodes = ball_nodes(u.grid, center, r);
  if (nodes.empty())
    throw std::invalid_argument("inf_over_ball: no grid node inside ball");
  double m = u[nodes[0]];
  for (std::size_t k : nodes) m = std::min(m, u[k]);
  return m;
}

struct LineFit {
  double slope, intercept, max_abs_residual;
};

LineFit least_squares(const std::vector<double>& x,
                      const std::vector<double>& y) {
  const std::size_t m = x.size();
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.max_abs_residual = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    f.max_abs_residual = std::max(
        f.max_abs_residual, std::abs(y[i] - f.slope * x[i] - f.intercept));
  return f;
}

std::vector<double> ranks(const std::vector<double>& v) {
  const std::size_t m = v.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(m);
  std::size_t i = 0;
  while (i < m) {
    std::size_t j = i;
    while (j + 1 < m && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = (i + j) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) r[order[t]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

ExponentFit growth_exponent(const ScalarField& u, const PositivitySet& pset,
                            std::size_t center,
                            const std::vector<double>& radii,
                            const ProblemParams& params) {
  const auto& in = pset.interface_nodes;
  if (std::find(in.begin(), in.end(), center) == in.end())
    throw std::invalid_argument("growth_exponent: center not on free boundary");
  ExponentFit fit;
  fit.center = u.grid.node(center);
  fit.target_gamma = params.gamma();
  std::vector<double> rs = radii;
  std::sort(rs.begin(), rs.end(), std::greater<>());
  for (double r : rs) {
    if (r < 2.0 * u.grid.h) continue;  // sub-stencil radii carry no signal
    const double s = sup_over_ball(u, fit.center, r);
    if (!(s > 0.0)) continue;
    fit.radii.push_back(r);
    fit.sup_values.push_back(s);
  }
  if (fit.radii.size() < 3)
    throw std::invalid_argument("growth_exponent: fewer than 3 usable radii");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < fit.radii.size(); ++i) {
    lx.push_back(std::log(fit.radii[i]));
    ly.push_back(std::log(fit.sup_values[i]));
  }
  const LineFit lf = least_squares(lx, ly);
  fit.slope = lf.slope;
  fit.intercept = lf.intercept;
  fit.max_abs_residual = lf.max_abs_residual;
  return fit;
}

DyadicTable dyadic_growth_table(const ScalarField& u, const Point& center,
                                int k_max, double gamma, double base) {
  if (k_max < 1) throw std::invalid_argument("dyadic_growth_table: k_max < 1");
  if (std::pow(base, -k_max) < 2.0 * u.grid.h)
    throw std::invalid_argument("dyadic_growth_table: radius under-resolved");
  DyadicTable t;
  t.min_ratio = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= k_max; ++k) {
    DyadicRow row;
    row.k = k;
    row.radius = std::pow(base, -k);
    row.sup = sup_over_ball(u, center, row.radius);
    row.ratio = row.sup / std::pow(row.radius, gamma);
    t.max_ratio = std::max(t.max_ratio, row.ratio);
    t.min_ratio = std::min(t.min_ratio, row.ratio);
    t.rows.push_back(row);
  }
  return t;
}

NondegeneracyReport nondegeneracy_check(const ScalarField& u,
                                        const PositivitySet& pset,
                                        std::size_t center,
                                        const std::vector<double>& radii,
                                        const ProblemParams& params) {
  const auto& in = pset.interface_nodes;
  if (std::find(in.begin(), in.end(), center) == in.end())
    throw std::invalid_argument(
        "nondegeneracy_check: center not on free boundary");
  const double g = params.gamma();
  const Point c = u.grid.node(center);
  NondegeneracyReport rep;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  for (double r : radii) {
    if (r < 2.0 * u.grid.h) continue;
    const double s = sup_over_ball(u, c, r);
    rep.radii.push_back(r);
    rep.ratios.push_back(s / std::pow(r, g));
    rep.min_ratio = std::min(rep.min_ratio, rep.ratios.back());
  }
  if (rep.radii.size() < 3)
    throw std::invalid_argument(
        "nondegeneracy_check: fewer than 3 usable radii");
  return rep;
}

ModulusCurve modulus_estimate(const ScalarField& u,
                              const std::vector<double>& t_bins,
                              double margin) {
  if (!(margin > 0.0))
    throw std::invalid_argument("modulus_estimate: margin must be positive");
  if (t_bins.size() < 3)
    throw std::invalid_argument("modulus_estimate: need at least 3 bins");
  for (std::size_t i = 1; i < t_bins.size(); ++i)
    if (!(t_bins[i] > t_bins[i - 1]))
      throw std::invalid_argument("modulus_estimate: bins must increase");

  const Grid& g = u.grid;
  std::vector<std::size_t> nodes;
  for (std::size_t k = 0; k < g.total_nodes(); ++k) {
    const Point p = g.node(k);
    bool inside = p[0] >= g.lo[0] + margin - 1e-12 &&
                  p[0] <= g.hi[0] - margin + 1e-12;
    if (g.dim == 2)
      inside = inside && p[1] >= g.lo[1] + margin - 1e-12 &&
               p[1] <= g.hi[1] - margin + 1e-12;
    if (inside) nodes.push_back(k);
  }
  if (nodes.empty())
    throw std::invalid_argument("modulus_estimate: empty subdomain");

  ModulusCurve curve;
  curve.t_bins = t_bins;
  curve.modulus.assign(t_bins.size(), 0.0);
  curve.field_inf = u.min_value();

  auto record = [&](std::size_t a, std::size_t b) {
    const double d = distance(g.node(a), g.node(b), g.dim);
    const auto it =
        std::lower_bound(curve.t_bins.begin(), curve.t_bins.end(), d);
    if (it == curve.t_bins.end()) return;
    const std::size_t bin = static_cast<std::size_t>(it - curve.t_bins.begin());
    curve.modulus[bin] =
        std::max(curve.modulus[bin], std::abs(u[a] - u[b]));
  };

  if (g.dim == 1) {
    for (std::size_t i = 0; i < nodes.size(); ++i)
      for (std::size_t j = i + 1; j < nodes.size(); ++j)
        record(nodes[i], nodes[j]);
  } else {
    // deterministic subsample, seeded from the grid shape
    std::mt19937 rng(static_cast<std::uint32_t>(g.n) * 1000003u + 2u);
    std::uniform_int_distribution<std::size_t> pick(0, nodes.size() - 1);
    for (int s = 0; s < 100000; ++s) record(nodes[pick(rng)], nodes[pick(rng)]);
    // adjacent pairs anchor the small-separation bins
    for (std::size_t k : nodes) {
      if (g.ix(k) + 1 < g.n) record(k, k + 1);
      if (g.iy(k) + 1 < g.n) record(k, k + static_cast<std::size_t>(g.n));
    }
  }
  // cumulative: varpi(t) covers all separations <= t
  for (std::size_t i = 1; i < curve.modulus.size(); ++i)
    curve.modulus[i] = std::max(curve.modulus[i], curve.modulus[i - 1]);
  return curve;
}

ModulusTable modulus_from_omega(
    const std::vector<std::pair<double, double>>& omega_samples) {
  if (omega_samples.size() < 2)
    throw std::invalid_argument("modulus_from_omega: need >= 2 samples");
  auto s = omega_samples;
  std::sort(s.begin(), s.end());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(s[i].first > 0.0) || !(s[i].second > 0.0))
      throw std::invalid_argument("modulus_from_omega: nonpositive sample");
    if (i > 0 && !(s[i].second < s[i - 1].second))
      throw std::invalid_argument(
          "modulus_from_omega: Omega must be strictly decreasing");
  }
  ModulusTable tab;
  for (const auto& [delta, omega] : s) {
    tab.t.push_back(delta / omega);  // 1 / Xi(delta)
    tab.varpi.push_back(delta);
  }
  for (std::size_t i = 1; i < tab.t.size(); ++i)
    if (!(tab.t[i] > tab.t[i - 1]))
      throw std::invalid_argument("modulus_from_omega: Xi not invertible");
  return tab;
}

double ModulusTable::eval(double tq) const {
  if (!(tq > 0.0)) return 0.0;
  const double lq = std::log(tq);
  std::size_t i = 0;
  if (tq <= t.front())
    i = 0;
  else if (tq >= t.back())
    i = t.size() - 2;
  else
    i = static_cast<std::size_t>(
            std::upper_bound(t.begin(), t.end(), tq) - t.begin()) - 1;
  const double x0 = std::log(t[i]), x1 = std::log(t[i + 1]);
  const double y0 = std::log(varpi[i]), y1 = std::log(varpi[i + 1]);
  return std::exp(y0 + (y1 - y0) * (lq - x0) / (x1 - x0));
}

namespace {

double omega_profile(double z, double d) {
  if (z >= d) return 0.9 * d;
  return z - z * std::sqrt(z) / (10.0 * std::sqrt(d));
}

std::vector<std::size_t> decimated_nodes(const Grid& g, int per_axis) {
  std::vector<std::size_t> out;
  const int stride = std::max(1, (g.n + per_axis - 1) / per_axis);
  if (g.dim == 1) {
    for (int i = 0; i < g.n; i += stride) out.push_back(g.index(i));
  } else {
    for (int j = 0; j < g.n; j += stride)
      for (int i = 0; i < g.n; i += stride) out.push_back(g.index(i, j));
  }
  return out;
}

}  // namespace

DoublingProbeResult doubling_probe(const ScalarField& v, double d, double L,
                                   double kappa, double delta, double zoom) {
  if (!(d > 0.0)) throw std::invalid_argument("doubling_probe: d must be > 0");
  if (!(zoom > 0.0 && zoom <= 1.0))
    throw std::invalid_argument("doubling_probe: zoom must be in (0,1]");
  DoublingProbeResult res;
  res.L = L;
  res.kappa = kappa < 0.0 ? 8.0 * v.sup_abs() / (d * d) : kappa;
  res.delta = delta;
  res.zoom = zoom;
  res.sup_value = -std::numeric_limits<double>::infinity();

  const auto nodes = decimated_nodes(v.grid, 64);
  if (nodes.empty()) throw std::invalid_argument("doubling_probe: empty grid");
  const double inv_zoom = 1.0 / zoom;
  std::vector<Point> pts(nodes.size());
  std::vector<double> norm2(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Point p = v.grid.node(nodes[i]);
    pts[i] = {p[0] * inv_zoom, p[1] * inv_zoom};
    norm2[i] = pts[i][0] * pts[i][0] + pts[i][1] * pts[i][1];
  }
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (std::size_t b = 0; b < nodes.size(); ++b) {
      const double sep = distance(pts[a], pts[b], v.grid.dim);
      const double val = v[nodes[a]] - v[nodes[b]] -
                         L * omega_profile(sep, d) -
                         res.kappa * (norm2[a] + norm2[b]);
      if (val > res.sup_value) {
        res.sup_value = val;
        res.arg_x = pts[a];
        res.arg_y = pts[b];
      }
    }
  }
  res.pass = res.sup_value <= delta;
  return res;
}

std::optional<DoublingProbeResult> doubling_ladder_search(const ScalarField& v,
                                                          double d,
                                                          double delta) {
  for (int jz = 0; jz <= 8; ++jz) {
    const double zoom = std::pow(2.0, -jz);
    for (int jl = 0; jl <= 16; ++jl) {
      const double L = std::pow(2.0, jl);
      DoublingProbeResult r = doubling_probe(v, d, L, -1.0, delta, zoom);
      if (r.pass) return r;
    }
  }
  return std::nullopt;
}

bool flatness_check(const ScalarField& u, const ProblemParams& params,
                    const Point& center, double theta, double eta) {
  if (u.sup_abs() > 1.0 + 1e-9)
    throw std::invalid_argument("flatness_check: field not normalized");
  const double fbound = std::pow(eta, 1.0 + params.alpha + params.beta);
  if (params.forcing.sup() > fbound * (1.0 + 1e-9))
    throw std::invalid_argument(
        "flatness_check: forcing exceeds eta^{1+alpha+beta}");
  if (inf_over_ball(u, center, 0.5) > eta) return true;  // vacuous
  return sup_over_ball(u, center, 0.25) <= theta;
}

double flatness_eta_sweep(const ScalarField& u, const ProblemParams& params,
                          const std::vector<Point>& centers, double theta,
                          double eta_min) {
  if (centers.empty())
    throw std::invalid_argument("flatness_eta_sweep: no centers");
  const double fsup = params.forcing.sup();
  if (!(fsup > 0.0))
    throw std::invalid_argument("flatness_eta_sweep: ||f||_inf must be > 0");
  const double g = params.gamma();
  for (double eta = 0.25; eta >= eta_min; eta *= 0.5) {
    const double rho =
        std::pow(eta, 1.0 / g) * std::pow(fsup, -1.0 / (2.0 + params.beta));
    bool ok = true;
    for (const Point& c : centers) {
      try {
        auto [v, q] = zoom_problem(u, params, c, rho);
        if (!flatness_check(v, q, {0.0, 0.0}, theta, eta)) {
          ok = false;
          break;
        }
      } catch (const std::invalid_argument&) {
        ok = false;  // zoomed box leaves the domain at this eta
        break;
      }
    }
    if (ok) return eta;
  }
  return 0.0;
}

double harnack_quotient(const ScalarField& u, const Point& center, double r) {
  const auto nodes = ball_nodes(u.grid, center, r);
  if (nodes.empty())
    throw std::invalid_argument("harnack_quotient: empty ball");
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t k : nodes) {
    if (!(u[k] > 0.0))
      throw std::invalid_argument("harnack_quotient: nonpositive value in ball");
    lo = std::min(lo, u[k]);
    hi = std::max(hi, u[k]);
  }
  return hi / lo;
}

double holder_seminorm(const ScalarField& u, const Point& center,
                       double radius, double exponent) {
  if (radius < 4.0 * u.grid.h)
    throw std::invalid_argument("holder_seminorm: ball under-resolved");
  const auto nodes = ball_nodes(u.grid, center, radius);
  double worst = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      const double d =
          distance(u.grid.node(nodes[i]), u.grid.node(nodes[j]), u.grid.dim);
      if (d <= 0.0) continue;
      worst = std::max(worst, std::abs(u[nodes[i]] - u[nodes[j]]) /
                                  std::pow(d, exponent));
    }
  }
  return worst;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::invalid_argument("spearman: size mismatch");
  const auto ra = ranks(a), rb = ranks(b);
  const std::size_t m = a.size();
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < m; ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= m;
  mb /= m;
  double saa = 0, sbb = 0, sab = 0;
  for (std::size_t i = 0; i < m; ++i) {
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
    sab += (ra[i] - ma) * (rb[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

namespace {
std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

void write_modulus_csv(const ModulusCurve& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "t,modulus\n";
  for (std::size_t i = 0; i < c.t_bins.size(); ++i)
    out << fmt17(c.t_bins[i]) << ',' << fmt17(c.modulus[i]) << '\n';
}

void write_dyadic_csv(const DyadicTable& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "k,radius,sup,ratio\n";
  for (const auto& r : t.rows)
    out << r.k << ',' << fmt17(r.radius) << ',' << fmt17(r.sup) << ','
        << fmt17(r.ratio) << '\n';
}

}  // namespace sel
