#include "sel/freeboundary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace sel {

namespace {

// Stencil neighbors (any node, including grid-boundary ones).
template <class F>
void for_each_neighbor(const Grid& g, std::size_t k, F&& f) {
  const int i = g.ix(k), j = g.iy(k);
  if (i > 0) f(k - 1);
  if (i < g.n - 1) f(k + 1);
  if (g.dim == 2) {
    const std::size_t n = static_cast<std::size_t>(g.n);
    if (j > 0) f(k - n);
    if (j < g.n - 1) f(k + n);
  }
}

}  // namespace

PositivitySet extract_positivity_set(const ScalarField& u, double threshold) {
  if (!(threshold >= 0.0))
    throw std::invalid_argument("extract_positivity_set: threshold < 0");
  PositivitySet ps;
  ps.threshold = threshold;
  const Grid& g = u.grid;
  for (std::size_t k = 0; k < u.values.size(); ++k) {
    if (!g.is_interior(k)) continue;
    if (u[k] > threshold) {
      bool touches_zero = false;
      for_each_neighbor(g, k, [&](std::size_t nb) {
        if (u[nb] <= threshold) touches_zero = true;
      });
      if (touches_zero) {
        ps.boundary_nodes.push_back(k);
        ps.interface_nodes.push_back(k);
      } else {
        ps.positive_nodes.push_back(k);
      }
    } else {
      ps.zero_nodes.push_back(k);
      bool touches_positive = false;
      for_each_neighbor(g, k, [&](std::size_t nb) {
        if (u[nb] > threshold) touches_positive = true;
      });
      if (touches_positive) ps.interface_nodes.push_back(k);
    }
  }
  return ps;
}

double distance_to_zero_set(const PositivitySet& pset, const Grid& grid,
                            const Point& point) {
  if (pset.zero_nodes.empty())
    throw std::invalid_argument("distance_to_zero_set: zero set is empty");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k : pset.zero_nodes)
    best = std::min(best, distance(grid.node(k), point, grid.dim));
  return best;
}

DistanceBoundReport distance_bound_check(const ScalarField& u,
                                         const PositivitySet& pset,
                                         const ProblemParams& params,
                                         double C) {
  if (pset.zero_nodes.empty())
    throw std::invalid_argument("distance_bound_check: zero set is empty");
  const double g = params.gamma();
  DistanceBoundReport rep;
  rep.bound = C;
  auto visit = [&](std::size_t k) {
    const double d = distance_to_zero_set(pset, u.grid, u.grid.node(k));
    if (d <= 0.0) return;
    const double ratio = u[k] / std::pow(d, g);
    if (ratio > rep.worst_ratio) {
      rep.worst_ratio = ratio;
      rep.argmax_node = k;
    }
    ++rep.nodes_checked;
  };
  for (std::size_t k : pset.positive_nodes) visit(k);
  for (std::size_t k : pset.boundary_nodes) visit(k);
  rep.pass = rep.nodes_checked == 0 || rep.worst_ratio <= C;
  return rep;
}

void write_positivity_csv(const PositivitySet& pset, const Grid& grid,
                          const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << (grid.dim == 2 ? "x,y,class\n" : "x,class\n");
  auto row = [&](std::size_t k, const char* cls) {
    char buf[40];
    const Point p = grid.node(k);
    std::snprintf(buf, sizeof buf, "%.17g", p[0]);
    out << buf;
    if (grid.dim == 2) {
      std::snprintf(buf, sizeof buf, "%.17g", p[1]);
      out << ',' << buf;
    }
    out << ',' << cls << '\n';
  };
  // deterministic order: flat index
  std::vector<std::pair<std::size_t, const char*>> rows;
  for (std::size_t k : pset.positive_nodes) rows.push_back({k, "pos"});
  for (std::size_t k : pset.boundary_nodes) rows.push_back({k, "fb"});
  for (std::size_t k : pset.zero_nodes) rows.push_back({k, "zero"});
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [k, cls] : rows) row(k, cls);
}

}  // namespace sel
