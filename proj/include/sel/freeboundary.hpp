#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sel/grid.hpp"
#include "sel/params.hpp"

namespace sel {

/// Classification of interior nodes against a threshold. The three sets
/// partition the interior: pos (above threshold, all stencil neighbors
/// above), fb (above threshold, some neighbor at or below) and zero.
struct PositivitySet {
  double threshold = 0.0;
  std::vector<std::size_t> positive_nodes;  // strictly inside {u > thr}
  std::vector<std::size_t> boundary_nodes;  // positive, touching the zero side
  std::vector<std::size_t> zero_nodes;      // u <= thr

  /// Grid nodes flanking the interface from either side. The zero-side
  /// members approximate continuum free-boundary points with half the
  /// bias of the positive-side ones, so measurement centers accept both.
  std::vector<std::size_t> interface_nodes;
};

PositivitySet extract_positivity_set(const ScalarField& u, double threshold);

/// Euclidean distance from `point` to the nearest zero node.
double distance_to_zero_set(const PositivitySet& pset, const Grid& grid,
                            const Point& point);

struct DistanceBoundReport {
  double worst_ratio = 0.0;   // max u(X) / dist(X, zero set)^gamma
  std::size_t argmax_node = 0;
  double bound = 0.0;
  bool pass = true;           // worst_ratio <= bound (vacuous if no data)
  std::size_t nodes_checked = 0;
};

/// Checks u(X) <= C dist(X, Z(u))^gamma over positive interior nodes.
DistanceBoundReport distance_bound_check(const ScalarField& u,
                                         const PositivitySet& pset,
                                         const ProblemParams& params,
                                         double C);

/// CSV export: x[,y],class with class in {pos, fb, zero}.
void write_positivity_csv(const PositivitySet& pset, const Grid& grid,
                          const std::string& path);

}  // namespace sel
