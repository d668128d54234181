#include "sel/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace sel {

double max_interior_residual(const ScalarField& u, const ProblemParams& p,
                             const Point& center, double exclude_r) {
  p.validate();
  double worst = 0.0;
  for (std::size_t k = 0; k < u.values.size(); ++k) {
    if (!u.grid.is_interior(k)) continue;
    if (distance(u.grid.node(k), center, u.grid.dim) < exclude_r) continue;
    worst = std::max(worst, std::abs(residual(u, p, k)));
  }
  return worst;
}

}  // namespace sel
