#include "sel/grid.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace sel {

namespace {
std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

void write_field_csv(const ScalarField& u, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << (u.grid.dim == 2 ? "x,y,u\n" : "x,u\n");
  for (std::size_t k = 0; k < u.values.size(); ++k) {
    const Point p = u.grid.node(k);
    out << fmt17(p[0]);
    if (u.grid.dim == 2) out << ',' << fmt17(p[1]);
    out << ',' << fmt17(u[k]) << '\n';
  }
}

}  // namespace sel
