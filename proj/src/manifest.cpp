#include "sel/manifest.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sel {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Manifest Manifest::parse(const std::string& text, const std::string& name) {
  Manifest m;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ManifestError(name + ":" + std::to_string(lineno) +
                          ": expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ManifestError(name + ":" + std::to_string(lineno) + ": empty key");
    if (m.has(key))
      throw ManifestError(name + ":" + std::to_string(lineno) +
                          ": duplicate key '" + key + "'");
    m.entries_.push_back({key, value});
  }
  return m;
}

Manifest Manifest::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError("cannot open manifest '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

bool Manifest::has(const std::string& key) const {
  return get(key).has_value();
}

std::optional<std::string> Manifest::get(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return v;
  return std::nullopt;
}

const std::string& Manifest::require(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return v;
  throw ManifestError("missing required key '" + key + "'");
}

double Manifest::get_double(const std::string& key) const {
  const std::string& s = require(key);
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ManifestError("key '" + key + "': not a number: '" + s + "'");
  }
}

double Manifest::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long Manifest::get_long_or(const std::string& key, long fallback) const {
  if (!has(key)) return fallback;
  const double v = get_double(key);
  const long l = static_cast<long>(v);
  if (static_cast<double>(l) != v)
    throw ManifestError("key '" + key + "': expected an integer");
  return l;
}

bool Manifest::get_bool_or(const std::string& key, bool fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "on") return true;
  if (*v == "false" || *v == "0" || *v == "off") return false;
  throw ManifestError("key '" + key + "': expected a boolean, got '" + *v + "'");
}

std::string Manifest::get_or(const std::string& key,
                             const std::string& fallback) const {
  const auto v = get(key);
  return v ? *v : fallback;
}

std::vector<double> Manifest::get_list(const std::string& key) const {
  const std::string& s = require(key);
  std::vector<double> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ManifestError("key '" + key + "': bad list item '" + item + "'");
    }
  }
  if (out.empty()) throw ManifestError("key '" + key + "': empty list");
  return out;
}

void Manifest::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.push_back({key, value});
}

void Manifest::set_double(const std::string& key, double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  set(key, buf);
}

std::string Manifest::serialize() const {
  std::ostringstream out;
  for (const auto& [k, v] : entries_) out << k << " = " << v << '\n';
  return out.str();
}

namespace {

const char* kPoissonSmoke = R"(
# 1D linear Poisson smoke test: u'' = 2, u = x^2 + 0.01
equation.alpha = 0
equation.beta = 0
equation.epsilon = 0.005
equation.c0 = 0.5
equation.forcing.kind = constant
equation.forcing.value = 2
grid.dim = 1
grid.lo = 0
grid.hi = 1
grid.n = 129
solve.mode = dirichlet
solve.boundary.kind = radial
solve.boundary.center_x = 0
solve.boundary.coeff = 1
solve.boundary.exponent = 2
solve.boundary.offset = 0.01
analysis.oracle = true
analysis.oracle.tol = 0.01
analysis.oracle.exclude = 0
output.dir = out/poisson-smoke
)";

const char* kOracleMsse = R"(
# symmetric minimal surface case alpha = beta = 1, gamma = 1
# epsilon is kept at grid scale: far below h the singular coefficient
# destabilizes the cone tip and a spurious dead core spreads
equation.alpha = 1
equation.beta = 1
equation.epsilon = 0.05
equation.c0 = 0.5
equation.forcing.kind = constant
equation.forcing.value = 1
grid.dim = 2
grid.lo = -1
grid.hi = 1
grid.n = 129
solve.mode = dirichlet
solve.boundary.kind = radial
solve.boundary.coeff = 1
analysis.oracle = true
analysis.oracle.tol = 0.05
analysis.oracle.exclude = 0.1
analysis.growth = true
analysis.threshold = 0.01
# the vertex node has vanishing discrete capacity; the resulting
# logarithmic lift depresses ball-sup slopes below the ideal 1
analysis.radii = 0.6,0.5,0.4,0.3
analysis.slope_tol = 0.15
output.dir = out/oracle-msse
)";

const char* kOracleMems = R"(
# MEMS-type touchdown, alpha = 2, beta = 0, gamma = 2/3: lowering the
# boundary data makes the membrane snap to a large zero set
equation.alpha = 2
equation.beta = 0
equation.epsilon = 0.05
equation.c0 = 0.4
equation.forcing.kind = constant
equation.forcing.value = 0.44444444444444444
grid.dim = 2
grid.lo = -1
grid.hi = 1
grid.n = 97
solve.mode = continuation
solve.boundary.kind = radial
solve.boundary.coeff = 1
solve.levels = 1.0,0.75
analysis.positivity = true
analysis.threshold = 0.005
analysis.distance_bound = true
analysis.distance_bound.C = 10
output.dir = out/oracle-mems
)";

const char* kLimitChain = R"(
# decreasing boundary data: free boundary appears at the lowest level
equation.alpha = 1
equation.beta = 1
equation.epsilon = 0.02
equation.c0 = 0.5
equation.forcing.kind = constant
equation.forcing.value = 1
grid.dim = 2
grid.lo = -1
grid.hi = 1
grid.n = 97
solve.mode = continuation
solve.levels = 1.0,0.6,0.35,0.2
solve.tol = 1e-10
analysis.positivity = true
analysis.distance_bound = true
analysis.distance_bound.C = 10
output.dir = out/limit-chain
)";

const char* kUniversalityFamily = R"(
# four solves with inf u pinned by the positivity floor
equation.alpha = 1
equation.beta = 1
equation.epsilon = 0.00001
equation.c0 = 0.5
equation.forcing.kind = constant
equation.forcing.value = 1
grid.dim = 2
grid.lo = -1
grid.hi = 1
grid.n = 129
solve.mode = family
solve.boundary.kind = constant
solve.boundary.level = 1
family.floors = 0.1,0.01,0.001,0.0001
analysis.modulus = true
analysis.margin = 0.25
analysis.band_factor = 3
analysis.spearman_tol = 0.5
output.dir = out/universality-family
)";

}  // namespace

Manifest preset_manifest(const std::string& name) {
  if (name == "poisson-smoke") return Manifest::parse(kPoissonSmoke, name);
  if (name == "oracle-msse") return Manifest::parse(kOracleMsse, name);
  if (name == "oracle-mems") return Manifest::parse(kOracleMems, name);
  if (name == "limit-chain") return Manifest::parse(kLimitChain, name);
  if (name == "universality-family")
    return Manifest::parse(kUniversalityFamily, name);
  throw ManifestError("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() {
  return {"poisson-smoke", "oracle-msse", "oracle-mems", "limit-chain",
          "universality-family"};
}

}  // namespace sel
