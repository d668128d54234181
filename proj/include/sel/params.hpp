#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sel {

/// Sharp growth exponent gamma = (2+beta)/(1+beta+alpha).
inline double gamma_exponent(double alpha, double beta) {
  if (!(beta >= 0.0))
    throw std::domain_error("gamma_exponent: beta must be >= 0");
  if (!(alpha > -(1.0 + beta)))
    throw std::domain_error("gamma_exponent: alpha must exceed -(1+beta)");
  return (2.0 + beta) / (1.0 + beta + alpha);
}

/// Continuous cut-off: s^phi for s >= eps, frozen at eps^phi below.
inline double zeta_cutoff(double s, double phi, double eps) {
  if (!(s >= 0.0)) throw std::domain_error("zeta_cutoff: s must be >= 0");
  if (!(eps > 0.0)) throw std::domain_error("zeta_cutoff: eps must be > 0");
  return std::pow(std::max(s, eps), phi);
}

/// Checks t^phi / zeta(t) <= 1 on the samples (0/positive counts as 0).
/// The printed inequality t^{-phi} * zeta(t) <= C fails as t -> 0 for
/// phi > 0; this is the orientation the cut-off actually satisfies.
inline bool cutoff_bound_check(double phi, double eps,
                               std::span<const double> samples) {
  if (!(phi > 0.0))
    throw std::domain_error("cutoff_bound_check: phi must be > 0");
  for (double t : samples) {
    const double denom = zeta_cutoff(t, phi, eps);
    const double num = std::pow(t, phi);
    const double ratio = (num == 0.0) ? 0.0 : num / denom;
    if (!(ratio <= 1.0 + 1e-12)) return false;
  }
  return true;
}

/// Fixed smooth bump on [0,1]: 16 s^2 (1-s)^2, max value 1 at s = 1/2.
inline double bump_profile(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  const double t = s * (1.0 - s);
  return 16.0 * t * t;
}

/// High energy activation forcing (1/eps_a) * bump(u/eps_a).
inline double hea_forcing(double u, double eps_a) {
  if (!(u >= 0.0)) throw std::domain_error("hea_forcing: u must be >= 0");
  if (!(eps_a > 0.0))
    throw std::domain_error("hea_forcing: eps_a must be > 0");
  return bump_profile(u / eps_a) / eps_a;
}

/// Right-hand side specification. Tables are nodal values on the run's
/// grid, looked up by flat node index (nearest-node semantics).
struct ForcingSpec {
  enum class Kind { Constant, Table, Hea };

  Kind kind = Kind::Constant;
  double value = 1.0;              // Constant
  std::vector<double> table;       // Table, one entry per node
  double eps_a = 1.0;              // Hea

  static ForcingSpec constant(double c) {
    ForcingSpec f;
    f.kind = Kind::Constant;
    f.value = c;
    return f;
  }
  static ForcingSpec sampled(std::vector<double> values) {
    ForcingSpec f;
    f.kind = Kind::Table;
    f.table = std::move(values);
    return f;
  }
  static ForcingSpec hea(double eps_a) {
    ForcingSpec f;
    f.kind = Kind::Hea;
    f.eps_a = eps_a;
    return f;
  }

  /// Forcing value at a node; `u` matters only for the activation kind.
  double eval(std::size_t node, double u) const {
    switch (kind) {
      case Kind::Constant: return value;
      case Kind::Table:
        if (node >= table.size())
          throw std::out_of_range("ForcingSpec: node outside table");
        return table[node];
      case Kind::Hea: return hea_forcing(std::max(u, 0.0), eps_a);
    }
    throw std::logic_error("ForcingSpec: bad kind");
  }

  double sup() const {
    switch (kind) {
      case Kind::Constant: return std::abs(value);
      case Kind::Table: {
        double m = 0.0;
        for (double v : table) m = std::max(m, std::abs(v));
        return m;
      }
      case Kind::Hea: return 1.0 / eps_a;  // bump max is 1
    }
    throw std::logic_error("ForcingSpec: bad kind");
  }
};

/// The equation's identity card: exponents, regularization level and
/// forcing bounds.
struct ProblemParams {
  double alpha = 0.0;
  double beta = 0.0;
  double epsilon = 0.0;
  double c0 = 1.0;
  ForcingSpec forcing = ForcingSpec::constant(1.0);

  double gamma() const { return gamma_exponent(alpha, beta); }

  /// epsilon = 0 is only admissible when the field is bounded below by a
  /// positive constant; callers assert that separately.
  void validate() const {
    if (!(beta >= 0.0))
      throw std::invalid_argument("ProblemParams: beta must be >= 0");
    if (!(alpha > -(1.0 + beta)))
      throw std::invalid_argument("ProblemParams: alpha <= -(1+beta)");
    if (!(epsilon >= 0.0))
      throw std::invalid_argument("ProblemParams: epsilon must be >= 0");
    if (!(c0 > 0.0 && c0 <= 1.0))
      throw std::invalid_argument("ProblemParams: c0 must lie in (0,1]");
    if (forcing.kind == ForcingSpec::Kind::Constant) {
      if (forcing.value < c0 - 1e-12 || forcing.value > 1.0 / c0 + 1e-12)
        throw std::invalid_argument(
            "ProblemParams: constant forcing outside [c0, 1/c0]");
    }
    if (forcing.kind == ForcingSpec::Kind::Hea && !(forcing.eps_a > 0.0))
      throw std::invalid_argument("ProblemParams: hea eps_a must be > 0");
  }
};

}  // namespace sel
