#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sel/freeboundary.hpp"
#include "sel/grid.hpp"
#include "sel/params.hpp"

namespace sel {

struct ExponentFit {
  Point center{0.0, 0.0};
  std::vector<double> radii;       // strictly decreasing, >= 2h
  std::vector<double> sup_values;  // > 0
  double slope = 0.0;              // least squares in log-log
  double intercept = 0.0;
  double max_abs_residual = 0.0;
  double target_gamma = 0.0;
};

/// Log-log least-squares fit of sup_{B_r(center)} u against r. Radii
/// under 2h or with nonpositive sup are dropped; at least 3 must survive.
/// `center` must be an interface node of `pset`.
ExponentFit growth_exponent(const ScalarField& u, const PositivitySet& pset,
                            std::size_t center, const std::vector<double>& radii,
                            const ProblemParams& params);

struct DyadicRow {
  int k = 0;
  double radius = 0.0;
  double sup = 0.0;
  double ratio = 0.0;  // sup / radius^gamma
};

struct DyadicTable {
  std::vector<DyadicRow> rows;
  double max_ratio = 0.0;
  double min_ratio = 0.0;
  double spread() const { return min_ratio > 0.0 ? max_ratio / min_ratio : 0.0; }
};

DyadicTable dyadic_growth_table(const ScalarField& u, const Point& center,
                                int k_max, double gamma, double base = 4.0);

struct NondegeneracyReport {
  std::vector<double> radii;
  std::vector<double> ratios;  // sup / r^gamma
  double min_ratio = 0.0;
};

/// Reported, never asserted: applies to minimal (Perron-limit) solutions.
NondegeneracyReport nondegeneracy_check(const ScalarField& u,
                                        const PositivitySet& pset,
                                        std::size_t center,
                                        const std::vector<double>& radii,
                                        const ProblemParams& params);

struct ModulusCurve {
  std::vector<double> t_bins;   // increasing separations
  std::vector<double> modulus;  // cumulative max oscillation per bin
  double field_inf = 0.0;
};

/// Empirical modulus over the margin-shrunk box: exhaustive pairs in 1D,
/// 100k deterministic pairs (seeded from grid shape) in 2D.
ModulusCurve modulus_estimate(const ScalarField& u,
                              const std::vector<double>& t_bins,
                              double margin);

/// Modulus built from samples of a strictly decreasing Omega(delta):
/// Xi(delta) = Omega(delta)/delta, varpi(t) = Xi^{-1}(1/t), inverted
/// piecewise-linearly in log-log on the sampled range.
struct ModulusTable {
  std::vector<double> t;       // increasing
  std::vector<double> varpi;   // nondecreasing
  double eval(double t_query) const;
};

ModulusTable modulus_from_omega(
    const std::vector<std::pair<double, double>>& omega_samples);

struct DoublingProbeResult {
  double L = 0.0;
  double kappa = 0.0;
  double delta = 0.0;
  double zoom = 1.0;
  double sup_value = 0.0;
  Point arg_x{0.0, 0.0};
  Point arg_y{0.0, 0.0};
  bool pass = false;  // sup_value <= delta
};

/// Doubling functional sup over node pairs of
///   v(zoom X) - v(zoom Y) - L w(|X-Y|) - kappa (|X|^2 + |Y|^2)
/// with w(z) = z - z^{3/2}/(10 sqrt(d)) capped at 9d/10. Pass kappa < 0
/// for the automatic choice 8||v||_inf / d^2. Pairs are exhaustive over a
/// stride-decimated node set (at most ~4096 nodes).
DoublingProbeResult doubling_probe(const ScalarField& v, double d, double L,
                                   double kappa, double delta, double zoom);

/// Ladder search over L in {2^j}_0..16, zoom in {2^-j}_0..8; returns the
/// first pair achieving sup <= delta, scanning small L and mild zoom first.
std::optional<DoublingProbeResult> doubling_ladder_search(const ScalarField& v,
                                                          double d,
                                                          double delta);

/// Truth of: inf_{B_{1/2}(center)} u <= eta  =>  sup_{B_{1/4}(center)} u
/// <= theta. Requires ||u||_inf <= 1 and forcing sup <= eta^{1+a+b}.
bool flatness_check(const ScalarField& u, const ProblemParams& params,
                    const Point& center, double theta, double eta);

/// Geometric eta-sweep from 1/4 downward; at each eta the field is zoomed
/// about every center by rho(eta) = eta^{1/gamma} ||f||^{-1/(2+beta)} and
/// the implication checked on the zoomed field. Returns the first eta
/// that holds at all centers, or 0 when the sweep exhausts.
double flatness_eta_sweep(const ScalarField& u, const ProblemParams& params,
                          const std::vector<Point>& centers, double theta,
                          double eta_min = 1e-6);

/// sup/inf over nodes of the closed ball; throws on nonpositive values.
double harnack_quotient(const ScalarField& u, const Point& center, double r);

/// Max over in-ball node pairs of |u(X)-u(Y)| / |X-Y|^exponent.
double holder_seminorm(const ScalarField& u, const Point& center,
                       double radius, double exponent);

/// Spearman rank correlation (average-rank ties).
double spearman(const std::vector<double>& a, const std::vector<double>& b);

void write_modulus_csv(const ModulusCurve& c, const std::string& path);
void write_dyadic_csv(const DyadicTable& t, const std::string& path);

}  // namespace sel
