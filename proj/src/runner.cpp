#include "sel/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "sel/analysis.hpp"
#include "sel/freeboundary.hpp"
#include "sel/grid.hpp"
#include "sel/oracle.hpp"
#include "sel/params.hpp"
#include "sel/solver.hpp"

namespace sel {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

void atomic_write(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
  }
  fs::rename(tmp, path);
}

void write_json(const fs::path& path, const json& j) {
  atomic_write(path, j.dump(2) + "\n");
}

// CSV writers stream directly; route them through a temp name so every
// artifact lands via rename.
template <class W>
void atomic_csv(const fs::path& path, W&& writer) {
  const fs::path tmp = path.string() + ".tmp";
  writer(tmp.string());
  fs::rename(tmp, path);
}

struct Config {
  Manifest resolved;
  ProblemParams params;
  Grid grid;
  SolverOptions opts;
  std::string mode;
  BoundaryFn boundary;
  Point bcenter{0.0, 0.0};  // radial boundary center (analysis default)
  bool radial_boundary = false;
  std::vector<double> levels, eps_schedule, floors;
  std::string outdir;
};

Config resolve(const Manifest& m) {
  Config c;
  Manifest r = m;

  c.params.alpha = r.get_double("equation.alpha");
  c.params.beta = r.get_double("equation.beta");
  c.params.epsilon = r.get_double_or("equation.epsilon", 0.001);
  c.params.c0 = r.get_double_or("equation.c0", 0.5);
  const std::string fkind = r.get_or("equation.forcing.kind", "constant");
  if (fkind == "constant") {
    c.params.forcing = ForcingSpec::constant(
        r.get_double_or("equation.forcing.value", 1.0));
  } else if (fkind == "hea") {
    c.params.forcing = ForcingSpec::hea(r.get_double("equation.forcing.eps_a"));
  } else {
    throw ManifestError("equation.forcing.kind: unknown kind '" + fkind + "'");
  }
  try {
    c.params.validate();
  } catch (const std::invalid_argument& e) {
    throw ManifestError(std::string("equation block: ") + e.what());
  }
  r.set_double("equation.alpha", c.params.alpha);
  r.set_double("equation.beta", c.params.beta);
  r.set_double("equation.epsilon", c.params.epsilon);
  r.set_double("equation.c0", c.params.c0);
  r.set("equation.forcing.kind", fkind);
  if (fkind == "constant")
    r.set_double("equation.forcing.value", c.params.forcing.value);

  const long dim = r.get_long_or("grid.dim", 2);
  const double lo = r.get_double_or("grid.lo", -1.0);
  const double hi = r.get_double_or("grid.hi", 1.0);
  const long n = r.get_long_or("grid.n", 129);
  try {
    c.grid = dim == 1 ? Grid::line(lo, hi, static_cast<int>(n))
                      : Grid::square(lo, hi, static_cast<int>(n));
  } catch (const std::invalid_argument& e) {
    throw ManifestError(std::string("grid block: ") + e.what());
  }
  if (dim != 1 && dim != 2) throw ManifestError("grid.dim: must be 1 or 2");
  r.set("grid.dim", std::to_string(dim));
  r.set_double("grid.lo", lo);
  r.set_double("grid.hi", hi);
  r.set("grid.n", std::to_string(n));

  c.mode = r.get_or("solve.mode", "dirichlet");
  if (c.mode != "dirichlet" && c.mode != "continuation" && c.mode != "limit" &&
      c.mode != "family")
    throw ManifestError("solve.mode: unknown mode '" + c.mode + "'");
  r.set("solve.mode", c.mode);

  c.opts.tol = r.get_double_or("solve.tol",
                               std::numeric_limits<double>::quiet_NaN());
  c.opts.tol = c.opts.resolved_tol(c.params, c.grid.h);
  c.opts.max_iters = r.get_long_or("solve.max_iters", c.opts.max_iters);
  c.opts.relax = r.get_double_or("solve.relax", c.opts.relax);
  c.opts.floor = r.get_double_or("solve.floor", c.opts.floor);
  c.opts.check_every =
      static_cast<int>(r.get_long_or("solve.check_every", 4));
  r.set_double("solve.tol", c.opts.tol);
  r.set("solve.max_iters", std::to_string(c.opts.max_iters));
  r.set_double("solve.relax", c.opts.relax);
  r.set_double("solve.floor", c.opts.floor);
  r.set("solve.check_every", std::to_string(c.opts.check_every));

  const std::string bkind = r.get_or("solve.boundary.kind", "constant");
  const double mid0 = 0.5 * (c.grid.lo[0] + c.grid.hi[0]);
  const double mid1 = 0.5 * (c.grid.lo[1] + c.grid.hi[1]);
  if (bkind == "constant") {
    const double level = r.get_double_or("solve.boundary.level", 1.0);
    c.boundary = [level](const Point&) { return level; };
    c.bcenter = {mid0, mid1};
    r.set_double("solve.boundary.level", level);
  } else if (bkind == "radial") {
    const double cx = r.get_double_or("solve.boundary.center_x", mid0);
    const double cy = r.get_double_or("solve.boundary.center_y", mid1);
    const double coeff = r.get_double_or("solve.boundary.coeff", 1.0);
    const double expo =
        r.get_double_or("solve.boundary.exponent", c.params.gamma());
    const double offset = r.get_double_or("solve.boundary.offset", 0.0);
    const int gdim = c.grid.dim;
    c.boundary = [=](const Point& p) {
      return offset + coeff * std::pow(distance(p, {cx, cy}, gdim), expo);
    };
    c.bcenter = {cx, cy};
    c.radial_boundary = true;
    r.set_double("solve.boundary.center_x", cx);
    r.set_double("solve.boundary.center_y", cy);
    r.set_double("solve.boundary.coeff", coeff);
    r.set_double("solve.boundary.exponent", expo);
    r.set_double("solve.boundary.offset", offset);
  } else {
    throw ManifestError("solve.boundary.kind: unknown kind '" + bkind + "'");
  }
  r.set("solve.boundary.kind", bkind);

  if (c.mode == "continuation") c.levels = r.get_list("solve.levels");
  if (c.mode == "limit") c.eps_schedule = r.get_list("solve.eps_schedule");
  if (c.mode == "family") c.floors = r.get_list("family.floors");

  c.outdir = r.get_or("output.dir", "out/run");
  r.set("output.dir", c.outdir);

  c.resolved = std::move(r);
  return c;
}

json report_to_json(const SolveReport& rep) {
  json j;
  j["iterations"] = rep.iterations;
  j["final_residual"] = rep.final_residual;
  j["max_principle_ok"] = rep.max_principle_ok;
  j["inf_attained"] = rep.inf_attained;
  j["wall_time_s"] = rep.wall_time_s;
  j["contact_nodes"] = rep.contact_nodes;
  return j;
}

json manifest_to_json(const Manifest& m) {
  json j = json::object();
  for (const auto& [k, v] : m.entries()) j[k] = v;
  return j;
}

std::vector<double> default_bins(const Grid& g) {
  const double lo = 2.0 * g.h;
  const double hi =
      (g.hi[0] - g.lo[0]) * (g.dim == 2 ? std::sqrt(2.0) : 1.0);
  const int nb = 24;
  std::vector<double> bins(nb);
  for (int i = 0; i < nb; ++i)
    bins[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (nb - 1));
  return bins;
}

std::size_t pick_center(const PositivitySet& pset, const Grid& g,
                        const Point& target) {
  if (pset.interface_nodes.empty())
    throw std::invalid_argument(
        "growth analysis: the positivity interface is empty");
  std::size_t best = pset.interface_nodes.front();
  double bd = std::numeric_limits<double>::infinity();
  for (std::size_t k : pset.interface_nodes) {
    const double d = distance(g.node(k), target, g.dim);
    if (d < bd) {
      bd = d;
      best = k;
    }
  }
  return best;
}

// Checks are recomputed from the stored artifact numbers so that
// `report <dir>` is an honest regeneration, not a cache read.
json build_checks(const Manifest& m, const std::map<std::string, json>& art) {
  json checks = json::object();
  auto get = [&](const std::string& name) -> const json* {
    auto it = art.find(name);
    return it == art.end() ? nullptr : &it->second;
  };

  if (const json* rep = get("report.json")) {
    json c;
    c["max_principle_ok"] = (*rep)["max_principle_ok"];
    c["final_residual"] = (*rep)["final_residual"];
    c["pass"] = (*rep)["max_principle_ok"].get<bool>();
    checks["solver"] = c;
  }
  if (const json* o = get("oracle.json")) {
    json c = *o;
    c["pass"] = c["rel_err"].get<double>() <= c["tol"].get<double>();
    checks["oracle"] = c;
  }
  if (const json* e = get("exponent.json")) {
    json c;
    c["slope"] = (*e)["slope"];
    c["target"] = (*e)["target"];
    c["tol"] = (*e)["tol"];
    c["pass"] = std::abs((*e)["slope"].get<double>() -
                         (*e)["target"].get<double>()) <=
                (*e)["tol"].get<double>();
    checks["growth_slope"] = c;
  }
  if (const json* d = get("dyadic.json")) {
    json c;
    c["spread"] = (*d)["spread"];
    c["tol"] = (*d)["tol"];
    c["pass"] = (*d)["spread"].get<double>() <= (*d)["tol"].get<double>();
    checks["dyadic_spread"] = c;
  }
  if (const json* p = get("positivity.json")) {
    json c;
    c["fb_count"] = (*p)["fb_count"];
    c["zero_count"] = (*p)["zero_count"];
    c["pass"] = (*p)["fb_count"].get<long>() > 0;
    checks["free_boundary"] = c;
  }
  if (const json* d = get("distance_bound.json")) {
    json c = *d;
    checks["distance_bound"] = c;
  }
  if (const json* ch = get("chain.json")) {
    json c;
    c["max_monotonicity_violation"] = (*ch)["max_monotonicity_violation"];
    c["tol"] = (*ch)["tol"];
    c["pass"] = (*ch)["max_monotonicity_violation"].get<double>() <=
                (*ch)["tol"].get<double>();
    checks["continuation_monotone"] = c;
  }
  if (const json* l = get("limit.json")) {
    json c;
    c["cauchy_gap"] = (*l)["cauchy_gap"];
    c["divergence_warning"] = (*l)["divergence_warning"];
    c["pass"] = !(*l)["divergence_warning"].get<bool>();
    checks["limit_cauchy"] = c;
  }
  if (const json* f = get("family.json")) {
    json cb;
    cb["band"] = (*f)["band"];
    cb["band_limit"] = (*f)["band_limit"];
    cb["pass"] =
        (*f)["band"].get<double>() <= (*f)["band_limit"].get<double>();
    checks["modulus_band"] = cb;
    json cs;
    cs["spearman"] = (*f)["spearman"];
    cs["tol"] = (*f)["spearman_tol"];
    cs["pass"] = std::abs((*f)["spearman"].get<double>()) <=
                 (*f)["spearman_tol"].get<double>();
    checks["modulus_spearman"] = cs;
  }
  (void)m;
  return checks;
}

json build_summary(const Manifest& m, const std::string& mode,
                   const std::map<std::string, json>& art) {
  json summary;
  summary["mode"] = mode;
  summary["manifest"] = manifest_to_json(m);
  json checks = build_checks(m, art);
  summary["checks"] = checks;
  bool pass = true;
  for (const auto& [name, c] : checks.items())
    if (c.contains("pass") && !c["pass"].get<bool>()) pass = false;
  summary["pass"] = pass;
  return summary;
}

void run_analyses(const Config& cfg, const ScalarField& u,
                  const fs::path& dir, std::map<std::string, json>& art) {
  const Manifest& m = cfg.resolved;
  const Grid& g = cfg.grid;

  if (m.get_bool_or("analysis.oracle", false)) {
    const double coeff = m.get_double_or("solve.boundary.coeff", 1.0);
    const double expo =
        m.get_double_or("solve.boundary.exponent", cfg.params.gamma());
    const double offset = m.get_double_or("solve.boundary.offset", 0.0);
    const double exclude = m.get_double_or("analysis.oracle.exclude", 0.0);
    const double tol = m.get_double_or("analysis.oracle.tol", 0.05);
    double sup_expected = 0.0, err = 0.0;
    for (std::size_t k = 0; k < u.values.size(); ++k) {
      const double r = distance(g.node(k), cfg.bcenter, g.dim);
      const double e = offset + coeff * std::pow(r, expo);
      sup_expected = std::max(sup_expected, std::abs(e));
      if (r >= exclude) err = std::max(err, std::abs(u[k] - e));
    }
    json j;
    j["rel_err"] = sup_expected > 0.0 ? err / sup_expected : err;
    j["tol"] = tol;
    j["exclude"] = exclude;
    art["oracle.json"] = j;
  }

  const bool want_positivity = m.get_bool_or("analysis.positivity", false);
  const bool want_growth = m.get_bool_or("analysis.growth", false);
  const bool want_dyadic = m.get_bool_or("analysis.dyadic", false);
  const bool want_distance = m.get_bool_or("analysis.distance_bound", false);

  PositivitySet pset;
  bool have_pset = false;
  if (want_positivity || want_growth || want_dyadic || want_distance) {
    const double thr =
        m.get_double_or("analysis.threshold", cfg.params.epsilon);
    pset = extract_positivity_set(u, thr);
    have_pset = true;
    if (want_positivity) {
      atomic_csv(dir / "positivity.csv", [&](const std::string& p) {
        write_positivity_csv(pset, g, p);
      });
      json j;
      j["threshold"] = thr;
      j["positive_count"] = static_cast<long>(pset.positive_nodes.size());
      j["fb_count"] = static_cast<long>(pset.boundary_nodes.size());
      j["zero_count"] = static_cast<long>(pset.zero_nodes.size());
      art["positivity.json"] = j;
    }
  }

  Point target = cfg.bcenter;
  target[0] = m.get_double_or("analysis.center_x", target[0]);
  target[1] = m.get_double_or("analysis.center_y", target[1]);

  if (want_growth) {
    const std::size_t ck = pick_center(pset, g, target);
    std::vector<double> radii = {0.25, 0.125, 0.0625, 0.03125};
    if (m.has("analysis.radii")) radii = m.get_list("analysis.radii");
    const ExponentFit fit =
        growth_exponent(u, pset, ck, radii, cfg.params);
    json j;
    j["slope"] = fit.slope;
    j["target"] = fit.target_gamma;
    j["tol"] = m.get_double_or("analysis.slope_tol", 0.05);
    j["intercept"] = fit.intercept;
    j["max_abs_residual"] = fit.max_abs_residual;
    j["center"] = {fit.center[0], fit.center[1]};
    j["radii"] = fit.radii;
    j["sup_values"] = fit.sup_values;
    art["exponent.json"] = j;
  }

  if (want_dyadic) {
    const int kmax = static_cast<int>(m.get_long_or("analysis.dyadic.kmax", 4));
    const double base = m.get_double_or("analysis.dyadic.base", 4.0);
    Point cp = target;
    if (have_pset && !pset.interface_nodes.empty())
      cp = g.node(pick_center(pset, g, target));
    const DyadicTable t =
        dyadic_growth_table(u, cp, kmax, cfg.params.gamma(), base);
    atomic_csv(dir / "dyadic.csv",
               [&](const std::string& p) { write_dyadic_csv(t, p); });
    json j;
    j["spread"] = t.spread();
    j["tol"] = m.get_double_or("analysis.dyadic.spread_tol", 1.5);
    j["max_ratio"] = t.max_ratio;
    j["min_ratio"] = t.min_ratio;
    art["dyadic.json"] = j;
  }

  if (want_distance) {
    const double C = m.get_double_or("analysis.distance_bound.C", 10.0);
    json j;
    if (pset.zero_nodes.empty()) {
      j["worst_ratio"] = 0.0;
      j["C"] = C;
      j["nodes_checked"] = 0;
      j["pass"] = true;  // vacuous: no zero set to measure against
    } else {
      const DistanceBoundReport rep =
          distance_bound_check(u, pset, cfg.params, C);
      j["worst_ratio"] = rep.worst_ratio;
      j["C"] = C;
      j["nodes_checked"] = static_cast<long>(rep.nodes_checked);
      j["pass"] = rep.pass;
    }
    art["distance_bound.json"] = j;
  }

  if (m.get_bool_or("analysis.modulus", false) && cfg.mode != "family") {
    const double margin = m.get_double_or("analysis.margin", 0.25);
    const ModulusCurve c = modulus_estimate(u, default_bins(g), margin);
    atomic_csv(dir / "modulus.csv",
               [&](const std::string& p) { write_modulus_csv(c, p); });
  }
}

void run_family(const Config& cfg, const fs::path& dir,
                std::map<std::string, json>& art) {
  const Manifest& m = cfg.resolved;
  const std::vector<double> bins = default_bins(cfg.grid);
  const double margin = m.get_double_or("analysis.margin", 0.25);

  std::vector<ModulusCurve> curves;
  std::vector<double> infs;
  bool all_mp = true;
  SolveReport last;
  for (std::size_t i = 0; i < cfg.floors.size(); ++i) {
    SolverOptions o = cfg.opts;
    o.floor = cfg.floors[i];
    auto [u, rep] = solve_dirichlet(cfg.grid, cfg.params, cfg.boundary, o);
    const std::string tag = "_f" + std::to_string(i);
    atomic_csv(dir / ("field" + tag + ".csv"),
               [&](const std::string& p) { write_field_csv(u, p); });
    write_json(dir / ("report" + tag + ".json"), report_to_json(rep));
    const ModulusCurve c = modulus_estimate(u, bins, margin);
    atomic_csv(dir / ("modulus" + tag + ".csv"),
               [&](const std::string& p) { write_modulus_csv(c, p); });
    curves.push_back(c);
    infs.push_back(rep.inf_attained);
    all_mp = all_mp && rep.max_principle_ok;
    last = rep;
  }
  art["report.json"] = report_to_json(last);
  art["report.json"]["max_principle_ok"] = all_mp;
  write_json(dir / "report.json", art["report.json"]);

  // band: pointwise envelope width over the bins; deviation: per-curve
  // sup distance from the family mean curve.
  const std::size_t nb = bins.size();
  double band = 0.0;
  std::vector<double> devs(curves.size(), 0.0);
  for (std::size_t t = 0; t < nb; ++t) {
    double mn = curves[0].modulus[t], mx = mn, mean = 0.0;
    for (const auto& c : curves) {
      mn = std::min(mn, c.modulus[t]);
      mx = std::max(mx, c.modulus[t]);
      mean += c.modulus[t];
    }
    mean /= static_cast<double>(curves.size());
    band = std::max(band, mx - mn);
    for (std::size_t i = 0; i < curves.size(); ++i)
      devs[i] = std::max(devs[i], std::abs(curves[i].modulus[t] - mean));
  }
  const double band_factor = m.get_double_or("analysis.band_factor", 3.0);
  json j;
  j["floors"] = cfg.floors;
  j["inf_attained"] = infs;
  j["band"] = band;
  j["band_limit"] = band_factor * std::sqrt(cfg.grid.h);
  j["deviations"] = devs;
  j["spearman"] = spearman(infs, devs);
  j["spearman_tol"] = m.get_double_or("analysis.spearman_tol", 0.5);
  art["family.json"] = j;
}

const char* const kJsonArtifacts[] = {
    "report.json",  "oracle.json",         "exponent.json", "dyadic.json",
    "positivity.json", "distance_bound.json", "chain.json",    "limit.json",
    "family.json"};

}  // namespace

RunOutcome run_manifest(const Manifest& m, const std::string& outdir_override) {
  RunOutcome out;
  Config cfg;
  try {
    cfg = resolve(m);
  } catch (const ManifestError& e) {
    out.exit_code = 2;
    out.error = e.what();
    return out;
  }
  if (!outdir_override.empty()) {
    cfg.outdir = outdir_override;
    cfg.resolved.set("output.dir", cfg.outdir);
  }
  out.outdir = cfg.outdir;
  const fs::path dir(cfg.outdir);

  try {
    fs::create_directories(dir);
    std::map<std::string, json> art;
    ScalarField u;

    if (cfg.mode == "dirichlet") {
      // initial guess: the boundary formula extended into the interior;
      // much closer to the solution than a flat start for radial data
      const ScalarField init = ScalarField::sample(cfg.grid, cfg.boundary);
      auto [field, rep] =
          solve_dirichlet(cfg.grid, cfg.params, cfg.boundary, cfg.opts, &init);
      u = std::move(field);
      art["report.json"] = report_to_json(rep);
    } else if (cfg.mode == "continuation") {
      const auto steps = continuation_in_boundary(
          cfg.grid, cfg.params, cfg.levels, cfg.opts, cfg.boundary);
      double max_viol = 0.0;
      json jlevels = json::array();
      for (std::size_t i = 0; i < steps.size(); ++i) {
        const std::string tag = "_step" + std::to_string(i);
        atomic_csv(dir / ("field" + tag + ".csv"), [&](const std::string& p) {
          write_field_csv(steps[i].field, p);
        });
        write_json(dir / ("report" + tag + ".json"),
                   report_to_json(steps[i].report));
        max_viol = std::max(max_viol, steps[i].monotonicity_violation);
        json row;
        row["level"] = steps[i].level;
        row["monotonicity_violation"] = steps[i].monotonicity_violation;
        jlevels.push_back(row);
      }
      json jc;
      jc["steps"] = jlevels;
      jc["max_monotonicity_violation"] = max_viol;
      jc["tol"] = cfg.resolved.get_double_or("analysis.monotone_tol", 1e-6);
      art["chain.json"] = jc;
      u = steps.back().field;
      art["report.json"] = report_to_json(steps.back().report);
    } else if (cfg.mode == "limit") {
      const LimitingSolution sol = limit_in_epsilon(
          cfg.grid, cfg.params, cfg.eps_schedule, cfg.boundary, cfg.opts);
      json jl;
      json hist = json::array();
      for (const auto& [eps, gap] : sol.history) {
        json row;
        row["epsilon"] = eps;
        row["gap"] = gap;
        hist.push_back(row);
      }
      jl["history"] = hist;
      jl["cauchy_gap"] = sol.cauchy_gap;
      jl["divergence_warning"] = sol.divergence_warning;
      art["limit.json"] = jl;
      u = sol.field;
      art["report.json"] = report_to_json(sol.reports.back());
    } else {  // family
      run_family(cfg, dir, art);
    }

    if (cfg.mode != "family") {
      atomic_csv(dir / "field.csv",
                 [&](const std::string& p) { write_field_csv(u, p); });
      write_json(dir / "report.json", art["report.json"]);
      run_analyses(cfg, u, dir, art);
    }

    for (const auto& [name, j] : art)
      if (name != "report.json") write_json(dir / name, j);

    atomic_write(dir / "manifest.resolved", cfg.resolved.serialize());
    write_json(dir / "summary.json",
               build_summary(cfg.resolved, cfg.mode, art));
    out.exit_code = 0;
  } catch (const SolverError& e) {
    out.exit_code = 3;
    out.error = e.what();
  } catch (const std::invalid_argument& e) {
    out.exit_code = 4;
    out.error = e.what();
  } catch (const std::domain_error& e) {
    out.exit_code = 4;
    out.error = e.what();
  } catch (const std::exception& e) {
    out.exit_code = 1;
    out.error = e.what();
  }
  return out;
}

RunOutcome sweep_manifest(const Manifest& tmpl, const std::string& axis,
                          const std::vector<double>& values,
                          const std::string& outdir_override) {
  RunOutcome out;
  if (values.empty()) {
    out.exit_code = 2;
    out.error = "sweep: empty value list";
    return out;
  }
  std::string base = outdir_override.empty()
                         ? tmpl.get_or("output.dir", "out/sweep")
                         : outdir_override;
  out.outdir = base;

  struct Job {
    double value = 0.0;
    std::string dir;
    RunOutcome res;
  };
  std::vector<Job> jobs(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", values[i]);
    jobs[i].value = values[i];
    jobs[i].dir = base + "/" + axis + "_" + buf;
  }

  long threads = 1;
  if (const char* env = std::getenv("SEL_LAB_THREADS"))
    threads = std::max(1L, std::atol(env));
  threads = std::min<long>(threads, static_cast<long>(jobs.size()));

  auto worker = [&](std::size_t begin) {
    for (std::size_t i = begin; i < jobs.size();
         i += static_cast<std::size_t>(threads)) {
      Manifest m = tmpl;
      m.set_double(axis, jobs[i].value);
      jobs[i].res = run_manifest(m, jobs[i].dir);
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::future<void>> futs;
    for (long t = 0; t < threads; ++t)
      futs.push_back(std::async(std::launch::async, worker,
                                static_cast<std::size_t>(t)));
    for (auto& f : futs) f.get();
  }

  try {
    fs::create_directories(base);
    json merged;
    merged["axis"] = axis;
    json runs = json::array();
    for (const Job& job : jobs) {
      json row;
      row["value"] = job.value;
      row["dir"] = job.dir;
      row["exit_code"] = job.res.exit_code;
      if (!job.res.error.empty()) row["error"] = job.res.error;
      const fs::path sp = fs::path(job.dir) / "summary.json";
      if (job.res.exit_code == 0 && fs::exists(sp)) {
        std::ifstream in(sp);
        json summary = json::parse(in);
        row["checks"] = summary["checks"];
        if (summary["checks"].contains("growth_slope")) {
          row["slope"] = summary["checks"]["growth_slope"]["slope"];
          row["target"] = summary["checks"]["growth_slope"]["target"];
        }
      }
      runs.push_back(row);
    }
    merged["runs"] = runs;
    write_json(fs::path(base) / "sweep.json", merged);
    out.exit_code = 0;
  } catch (const std::exception& e) {
    out.exit_code = 1;
    out.error = e.what();
  }
  return out;
}

int regenerate_report(const std::string& dir) {
  const fs::path d(dir);
  try {
    const Manifest m = Manifest::load((d / "manifest.resolved").string());
    std::map<std::string, json> art;
    for (const char* name : kJsonArtifacts) {
      const fs::path p = d / name;
      if (fs::exists(p)) {
        std::ifstream in(p);
        art[name] = json::parse(in);
      }
    }
    const std::string mode = m.get_or("solve.mode", "dirichlet");
    write_json(d / "summary.json", build_summary(m, mode, art));
    return 0;
  } catch (const ManifestError& e) {
    std::fprintf(stderr, "report: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "report: %s\n", e.what());
    return 1;
  }
}

double oracle_check(double alpha, double beta, int n, std::ostream& log) {
  const double g = gamma_exponent(alpha, beta);
  const double f = radial_profile_forcing(1.0, alpha, beta, 2);
  ProblemParams p;
  p.alpha = alpha;
  p.beta = beta;
  p.epsilon = 1e-6;
  p.c0 = f <= 1.0 ? f : 1.0 / f;
  p.forcing = ForcingSpec::constant(f);

  const Grid coarse = Grid::square(-1.0, 1.0, n);
  const Grid fine = Grid::square(-1.0, 1.0, 2 * (n - 1) + 1);
  const double exclude = 2.0 * coarse.h;  // fixed physical radius
  const ScalarField uc = radial_profile(coarse, 1.0, g);
  const ScalarField uf = radial_profile(fine, 1.0, g);
  const double rc = max_interior_residual(uc, p, {0.0, 0.0}, exclude);
  const double rf = max_interior_residual(uf, p, {0.0, 0.0}, exclude);
  const double factor = rf > 0.0 ? rc / rf : 0.0;
  log << "alpha=" << alpha << " beta=" << beta << " gamma=" << g
      << " forcing=" << f << "\n";
  log << "n=" << coarse.n << "  residual=" << rc << "\n";
  log << "n=" << fine.n << "  residual=" << rf << "\n";
  log << "decay factor=" << factor << "\n";
  return factor;
}

}  // namespace sel
