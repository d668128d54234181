#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "sel/manifest.hpp"

namespace sel {

struct RunOutcome {
  int exit_code = 0;     // 0 ok, 2 manifest, 3 solver, 4 analysis precondition
  std::string outdir;
  std::string error;
};

/// Execute a manifest: solve, analyses, artifacts, summary.json.
RunOutcome run_manifest(const Manifest& m,
                        const std::string& outdir_override = "");

/// One run per value of `axis`; per-run failures are recorded in the
/// merged sweep.json, not fatal. Parallelism capped by SEL_LAB_THREADS.
RunOutcome sweep_manifest(const Manifest& tmpl, const std::string& axis,
                          const std::vector<double>& values,
                          const std::string& outdir_override = "");

/// Rebuild summary.json in `dir` from the stored artifacts.
int regenerate_report(const std::string& dir);

/// Residual-decay study for the radial profile at (alpha, beta): grids n
/// and 2(n-1)+1, fixed exclusion radius. Returns the decay factor.
double oracle_check(double alpha, double beta, int n, std::ostream& log);

}  // namespace sel
