#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sel/manifest.hpp"
#include "sel/runner.hpp"

namespace {

// `run` and `sweep` accept either a manifest path or a preset name.
sel::Manifest load_manifest_arg(const std::string& arg) {
  for (const std::string& name : sel::preset_names())
    if (arg == name) return sel::preset_manifest(arg);
  return sel::Manifest::load(arg);
}

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stod(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sel-lab: singular elliptic equation laboratory"};
  app.require_subcommand(1);

  std::string run_manifest_arg, run_out;
  auto* run = app.add_subcommand("run", "execute a manifest or preset");
  run->add_option("manifest", run_manifest_arg,
                  "manifest file or preset name")->required();
  run->add_option("--out", run_out, "override output directory");

  std::string sweep_manifest_arg, sweep_axis, sweep_values, sweep_out;
  auto* sweep = app.add_subcommand("sweep", "run a manifest per axis value");
  sweep->add_option("manifest", sweep_manifest_arg,
                    "manifest file or preset name")->required();
  sweep->add_option("--axis", sweep_axis, "manifest key to vary")->required();
  sweep->add_option("--values", sweep_values,
                    "comma separated numbers")->required();
  sweep->add_option("--out", sweep_out, "override output directory");

  std::string report_dir;
  auto* report = app.add_subcommand(
      "report", "regenerate summary.json from stored artifacts");
  report->add_option("dir", report_dir, "run output directory")->required();

  double oc_alpha = 0.0, oc_beta = 0.0;
  int oc_n = 65;
  auto* oc = app.add_subcommand("oracle-check", "residual-decay study");
  oc->add_option("alpha", oc_alpha)->required();
  oc->add_option("beta", oc_beta)->required();
  oc->add_option("n", oc_n)->required();

  auto* presets = app.add_subcommand("presets", "list built-in presets");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const sel::RunOutcome res =
          sel::run_manifest(load_manifest_arg(run_manifest_arg), run_out);
      if (res.exit_code != 0)
        std::fprintf(stderr, "run failed (%d): %s\n", res.exit_code,
                     res.error.c_str());
      else
        std::printf("artifacts: %s\n", res.outdir.c_str());
      return res.exit_code;
    }
    if (sweep->parsed()) {
      const sel::RunOutcome res =
          sel::sweep_manifest(load_manifest_arg(sweep_manifest_arg),
                              sweep_axis, parse_values(sweep_values), sweep_out);
      if (res.exit_code != 0)
        std::fprintf(stderr, "sweep failed (%d): %s\n", res.exit_code,
                     res.error.c_str());
      else
        std::printf("merged report: %s/sweep.json\n", res.outdir.c_str());
      return res.exit_code;
    }
    if (report->parsed()) return sel::regenerate_report(report_dir);
    if (oc->parsed()) {
      const double factor =
          sel::oracle_check(oc_alpha, oc_beta, oc_n, std::cout);
      return factor >= 1.5 ? 0 : 1;
    }
    if (presets->parsed()) {
      for (const std::string& name : sel::preset_names())
        std::printf("%s\n", name.c_str());
      return 0;
    }
  } catch (const sel::ManifestError& e) {
    std::fprintf(stderr, "manifest error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
