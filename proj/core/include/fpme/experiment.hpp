#pragma once

#include <string>
#include <vector>

#include "fpme/config.hpp"

namespace fpme {

// Everything a run needs, parsed and validated from a flat config file.
// Unknown keys are hard errors (see KeyValueConfig); invalid ranges throw
// ConfigError naming the offending key.
struct ExperimentConfig {
  // manifold
  int dimension = 3;
  std::string warping = "euclidean";  // euclidean | hyperbolic | named custom
  double curvature = 1.0;             // c, hyperbolic only

  // discretization
  double r_max = 20.0;
  int n_cells = 1024;
  double grading = 1.0;

  // equation
  double s = 0.5;
  double m = 2.0;

  // datum: ball {datum_radius} | power_tail {datum_a, datum_cap} |
  //        bump_sum {datum_bumps} | csv {datum_csv}
  std::string datum = "ball";
  double datum_radius = 1.0;
  double datum_a = 2.0;
  double datum_cap = 0.0;  // radius truncation for power_tail; 0 = none
  int datum_bumps = 3;
  std::string datum_csv;
  bool allow_inadmissible = false;  // datum outside the decay classes

  // time grid
  double t_min = 1e-3;
  double t_max = 50.0;
  double q = 1.0125;

  // solver
  double newton_tol = 1e-10;
  int newton_max_iter = 50;
  double boundary_mass_cap = 1e-4;
  bool linear_diagnostic = false;

  // checks: any of lp_nonexpansivity, order_preservation,
  // time_monotonicity, green_moment, fundamental_bound, smoothing_fit,
  // hyperbolic_longtime, weighted_smoothing_short, weighted_smoothing_long,
  // wds_residual
  std::vector<std::string> checks;
  double fit_lo = 0.0, fit_hi = 0.0;  // smoothing window; 0 = derived

  std::string output_dir = "runs";

  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_text(const std::string& text);
  void validate() const;

  std::string snapshot;  // verbatim config text
};

struct CheckResult {
  std::string quantity;   // check name / measured quantity
  std::string parameter;  // check-specific knob, human-readable
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct RunArtifact {
  std::string run_dir;  // final directory (output_dir/run-<hash>)
  bool all_passed = false;
  bool reused = false;  // directory already existed (determinism contract)
  std::vector<CheckResult> results;
};

// Executes the full pipeline and persists artifacts.  Writing is
// crash-safe: everything lands in a temp directory that is renamed into
// place only on success; failures leave output_dir/run-<hash>.FAILED with
// the error text and no partial run directory.
RunArtifact run_experiment(const ExperimentConfig& config);

// Tidy plot-ready CSVs + a gnuplot script next to the run artifacts.
void emit_plot_data(const std::string& run_dir);

// Side-by-side table of check results for >= 2 runs; throws ConfigError
// if the runs share no check.
std::string compare_runs(const std::vector<std::string>& run_dirs);

// One line per run directory under the root.
std::string list_runs(const std::string& output_root);

}  // namespace fpme
