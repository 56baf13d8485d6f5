// Command-line front end: run experiments from config files, derive plot
// data, compare runs.  Exit codes: 0 all checks passed, 1 some check
// failed, 2 config/validation error, 3 solver or runtime failure.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fpme/errors.hpp"
#include "fpme/experiment.hpp"
#include "fpme/version.hpp"

namespace {

int run_verb(const std::string& config_path) {
  fpme::ExperimentConfig cfg = fpme::ExperimentConfig::from_file(config_path);
  fpme::RunArtifact artifact = fpme::run_experiment(cfg);
  for (const fpme::CheckResult& res : artifact.results)
    std::printf("%s  %s [%s]  value=%g  bound=%g\n",
                res.pass ? "pass" : "FAIL", res.quantity.c_str(),
                res.parameter.c_str(), res.value, res.bound);
  std::printf("artifacts: %s%s\n", artifact.run_dir.c_str(),
              artifact.reused ? " (existing run byte-verified)" : "");
  std::printf("verdict: %s\n", artifact.all_passed ? "PASS" : "FAIL");
  return artifact.all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fractional porous-medium laboratory on model manifolds"};
  app.set_version_flag("--version", std::string(fpme::version_string));
  app.require_subcommand(1);

  std::string config_path, run_dir, output_root = "runs";
  std::vector<std::string> compare_dirs;

  CLI::App* run = app.add_subcommand("run", "execute a config file");
  run->add_option("config", config_path, "path to the config file")
      ->required();

  CLI::App* plots = app.add_subcommand("plots", "emit plot-ready CSVs");
  plots->add_option("run_dir", run_dir, "run directory")->required();

  CLI::App* compare =
      app.add_subcommand("compare", "tabulate checks across runs");
  compare->add_option("run_dirs", compare_dirs, "two or more run directories")
      ->required()
      ->expected(-2);

  CLI::App* list = app.add_subcommand("list", "list runs under a root");
  list->add_option("output_root", output_root, "runs directory");

  try {
    app.parse(argc, argv);
    if (run->parsed()) return run_verb(config_path);
    if (plots->parsed()) {
      fpme::emit_plot_data(run_dir);
      std::printf("plot data written under %s\n", run_dir.c_str());
      return 0;
    }
    if (compare->parsed()) {
      std::fputs(fpme::compare_runs(compare_dirs).c_str(), stdout);
      return 0;
    }
    std::fputs(fpme::list_runs(output_root).c_str(), stdout);
    return 0;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // --help/--version exit cleanly
  } catch (const fpme::SolverError& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return 3;
  } catch (const fpme::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const fpme::UnsupportedError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "failure: %s\n", e.what());
    return 3;
  }
}
