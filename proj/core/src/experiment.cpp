#include "fpme/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "fpme/csvio.hpp"
#include "fpme/errors.hpp"
#include "fpme/estimates.hpp"
#include "fpme/version.hpp"

namespace fs = std::filesystem;

namespace fpme {

namespace {

const std::set<std::string> kKnownChecks = {
    "lp_nonexpansivity",     "order_preservation",
    "time_monotonicity",     "green_moment",
    "fundamental_bound",     "smoothing_fit",
    "hyperbolic_longtime",   "weighted_smoothing_short",
    "weighted_smoothing_long", "wds_residual"};

ModelManifold build_manifold(const ExperimentConfig& cfg) {
  if (cfg.warping == "euclidean")
    return ModelManifold(cfg.dimension, Warping::euclidean());
  if (cfg.warping == "hyperbolic")
    return ModelManifold(cfg.dimension, Warping::hyperbolic(cfg.curvature));
  return ModelManifold(cfg.dimension, Warping::named_custom(cfg.warping));
}

Vector build_datum(const ExperimentConfig& cfg, const ModelManifold& manifold,
                   const RadialGrid& grid) {
  if (cfg.datum == "ball")
    return ball_indicator(manifold, grid, cfg.datum_radius);
  if (cfg.datum == "power_tail") {
    Vector u = power_tail_field(manifold, grid, cfg.datum_a);
    if (cfg.datum_cap > 0.0)
      u = u.cwiseProduct(ball_indicator(manifold, grid, cfg.datum_cap));
    return u;
  }
  if (cfg.datum == "bump_sum")
    return bump_sum_datum(manifold, grid, cfg.datum_bumps);
  // csv: one column named u, one row per cell
  CsvTable table = CsvTable::read_file(cfg.datum_csv);
  auto it = std::find(table.header.begin(), table.header.end(), "u");
  if (it == table.header.end())
    throw ConfigError("datum_csv '" + cfg.datum_csv + "': no column 'u'");
  size_t col = static_cast<size_t>(it - table.header.begin());
  if (static_cast<int>(table.rows.size()) != grid.size())
    throw ConfigError("datum_csv '" + cfg.datum_csv + "': " +
                      std::to_string(table.rows.size()) + " rows, grid has " +
                      std::to_string(grid.size()) + " cells");
  Vector u(grid.size());
  for (int i = 0; i < grid.size(); ++i)
    u[i] = std::stod(table.rows[i][col]);
  return u;
}

// The built-in space-time test family, scaled off the run geometry: early /
// middle / late bump with supports well inside the grid and time range.
std::vector<TestFunction> builtin_test_family(double r_max, double t_max) {
  return {{0.30 * r_max, 0.02 * t_max, 0.018 * t_max},
          {0.40 * r_max, 0.10 * t_max, 0.080 * t_max},
          {0.50 * r_max, 0.50 * t_max, 0.400 * t_max}};
}

// 20 deterministic index triples spread over the recorded times.
std::vector<std::array<int, 3>> sample_triples(int K) {
  std::vector<std::array<int, 3>> triples;
  for (int a = 1; a <= 5 && static_cast<int>(triples.size()) < 20; ++a)
    for (int b = 1; b <= 4 && static_cast<int>(triples.size()) < 20; ++b) {
      int k0 = std::max(1, a * K / 16);
      int k1 = std::min(K - 1, k0 + b * K / 10);
      int k = std::min(K - 1, k1 + b * K / 8);
      triples.push_back({k0, k1, k});
    }
  return triples;
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

struct Pipeline {
  ExperimentConfig cfg;
  ModelManifold manifold;
  RadialGrid grid;
  SpectralDecomposition decomposition;
  FractionalOperator op;
  Vector u0;
  GreenProfile G;
  Trajectory traj;
  std::vector<CheckResult> results;
  CsvTable ratios;  // per-time ratio series from smoothing checks

  explicit Pipeline(const ExperimentConfig& c)
      : cfg(c),
        manifold(build_manifold(c)),
        grid(build_grid(manifold, c.r_max, c.n_cells, c.grading)),
        decomposition(grid, manifold),
        op(decomposition, c.s) {
    u0 = build_datum(cfg, manifold, grid);
    G = green_function(op);
    SolverConfig scfg;
    scfg.time_grid = geometric_times(cfg.t_min, cfg.t_max, cfg.q);
    scfg.newton_tol = cfg.newton_tol;
    scfg.newton_max_iter = cfg.newton_max_iter;
    scfg.boundary_mass_cap = cfg.boundary_mass_cap;
    scfg.linear_diagnostic = cfg.linear_diagnostic;
    ratios.header = {"regime", "t", "ratio"};
    traj = evolve(op, cfg.m, u0, scfg, &G);
    for (const std::string& name : cfg.checks) run_check(name, scfg);
  }

  void add(const std::string& quantity, const std::string& parameter,
           double value, double bound, bool pass) {
    results.push_back({quantity, parameter, value, bound, pass});
  }

  void add_ratios(const SmoothingReport& rep) {
    for (size_t k = 0; k < rep.ratio_times.size(); ++k)
      ratios.add_row({rep.regime, format_double(rep.ratio_times[k]),
                      format_double(rep.ratio_series[k])});
  }

  void run_check(const std::string& name, const SolverConfig& scfg) {
    if (name == "lp_nonexpansivity") {
      for (double p : {1.0, 2.0, std::numeric_limits<double>::infinity()}) {
        auto rep = check_lp_nonexpansivity(traj, p);
        add(name, std::isinf(p) ? "p=inf" : (p == 1.0 ? "p=1" : "p=2"),
            rep.max_growth, 1e-10 * (p == 1.0 ? traj.l1[0]
                                              : p == 2.0 ? traj.l2[0]
                                                         : traj.linf[0]),
            rep.pass);
      }
    } else if (name == "order_preservation") {
      // Companion datum dominating u0: double the ball radius when the
      // datum is a ball, otherwise scale the profile by 1.5.
      Vector v0 = cfg.datum == "ball"
                      ? Vector(ball_indicator(
                            manifold, grid,
                            std::min(2.0 * cfg.datum_radius, 0.9 * cfg.r_max)))
                      : Vector(1.5 * u0);
      Trajectory other = evolve(op, cfg.m, v0, scfg, &G);
      auto rep = check_order_preservation(grid, traj, other);
      add(name, "companion >= datum", rep.max_pointwise_violation,
          1e-12 * std::max(u0.maxCoeff(), v0.maxCoeff()), rep.pass);
    } else if (name == "time_monotonicity") {
      auto rep = check_time_monotonicity(traj);
      add(name, "t^{1/(m-1)} u nondecreasing", rep.max_violation,
          1e-8 * rep.scale, rep.pass);
    } else if (name == "green_moment") {
      auto series = green_moment_series(G, traj, 0.0);
      double worst = -std::numeric_limits<double>::infinity();
      for (size_t k = 0; k + 1 < series.size(); ++k)
        worst = std::max(worst, series[k + 1] - series[k]);
      add(name, "rho=0", worst, 1e-6 * series.front(),
          worst <= 1e-6 * series.front());
    } else if (name == "fundamental_bound") {
      auto rows = fundamental_bound_check(
          G, traj, sample_triples(static_cast<int>(traj.times.size())));
      double worst = 0.0;
      bool all = true;
      for (const auto& row : rows) {
        double denom = std::max(std::abs(row.upper), 1e-300);
        worst = std::max(worst, std::max(row.lower - row.middle,
                                         row.middle - row.upper) /
                                    denom);
        all = all && row.pass;
      }
      add(name, std::to_string(rows.size()) + " triples", worst, 1e-3, all);
    } else if (name == "smoothing_fit") {
      double t_star = std::pow(traj.l1[0], -(cfg.m - 1.0));
      double lo = cfg.fit_lo > 0.0 ? cfg.fit_lo : 3.0 * t_star;
      double hi = cfg.fit_hi > 0.0 ? cfg.fit_hi : cfg.t_max;
      auto rep = fit_smoothing_exponent(traj, cfg.dimension, lo, hi);
      add_ratios(rep);
      add(name, "target " + format_double(rep.target_exponent),
          rep.fitted_exponent, rep.target_exponent, rep.pass);
      add(name, "ratio spread", rep.ratio_spread, 2.0, rep.ratio_spread < 2.0);
    } else if (name == "hyperbolic_longtime") {
      if (cfg.warping != "hyperbolic")
        throw ConfigError(
            "checks: hyperbolic_longtime requires warping = hyperbolic");
      auto rep = hyperbolic_longtime_check(traj, cfg.dimension, cfg.curvature);
      add_ratios(rep);
      add(name, "late slope", rep.fitted_exponent, rep.target_exponent,
          rep.pass);
      add(name, "ratio max/first", rep.ratio_spread, 2.0,
          rep.ratio_spread <= 2.0);
    } else if (name == "weighted_smoothing_short" ||
               name == "weighted_smoothing_long") {
      double Y = weighted_norm(G, u0, 0.0).total;
      auto rep = weighted_smoothing_check(traj, cfg.dimension, Y,
                                          name == "weighted_smoothing_short");
      add_ratios(rep);
      add(name, "ratio max/median", rep.ratio_spread, 3.0, rep.pass);
    } else if (name == "wds_residual") {
      for (const TestFunction& psi :
           builtin_test_family(cfg.r_max, cfg.t_max)) {
        double res = wds_residual(op, traj, psi);
        add(name,
            "t_c=" + format_double(psi.t_center) +
                " tau=" + format_double(psi.t_width) +
                " sigma=" + format_double(psi.sigma),
            res, 0.02, res < 0.02);
      }
    } else {
      throw ConfigError("checks: unknown check '" + name + "'");
    }
  }
};

std::map<std::string, std::string> render_artifacts(const Pipeline& p) {
  std::map<std::string, std::string> files;
  files["config.cfg"] = p.cfg.snapshot;

  CsvTable traj_table;
  traj_table.header = {"t",  "l1",            "l2",
                       "linf", "weighted_rho0", "boundary_mass_fraction"};
  for (size_t k = 0; k < p.traj.times.size(); ++k)
    traj_table.add_row({format_double(p.traj.times[k]),
                        format_double(p.traj.l1[k]),
                        format_double(p.traj.l2[k]),
                        format_double(p.traj.linf[k]),
                        format_double(p.traj.weighted_rho0[k]),
                        format_double(p.traj.boundary_mass[k])});
  files["trajectory.csv"] = traj_table.to_string();

  CsvTable profiles;
  profiles.header = {"t"};
  for (int i = 0; i < p.grid.size(); ++i)
    profiles.header.push_back("u" + std::to_string(i));
  for (size_t k = 0; k < p.traj.times.size(); ++k) {
    std::vector<std::string> row = {format_double(p.traj.times[k])};
    for (int i = 0; i < p.grid.size(); ++i)
      row.push_back(format_double(p.traj.profiles[k][i]));
    profiles.add_row(std::move(row));
  }
  files["profiles.csv"] = profiles.to_string();

  // Closed-form column where one exists (Riesz kernel / H^3 with c = 1).
  bool riesz = p.cfg.warping == "euclidean";
  bool hyp3 = p.cfg.warping == "hyperbolic" && p.cfg.dimension == 3 &&
              p.cfg.curvature == 1.0;
  CsvTable green;
  green.header = {"r", "green", "closed_form"};
  for (int i = 0; i < p.grid.size(); ++i) {
    double r = p.grid.centers[i];
    std::string cf;
    if (riesz)
      cf = format_double(closed_form::riesz_green(p.cfg.dimension, p.cfg.s, r));
    else if (hyp3)
      cf = format_double(closed_form::hyperbolic3_green(p.cfg.s, r));
    green.add_row({format_double(r), format_double(p.G.values[i]), cf});
  }
  files["green_profile.csv"] = green.to_string();

  CsvTable reports;
  reports.header = {"quantity", "manifold", "N",     "s",
                    "parameter", "value",    "bound", "pass"};
  for (const CheckResult& res : p.results)
    reports.add_row({res.quantity, p.manifold.warping().name(),
                     std::to_string(p.cfg.dimension), format_double(p.cfg.s),
                     res.parameter, format_double(res.value),
                     format_double(res.bound), bool_str(res.pass)});
  files["reports.csv"] = reports.to_string();

  if (!p.ratios.rows.empty()) files["ratios.csv"] = p.ratios.to_string();

  std::ostringstream sum;
  int passed = 0;
  for (const CheckResult& res : p.results) passed += res.pass ? 1 : 0;
  bool all = passed == static_cast<int>(p.results.size());
  sum << "verdict: " << (all ? "PASS" : "FAIL") << " (" << passed << "/"
      << p.results.size() << " checks)\n";
  sum << "manifold: " << p.manifold.warping().name() << " N=" << p.cfg.dimension
      << " s=" << format_double(p.cfg.s) << " m=" << format_double(p.cfg.m)
      << "\n";
  sum << "grid: n=" << p.grid.size() << " r_max=" << format_double(p.cfg.r_max)
      << " grading=" << format_double(p.cfg.grading) << "\n";
  sum << "time grid: " << p.traj.steps() << " steps, t in ["
      << format_double(p.cfg.t_min) << ", " << format_double(p.cfg.t_max)
      << "], ratio " << format_double(p.cfg.q) << "\n";
  sum << "final norms: l1=" << format_double(p.traj.l1.back())
      << " linf=" << format_double(p.traj.linf.back())
      << " boundary_fraction=" << format_double(p.traj.boundary_mass.back())
      << "\n";
  for (const CheckResult& res : p.results)
    sum << (res.pass ? "pass" : "FAIL") << "  " << res.quantity << " ["
        << res.parameter << "]  value=" << format_double(res.value)
        << "  bound=" << format_double(res.bound) << "\n";
  files["summary.txt"] = sum.str();

  std::ostringstream man;
  man << "fpme " << version_string << "\n";
  for (const auto& [nm, content] : files)
    man << fnv1a_hex(content) << "  " << nm << "\n";
  files["manifest.txt"] = man.str();
  return files;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  KeyValueConfig kv = KeyValueConfig::parse_file(path);
  ExperimentConfig cfg = from_text(kv.original_text());
  return cfg;
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text) {
  KeyValueConfig kv = KeyValueConfig::parse_string(text);
  ExperimentConfig cfg;
  cfg.dimension = kv.get_int("dimension", cfg.dimension);
  cfg.warping = kv.get_string("warping", cfg.warping);
  cfg.curvature = kv.get_double("curvature", cfg.curvature);
  cfg.r_max = kv.get_double("r_max", cfg.r_max);
  cfg.n_cells = kv.get_int("n_cells", cfg.n_cells);
  cfg.grading = kv.get_double("grading", cfg.grading);
  cfg.s = kv.get_double("s", cfg.s);
  cfg.m = kv.get_double("m", cfg.m);
  cfg.datum = kv.get_string("datum", cfg.datum);
  cfg.datum_radius = kv.get_double("datum_radius", cfg.datum_radius);
  cfg.datum_a = kv.get_double("datum_a", cfg.datum_a);
  cfg.datum_cap = kv.get_double("datum_cap", cfg.datum_cap);
  cfg.datum_bumps = kv.get_int("datum_bumps", cfg.datum_bumps);
  cfg.datum_csv = kv.get_string("datum_csv", cfg.datum_csv);
  cfg.allow_inadmissible =
      kv.get_bool("allow_inadmissible", cfg.allow_inadmissible);
  cfg.t_min = kv.get_double("t_min", cfg.t_min);
  cfg.t_max = kv.get_double("t_max", cfg.t_max);
  cfg.q = kv.get_double("q", cfg.q);
  cfg.newton_tol = kv.get_double("newton_tol", cfg.newton_tol);
  cfg.newton_max_iter = kv.get_int("newton_max_iter", cfg.newton_max_iter);
  cfg.boundary_mass_cap =
      kv.get_double("boundary_mass_cap", cfg.boundary_mass_cap);
  cfg.linear_diagnostic =
      kv.get_bool("linear_diagnostic", cfg.linear_diagnostic);
  cfg.checks = kv.get_string_list("checks", cfg.checks);
  cfg.fit_lo = kv.get_double("fit_lo", cfg.fit_lo);
  cfg.fit_hi = kv.get_double("fit_hi", cfg.fit_hi);
  cfg.output_dir = kv.get_string("output_dir", cfg.output_dir);
  kv.finish();
  cfg.snapshot = text;
  cfg.validate();
  return cfg;
}

void ExperimentConfig::validate() const {
  if (dimension < 2) throw ConfigError("dimension: must be >= 2");
  if (warping == "hyperbolic" && !(curvature > 0.0))
    throw ConfigError("curvature: must be > 0 for the hyperbolic warping");
  if (!(r_max > 0.0)) throw ConfigError("r_max: must be > 0");
  if (n_cells < 16) throw ConfigError("n_cells: must be >= 16");
  if (!(grading >= 1.0 && grading <= 2.0))
    throw ConfigError("grading: must lie in [1, 2]");
  if (!(s > 0.0 && s < 1.0)) throw ConfigError("s: must lie in (0, 1)");
  if (!(m > 1.0) && !(m == 1.0 && linear_diagnostic))
    throw ConfigError(
        "m: must be > 1 (m = 1 requires linear_diagnostic = true)");
  if (datum == "ball") {
    if (!(datum_radius > 0.0 && datum_radius <= r_max))
      throw ConfigError("datum_radius: must lie in (0, r_max]");
  } else if (datum == "power_tail") {
    if (!(datum_a > 0.0)) throw ConfigError("datum_a: must be > 0");
    if (datum_cap != 0.0 && !(datum_cap > 0.0 && datum_cap <= r_max))
      throw ConfigError("datum_cap: must be 0 (none) or in (0, r_max]");
    // Sufficient decay for the weighted class: a > 2s on the Euclidean
    // warping, a > s on the hyperbolic one.  Slower tails need the flag.
    if (!allow_inadmissible) {
      if (warping == "euclidean" && datum_a <= 2.0 * s)
        throw ConfigError(
            "datum_a: power tail needs a > 2s on the Euclidean warping; set "
            "allow_inadmissible = true to run anyway");
      if (warping == "hyperbolic" && datum_a <= s)
        throw ConfigError(
            "datum_a: power tail needs a > s on the hyperbolic warping; set "
            "allow_inadmissible = true to run anyway");
    }
  } else if (datum == "bump_sum") {
    if (datum_bumps < 1) throw ConfigError("datum_bumps: must be >= 1");
  } else if (datum == "csv") {
    if (datum_csv.empty()) throw ConfigError("datum_csv: path required");
  } else {
    throw ConfigError(
        "datum: must be one of ball, power_tail, bump_sum, csv");
  }
  if (!(t_min > 0.0 && t_min < t_max))
    throw ConfigError("t_min: need 0 < t_min < t_max");
  if (!(q > 1.0)) throw ConfigError("q: time-grid ratio must be > 1");
  if (!(newton_tol > 0.0)) throw ConfigError("newton_tol: must be > 0");
  if (newton_max_iter < 1) throw ConfigError("newton_max_iter: must be >= 1");
  if (!(boundary_mass_cap > 0.0))
    throw ConfigError("boundary_mass_cap: must be > 0");
  for (const std::string& name : checks)
    if (!kKnownChecks.count(name))
      throw ConfigError("checks: unknown check '" + name + "'");
  if (fit_lo != 0.0 || fit_hi != 0.0)
    if (!(fit_lo > 0.0 && fit_hi > fit_lo))
      throw ConfigError("fit_lo/fit_hi: need 0 < fit_lo < fit_hi");
  if (output_dir.empty()) throw ConfigError("output_dir: must not be empty");
}

RunArtifact run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::string hash = fnv1a_hex(config.snapshot);
  fs::path out_root(config.output_dir);
  fs::path run_dir = out_root / ("run-" + hash);
  fs::path marker = out_root / ("run-" + hash + ".FAILED");

  std::map<std::string, std::string> files;
  RunArtifact artifact;
  artifact.run_dir = run_dir.string();
  try {
    Pipeline p(config);
    artifact.results = p.results;
    artifact.all_passed = true;
    for (const CheckResult& res : p.results)
      artifact.all_passed = artifact.all_passed && res.pass;
    files = render_artifacts(p);
  } catch (const std::exception& e) {
    fs::create_directories(out_root);
    write_text_file(marker.string(), std::string(e.what()) + "\n");
    throw;
  }

  fs::create_directories(out_root);
  if (fs::exists(run_dir)) {
    // Determinism contract: a rerun of the same config must byte-reproduce
    // every artifact already on disk.
    for (const auto& [name, content] : files) {
      fs::path existing = run_dir / name;
      if (!fs::exists(existing))
        throw std::runtime_error("existing run is missing artifact '" + name +
                                 "' (" + run_dir.string() + ")");
      if (read_text_file(existing.string()) != content)
        throw std::runtime_error("determinism violation: artifact '" + name +
                                 "' differs from existing run (" +
                                 run_dir.string() + ")");
    }
    artifact.reused = true;
  } else {
    fs::path tmp = out_root / (".tmp-run-" + hash);
    fs::remove_all(tmp);
    fs::create_directories(tmp);
    for (const auto& [name, content] : files)
      write_text_file((tmp / name).string(), content);
    fs::rename(tmp, run_dir);
  }
  fs::remove(marker);
  return artifact;
}

void emit_plot_data(const std::string& run_dir) {
  fs::path dir(run_dir);
  if (!fs::exists(dir / "trajectory.csv") ||
      !fs::exists(dir / "green_profile.csv"))
    throw std::runtime_error("run artifacts missing under '" + run_dir + "'");
  CsvTable traj = CsvTable::read_file((dir / "trajectory.csv").string());

  std::vector<double> t, linf;
  for (const auto& row : traj.rows) {
    double tv = std::stod(row[0]), lv = std::stod(row[3]);
    if (tv > 0.0 && lv > 0.0) {
      t.push_back(tv);
      linf.push_back(lv);
    }
  }
  if (t.size() < 3)
    throw std::runtime_error("trajectory under '" + run_dir +
                             "' has fewer than 3 positive-time samples");
  auto [slope, se] = loglog_fit(t, linf);
  (void)se;
  double xbar = 0.0, zbar = 0.0;
  for (size_t k = 0; k < t.size(); ++k) {
    xbar += std::log10(t[k]);
    zbar += std::log10(linf[k]);
  }
  xbar /= static_cast<double>(t.size());
  zbar /= static_cast<double>(t.size());

  // Build every file in memory first so errors leave nothing partial.
  std::map<std::string, std::string> files;

  CsvTable decay;
  decay.header = {"log10_t", "log10_Linf", "fit_line"};
  for (size_t k = 0; k < t.size(); ++k) {
    double x = std::log10(t[k]);
    decay.add_row({format_double(x), format_double(std::log10(linf[k])),
                   format_double(zbar + slope * (x - xbar))});
  }
  files["decay_loglog.csv"] = decay.to_string();

  CsvTable norms;
  norms.header = {"log10_t", "log10_L1", "log10_L2", "log10_Linf",
                  "log10_weighted"};
  for (const auto& row : traj.rows) {
    double tv = std::stod(row[0]);
    if (!(tv > 0.0)) continue;
    auto lg = [](const std::string& cell) {
      double v = std::stod(cell);
      return v > 0.0 ? format_double(std::log10(v)) : std::string("");
    };
    norms.add_row({format_double(std::log10(tv)), lg(row[1]), lg(row[2]),
                   lg(row[3]), lg(row[4])});
  }
  files["norms_loglog.csv"] = norms.to_string();

  CsvTable green = CsvTable::read_file((dir / "green_profile.csv").string());
  bool have_closed = false;
  CsvTable gcf;
  gcf.header = {"r", "green", "closed_form", "rel_error"};
  for (const auto& row : green.rows) {
    if (row[2].empty()) continue;
    double g = std::stod(row[1]), cf = std::stod(row[2]);
    gcf.add_row({row[0], row[1], row[2],
                 cf != 0.0 ? format_double(std::abs(g / cf - 1.0))
                           : std::string("")});
    have_closed = true;
  }
  if (have_closed) files["green_vs_closedform.csv"] = gcf.to_string();

  if (fs::exists(dir / "ratios.csv"))
    files["ratio_series.csv"] = read_text_file((dir / "ratios.csv").string());

  std::ostringstream gp;
  gp << "# gnuplot script for the run artifacts in this directory\n"
     << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set terminal pngcairo size 900,600\n"
     << "set output 'decay_loglog.png'\n"
     << "set xlabel 'log10 t'\n"
     << "set ylabel 'log10 ||u||_inf'\n"
     << "plot 'decay_loglog.csv' using 1:2 with points, \\\n"
     << "     'decay_loglog.csv' using 1:3 with lines\n";
  if (have_closed)
    gp << "set output 'green_vs_closedform.png'\n"
       << "set logscale xy\n"
       << "set xlabel 'r'\n"
       << "set ylabel 'G'\n"
       << "plot 'green_vs_closedform.csv' using 1:2 with lines, \\\n"
       << "     'green_vs_closedform.csv' using 1:3 with lines\n";
  files["plot.gp"] = gp.str();

  for (const auto& [name, content] : files)
    write_text_file((dir / name).string(), content);
}

std::string compare_runs(const std::vector<std::string>& run_dirs) {
  if (run_dirs.size() < 2)
    throw ConfigError("compare needs at least two run directories");
  struct Entry {
    std::string value, bound;
    bool pass;
  };
  std::vector<std::map<std::string, Entry>> runs;
  for (const std::string& dir : run_dirs) {
    fs::path reports = fs::path(dir) / "reports.csv";
    if (!fs::exists(reports))
      throw ConfigError("no reports.csv under '" + dir + "'");
    CsvTable table = CsvTable::read_file(reports.string());
    std::map<std::string, Entry> entries;
    for (const auto& row : table.rows)
      entries[row[0] + " [" + row[4] + "]"] = {row[5], row[6],
                                               row[7] == "true"};
    runs.push_back(std::move(entries));
  }
  std::vector<std::string> shared;
  for (const auto& [key, entry] : runs[0]) {
    bool everywhere = true;
    for (size_t r = 1; r < runs.size(); ++r)
      everywhere = everywhere && runs[r].count(key);
    if (everywhere) shared.push_back(key);
  }
  if (shared.empty())
    throw ConfigError("the runs share no check; nothing to compare");

  std::ostringstream out;
  out << "check";
  for (size_t r = 0; r < run_dirs.size(); ++r)
    out << "\trun" << r + 1 << " (" << fs::path(run_dirs[r]).filename().string()
        << ")";
  out << "\tdelta\tflag\n";
  for (const std::string& key : shared) {
    out << key;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    bool any_pass = false, any_fail = false;
    for (const auto& run : runs) {
      const Entry& e = run.at(key);
      out << '\t' << e.value << (e.pass ? " (pass)" : " (FAIL)");
      double v = std::stod(e.value);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      if (e.pass)
        any_pass = true;
      else
        any_fail = true;
    }
    out << '\t' << format_double(hi - lo)
        << '\t' << (any_pass && any_fail ? "REGRESSION" : "") << '\n';
  }
  return out.str();
}

std::string list_runs(const std::string& output_root) {
  fs::path root(output_root);
  if (!fs::is_directory(root))
    throw ConfigError("output root '" + output_root + "' is not a directory");
  std::vector<std::string> lines;
  for (const auto& entry : fs::directory_iterator(root)) {
    std::string name = entry.path().filename().string();
    if (name.rfind("run-", 0) != 0) continue;
    if (entry.is_directory()) {
      std::string verdict = "(no summary)";
      fs::path sum = entry.path() / "summary.txt";
      if (fs::exists(sum)) {
        std::string text = read_text_file(sum.string());
        verdict = text.substr(0, text.find('\n'));
      }
      lines.push_back(name + "  " + verdict);
    } else if (name.size() > 7 && name.substr(name.size() - 7) == ".FAILED") {
      std::string text = read_text_file(entry.path().string());
      lines.push_back(name + "  " + text.substr(0, text.find('\n')));
    }
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const std::string& line : lines) out += line + "\n";
  return out;
}

}  // namespace fpme
