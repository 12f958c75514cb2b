#include "lifts/runner.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>

#include "lifts/config.hpp"
#include "lifts/constants.hpp"
#include "lifts/divergence.hpp"
#include "lifts/relaxation.hpp"

#ifndef LIFTS_GIT_DESCRIBE
#define LIFTS_GIT_DESCRIBE "unknown"
#endif

namespace lifts {

namespace fs = std::filesystem;
using json = nlohmann::json;
using std::numbers::pi;

std::string default_output_dir() {
  const char* env = std::getenv("LIFTS_OUTPUT_DIR");
  return env && *env ? std::string(env) : std::string("lifts-output");
}

std::string version_string() { return std::string("lifts 1.0.0 (") + LIFTS_GIT_DESCRIBE + ")"; }

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// CSV with a format_version comment line; rows are written as they come.
class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::vector<std::string>& columns) : out_(path) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    out_ << "# format_version: " << kFormatVersion << "\n";
    row(columns);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

/// Run manifest: written with status "running" before any result file, then
/// rewritten with the final status, timings and criteria.
class Manifest {
 public:
  Manifest(const fs::path& dir, const std::string& subcommand, const std::vector<std::string>& args,
           const std::string& config_echo, std::uint64_t seed)
      : path_(dir / "manifest.json"), start_(std::chrono::steady_clock::now()) {
    const std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    j_ = {{"format_version", kFormatVersion},
          {"tool", "lifts"},
          {"version", version_string()},
          {"git_describe", LIFTS_GIT_DESCRIBE},
          {"subcommand", subcommand},
          {"args", args},
          {"config", config_echo},
          {"seed", seed},
          {"started_utc", stamp},
          {"status", "running"},
          {"criteria", json::array()},
          {"outputs", json::array()}};
    write();
  }

  void output(const std::string& name) { j_["outputs"].push_back(name); }
  void criterion(const std::string& name, bool pass, const std::string& detail) {
    j_["criteria"].push_back({{"name", name}, {"pass", pass}, {"detail", detail}});
    all_pass_ = all_pass_ && pass;
  }
  void summary(const std::string& key, json value) { j_["summary"][key] = std::move(value); }
  bool all_pass() const { return all_pass_; }

  void finish(const std::string& status) {
    j_["status"] = status;
    j_["all_pass"] = all_pass_;
    j_["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    write();
  }

 private:
  void write() const {
    std::ofstream out(path_);
    if (!out) throw std::runtime_error("cannot write " + path_.string());
    out << j_.dump(2) << "\n";
  }

  fs::path path_;
  std::chrono::steady_clock::time_point start_;
  json j_;
  bool all_pass_ = true;
};

void print_criteria(std::ostream& out, const std::vector<std::pair<std::string, bool>>& rows) {
  for (const auto& [name, pass] : rows) out << (pass ? "PASS  " : "FAIL  ") << name << "\n";
}

struct Common {
  std::uint64_t seed = 1;
  std::string output;
  unsigned threads = 0;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "random seed");
  sub->add_option("--output", c.output, "output directory (default $LIFTS_OUTPUT_DIR)");
  sub->add_option("--threads", c.threads, "worker threads for chain ensembles (0 = all cores)");
}

fs::path prepare_dir(const Common& c) {
  fs::path dir = c.output.empty() ? fs::path(default_output_dir()) : fs::path(c.output);
  fs::create_directories(dir);
  return dir;
}

// ---------------------------------------------------------------- constants

struct ConstantsArgs {
  std::optional<double> T;
  double m = 1.0;
  double rho = 0.0;
  std::optional<double> gamma;
};

void run_constants(const ConstantsArgs& a, Manifest& man, const fs::path& dir, std::ostream& out) {
  const double T = a.T.value_or(pi / std::sqrt(a.m));
  const auto r = constants(T, a.m, a.rho, a.gamma);
  {
    CsvWriter csv(dir / "constants.csv",
                  {"T", "m", "rho", "beta", "c0", "c1", "C0", "C1", "gamma", "gamma_opt", "nu",
                   "t_rel_rhmc", "t_rel_langevin", "lower_bound", "c_opt_rhmc", "c_opt_langevin"});
    csv.row({num(r.T), num(r.m), num(r.rho), num(r.beta), num(r.c0), num(r.c1), num(r.C0), num(r.C1),
             num(r.gamma), num(r.gamma_opt), num(r.nu), num(r.t_rel_rhmc), num(r.t_rel_langevin),
             num(r.lower_bound), num(r.c_opt_rhmc), num(r.c_opt_langevin)});
  }
  man.output("constants.csv");
  out << std::setprecision(10);
  out << "T          = " << r.T << "\n"
      << "m          = " << r.m << "\n"
      << "rho        = " << r.rho << "\n"
      << "c0         = " << r.c0 << "\n"
      << "c1         = " << r.c1 << "\n"
      << "C0         = " << r.C0 << "\n"
      << "C1         = " << r.C1 << "\n"
      << "gamma_opt  = " << r.gamma_opt << "\n"
      << "gamma      = " << r.gamma << "\n"
      << "nu         = " << r.nu << "\n"
      << "t_rel RHMC     <= " << r.t_rel_rhmc << "\n"
      << "t_rel Langevin <= " << r.t_rel_langevin << "\n"
      << "lower bound    >= " << r.lower_bound << "\n"
      << "C-optimality RHMC     " << r.c_opt_rhmc << "\n"
      << "C-optimality Langevin " << r.c_opt_langevin << "\n";

  // nu(gamma_opt) dominates a 100-point log grid spanning two decades around it.
  double best = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double g = r.gamma_opt * std::pow(10.0, -1.0 + 2.0 * i / 99.0);
    best = std::max(best, decay_rate(g, r.C0, r.C1));
  }
  const bool optimal = decay_rate(r.gamma_opt, r.C0, r.C1) >= best * (1.0 - 1e-15);
  man.criterion("nu maximised at gamma_opt", optimal, "grid max " + num(best));
  print_criteria(out, {{"nu maximised at gamma_opt", optimal}});
}

// ---------------------------------------------------------------- divergence-verify

struct DivergenceArgs {
  std::string domain = "interval:0,1";
  std::string T = "1";
  int modes = 32;
  int frequencies = 64;
  int trials = 100;
  double rho = 0.0;
  std::optional<double> m;
};

void run_divergence(const DivergenceArgs& a, std::uint64_t seed, Manifest& man, const fs::path& dir,
                    std::ostream& out) {
  if (a.modes < 1 || a.frequencies < 0 || a.trials < 1) throw ConfigError("modes, frequencies, trials must be positive");
  const auto params = ModelParams::make(parse_domain(a.domain), Potential::uniform(), a.m);
  const auto basis = std::make_shared<const EigenBasis>(build_basis(params, a.modes));
  const auto horizons = parse_list(a.T);
  CsvWriter csv(dir / "divergence.csv", {"T", "trial", "residual", "dirichlet", "ratio0", "ratio1", "c0",
                                         "c1", "slack0", "slack1", "pass"});
  man.output("divergence.csv");
  std::vector<std::pair<std::string, bool>> rows;
  for (std::size_t ti = 0; ti < horizons.size(); ++ti) {
    const double T = horizons[ti];
    if (!(T > 0.0)) throw ConfigError("T must be positive");
    int passed = 0;
    double worst_residual = 0.0;
    for (int trial = 0; trial < a.trials; ++trial) {
      const std::uint64_t trial_seed = seed * 1000003ULL + ti * 10007ULL + static_cast<std::uint64_t>(trial);
      const auto f = random_space_time(basis, T, basis->size(), a.frequencies, trial_seed);
      const auto sol = decompose(f, a.rho);
      const auto b = verify_bounds(sol, params.m, a.rho);
      const double fnorm = std::sqrt(sol.norms.f);
      const bool ok = b.pass && sol.residual <= 1e-6 && sol.dirichlet_max <= 1e-8 * fnorm;
      passed += ok;
      worst_residual = std::max(worst_residual, sol.residual);
      csv.row({num(T), std::to_string(trial), num(sol.residual), num(sol.dirichlet_max / fnorm),
               num(b.ratio0), num(b.ratio1), num(b.c0), num(b.c1), num(b.c0 / b.ratio0),
               num(b.c1 / b.ratio1), ok ? "1" : "0"});
    }
    const std::string name = "T=" + num(T) + ": " + std::to_string(passed) + "/" +
                             std::to_string(a.trials) + " certified (worst residual " +
                             num(worst_residual) + ")";
    man.criterion("divergence T=" + num(T), passed == a.trials, name);
    rows.emplace_back(name, passed == a.trials);
  }
  print_criteria(out, rows);
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string domain = "interval:0,1";
  std::string potential = "uniform";
  std::optional<double> m;
  std::optional<double> rho;
  std::string process = "rhmc";
  double gamma = 1.0;
  double dt = 1e-3;
  double horizon = 1.0;
  std::size_t chains = 1000;
  std::size_t grid = 100;
  std::string start;
};

void run_simulate(const SimulateArgs& a, const Common& c, Manifest& man, const fs::path& dir,
                  std::ostream& out) {
  const ConvexDomain domain = parse_domain(a.domain);
  const Potential potential = parse_potential(a.potential, domain.dimension(), a.rho);
  std::optional<double> m = a.m;
  if (!m && !analytic_m(domain, potential)) m = 1.0;  // m does not enter the dynamics
  const auto params = ModelParams::make(domain, potential, m);
  SimConfig config;
  try {
    config.process = parse_process(a.process);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  config.gamma = a.gamma;
  config.dt = a.dt;
  config.horizon = a.horizon;
  config.seed = c.seed;
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  Vector x0 = domain.interior_point();
  if (!a.start.empty()) {
    const auto v = parse_list(a.start);
    if (static_cast<int>(v.size()) != domain.dimension()) throw ConfigError("start point dimension mismatch");
    x0 = Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
    if (!contains(domain, x0)) throw ConfigError("start point outside the domain");
  }

  std::vector<Observable> obs;
  for (int i = 0; i < domain.dimension(); ++i)
    obs.push_back({"x" + std::to_string(i + 1), [i](const PhaseState& s) { return s.x(i); }});
  if (analytic_m(domain, potential)) {
    auto basis = std::make_shared<const EigenBasis>(build_basis(params, 1));
    obs.push_back({"e1", [basis](const PhaseState& s) { return basis->eval(1, s.x); }});
  }
  if (has_velocity(config.process))
    obs.push_back({"speed2", [](const PhaseState& s) { return s.v.squaredNorm(); }});
  obs.push_back({"inside", [&domain](const PhaseState& s) { return contains(domain, s.x) ? 1.0 : 0.0; }});

  const auto series = run_ensemble(config, params, a.chains, point_mass(x0, config.process), obs,
                                   uniform_grid(a.horizon, a.grid), c.threads);
  std::vector<std::string> cols{"t"};
  for (const auto& name : series.names) {
    cols.push_back(name + "_mean");
    cols.push_back(name + "_se");
  }
  {
    CsvWriter csv(dir / "simulate.csv", cols);
    for (std::size_t j = 0; j < series.times.size(); ++j) {
      std::vector<std::string> row{num(series.times[j])};
      for (std::size_t o = 0; o < series.names.size(); ++o) {
        row.push_back(num(series.mean(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(j))));
        row.push_back(num(series.std_error(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(j))));
      }
      csv.row(row);
    }
  }
  man.output("simulate.csv");
  const auto inside = static_cast<Eigen::Index>(series.names.size() - 1);
  const bool confined = series.mean.row(inside).minCoeff() == 1.0;
  man.criterion("confinement", confined, "every recorded state inside the domain");
  out << "simulated " << a.chains << " chains of " << to_string(config.process) << " on "
      << domain.describe() << " to t = " << a.horizon << "\n";
  print_criteria(out, {{"confinement", confined}});
}

// ---------------------------------------------------------------- scaling

struct ScalingArgs {
  std::string process = "overdamped";
  std::string diameters = "1,2,4,8,16";
  std::string gamma_rule = "optimal";
  double gamma_value = 1.0;
  std::optional<std::size_t> chains;
  std::optional<std::size_t> grid;
  double horizon_factor = 0.0;
  double dt_factor = 0.0;
  double start_fraction = 0.0;
  std::size_t bootstrap = 200;
  std::optional<double> expect_slope;
  std::optional<double> slope_tol;
};

void run_scaling(const ScalingArgs& a, const Common& c, Manifest& man, const fs::path& dir,
                 std::ostream& out) {
  Process process;
  GammaSpec gamma;
  try {
    process = parse_process(a.process);
    gamma.rule = parse_gamma_rule(a.gamma_rule);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  gamma.value = a.gamma_value;
  Budget budget = default_budget(process);
  if (a.chains) budget.chains = *a.chains;
  if (a.grid) budget.grid_intervals = *a.grid;
  if (a.horizon_factor > 0.0) budget.horizon_factor = a.horizon_factor;
  if (a.dt_factor > 0.0) budget.dt_factor = a.dt_factor;
  budget.start_fraction = a.start_fraction;
  budget.bootstrap = a.bootstrap;
  budget.seed = c.seed;
  budget.threads = c.threads;
  const auto result = scaling_experiment(process, parse_list(a.diameters), gamma, budget);

  {
    CsvWriter csv(dir / "scaling.csv", {"process", "d", "m", "gamma", "dt", "horizon", "rate", "ci_low",
                                        "ci_high", "t_rel_proxy", "lower_bound", "upper_bound", "bounds_ok"});
    for (const auto& r : result.rows)
      csv.row({to_string(process), num(r.d), num(r.m), num(r.gamma), num(r.dt), num(r.horizon),
               num(r.decay.rate), num(r.decay.ci_low), num(r.decay.ci_high), num(r.t_rel_proxy),
               num(r.lower_bound), num(r.upper_bound), r.bounds_ok ? "1" : "0"});
  }
  man.output("scaling.csv");

  const double expected = a.expect_slope.value_or(process == Process::overdamped ? 2.0 : 1.0);
  const double tol = a.slope_tol.value_or(process == Process::kinetic_langevin ? 0.3 : 0.25);
  const bool slope_ok = std::abs(result.slope - expected) <= tol;
  bool bounds_ok = true;
  for (const auto& r : result.rows) bounds_ok = bounds_ok && r.bounds_ok;
  man.summary("slope", result.slope);
  man.summary("slope_ci", {result.slope_ci_low, result.slope_ci_high});
  const std::string slope_name = "slope " + num(result.slope) + " within " + num(expected) + " +- " + num(tol);
  man.criterion("slope", slope_ok, slope_name);
  man.criterion("proxy within [lower, upper] bounds", bounds_ok, "all diameters");

  out << std::setprecision(6);
  out << "process " << to_string(process) << ", gamma rule " << to_string(gamma.rule) << "\n";
  out << "      d        rate     t_rel_proxy   lower_bound   upper_bound\n";
  for (const auto& r : result.rows)
    out << std::setw(7) << r.d << std::setw(12) << r.decay.rate << std::setw(16) << r.t_rel_proxy
        << std::setw(14) << r.lower_bound << std::setw(14) << r.upper_bound << "\n";
  out << "slope " << result.slope << " (95% CI " << result.slope_ci_low << ", " << result.slope_ci_high << ")\n";
  print_criteria(out, {{slope_name, slope_ok}, {"proxy within [lower, upper] bounds", bounds_ok}});
}

// ---------------------------------------------------------------- optimality

struct OptimalityArgs {
  std::string process = "rhmc";
  double d = 1.0;
  std::optional<double> m;
  double rho = 0.0;
  std::optional<double> gamma;
  std::optional<double> rate;
  std::size_t chains = 10000;
};

void run_optimality(const OptimalityArgs& a, const Common& c, Manifest& man, const fs::path& dir,
                    std::ostream& out) {
  Process process;
  try {
    process = parse_process(a.process);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (process != Process::rhmc && process != Process::kinetic_langevin)
    throw ConfigError("optimality applies to rhmc and kinetic_langevin only");
  if (!(a.d > 0.0)) throw ConfigError("d must be positive");
  const double m = a.m.value_or(pi * pi / (a.d * a.d));
  const double gamma = a.gamma.value_or(gamma_opt_closed_form(m, a.rho));
  double rate;
  if (a.rate) {
    rate = *a.rate;
  } else {
    // Measure the decay of sqrt(2) cos(pi x / d) from x = 0 on Interval(0, d).
    const auto params = ModelParams::make(ConvexDomain::interval(0.0, a.d), Potential::uniform(), m);
    const Budget b = default_budget(process);
    SimConfig config;
    config.process = process;
    config.gamma = gamma;
    config.dt = b.dt_factor * a.d;
    config.horizon = b.horizon_factor * a.d;
    config.seed = c.seed;
    const double d = a.d;
    const std::vector<Observable> obs{
        {"e1", [d](const PhaseState& s) { return std::numbers::sqrt2 * std::cos(pi * s.x(0) / d); }}};
    const auto series = run_ensemble(config, params, a.chains, point_mass(Vector::Zero(1), process), obs,
                                     uniform_grid(config.horizon, b.grid_intervals), c.threads);
    FitOptions fit;
    fit.seed = c.seed;
    rate = fit_decay(series, 0, fit).rate;
  }
  const auto rep = optimality_report(process, m, a.rho, rate, gamma);
  {
    CsvWriter csv(dir / "optimality.csv", {"process", "d", "m", "rho", "gamma", "rate", "t_rel_proxy",
                                           "lower_bound", "upper_bound", "c_empirical", "pass"});
    csv.row({to_string(process), num(a.d), num(m), num(a.rho), num(gamma), num(rate), num(rep.t_rel_proxy),
             num(rep.lower_bound), num(rep.upper_bound), num(rep.c_empirical), rep.pass ? "1" : "0"});
  }
  man.output("optimality.csv");
  man.criterion("lower_bound <= t_rel_proxy <= upper_bound", rep.pass, num(rep.t_rel_proxy));
  out << std::setprecision(8) << "t_rel proxy  " << rep.t_rel_proxy << "\n"
      << "lower bound  " << rep.lower_bound << "\n"
      << "upper bound  " << rep.upper_bound << "\n"
      << "C empirical  " << rep.c_empirical << "\n";
  print_criteria(out, {{"lower_bound <= t_rel_proxy <= upper_bound", rep.pass}});
}

// ---------------------------------------------------------------- plumbing

// Splices `--config FILE` entries in front of the command-line flags so that
// explicit flags (parsed later, last value wins) override the file.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest, from_file;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw ConfigError("--config needs a file name");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
      continue;
    }
    for (const auto& e : load_config(path)) {
      from_file.push_back("--" + config_flag(e.section, e.key));
      from_file.push_back(e.value);
    }
  }
  if (from_file.empty() || rest.empty()) return rest;
  std::vector<std::string> out{rest.front()};
  out.insert(out.end(), from_file.begin(), from_file.end());
  out.insert(out.end(), rest.begin() + 1, rest.end());
  return out;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Second-order lifts of reflected diffusions: constants, divergence certification, simulation"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);
  Common common;
  ConstantsArgs ca;
  DivergenceArgs da;
  SimulateArgs sa;
  ScalingArgs sc;
  OptimalityArgs oa;

  auto* cst = app.add_subcommand("constants", "explicit constants, decay rate and relaxation-time bounds");
  cst->add_option("--T", ca.T, "time horizon (default pi/sqrt(m))");
  cst->add_option("--m", ca.m, "Poincare parameter m");
  cst->add_option("--rho", ca.rho, "curvature bound rho");
  cst->add_option("--gamma", ca.gamma, "refresh rate (default gamma_opt)");

  auto* dv = app.add_subcommand("divergence-verify", "certify the space-time divergence construction");
  dv->add_option("--domain", da.domain, "interval or box domain");
  dv->add_option("--T", da.T, "time horizon(s), comma separated");
  dv->add_option("--modes", da.modes, "per-axis mode cap K");
  dv->add_option("--frequencies", da.frequencies, "time frequencies J");
  dv->add_option("--trials", da.trials, "random test functions per T");
  dv->add_option("--rho", da.rho, "curvature bound rho");
  dv->add_option("--m", da.m, "override the analytic m");

  auto* sim = app.add_subcommand("simulate", "ensemble simulation of one process");
  sim->add_option("--domain", sa.domain, "domain spec");
  sim->add_option("--potential", sa.potential, "uniform | quadratic:c...;p...");
  sim->add_option("--m", sa.m, "Poincare parameter m");
  sim->add_option("--rho", sa.rho, "declared curvature bound rho");
  sim->add_option("--process", sa.process, "overdamped | billiard | rhmc | kinetic_langevin");
  sim->add_option("--gamma", sa.gamma, "refresh rate / friction");
  sim->add_option("--dt", sa.dt, "step size");
  sim->add_option("--horizon", sa.horizon, "simulated time");
  sim->add_option("--chains", sa.chains, "independent chains");
  sim->add_option("--grid", sa.grid, "output grid intervals");
  sim->add_option("--start", sa.start, "start point (comma separated)");

  auto* scl = app.add_subcommand("scaling", "relaxation-rate scaling with the diameter");
  scl->add_option("--process", sc.process, "overdamped | rhmc | kinetic_langevin | billiard");
  scl->add_option("--diameters", sc.diameters, "comma separated diameters (>= 4)");
  scl->add_option("--gamma-rule", sc.gamma_rule, "optimal | fixed | scaled");
  scl->add_option("--gamma-value", sc.gamma_value, "gamma (fixed) or gamma/sqrt(m) (scaled)");
  scl->add_option("--chains", sc.chains, "chains per diameter");
  scl->add_option("--grid", sc.grid, "output grid intervals");
  scl->add_option("--horizon-factor", sc.horizon_factor, "horizon / d^2 (overdamped) or / d");
  scl->add_option("--dt-factor", sc.dt_factor, "dt / d^2 (overdamped) or / d");
  scl->add_option("--start-fraction", sc.start_fraction, "skip this fraction of the series in fits");
  scl->add_option("--bootstrap", sc.bootstrap, "bootstrap replicates");
  scl->add_option("--expect-slope", sc.expect_slope, "expected slope");
  scl->add_option("--slope-tol", sc.slope_tol, "slope tolerance");

  auto* opt = app.add_subcommand("optimality", "relaxation-time proxy against the lower and upper bounds");
  opt->add_option("--process", oa.process, "rhmc | kinetic_langevin");
  opt->add_option("--d", oa.d, "diameter of Interval(0, d)");
  opt->add_option("--m", oa.m, "Poincare parameter (default pi^2/d^2)");
  opt->add_option("--rho", oa.rho, "curvature bound rho");
  opt->add_option("--gamma", oa.gamma, "refresh rate (default gamma_opt)");
  opt->add_option("--rate", oa.rate, "measured decay rate (simulated when absent)");
  opt->add_option("--chains", oa.chains, "chains for the decay measurement");

  for (auto* sub : {cst, dv, sim, scl, opt}) {
    add_common(sub, common);
    for (auto* o : sub->get_options())
      if (o->get_expected_max() == 1 && o->get_name() != "--help") o->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  }

  std::vector<std::string> args;
  try {
    args = expand_config(raw_args);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << version_string() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitConfigError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }

  CLI::App* chosen = app.get_subcommands().front();
  std::unique_ptr<Manifest> manifest;
  try {
    const fs::path dir = prepare_dir(common);
    manifest = std::make_unique<Manifest>(dir, chosen->get_name(), raw_args, chosen->config_to_str(true, false),
                                          common.seed);
    if (chosen == cst) run_constants(ca, *manifest, dir, out);
    else if (chosen == dv) run_divergence(da, common.seed, *manifest, dir, out);
    else if (chosen == sim) run_simulate(sa, common, *manifest, dir, out);
    else if (chosen == scl) run_scaling(sc, common, *manifest, dir, out);
    else run_optimality(oa, common, *manifest, dir, out);
    manifest->finish("complete");
    return manifest->all_pass() ? kExitOk : kExitFailure;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    if (manifest) manifest->finish("config_error");
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    if (manifest) manifest->finish("error");
    return kExitFailure;
  }
}

}  // namespace lifts
