#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lifts/ensemble.hpp"

namespace lifts {

/// Raised when a decay series does not rise far enough above its noise floor.
class InsufficientSignal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DecayEstimate {
  double rate = 0.0;
  double ci_low = 0.0;   ///< 95% interval, always containing rate
  double ci_high = 0.0;
  double t_start = 0.0;  ///< fit window
  double t_end = 0.0;
  std::size_t n_points = 0;
  double r_squared = 0.0;
  std::vector<double> replicates;  ///< bootstrap rates (empty without chain data)
};

struct FitOptions {
  double noise_sigmas = 3.0;    ///< window keeps |mean| > noise_sigmas * se
  std::size_t min_points = 20;
  double start_fraction = 0.0;  ///< skip the first fraction of the time range
  std::size_t bootstrap = 200;
  std::uint64_t seed = 0;
};

/// Log-linear least squares on |mean| over the admissible window; the interval
/// comes from the regression standard error.
DecayEstimate fit_decay(const std::vector<double>& times, const std::vector<double>& mean,
                        const std::vector<double>& std_error, const FitOptions& options = {});

/// Same fit on an ensemble observable, with a bootstrap-over-chains interval.
DecayEstimate fit_decay(const EnsembleSeries& series, std::size_t observable = 0,
                        const FitOptions& options = {});

enum class GammaRule {
  optimal,  ///< gamma_opt(m, 0) at T = pi / sqrt(m)
  fixed,    ///< gamma = value
  scaled,   ///< gamma = value * sqrt(m), value in [1/A, A]
};

struct GammaSpec {
  GammaRule rule = GammaRule::optimal;
  double value = 1.0;

  double gamma(double m) const;
};

GammaRule parse_gamma_rule(const std::string& name);
std::string to_string(GammaRule rule);

/// Run lengths and sample sizes for one scaling experiment. Zero horizon or
/// dt factors select the process defaults (see default_budget).
struct Budget {
  std::size_t chains = 10000;
  std::size_t grid_intervals = 200;
  double horizon_factor = 0.0;  ///< horizon = factor * d^2 (overdamped) or factor * d
  double dt_factor = 0.0;       ///< dt = factor * d^2 (overdamped) or factor * d
  double start_fraction = 0.0;
  std::size_t bootstrap = 200;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

Budget default_budget(Process process);

struct ScalingRow {
  double d = 0.0;
  double m = 0.0;
  double gamma = 0.0;
  double dt = 0.0;
  double horizon = 0.0;
  DecayEstimate decay;
  double t_rel_proxy = 0.0;  ///< 1 / rate
  double lower_bound = 0.0;  ///< sqrt(2/m) / (2 sqrt 2)
  double upper_bound = 0.0;  ///< 1/nu + T (rhmc), 2/nu + T (kinetic); inf otherwise
  bool bounds_ok = true;
};

struct ScalingResult {
  Process process;
  GammaSpec gamma;
  std::vector<ScalingRow> rows;
  double slope = 0.0;  ///< least-squares slope of log(1/rate) against log d
  double slope_ci_low = 0.0;
  double slope_ci_high = 0.0;
};

/**
 * Uniform measure on Interval(0, d) for each d: m = pi^2/d^2, start at x = 0
 * (velocity ~ N(0, 1)), observable sqrt(2) cos(pi x / d).
 */
ScalingResult scaling_experiment(Process process, const std::vector<double>& diameters,
                                 const GammaSpec& gamma, const Budget& budget);

/// Ordinary least-squares slope of y on x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y);

struct OptimalityReport {
  double t_rel_proxy;
  double lower_bound;
  double upper_bound;
  double c_empirical;  ///< t_rel_proxy / lower_bound
  bool pass;           ///< lower_bound <= t_rel_proxy <= upper_bound
};

/// Only for rhmc and kinetic_langevin; gamma defaults to gamma_opt(m, rho).
OptimalityReport optimality_report(Process process, double m, double rho, double measured_rate,
                                   std::optional<double> gamma = std::nullopt);

}  // namespace lifts
