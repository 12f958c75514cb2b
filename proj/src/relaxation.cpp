#include "lifts/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lifts/constants.hpp"

namespace lifts {

using std::numbers::pi;

namespace {

struct Window {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive
};

Window admissible_window(const std::vector<double>& times, const std::vector<double>& mean,
                         const std::vector<double>& se, const FitOptions& opt) {
  if (times.size() != mean.size() || times.size() != se.size())
    throw std::invalid_argument("fit_decay: series lengths differ");
  if (times.empty()) throw InsufficientSignal("insufficient signal: empty series");
  const double t0 = times.front() + opt.start_fraction * (times.back() - times.front());
  Window w;
  while (w.begin < times.size() && times[w.begin] < t0) ++w.begin;
  w.end = w.begin;
  const double sign = w.begin < mean.size() && mean[w.begin] < 0.0 ? -1.0 : 1.0;
  while (w.end < times.size() && sign * mean[w.end] > opt.noise_sigmas * se[w.end] &&
         mean[w.end] != 0.0)
    ++w.end;
  if (w.end - w.begin < opt.min_points)
    throw InsufficientSignal("insufficient signal: only " + std::to_string(w.end - w.begin) +
                             " points above the noise floor");
  return w;
}

struct LineFit {
  double slope, intercept, slope_se, r_squared;
};

/// Weighted least squares; `w` may be null for equal weights.
LineFit fit_line(const double* x, const double* y, const double* w, std::size_t n) {
  const auto wt = [w](std::size_t i) { return w ? w[i] : 1.0; };
  double sw = 0.0, mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sw += wt(i);
    mx += wt(i) * x[i];
    my += wt(i) * y[i];
  }
  mx /= sw;
  my /= sw;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += wt(i) * (x[i] - mx) * (x[i] - mx);
    sxy += wt(i) * (x[i] - mx) * (y[i] - my);
    syy += wt(i) * (y[i] - my) * (y[i] - my);
  }
  LineFit f{};
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  const double sse = std::max(0.0, syy - f.slope * sxy);
  f.slope_se = n > 2 ? std::sqrt(sse / (n - 2) / sxx) : 0.0;
  f.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  return f;
}

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * (v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - lo) * (v[hi] - v[lo]);
}

std::vector<double> log_weights(const std::vector<double>& mean, const std::vector<double>& se, const Window& w) {
  std::vector<double> wt(w.end - w.begin);
  for (std::size_t i = 0; i < wt.size(); ++i) {
    const double s = se[w.begin + i];
    wt[i] = s > 0.0 ? mean[w.begin + i] * mean[w.begin + i] / (s * s) : 0.0;
  }
  // Noise-free points (zero standard error) share the largest finite weight.
  const double top = *std::max_element(wt.begin(), wt.end());
  for (std::size_t i = 0; i < wt.size(); ++i)
    if (!(se[w.begin + i] > 0.0)) wt[i] = top > 0.0 ? top : 1.0;
  return wt;
}

DecayEstimate fit_window(const std::vector<double>& times, const std::vector<double>& mean,
                         const std::vector<double>& wt, const Window& w) {
  const std::size_t n = w.end - w.begin;
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = std::log(std::abs(mean[w.begin + i]));
  const LineFit f = fit_line(times.data() + w.begin, y.data(), wt.data(), n);
  DecayEstimate e;
  e.rate = -f.slope;
  if (!(e.rate > 0.0)) throw InsufficientSignal("insufficient signal: series does not decay");
  e.ci_low = e.rate - 1.96 * f.slope_se;
  e.ci_high = e.rate + 1.96 * f.slope_se;
  e.t_start = times[w.begin];
  e.t_end = times[w.end - 1];
  e.n_points = n;
  e.r_squared = f.r_squared;
  return e;
}

}  // namespace

DecayEstimate fit_decay(const std::vector<double>& times, const std::vector<double>& mean,
                        const std::vector<double>& std_error, const FitOptions& options) {
  const Window w = admissible_window(times, mean, std_error, options);
  return fit_window(times, mean, log_weights(mean, std_error, w), w);
}

DecayEstimate fit_decay(const EnsembleSeries& series, std::size_t observable, const FitOptions& options) {
  if (observable >= series.per_chain.size()) throw std::invalid_argument("fit_decay: no such observable");
  const auto row = [&](const Matrix& m) {
    std::vector<double> v(m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j) v[j] = m(static_cast<Eigen::Index>(observable), j);
    return v;
  };
  const std::vector<double> mean = row(series.mean), se = row(series.std_error);
  const Window w = admissible_window(series.times, mean, se, options);
  const std::vector<double> wt = log_weights(mean, se, w);
  DecayEstimate e = fit_window(series.times, mean, wt, w);

  const Matrix& chains = series.per_chain[observable];
  const auto n = static_cast<Eigen::Index>(series.n_chains);
  if (options.bootstrap > 0 && n > 1) {
    RandomStream rng(options.seed, 0, StreamPurpose::bootstrap);
    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
    const std::size_t len = w.end - w.begin;
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    std::vector<double> y(len);
    for (std::size_t b = 0; b < options.bootstrap; ++b) {
      for (auto& i : idx) i = pick(rng.engine());
      bool ok = true;
      for (std::size_t j = 0; j < len; ++j) {
        const auto col = static_cast<Eigen::Index>(w.begin + j);
        double s = 0.0;
        for (auto i : idx) s += chains(i, col);
        if (s == 0.0) {
          ok = false;
          break;
        }
        y[j] = std::log(std::abs(s / n));
      }
      if (ok) e.replicates.push_back(-fit_line(series.times.data() + w.begin, y.data(), wt.data(), len).slope);
    }
    if (e.replicates.size() >= 2) {
      e.ci_low = quantile(e.replicates, 0.025);
      e.ci_high = quantile(e.replicates, 0.975);
    }
  }
  e.ci_low = std::min(e.ci_low, e.rate);
  e.ci_high = std::max(e.ci_high, e.rate);
  return e;
}

double GammaSpec::gamma(double m) const {
  switch (rule) {
    case GammaRule::optimal: return gamma_opt_closed_form(m, 0.0);
    case GammaRule::fixed: return value;
    case GammaRule::scaled: return value * std::sqrt(m);
  }
  return value;
}

GammaRule parse_gamma_rule(const std::string& name) {
  if (name == "optimal") return GammaRule::optimal;
  if (name == "fixed") return GammaRule::fixed;
  if (name == "scaled") return GammaRule::scaled;
  throw std::invalid_argument("unknown gamma rule '" + name + "'");
}

std::string to_string(GammaRule rule) {
  switch (rule) {
    case GammaRule::optimal: return "optimal";
    case GammaRule::fixed: return "fixed";
    case GammaRule::scaled: return "scaled";
  }
  return "unknown";
}

Budget default_budget(Process process) {
  Budget b;
  if (process == Process::overdamped) {
    b.horizon_factor = 10.0 * 2.0 / (pi * pi);
    b.dt_factor = 0.005;
  } else {
    b.horizon_factor = 6.0;
    b.dt_factor = 1e-3;
  }
  return b;
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("ls_slope: need >= 2 paired points");
  return fit_line(x.data(), y.data(), nullptr, x.size()).slope;
}

ScalingResult scaling_experiment(Process process, const std::vector<double>& diameters,
                                 const GammaSpec& gamma, const Budget& budget) {
  if (diameters.size() < 4) throw std::invalid_argument("scaling_experiment: need at least 4 diameters");
  const Budget defaults = default_budget(process);
  const double horizon_factor = budget.horizon_factor > 0.0 ? budget.horizon_factor : defaults.horizon_factor;
  const double dt_factor = budget.dt_factor > 0.0 ? budget.dt_factor : defaults.dt_factor;
  const bool diffusive = process == Process::overdamped;

  ScalingResult result{process, gamma, {}, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < diameters.size(); ++i) {
    const double d = diameters[i];
    if (!(d > 0.0)) throw std::invalid_argument("scaling_experiment: diameters must be positive");
    const auto params = ModelParams::make(ConvexDomain::interval(0.0, d), Potential::uniform());
    ScalingRow row;
    row.d = d;
    row.m = params.m;
    row.gamma = has_velocity(process) ? gamma.gamma(row.m) : 0.0;
    const double length = diffusive ? d * d : d;
    row.dt = dt_factor * length;
    row.horizon = horizon_factor * length;

    SimConfig config;
    config.process = process;
    config.gamma = row.gamma > 0.0 ? row.gamma : 1.0;
    config.dt = row.dt;
    config.horizon = row.horizon;
    config.seed = budget.seed;
    config.stream = i;
    const std::vector<Observable> obs{
        {"e1", [d](const PhaseState& s) { return std::numbers::sqrt2 * std::cos(pi * s.x(0) / d); }}};
    const auto series = run_ensemble(config, params, budget.chains, point_mass(Vector::Zero(1), process),
                                     obs, uniform_grid(row.horizon, budget.grid_intervals), budget.threads);
    FitOptions fit;
    fit.start_fraction = budget.start_fraction;
    fit.bootstrap = budget.bootstrap;
    fit.seed = budget.seed + i;
    row.decay = fit_decay(series, 0, fit);
    row.t_rel_proxy = 1.0 / row.decay.rate;
    row.lower_bound = lift_lower_bound(2.0 / row.m);
    row.upper_bound = std::numeric_limits<double>::infinity();
    if (process == Process::rhmc || process == Process::kinetic_langevin) {
      const auto rep = optimality_report(process, row.m, 0.0, row.decay.rate, row.gamma);
      row.upper_bound = rep.upper_bound;
      row.bounds_ok = rep.pass;
    }
    result.rows.push_back(std::move(row));
  }

  std::vector<double> lx, ly;
  for (const auto& r : result.rows) {
    lx.push_back(std::log(r.d));
    ly.push_back(std::log(r.t_rel_proxy));
  }
  result.slope = ls_slope(lx, ly);
  result.slope_ci_low = result.slope_ci_high = result.slope;
  std::size_t reps = result.rows.front().decay.replicates.size();
  for (const auto& r : result.rows) reps = std::min(reps, r.decay.replicates.size());
  if (reps >= 2) {
    std::vector<double> slopes;
    for (std::size_t b = 0; b < reps; ++b) {
      std::vector<double> yb;
      for (const auto& r : result.rows) yb.push_back(-std::log(r.decay.replicates[b]));
      slopes.push_back(ls_slope(lx, yb));
    }
    result.slope_ci_low = std::min(result.slope, quantile(slopes, 0.025));
    result.slope_ci_high = std::max(result.slope, quantile(slopes, 0.975));
  }
  return result;
}

OptimalityReport optimality_report(Process process, double m, double rho, double measured_rate,
                                   std::optional<double> gamma) {
  if (process != Process::rhmc && process != Process::kinetic_langevin)
    throw std::invalid_argument("optimality_report: only rhmc and kinetic_langevin are lifts with bounds");
  if (!(measured_rate > 0.0)) throw std::invalid_argument("optimality_report: rate must be positive");
  const auto c = constants(pi / std::sqrt(m), m, rho, gamma);
  OptimalityReport r;
  r.t_rel_proxy = 1.0 / measured_rate;
  r.lower_bound = c.lower_bound;
  r.upper_bound = process == Process::rhmc ? c.t_rel_rhmc : c.t_rel_langevin;
  r.c_empirical = r.t_rel_proxy / r.lower_bound;
  r.pass = r.lower_bound <= r.t_rel_proxy && r.t_rel_proxy <= r.upper_bound;
  return r;
}

}  // namespace lifts
