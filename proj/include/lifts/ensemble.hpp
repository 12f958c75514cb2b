#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lifts/dynamics.hpp"

namespace lifts {

struct Observable {
  std::string name;
  std::function<double(const PhaseState&)> fn;
};

/// Draws the starting state of one chain.
using InitialLaw = std::function<PhaseState(RandomStream&)>;

struct EnsembleSeries {
  std::vector<double> times;
  std::vector<std::string> names;
  std::size_t n_chains = 0;
  std::vector<Matrix> per_chain;  ///< one (n_chains x times) matrix per observable
  Matrix mean;                    ///< observables x times
  Matrix std_error;               ///< observables x times
};

/// Recomputes mean and standard error from per_chain, in chain order.
void summarize(EnsembleSeries& series);

/**
 * Runs n_chains independent chains, chain c drawing from the streams keyed by
 * (config.seed, config.stream * 2^32 + c). Observables are recorded at the
 * grid times (nondecreasing, starting at or after 0). Output does not depend
 * on the thread count; threads = 0 uses the hardware concurrency.
 */
EnsembleSeries run_ensemble(const SimConfig& config, const ModelParams& params, std::size_t n_chains,
                            const InitialLaw& initial, const std::vector<Observable>& observables,
                            const std::vector<double>& grid, unsigned threads = 0);

/// Point mass at x0 with velocity ~ N(0, I) when the process carries one.
InitialLaw point_mass(const Vector& x0, Process process);

/// Uniform grid 0, h, ..., n h.
std::vector<double> uniform_grid(double horizon, std::size_t intervals);

}  // namespace lifts
