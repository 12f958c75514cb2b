#include "lifts/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace lifts {

void summarize(EnsembleSeries& s) {
  const auto n_obs = static_cast<Eigen::Index>(s.per_chain.size());
  const auto n_t = static_cast<Eigen::Index>(s.times.size());
  s.mean = Matrix::Zero(n_obs, n_t);
  s.std_error = Matrix::Zero(n_obs, n_t);
  const double n = static_cast<double>(s.n_chains);
  for (Eigen::Index o = 0; o < n_obs; ++o) {
    const Matrix& m = s.per_chain[o];
    for (Eigen::Index j = 0; j < n_t; ++j) {
      double sum = 0.0;
      for (Eigen::Index c = 0; c < m.rows(); ++c) sum += m(c, j);
      const double mu = sum / n;
      double ss = 0.0;
      for (Eigen::Index c = 0; c < m.rows(); ++c) ss += (m(c, j) - mu) * (m(c, j) - mu);
      s.mean(o, j) = mu;
      s.std_error(o, j) = n > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    }
  }
}

EnsembleSeries run_ensemble(const SimConfig& config, const ModelParams& params, std::size_t n_chains,
                            const InitialLaw& initial, const std::vector<Observable>& observables,
                            const std::vector<double>& grid, unsigned threads) {
  config.validate();
  if (n_chains == 0) throw std::invalid_argument("run_ensemble: need at least one chain");
  if (grid.empty()) throw std::invalid_argument("run_ensemble: empty output grid");
  if (grid.front() < 0.0 || !std::is_sorted(grid.begin(), grid.end()))
    throw std::invalid_argument("run_ensemble: grid must be nondecreasing and start at t >= 0");

  EnsembleSeries s;
  s.times = grid;
  s.n_chains = n_chains;
  for (const auto& o : observables) {
    s.names.push_back(o.name);
    s.per_chain.push_back(Matrix::Zero(static_cast<Eigen::Index>(n_chains),
                                       static_cast<Eigen::Index>(grid.size())));
  }

  auto run_chain = [&](std::size_t c) {
    const std::uint64_t key = (config.stream << 32) + c;
    RandomStream init_rng(config.seed, key, StreamPurpose::initial_state);
    RandomStream rng(config.seed, key, StreamPurpose::dynamics);
    PhaseState state = initial(init_rng);
    if (!contains(params.domain, state.x))
      throw std::invalid_argument("run_ensemble: initial state outside the domain");
    double now = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      state = advance(state, config, params, grid[j] - now, rng);
      now = grid[j];
      for (std::size_t o = 0; o < observables.size(); ++o)
        s.per_chain[o](static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(j)) = observables[o].fn(state);
    }
  };

  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_chains));
  if (workers <= 1) {
    for (std::size_t c = 0; c < n_chains; ++c) run_chain(c);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t c = w; c < n_chains; c += workers) run_chain(c);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  summarize(s);
  return s;
}

InitialLaw point_mass(const Vector& x0, Process process) {
  const bool velocity = has_velocity(process);
  return [x0, velocity](RandomStream& rng) {
    PhaseState s;
    s.x = x0;
    if (velocity) s.v = rng.normal_vector(static_cast<int>(x0.size()));
    return s;
  };
}

std::vector<double> uniform_grid(double horizon, std::size_t intervals) {
  if (!(horizon > 0.0) || intervals == 0) throw std::invalid_argument("uniform_grid: bad arguments");
  std::vector<double> g(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) g[i] = horizon * static_cast<double>(i) / intervals;
  return g;
}

}  // namespace lifts
