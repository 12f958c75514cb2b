#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include "lifts/model.hpp"
#include "lifts/rng.hpp"

namespace lifts {

/// Position, velocity (empty for the overdamped process), clock and event counters.
struct PhaseState {
  Vector x;
  Vector v;
  double t = 0.0;
  std::uint64_t reflections = 0;
  std::uint64_t refreshes = 0;
};

enum class Process { overdamped, billiard, rhmc, kinetic_langevin };

std::string to_string(Process p);
/// Accepts "overdamped", "billiard", "rhmc", "kinetic_langevin" (or "langevin").
Process parse_process(const std::string& name);
bool has_velocity(Process p);

struct SimConfig {
  Process process = Process::overdamped;
  double gamma = 1.0;    ///< refresh rate (rhmc) or friction (kinetic_langevin)
  double dt = 1e-3;      ///< step size (overdamped, kinetic_langevin)
  double horizon = 1.0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  /// Throws std::invalid_argument on nonpositive gamma / dt / horizon.
  void validate() const;
};

inline constexpr int kMaxFoldIterations = 64;
inline constexpr std::uint64_t kMaxFlightEvents = 1'000'000'000ULL;

/// Euler proposal x - grad U(x) dt / 2 + sqrt(dt) xi, folded back specularly.
PhaseState step_overdamped(const PhaseState& state, const ModelParams& params, double dt,
                           const Vector& xi);
PhaseState step_overdamped(const PhaseState& state, const ModelParams& params, double dt,
                           RandomStream& rng);

/// Hamiltonian flow with specular reflection for the given duration.
PhaseState flight(const PhaseState& state, const ModelParams& params, double duration);

/**
 * Flight interrupted by full velocity refreshments. `next_refresh()` returns
 * the waiting time to the next refreshment, `draw_velocity()` the new velocity.
 * Exponential clocks are memoryless, so each call may start a fresh clock.
 */
template <class RefreshClock, class VelocitySampler>
PhaseState step_rhmc_with(PhaseState state, const ModelParams& params, double window,
                          RefreshClock&& next_refresh, VelocitySampler&& draw_velocity) {
  double remaining = window;
  for (;;) {
    const double tau = next_refresh();
    if (tau > remaining) return flight(state, params, remaining);
    state = flight(state, params, tau);
    remaining -= tau;
    state.v = draw_velocity();
    ++state.refreshes;
  }
}

PhaseState step_rhmc(const PhaseState& state, const ModelParams& params, double gamma,
                     double window, RandomStream& rng);

/**
 * One O(dt/2) B(dt/2) A(dt) B(dt/2) O(dt/2) step: exact Ornstein-Uhlenbeck
 * half-steps with noises xi1, xi2, force half-kicks, and a straight flight
 * with specular reflections in between.
 */
PhaseState step_kinetic_langevin(const PhaseState& state, const ModelParams& params, double gamma,
                                 double dt, const Vector& xi1, const Vector& xi2);
PhaseState step_kinetic_langevin(const PhaseState& state, const ModelParams& params, double gamma,
                                 double dt, RandomStream& rng);

/// Runs the configured process for `duration` (partial final step when needed).
PhaseState advance(const PhaseState& state, const SimConfig& config, const ModelParams& params,
                   double duration, RandomStream& rng);

namespace detail {
/// Straight-line motion with specular reflections; false if more than
/// max_events boundary events were needed.
bool linear_flight(const ConvexDomain& domain, Vector& x, Vector& v, double duration,
                   std::uint64_t& reflections, std::uint64_t max_events);
}  // namespace detail

}  // namespace lifts
