#include "lifts/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lifts {

std::string to_string(Process p) {
  switch (p) {
    case Process::overdamped: return "overdamped";
    case Process::billiard: return "billiard";
    case Process::rhmc: return "rhmc";
    case Process::kinetic_langevin: return "kinetic_langevin";
  }
  return "unknown";
}

Process parse_process(const std::string& name) {
  if (name == "overdamped") return Process::overdamped;
  if (name == "billiard") return Process::billiard;
  if (name == "rhmc") return Process::rhmc;
  if (name == "kinetic_langevin" || name == "langevin") return Process::kinetic_langevin;
  throw std::invalid_argument("unknown process '" + name + "'");
}

bool has_velocity(Process p) { return p != Process::overdamped; }

void SimConfig::validate() const {
  if ((process == Process::rhmc || process == Process::kinetic_langevin) && !(gamma > 0.0))
    throw std::invalid_argument("gamma must be positive");
  if ((process == Process::overdamped || process == Process::kinetic_langevin) && !(dt > 0.0))
    throw std::invalid_argument("dt must be positive");
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
}

namespace detail {

bool linear_flight(const ConvexDomain& domain, Vector& x, Vector& v, double duration,
                   std::uint64_t& reflections, std::uint64_t max_events) {
  double remaining = duration;
  std::uint64_t events = 0;
  const double speed = v.norm();
  while (remaining > 0.0) {
    if (v.squaredNorm() == 0.0) return true;
    Vector y = x + remaining * v;
    if (constraint_value(domain, y) <= 0.0) {
      x = std::move(y);
      return true;
    }
    const BoundaryHit hit = next_hit(domain, x, v);
    if (hit.time_to_hit >= remaining) {
      x = snap_inside(domain, y);
      return true;
    }
    if (++events > max_events) return false;
    x = hit.point;
    remaining -= hit.time_to_hit;
    for (const auto& n : hit.active_normals) {
      if (n.dot(v) > 0.0) {
        v = reflect(v, n);
        ++reflections;
      }
    }
    v *= speed / v.norm();
  }
  return true;
}

}  // namespace detail

PhaseState step_overdamped(const PhaseState& state, const ModelParams& params, double dt,
                           const Vector& xi) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_overdamped: dt must be positive");
  if (xi.size() != state.x.size()) throw std::invalid_argument("step_overdamped: noise dimension mismatch");
  PhaseState out = state;
  Vector shift = std::sqrt(dt) * xi;
  if (!params.potential.is_uniform()) shift -= 0.5 * dt * grad_U(params.potential, state.x);
  if (!detail::linear_flight(params.domain, out.x, shift, 1.0, out.reflections, kMaxFoldIterations))
    throw std::runtime_error("step_overdamped: fold did not terminate; dt too large for the domain");
  out.t += dt;
  return out;
}

PhaseState step_overdamped(const PhaseState& state, const ModelParams& params, double dt,
                           RandomStream& rng) {
  return step_overdamped(state, params, dt, rng.normal_vector(static_cast<int>(state.x.size())));
}

namespace {

// Per-axis motion under U = sum p_i (x_i - c_i)^2 / 2.
void harmonic_motion(const QuadraticPotential& q, const Vector& x0, const Vector& v0, double tau,
                     Vector& x, Vector& v) {
  x.resize(x0.size());
  v.resize(v0.size());
  for (Eigen::Index i = 0; i < x0.size(); ++i) {
    const double y0 = x0(i) - q.center(i);
    const double p = q.precision(i);
    double y, vy;
    if (p > 0.0) {
      const double w = std::sqrt(p), c = std::cos(w * tau), s = std::sin(w * tau);
      y = y0 * c + v0(i) / w * s;
      vy = -y0 * w * s + v0(i) * c;
    } else if (p < 0.0) {
      const double k = std::sqrt(-p), c = std::cosh(k * tau), s = std::sinh(k * tau);
      y = y0 * c + v0(i) / k * s;
      vy = y0 * k * s + v0(i) * c;
    } else {
      y = y0 + v0(i) * tau;
      vy = v0(i);
    }
    x(i) = q.center(i) + y;
    v(i) = vy;
  }
}

void quadratic_flight(const ConvexDomain& domain, const QuadraticPotential& q, PhaseState& s,
                      double duration) {
  const double omega = std::sqrt(q.precision.cwiseAbs().maxCoeff());
  const double scale = domain.scale();
  double remaining = duration;
  std::uint64_t events = 0;
  int stalls = 0;
  Vector x, v;
  while (remaining > 0.0) {
    double h = 0.02 * scale / (s.v.norm() + omega * scale + 1e-300);
    if (omega > 0.0) h = std::min(h, 0.05 / omega);
    double t_lo = 0.0, t_hi = -1.0;
    while (t_lo < remaining) {
      const double t_next = std::min(t_lo + h, remaining);
      harmonic_motion(q, s.x, s.v, t_next, x, v);
      if (constraint_value(domain, x) > 0.0) {
        t_hi = t_next;
        break;
      }
      t_lo = t_next;
    }
    if (t_hi < 0.0) {
      harmonic_motion(q, s.x, s.v, remaining, x, v);
      s.x = detail::snap_inside(domain, x);
      s.v = v;
      return;
    }
    while (t_hi - t_lo > 1e-12) {
      const double mid = 0.5 * (t_lo + t_hi);
      harmonic_motion(q, s.x, s.v, mid, x, v);
      (constraint_value(domain, x) > 0.0 ? t_hi : t_lo) = mid;
    }
    harmonic_motion(q, s.x, s.v, t_lo, x, v);
    s.x = detail::snap_inside(domain, x);
    s.v = v;
    for (const auto& n : detail::nearest_face_normals(domain, s.x)) {
      if (n.dot(s.v) > 0.0) {
        s.v = reflect(s.v, n);
        ++s.reflections;
      }
    }
    remaining -= t_lo;
    stalls = t_lo > 0.0 ? 0 : stalls + 1;
    if (++events > kMaxFlightEvents || stalls > 100)
      throw std::runtime_error("flight: reflection events do not terminate");
  }
}

}  // namespace

PhaseState flight(const PhaseState& state, const ModelParams& params, double duration) {
  if (duration < 0.0) throw std::invalid_argument("flight: negative duration");
  if (state.v.size() != state.x.size()) throw std::invalid_argument("flight: state has no velocity");
  PhaseState out = state;
  out.t += duration;
  if (duration == 0.0) return out;
  if (params.potential.is_uniform()) {
    if (!detail::linear_flight(params.domain, out.x, out.v, duration, out.reflections, kMaxFlightEvents))
      throw std::runtime_error("flight: reflection events do not terminate");
  } else {
    quadratic_flight(params.domain, std::get<QuadraticPotential>(params.potential.variant()), out,
                     duration);
  }
  return out;
}

PhaseState step_rhmc(const PhaseState& state, const ModelParams& params, double gamma,
                     double window, RandomStream& rng) {
  if (!(gamma > 0.0)) throw std::invalid_argument("step_rhmc: gamma must be positive");
  const int d = static_cast<int>(state.x.size());
  return step_rhmc_with(
      state, params, window, [&] { return rng.exponential(gamma); },
      [&] { return rng.normal_vector(d); });
}

PhaseState step_kinetic_langevin(const PhaseState& state, const ModelParams& params, double gamma,
                                 double dt, const Vector& xi1, const Vector& xi2) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_kinetic_langevin: dt must be positive");
  if (!(gamma >= 0.0)) throw std::invalid_argument("step_kinetic_langevin: gamma must be >= 0");
  PhaseState out = state;
  const double decay = std::exp(-0.5 * gamma * dt);
  const double noise = std::sqrt(-std::expm1(-gamma * dt));
  const bool forced = !params.potential.is_uniform();
  out.v = decay * out.v + noise * xi1;
  if (forced) out.v -= 0.5 * dt * grad_U(params.potential, out.x);
  if (!detail::linear_flight(params.domain, out.x, out.v, dt, out.reflections, kMaxFlightEvents))
    throw std::runtime_error("step_kinetic_langevin: reflection events do not terminate");
  if (forced) out.v -= 0.5 * dt * grad_U(params.potential, out.x);
  out.v = decay * out.v + noise * xi2;
  out.t += dt;
  return out;
}

PhaseState step_kinetic_langevin(const PhaseState& state, const ModelParams& params, double gamma,
                                 double dt, RandomStream& rng) {
  if (!(gamma > 0.0)) throw std::invalid_argument("step_kinetic_langevin: gamma must be positive");
  const int d = static_cast<int>(state.x.size());
  Vector xi1 = rng.normal_vector(d);
  Vector xi2 = rng.normal_vector(d);
  return step_kinetic_langevin(state, params, gamma, dt, xi1, xi2);
}

PhaseState advance(const PhaseState& state, const SimConfig& config, const ModelParams& params,
                   double duration, RandomStream& rng) {
  if (duration <= 0.0) return state;
  switch (config.process) {
    case Process::billiard: return flight(state, params, duration);
    case Process::rhmc: return step_rhmc(state, params, config.gamma, duration, rng);
    case Process::overdamped:
    case Process::kinetic_langevin: {
      const double dt = config.dt;
      const auto full = static_cast<std::uint64_t>(std::floor(duration / dt + 1e-9));
      const double rest = duration - static_cast<double>(full) * dt;
      PhaseState s = state;
      auto step = [&](double h) {
        s = config.process == Process::overdamped
                ? step_overdamped(s, params, h, rng)
                : step_kinetic_langevin(s, params, config.gamma, h, rng);
      };
      for (std::uint64_t i = 0; i < full; ++i) step(dt);
      if (rest > 1e-9 * dt) step(rest);
      s.t = state.t + duration;
      return s;
    }
  }
  return state;
}

}  // namespace lifts
