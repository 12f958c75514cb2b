#include "lifts/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "lifts/constants.hpp"

namespace lifts {

using std::numbers::pi;

SpaceTimeFunction SpaceTimeFunction::zero(std::shared_ptr<const EigenBasis> basis, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("time horizon T must be positive");
  if (!basis) throw std::invalid_argument("space-time function needs a basis");
  SpaceTimeFunction f;
  f.T = T;
  f.modes.assign(basis->size(), ModeFunction(T));
  f.basis = std::move(basis);
  return f;
}

double SpaceTimeFunction::operator()(double t, const Vector& x) const {
  double v = 0.0;
  for (std::size_t k = 0; k < modes.size(); ++k)
    if (!modes[k].is_zero()) v += modes[k](t) * basis->eval(k, x);
  return v;
}

double SpaceTimeFunction::norm_sq() const {
  double s = 0.0;
  for (const auto& m : modes) s += lifts::norm_sq(m);
  return s;
}

double SpaceTimeFunction::mean() const {
  if (modes.empty()) return 0.0;
  return inner(modes[0], cosine(0, T)) / T;
}

SpaceTimeFunction& SpaceTimeFunction::operator+=(const SpaceTimeFunction& other) {
  if (other.modes.size() != modes.size()) throw std::invalid_argument("mode count mismatch");
  for (std::size_t k = 0; k < modes.size(); ++k) modes[k] += other.modes[k];
  return *this;
}

SpaceTimeFunction& SpaceTimeFunction::operator*=(double s) {
  for (auto& m : modes) m *= s;
  return *this;
}

SpaceTimeFunction random_space_time(std::shared_ptr<const EigenBasis> basis, double T,
                                    std::size_t modes, int frequencies, std::uint64_t seed) {
  if (modes > basis->size()) throw std::invalid_argument("more modes requested than the basis has");
  auto f = SpaceTimeFunction::zero(std::move(basis), T);
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  for (std::size_t k = 0; k < modes; ++k) {
    for (int j = 0; j <= frequencies; ++j) {
      const double a = normal(gen);
      if (k == 0 && j == 0) continue;
      f.modes[k].add_cos(j, a);
    }
  }
  return f;
}

namespace {

void check_mean_zero(const SpaceTimeFunction& f) {
  const double scale = std::sqrt(f.norm_sq() / f.T);
  if (std::abs(f.mean()) > 1e-12 * std::max(1.0, scale))
    throw std::invalid_argument("f is not mean-zero on [0,T] x M");
}

bool low_band(double alpha, double T, double beta) { return alpha * T <= beta; }

}  // namespace

H0Projection project_H0(const SpaceTimeFunction& f) {
  check_mean_zero(f);
  H0Projection out{std::vector<HarmonicCoefficients>(f.size()), f};
  for (std::size_t k = 0; k < f.size(); ++k) {
    const auto& fk = f.modes[k];
    if (fk.is_zero()) continue;
    const double a = f.alpha(k);
    auto& c = out.harmonic[k];
    const ModeFunction ua = harmonic_antisym(a, f.T);
    c.b_a = inner(fk, ua) / norm_sq(ua);
    out.perp.modes[k] -= c.b_a * ua;
    if (a > 0.0) {
      const ModeFunction us = harmonic_sym(a, f.T);
      c.b_s = inner(fk, us) / norm_sq(us);
      out.perp.modes[k] -= c.b_s * us;
    }
  }
  return out;
}

ModeSolution solve_perp_mode(const ModeFunction& f, double alpha) {
  const double T = f.T;
  for (std::size_t j = 1; j < f.sin_coef.size(); ++j)
    if (f.sin_coef[j] != 0.0) throw std::invalid_argument("solve_perp: sine components not supported");
  ModeFunction u(T);
  const double rel = 1e-14 * std::max(alpha, 1.0);

  if (alpha > 0.0) {
    double A = 0.0, B = 0.0;  // f_exp = A e^{-alpha t} + B e^{alpha (t - T)}
    for (const auto& t : f.terms) {
      if (t.power != 0 || t.lo > 0.0 || t.hi < T)
        throw std::invalid_argument("solve_perp: unsupported time term");
      if (std::abs(t.rate + alpha) <= rel)
        A += t.coef * std::exp(alpha * t.anchor);
      else if (std::abs(t.rate - alpha) <= rel)
        B += t.coef * std::exp(alpha * (T - t.anchor));
      else
        throw std::invalid_argument("solve_perp: exponential rate does not match the mode");
    }
    for (std::size_t j = 0; j < f.cos_coef.size(); ++j) {
      const double w = j * pi / T;
      if (f.cos_coef[j] != 0.0) u.add_cos(static_cast<int>(j), f.cos_coef[j] / (alpha * alpha + w * w));
    }
    if (A != 0.0 || B != 0.0) {
      const double E = std::exp(-alpha * T);
      const double s = 1.0 / (2.0 * alpha);
      u.add_term({A * s, 1, 0.0, -alpha, 0.0, 0.0, T});
      u.add_term({-B * s, 1, T, alpha, T, 0.0, T});
      const double up0 = A * s - B * s * (1.0 - alpha * T) * E;
      const double upT = A * s * (1.0 - alpha * T) * E - B * s;
      const double det = alpha * alpha * std::expm1(-2.0 * alpha * T);  // -alpha^2 (1 - E^2)
      const double P = (-alpha * up0 + alpha * E * upT) / det;
      const double Q = (alpha * upT - alpha * E * up0) / det;
      u.add_term({P, 0, 0.0, -alpha, 0.0, 0.0, T});
      u.add_term({Q, 0, 0.0, alpha, T, 0.0, T});
    }
  } else {
    double slope = 0.0, constant = f.cos_coef.empty() ? 0.0 : f.cos_coef[0];
    for (const auto& t : f.terms) {
      if (t.rate != 0.0 || t.power > 1 || t.lo > 0.0 || t.hi < T)
        throw std::invalid_argument("solve_perp: unsupported time term for the constant mode");
      if (t.power == 0) {
        constant += t.coef;
      } else {
        slope += t.coef;
        constant -= t.coef * t.shift;
      }
    }
    // f = c (2t - T) + mean
    const double c = slope / 2.0;
    const double mean = constant + c * T;
    double scale = std::abs(c) * T;
    for (double a : f.cos_coef) scale = std::max(scale, std::abs(a));
    if (std::abs(mean) > 1e-12 * std::max(1.0, scale))
      throw std::invalid_argument("solve_perp: (k, j) = (0, 0) coefficient must vanish");
    double at_zero = 0.0;
    for (std::size_t j = 1; j < f.cos_coef.size(); ++j) {
      const double w = j * pi / T;
      const double a = f.cos_coef[j] / (w * w);
      if (a != 0.0) u.add_cos(static_cast<int>(j), a);
      at_zero += a;
    }
    if (c != 0.0) {
      // -u'' = 2 c s with s = t - T/2, u'(+-T/2) = 0
      u.add_term({-c / 3.0, 3, T / 2.0, 0.0, 0.0, 0.0, T});
      u.add_term({c * T * T / 4.0, 1, T / 2.0, 0.0, 0.0, 0.0, T});
      at_zero -= c * T * T * T / 12.0;
    }
    u.add_cos(0, -at_zero);
  }
  u.simplify();
  ModeSolution sol{-1.0 * u.derivative(), u};
  return sol;
}

std::pair<SpaceTimeFunction, SpaceTimeFunction> solve_perp(const SpaceTimeFunction& f_perp) {
  auto h = SpaceTimeFunction::zero(f_perp.basis, f_perp.T);
  auto g = h;
  for (std::size_t k = 0; k < f_perp.size(); ++k) {
    if (f_perp.modes[k].is_zero()) continue;
    auto s = solve_perp_mode(f_perp.modes[k], f_perp.alpha(k));
    h.modes[k] = std::move(s.h);
    g.modes[k] = std::move(s.g);
  }
  return {h, g};
}

ModeSolution solve_low_antisym(double alpha, double T, double b, double beta) {
  if (!low_band(alpha, T, beta)) throw std::invalid_argument("solve_low_antisym: mode is in the high band");
  ModeSolution s{ModeFunction(T), ModeFunction(T)};
  if (alpha == 0.0) {
    // b (t^2 - T t)
    s.h.add_term({b, 2, T / 2.0, 0.0, 0.0, 0.0, T});
    s.h.add_cos(0, -b * T * T / 4.0);
    return s;
  }
  const double E = std::exp(-alpha * T);
  s.h.add_cos(0, b * (1.0 + E) / alpha);
  s.h.add_term({-b / alpha, 0, 0.0, -alpha, 0.0, 0.0, T});
  s.h.add_term({-b / alpha, 0, 0.0, alpha, T, 0.0, T});
  return s;
}

ModeSolution solve_low_sym(double alpha, double T, double b, double beta) {
  if (!(alpha > 0.0)) throw std::invalid_argument("solve_low_sym: requires alpha > 0");
  if (!low_band(alpha, T, beta)) throw std::invalid_argument("solve_low_sym: mode is in the high band");
  const double f0 = b * (1.0 + std::exp(-alpha * T));
  ModeSolution s{ModeFunction(T), ModeFunction(T)};
  s.h.add_sin(2, f0 * T / (2.0 * pi));
  s.g = (b / (alpha * alpha)) * harmonic_sym(alpha, T);
  s.g.add_cos(2, -f0 / (alpha * alpha));
  return s;
}

HighModeSolution solve_high(double alpha, double T, Parity parity, double b, double beta) {
  if (low_band(alpha, T, beta)) throw std::invalid_argument("solve_high: mode is in the low band");
  const double sigma = parity == Parity::symmetric ? 1.0 : -1.0;
  const double E = std::exp(-alpha * T);
  const double r = 1.0 / alpha;
  HighModeSolution s;
  s.u = parity == Parity::symmetric ? harmonic_sym(alpha, T) : harmonic_antisym(alpha, T);
  s.v = ModeFunction(T);
  // phi(t) int_0^t u on [0, 1/alpha]
  s.v.add_term({alpha * (1.0 - sigma * E), 2, r, 0.0, 0.0, 0.0, r});
  s.v.add_term({-alpha, 2, r, -alpha, 0.0, 0.0, r});
  s.v.add_term({sigma * alpha, 2, r, alpha, T, 0.0, r});
  // -phi(T - t) int_t^T u on [T - 1/alpha, T]
  s.v.add_term({-alpha * (sigma - E), 2, T - r, 0.0, 0.0, T - r, T});
  s.v.add_term({-alpha, 2, T - r, -alpha, 0.0, T - r, T});
  s.v.add_term({sigma * alpha, 2, T - r, alpha, T, T - r, T});
  s.w = s.u - s.v.derivative();
  s.h = b * s.v;
  s.g = (b / (alpha * alpha)) * s.w;
  return s;
}

std::pair<double, double> quadrature_residual(const SpaceTimeFunction& f, const SpaceTimeFunction& h,
                                              const SpaceTimeFunction& g) {
  double res = 0.0, norm = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const auto& fk = f.modes[k];
    const auto& gk = g.modes[k];
    const ModeFunction dh = h.modes[k].derivative();
    if (fk.is_zero() && dh.is_zero() && gk.is_zero()) continue;
    const double a2 = f.alpha(k) * f.alpha(k);
    const TimeRule rule = time_rule({&fk, &dh, &gk});
    res += rule.integrate([&](double t) {
      const double r = fk(t) - dh(t) - a2 * gk(t);
      return r * r;
    });
    norm += rule.integrate([&](double t) {
      const double v = fk(t);
      return v * v;
    });
  }
  return {res, norm};
}

NormReport norm_report(const SpaceTimeFunction& f, const SpaceTimeFunction& h,
                       const SpaceTimeFunction& g, double rho) {
  NormReport n;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double a2 = f.alpha(k) * f.alpha(k);
    n.f += norm_sq(f.modes[k]);
    const auto& hk = h.modes[k];
    const auto& gk = g.modes[k];
    if (!hk.is_zero()) {
      const double hh = norm_sq(hk);
      n.h += hh;
      n.grad_h += a2 * hh;
      n.dt_h += norm_sq(hk.derivative());
    }
    if (!gk.is_zero()) {
      const double gg = norm_sq(gk);
      n.grad_g += a2 * gg;
      n.lap_g += a2 * a2 * gg;
      n.hess_g += f.basis->hessian_norm_sq(k) * gg;
      n.dt_grad_g += a2 * norm_sq(gk.derivative());
    }
  }
  n.hess_surrogate = n.lap_g + rho * n.grad_g;
  return n;
}

DivergenceSolution decompose(const SpaceTimeFunction& f, double rho, double beta) {
  const H0Projection proj = project_H0(f);
  DivergenceSolution sol;
  sol.h = SpaceTimeFunction::zero(f.basis, f.T);
  sol.g = sol.h;
  sol.routes.assign(f.size(), 0u);
  const double T = f.T;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (f.modes[k].is_zero()) continue;
    const double a = f.alpha(k);
    const double fk_norm = std::sqrt(norm_sq(f.modes[k]));
    const double tiny = 1e-12 * fk_norm;
    auto& hk = sol.h.modes[k];
    auto& gk = sol.g.modes[k];
    auto& route = sol.routes[k];

    const ModeFunction& perp = proj.perp.modes[k];
    if (!perp.is_zero()) {
      ModeSolution s = solve_perp_mode(perp, a);
      hk += s.h;
      gk += s.g;
      if (std::sqrt(std::max(0.0, norm_sq(perp))) > tiny) route |= kRoutePerp;
    }
    const auto [b_a, b_s] = proj.harmonic[k];
    if (low_band(a, T, beta)) {
      if (b_a != 0.0) {
        ModeSolution s = solve_low_antisym(a, T, b_a, beta);
        hk += s.h;
        gk += s.g;
        if (std::abs(b_a) * std::sqrt(norm_sq(harmonic_antisym(a, T))) > tiny) route |= kRouteLowAntisym;
      }
      if (a > 0.0 && b_s != 0.0) {
        ModeSolution s = solve_low_sym(a, T, b_s, beta);
        hk += s.h;
        gk += s.g;
        if (std::abs(b_s) * std::sqrt(norm_sq(harmonic_sym(a, T))) > tiny) route |= kRouteLowSym;
      }
    } else {
      if (b_a != 0.0) {
        HighModeSolution s = solve_high(a, T, Parity::antisymmetric, b_a, beta);
        hk += s.h;
        gk += s.g;
        if (std::abs(b_a) * std::sqrt(norm_sq(s.u)) > tiny) route |= kRouteHighAntisym;
      }
      if (b_s != 0.0) {
        HighModeSolution s = solve_high(a, T, Parity::symmetric, b_s, beta);
        hk += s.h;
        gk += s.g;
        if (std::abs(b_s) * std::sqrt(norm_sq(s.u)) > tiny) route |= kRouteHighSym;
      }
    }
    for (double t : {0.0, T}) {
      sol.dirichlet_max = std::max({sol.dirichlet_max, std::abs(hk(t)), std::abs(gk(t))});
    }
  }
  sol.norms = norm_report(f, sol.h, sol.g, rho);
  const auto [res, norm] = quadrature_residual(f, sol.h, sol.g);
  sol.residual = norm > 0.0 ? std::sqrt(res / norm) : 0.0;
  return sol;
}

BoundCheck verify_bounds(const DivergenceSolution& sol, double m, double rho) {
  BoundCheck b;
  const double T = sol.h.T;
  b.c0 = c0_bound(T, m);
  b.c1 = c1_bound(T, m, rho);
  const auto& n = sol.norms;
  if (n.f > 0.0) {
    b.ratio0 = (n.h + n.grad_g) / n.f;
    b.ratio1 = (n.dt_h + n.grad_h + n.dt_grad_g + n.hess_g) / n.f;
  }
  b.pass = b.ratio0 <= b.c0 && b.ratio1 <= b.c1;
  return b;
}

}  // namespace lifts
