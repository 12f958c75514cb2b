#include "lifts/constants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lifts {

using std::numbers::pi;

double c0_bound(double T, double m) { return 2.0 * T * T + 43.0 / m; }

double c1_bound(double T, double m, double rho) {
  return 290.0 + 991.0 / (m * T * T) + 43.0 * std::max(1.0 / m, T * T / (pi * pi)) * rho;
}

double decay_rate(double gamma, double C0, double C1) { return gamma / (gamma * gamma * C0 + C1); }

ConstantsReport constants(double T, double m, double rho, std::optional<double> gamma) {
  if (!(T > 0.0)) throw std::invalid_argument("constants: T must be positive");
  if (!(m > 0.0)) throw std::invalid_argument("constants: m must be positive");
  if (!(rho >= 0.0)) throw std::invalid_argument("constants: rho must be nonnegative");
  if (gamma && !(*gamma > 0.0)) throw std::invalid_argument("constants: gamma must be positive");
  ConstantsReport r{};
  r.T = T;
  r.m = m;
  r.rho = rho;
  r.c0 = c0_bound(T, m);
  r.c1 = c1_bound(T, m, rho);
  r.C0 = 2.0 * r.c0;
  r.C1 = 3.0 + 4.0 * r.c1;
  r.gamma_opt = std::sqrt(r.C1 / r.C0);
  r.gamma = gamma.value_or(r.gamma_opt);
  r.nu = decay_rate(r.gamma, r.C0, r.C1);
  r.t_rel_rhmc = 1.0 / r.nu + T;
  r.t_rel_langevin = 2.0 / r.nu + T;
  r.lower_bound = lift_lower_bound(2.0 / m);
  r.c_opt_rhmc = r.t_rel_rhmc / r.lower_bound;
  r.c_opt_langevin = r.t_rel_langevin / r.lower_bound;
  return r;
}

double gamma_opt_closed_form(double m, double rho) {
  if (!(m > 0.0) || !(rho >= 0.0)) throw std::invalid_argument("gamma_opt: need m > 0, rho >= 0");
  return std::sqrt(((1163.0 + 3964.0 / (pi * pi)) * m + 172.0 * rho) / (4.0 * pi * pi + 86.0));
}

double lift_lower_bound(double t_rel_P) {
  if (!(t_rel_P > 0.0)) throw std::invalid_argument("lift_lower_bound: t_rel must be positive");
  return std::sqrt(t_rel_P) / (2.0 * std::numbers::sqrt2);
}

}  // namespace lifts
