#pragma once

#include <optional>

namespace lifts {

/// Explicit space-time divergence constants and the resulting decay bounds.
struct ConstantsReport {
  double T, m, rho;
  double beta = 2.0;
  double c0, c1;   ///< divergence constants
  double C0, C1;   ///< C0 = 2 c0, C1 = 3 + 4 c1
  double gamma;    ///< refresh rate / friction used for nu
  double gamma_opt;
  double nu;       ///< gamma / (gamma^2 C0 + C1)
  double t_rel_rhmc;      ///< 1/nu + T
  double t_rel_langevin;  ///< 2/nu + T
  double lower_bound;     ///< sqrt(2/m) / (2 sqrt 2)
  double c_opt_rhmc;      ///< t_rel_rhmc / lower_bound
  double c_opt_langevin;
};

/// Throws std::invalid_argument unless T > 0, m > 0, rho >= 0 (and gamma > 0 if given).
ConstantsReport constants(double T, double m, double rho, std::optional<double> gamma = std::nullopt);

double c0_bound(double T, double m);
double c1_bound(double T, double m, double rho);
double decay_rate(double gamma, double C0, double C1);

/// sqrt(((1163 + 3964/pi^2) m + 172 rho) / (4 pi^2 + 86)), the optimum at T = pi/sqrt(m).
double gamma_opt_closed_form(double m, double rho);

/// Universal lower bound sqrt(t_rel_P) / (2 sqrt 2) on the relaxation time of a lift.
double lift_lower_bound(double t_rel_P);

}  // namespace lifts
