#pragma once

#include <optional>
#include <string>
#include <variant>

#include "lifts/geometry.hpp"

namespace lifts {

struct UniformPotential {};

/// U(x) = (x - center)^T diag(precision) (x - center) / 2.
struct QuadraticPotential {
  Vector center;
  Vector precision;
};

/// Potential U of the target measure mu ~ exp(-U) restricted to the domain.
class Potential {
 public:
  static Potential uniform();
  /// A negative precision entry is accepted only when `declared_rho` covers it.
  static Potential quadratic(Vector center, Vector precision,
                             std::optional<double> declared_rho = std::nullopt);

  bool is_uniform() const { return std::holds_alternative<UniformPotential>(variant_); }
  const std::variant<UniformPotential, QuadraticPotential>& variant() const { return variant_; }

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;

  /// Curvature lower bound rho >= 0 with Hess U >= -rho.
  double rho() const { return rho_; }

  std::string describe() const;

 private:
  std::variant<UniformPotential, QuadraticPotential> variant_;
  double rho_ = 0.0;
};

Vector grad_U(const Potential& potential, const Vector& x);

enum class MProvenance { analytic, user_supplied };

/// Domain, potential and the Poincare parameter m (spectral gap of -L).
struct ModelParams {
  ConvexDomain domain;
  Potential potential;
  double m;
  MProvenance m_provenance;

  /// Uses the analytic m when available, otherwise requires `m`. An explicit
  /// `m` always wins and is tagged user-supplied.
  static ModelParams make(ConvexDomain domain, Potential potential,
                          std::optional<double> m = std::nullopt);

  double rho() const { return potential.rho(); }
};

/// pi^2 / L_max^2 for the uniform measure on an interval or box; nullopt otherwise.
std::optional<double> analytic_m(const ConvexDomain& domain, const Potential& potential);
std::optional<double> analytic_m(const ModelParams& params);

}  // namespace lifts
