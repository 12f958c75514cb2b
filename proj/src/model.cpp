#include "lifts/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace lifts {

Potential Potential::uniform() { return Potential{}; }

Potential Potential::quadratic(Vector center, Vector precision, std::optional<double> declared_rho) {
  if (center.size() == 0 || center.size() != precision.size())
    throw std::invalid_argument("quadratic potential: center and precision sizes differ");
  if (!center.allFinite() || !precision.allFinite())
    throw std::invalid_argument("quadratic potential: non-finite parameters");
  const double floor = std::max(0.0, -precision.minCoeff());
  if (declared_rho) {
    if (!(*declared_rho >= 0.0)) throw std::invalid_argument("declared rho must be nonnegative");
    if (*declared_rho < floor)
      throw std::invalid_argument("quadratic potential: declared rho below -min(precision)");
  } else if (floor > 0.0) {
    throw std::invalid_argument("quadratic potential: indefinite precision needs a declared rho");
  }
  Potential p;
  p.variant_ = QuadraticPotential{std::move(center), std::move(precision)};
  p.rho_ = declared_rho.value_or(floor);
  return p;
}

double Potential::value(const Vector& x) const {
  if (const auto* q = std::get_if<QuadraticPotential>(&variant_)) {
    const Vector d = x - q->center;
    return 0.5 * d.dot(q->precision.cwiseProduct(d));
  }
  return 0.0;
}

Vector Potential::gradient(const Vector& x) const {
  if (const auto* q = std::get_if<QuadraticPotential>(&variant_))
    return q->precision.cwiseProduct(x - q->center);
  return Vector::Zero(x.size());
}

std::string Potential::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (const auto* q = std::get_if<QuadraticPotential>(&variant_)) {
    os << "quadratic:";
    for (Eigen::Index i = 0; i < q->center.size(); ++i) os << (i ? "," : "") << q->center(i);
    os << ";";
    for (Eigen::Index i = 0; i < q->precision.size(); ++i) os << (i ? "," : "") << q->precision(i);
  } else {
    os << "uniform";
  }
  return os.str();
}

Vector grad_U(const Potential& potential, const Vector& x) { return potential.gradient(x); }

std::optional<double> analytic_m(const ConvexDomain& domain, const Potential& potential) {
  if (!potential.is_uniform()) return std::nullopt;
  if (!domain.is_interval() && !domain.is_box()) return std::nullopt;
  const auto [lower, upper] = domain.bounds();
  const double longest = (upper - lower).maxCoeff();
  return std::numbers::pi * std::numbers::pi / (longest * longest);
}

std::optional<double> analytic_m(const ModelParams& params) {
  return analytic_m(params.domain, params.potential);
}

ModelParams ModelParams::make(ConvexDomain domain, Potential potential, std::optional<double> m) {
  if (const auto* q = std::get_if<QuadraticPotential>(&potential.variant());
      q && q->center.size() != domain.dimension())
    throw std::invalid_argument("potential dimension does not match domain");
  if (m) {
    if (!(*m > 0.0) || !std::isfinite(*m)) throw std::invalid_argument("m must be positive");
    return ModelParams{std::move(domain), std::move(potential), *m, MProvenance::user_supplied};
  }
  const auto exact = analytic_m(domain, potential);
  if (!exact)
    throw std::invalid_argument("no analytic Poincare constant for this model; supply m explicitly");
  return ModelParams{std::move(domain), std::move(potential), *exact, MProvenance::analytic};
}

}  // namespace lifts
