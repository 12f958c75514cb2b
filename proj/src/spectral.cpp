#include "lifts/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "lifts/quadrature.hpp"

namespace lifts {

using std::numbers::pi;

EigenBasis::EigenBasis(const ModelParams& params, int cap) : cap_(cap) {
  if (cap < 1) throw std::invalid_argument("build_basis: mode cap must be >= 1");
  if (!params.potential.is_uniform())
    throw std::invalid_argument("build_basis: only the uniform potential has an analytic basis");
  if (!params.domain.is_interval() && !params.domain.is_box())
    throw std::invalid_argument("build_basis: only interval and box domains are supported");
  auto [lo, hi] = params.domain.bounds();
  lower_ = lo;
  lengths_ = hi - lo;
  const int dim = static_cast<int>(lengths_.size());

  std::vector<int> index(dim, 0);
  for (;;) {
    double a2 = 0.0;
    for (int i = 0; i < dim; ++i) a2 += (index[i] / lengths_(i)) * (index[i] / lengths_(i));
    modes_.push_back({index, pi * std::sqrt(a2)});
    int axis = dim - 1;
    while (axis >= 0 && index[axis] == cap) index[axis--] = 0;
    if (axis < 0) break;
    ++index[axis];
  }
  std::stable_sort(modes_.begin(), modes_.end(), [](const SpatialMode& a, const SpatialMode& b) {
    const double tol = 1e-12 * std::max(a.alpha, b.alpha);
    if (std::abs(a.alpha - b.alpha) > tol) return a.alpha < b.alpha;
    return a.index < b.index;
  });

  const int nodes = 4 * cap + 8;
  std::vector<QuadratureRule> rules;
  std::size_t count = 1;
  for (int i = 0; i < dim; ++i) {
    rules.push_back(gauss_legendre(nodes, lower_(i), lower_(i) + lengths_(i)));
    count *= nodes;
  }
  const double volume = lengths_.prod();
  quadrature_.points.resize(dim, static_cast<Eigen::Index>(count));
  quadrature_.weights.resize(static_cast<Eigen::Index>(count));
  std::vector<int> at(dim, 0);
  for (std::size_t p = 0; p < count; ++p) {
    double w = 1.0 / volume;
    for (int i = 0; i < dim; ++i) {
      quadrature_.points(i, static_cast<Eigen::Index>(p)) = rules[i].nodes[at[i]];
      w *= rules[i].weights[at[i]];
    }
    quadrature_.weights(static_cast<Eigen::Index>(p)) = w;
    int axis = dim - 1;
    while (axis >= 0 && at[axis] == nodes - 1) at[axis--] = 0;
    if (axis >= 0) ++at[axis];
  }
}

double EigenBasis::axis_factor(int k, int axis, double x, int derivative) const {
  if (k == 0) return derivative == 0 ? 1.0 : 0.0;
  const double w = k * pi / lengths_(axis);
  const double s = w * (x - lower_(axis));
  const double amp = std::numbers::sqrt2;
  switch (derivative) {
    case 0: return amp * std::cos(s);
    case 1: return -amp * w * std::sin(s);
    default: return -amp * w * w * std::cos(s);
  }
}

double EigenBasis::eval(std::size_t k, const Vector& x) const {
  const auto& idx = modes_[k].index;
  double v = 1.0;
  for (int i = 0; i < dimension(); ++i) v *= axis_factor(idx[i], i, x(i), 0);
  return v;
}

Vector EigenBasis::gradient(std::size_t k, const Vector& x) const {
  const auto& idx = modes_[k].index;
  const int dim = dimension();
  Vector g(dim);
  for (int j = 0; j < dim; ++j) {
    double v = 1.0;
    for (int i = 0; i < dim; ++i) v *= axis_factor(idx[i], i, x(i), i == j ? 1 : 0);
    g(j) = v;
  }
  return g;
}

Matrix EigenBasis::hessian(std::size_t k, const Vector& x) const {
  const auto& idx = modes_[k].index;
  const int dim = dimension();
  Matrix h(dim, dim);
  for (int a = 0; a < dim; ++a) {
    for (int b = a; b < dim; ++b) {
      double v = 1.0;
      for (int i = 0; i < dim; ++i) {
        const int order = (i == a) + (i == b);
        v *= axis_factor(idx[i], i, x(i), order);
      }
      h(a, b) = h(b, a) = v;
    }
  }
  return h;
}

double EigenBasis::hessian_norm_sq(std::size_t k) const {
  // Entry (a, b) is a product of normalised cos/sin factors with amplitude
  // lambda_a^(1/2) lambda_b^(1/2) (lambda_a for a == b), lambda_i = (k_i pi / L_i)^2.
  const auto& idx = modes_[k].index;
  double total = 0.0;
  for (int a = 0; a < dimension(); ++a) {
    const double la = std::pow(idx[a] * pi / lengths_(a), 2);
    for (int b = 0; b < dimension(); ++b) total += la * std::pow(idx[b] * pi / lengths_(b), 2);
  }
  return total;
}

double EigenBasis::synthesize(const SpaceCoefficients& c, const Vector& x) const {
  double v = 0.0;
  for (std::size_t k = 0; k < size(); ++k)
    if (c(static_cast<Eigen::Index>(k)) != 0.0) v += c(static_cast<Eigen::Index>(k)) * eval(k, x);
  return v;
}

std::string EigenBasis::alpha_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "mode";
  for (int i = 0; i < dimension(); ++i) os << ",k" << (i + 1);
  os << ",alpha\n";
  for (std::size_t k = 0; k < size(); ++k) {
    os << k;
    for (int v : modes_[k].index) os << "," << v;
    os << "," << modes_[k].alpha << "\n";
  }
  return os.str();
}

EigenBasis build_basis(const ModelParams& params, int cap) { return EigenBasis(params, cap); }

SpaceCoefficients apply_G(const EigenBasis& basis, const SpaceCoefficients& c) {
  if (static_cast<std::size_t>(c.size()) != basis.size())
    throw std::invalid_argument("apply_G: coefficient count does not match basis");
  if (std::abs(c(0)) > 1e-14) throw std::invalid_argument("apply_G: input is not mean-zero");
  SpaceCoefficients out = SpaceCoefficients::Zero(c.size());
  for (std::size_t k = 1; k < basis.size(); ++k) {
    const double a = basis.alpha(k);
    out(static_cast<Eigen::Index>(k)) = c(static_cast<Eigen::Index>(k)) / (a * a);
  }
  return out;
}

HessianCheck check_hessian_bound(const EigenBasis& basis, const SpaceCoefficients& c, double rho) {
  if (static_cast<std::size_t>(c.size()) != basis.size())
    throw std::invalid_argument("check_hessian_bound: coefficient count does not match basis");
  const auto& q = basis.quadrature();
  const int dim = basis.dimension();
  double lhs = 0.0, rhs = 0.0;
  for (Eigen::Index p = 0; p < q.points.cols(); ++p) {
    const Vector x = q.points.col(p);
    Matrix hess = Matrix::Zero(dim, dim);
    Vector grad = Vector::Zero(dim);
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const double ck = c(static_cast<Eigen::Index>(k));
      if (ck == 0.0) continue;
      hess += ck * basis.hessian(k, x);
      if (rho != 0.0) grad += ck * basis.gradient(k, x);
    }
    const double w = q.weights(p);
    lhs += w * hess.squaredNorm();
    const double lap = hess.trace();
    rhs += w * (lap * lap + rho * grad.squaredNorm());
  }
  return {lhs, rhs, lhs <= rhs * (1.0 + 1e-8) + 1e-12};
}

}  // namespace lifts
