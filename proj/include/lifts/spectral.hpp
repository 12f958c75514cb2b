#pragma once

#include <memory>
#include <string>
#include <vector>

#include "lifts/model.hpp"

namespace lifts {

/// Coefficients of a spatial function in an EigenBasis, indexed by mode.
using SpaceCoefficients = Vector;

struct SpatialMode {
  std::vector<int> index;  ///< per-axis cosine frequency
  double alpha;            ///< L e_k = -alpha^2 e_k
};

/// Tensor-product quadrature for the normalised measure mu on a box.
struct TensorQuadrature {
  Matrix points;  ///< dimension x count
  Vector weights; ///< sums to 1
};

/**
 * Neumann eigenbasis of -L for the uniform measure on an interval or box:
 * normalised products of sqrt(2) cos(k_i pi (x_i - l_i) / L_i), with mode
 * 0 the constant function. Modes are sorted by alpha, ties broken
 * lexicographically by multi-index.
 */
class EigenBasis {
 public:
  EigenBasis(const ModelParams& params, int cap);

  std::size_t size() const { return modes_.size(); }
  int dimension() const { return static_cast<int>(lengths_.size()); }
  int cap() const { return cap_; }
  const SpatialMode& mode(std::size_t k) const { return modes_[k]; }
  double alpha(std::size_t k) const { return modes_[k].alpha; }
  const Vector& lengths() const { return lengths_; }
  const Vector& lower() const { return lower_; }

  double eval(std::size_t k, const Vector& x) const;
  Vector gradient(std::size_t k, const Vector& x) const;
  Matrix hessian(std::size_t k, const Vector& x) const;

  /// Exact ||Hess e_k||^2 in L^2(mu) (Frobenius norm pointwise).
  double hessian_norm_sq(std::size_t k) const;

  /// Gauss-Legendre tensor rule with 4 * cap + 8 nodes per axis.
  const TensorQuadrature& quadrature() const { return quadrature_; }

  /// Evaluate sum_k c_k e_k(x).
  double synthesize(const SpaceCoefficients& c, const Vector& x) const;

  /// Diagnostic table: "mode,k_1,...,k_d,alpha".
  std::string alpha_csv() const;

 private:
  double axis_factor(int k, int axis, double x, int derivative) const;

  int cap_;
  Vector lower_;
  Vector lengths_;
  std::vector<SpatialMode> modes_;
  TensorQuadrature quadrature_;
};

EigenBasis build_basis(const ModelParams& params, int cap);

/// Inverse of -L on mean-zero coefficients (divides mode k by alpha_k^2).
SpaceCoefficients apply_G(const EigenBasis& basis, const SpaceCoefficients& c);

struct HessianCheck {
  double lhs;  ///< quadrature of |Hess u|_F^2
  double rhs;  ///< quadrature of (L u)^2 + rho |grad u|^2
  bool pass;
};

/// Hessian bound ||Hess u||^2 <= ||Lu||^2 + rho ||grad u||^2 for u = sum c_k e_k,
/// evaluated by quadrature.
HessianCheck check_hessian_bound(const EigenBasis& basis, const SpaceCoefficients& c,
                                 double rho = 0.0);

}  // namespace lifts
