#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "lifts/mode_function.hpp"
#include "lifts/spectral.hpp"

namespace lifts {

/// Band cutoff: modes with alpha * T <= beta are "low".
inline constexpr double kDefaultBeta = 2.0;

/// f(t, x) = sum_k f_k(t) e_k(x) on [0, T] x M.
struct SpaceTimeFunction {
  double T = 1.0;
  std::shared_ptr<const EigenBasis> basis;
  std::vector<ModeFunction> modes;

  static SpaceTimeFunction zero(std::shared_ptr<const EigenBasis> basis, double T);

  std::size_t size() const { return modes.size(); }
  double alpha(std::size_t k) const { return basis->alpha(k); }
  double operator()(double t, const Vector& x) const;
  /// Closed-form L^2([0,T] x M) norm squared (Lebesgue in time, mu in space).
  double norm_sq() const;
  /// Time average of the spatial mean, i.e. (1/T) int f_0.
  double mean() const;

  SpaceTimeFunction& operator+=(const SpaceTimeFunction& other);
  SpaceTimeFunction& operator*=(double s);
};

/// Seeded random function with N(0,1) cosine coefficients for modes 0..K-1 and
/// frequencies 0..J, the (0,0) coefficient set to zero.
SpaceTimeFunction random_space_time(std::shared_ptr<const EigenBasis> basis, double T,
                                    std::size_t modes, int frequencies, std::uint64_t seed);

struct HarmonicCoefficients {
  double b_a = 0.0;  ///< on harmonic_antisym
  double b_s = 0.0;  ///< on harmonic_sym (always 0 for alpha = 0)
};

struct H0Projection {
  std::vector<HarmonicCoefficients> harmonic;
  SpaceTimeFunction perp;
};

/// Orthogonal projection of each mode onto its harmonic time functions.
H0Projection project_H0(const SpaceTimeFunction& f);

struct ModeSolution {
  ModeFunction h;
  ModeFunction g;
};

/**
 * Solves alpha^2 u - u'' = f with u'(0) = u'(T) = 0 and returns h = -u', g = u.
 * f must be a cosine series plus multiples of e^{-alpha t} and e^{alpha (t-T)}
 * (for alpha = 0: plus an affine function, with zero time mean overall).
 */
ModeSolution solve_perp_mode(const ModeFunction& f, double alpha);
std::pair<SpaceTimeFunction, SpaceTimeFunction> solve_perp(const SpaceTimeFunction& f_perp);

/// Case alpha T <= beta, f = b * harmonic_antisym: h = int_0^t f, g = 0.
ModeSolution solve_low_antisym(double alpha, double T, double b, double beta = kDefaultBeta);
/// Case 0 < alpha T <= beta, f = b * harmonic_sym: split off f(0) cos(2 pi t / T).
ModeSolution solve_low_sym(double alpha, double T, double b, double beta = kDefaultBeta);

enum class Parity { antisymmetric, symmetric };

struct HighModeSolution {
  ModeFunction h, g;
  ModeFunction u;  ///< harmonic time function (unit coefficient)
  ModeFunction v;  ///< cutoff-weighted primitive, v(0) = v(T) = 0
  ModeFunction w;  ///< u - v'
};

/// Case alpha T > beta, f = b * u with u the harmonic of the given parity.
HighModeSolution solve_high(double alpha, double T, Parity parity, double b,
                            double beta = kDefaultBeta);

/// Per-mode route bits reported by decompose.
enum RouteBits : std::uint32_t {
  kRoutePerp = 1u << 0,
  kRouteLowAntisym = 1u << 1,
  kRouteLowSym = 1u << 2,
  kRouteHighAntisym = 1u << 3,
  kRouteHighSym = 1u << 4,
};

struct NormReport {
  double f = 0.0;
  double h = 0.0;
  double dt_h = 0.0;
  double grad_h = 0.0;
  double grad_g = 0.0;
  double dt_grad_g = 0.0;
  double hess_g = 0.0;          ///< exact ||Hess g||^2
  double lap_g = 0.0;           ///< ||L g||^2
  double hess_surrogate = 0.0;  ///< ||L g||^2 + rho ||grad g||^2
};

struct DivergenceSolution {
  SpaceTimeFunction h;
  SpaceTimeFunction g;
  double residual = 0.0;       ///< ||f - (dt h - L g)|| / ||f|| by quadrature
  double dirichlet_max = 0.0;  ///< max_k |h_k|, |g_k| at t = 0, T
  NormReport norms;
  std::vector<std::uint32_t> routes;
};

/// f = dt h - L g with h, g vanishing at t = 0 and t = T.
DivergenceSolution decompose(const SpaceTimeFunction& f, double rho = 0.0,
                             double beta = kDefaultBeta);

/// ||f - (dt h - L g)||^2 and ||f||^2 under the composite quadrature.
std::pair<double, double> quadrature_residual(const SpaceTimeFunction& f,
                                              const SpaceTimeFunction& h,
                                              const SpaceTimeFunction& g);

NormReport norm_report(const SpaceTimeFunction& f, const SpaceTimeFunction& h,
                       const SpaceTimeFunction& g, double rho);

struct BoundCheck {
  double ratio0 = 0.0;  ///< (||h||^2 + ||grad g||^2) / ||f||^2
  double ratio1 = 0.0;  ///< (||dt h||^2 + ||grad h||^2 + ||dt grad g||^2 + ||Hess g||^2) / ||f||^2
  double c0 = 0.0;
  double c1 = 0.0;
  bool pass = false;
};

/// Ratios are defined as 0 for f = 0.
BoundCheck verify_bounds(const DivergenceSolution& sol, double m, double rho);

}  // namespace lifts
