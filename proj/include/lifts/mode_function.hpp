#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace lifts {

/// coef * (t - shift)^power * exp(rate * (t - anchor)) restricted to [lo, hi).
struct ExpPolyTerm {
  double coef = 0.0;
  int power = 0;
  double shift = 0.0;
  double rate = 0.0;
  double anchor = 0.0;
  double lo = 0.0;
  double hi = 0.0;

  /// Value of the analytic expression, ignoring the support.
  double value(double t) const;
};

/**
 * A real function on [0, T]:
 *   sum_j a_j cos(j pi t / T) + sum_j b_j sin(j pi t / T) + sum_i term_i(t).
 * Supports are half-open [lo, hi) except that hi == T includes T.
 */
struct ModeFunction {
  double T = 1.0;
  std::vector<double> cos_coef;
  std::vector<double> sin_coef;
  std::vector<ExpPolyTerm> terms;

  ModeFunction() = default;
  explicit ModeFunction(double horizon) : T(horizon) {}

  double operator()(double t) const;
  ModeFunction derivative() const;

  void add_cos(int j, double a);
  void add_sin(int j, double b);
  /// Appends a term, clipping its support to [0, T]; empty supports are dropped.
  void add_term(ExpPolyTerm term);
  /// Merges terms with identical shape and drops zero coefficients.
  void simplify();

  bool is_zero() const;
  /// Support endpoints strictly inside (0, T).
  std::vector<double> breakpoints() const;
  /// Largest |rate| among the terms.
  double max_rate() const;

  ModeFunction& operator+=(const ModeFunction& other);
  ModeFunction& operator-=(const ModeFunction& other);
  ModeFunction& operator*=(double s);
};

ModeFunction operator+(ModeFunction a, const ModeFunction& b);
ModeFunction operator-(ModeFunction a, const ModeFunction& b);
ModeFunction operator*(double s, ModeFunction a);

/// Closed-form L^2([0, T]) inner product.
double inner(const ModeFunction& f, const ModeFunction& g);
double norm_sq(const ModeFunction& f);

/// e^{-alpha t} - e^{alpha (t - T)} for alpha > 0; 2t - T for alpha = 0.
ModeFunction harmonic_antisym(double alpha, double T);
/// e^{-alpha t} + e^{alpha (t - T)}, alpha > 0.
ModeFunction harmonic_sym(double alpha, double T);
/// cos(j pi t / T).
ModeFunction cosine(int j, double T);

/**
 * Composite Gauss-Legendre rule on [0, T] used as an independent check of
 * the closed forms: 16 uniform panels, panel edges at every breakpoint, and
 * geometric grading at scale 1/rate next to each edge, 32 nodes per panel.
 */
struct TimeRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  double integrate(const std::function<double(double)>& f) const;
};

TimeRule time_rule(double T, std::vector<double> breakpoints, double rate);
TimeRule time_rule(const std::vector<const ModeFunction*>& functions);

double quadrature_inner(const ModeFunction& f, const ModeFunction& g);

namespace detail {
/// Integral over s in [0, w] of s^k exp(mu s), Re mu <= 0.
std::complex<double> exp_moment(std::complex<double> mu, double w, int k);
/// exp_moment for k = 0..kmax into out[0..kmax].
void exp_moments(std::complex<double> mu, double w, int kmax, std::complex<double>* out);
}  // namespace detail

}  // namespace lifts
