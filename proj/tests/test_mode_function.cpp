#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "lifts/mode_function.hpp"
#include "lifts/quadrature.hpp"

using namespace lifts;
using std::numbers::pi;

namespace {
ModeFunction random_function(double T, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  ModeFunction f(T);
  for (int j = 0; j < 6; ++j) f.add_cos(j, n(rng));
  for (int j = 1; j < 5; ++j) f.add_sin(j, n(rng));
  f.add_term({n(rng), 0, 0.0, -3.0 / T, 0.0, 0.0, T});
  f.add_term({n(rng), 2, 0.3 * T, 0.0, 0.0, 0.2 * T, 0.7 * T});
  f.add_term({n(rng), 1, T, 5.0 / T, T, 0.5 * T, T});
  return f;
}
}  // namespace

TEST_CASE("evaluation of the building blocks") {
  const double T = 2.0, a = 1.5;
  const auto ha = harmonic_antisym(a, T), hs = harmonic_sym(a, T);
  for (double t : {0.0, 0.4, 1.9, 2.0}) {
    CHECK(ha(t) == doctest::Approx(std::exp(-a * t) - std::exp(a * (t - T))));
    CHECK(hs(t) == doctest::Approx(std::exp(-a * t) + std::exp(a * (t - T))));
    CHECK(cosine(3, T)(t) == doctest::Approx(std::cos(3 * pi * t / T)));
  }
  CHECK(harmonic_antisym(0.0, T)(0.5) == doctest::Approx(2 * 0.5 - T));
}

TEST_CASE("closed-form inner products agree with an independent Gauss-Legendre rule") {
  std::mt19937_64 rng(1);
  for (double T : {0.1, 1.0, 10.0}) {
    const auto f = random_function(T, rng), g = random_function(T, rng);
    // Plain composite rule over the support breakpoints.
    std::vector<double> edges{0.0, 0.2 * T, 0.5 * T, 0.7 * T, T};
    double ref = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
      for (int p = 0; p < 40; ++p) {
        const double a = edges[i] + (edges[i + 1] - edges[i]) * p / 40.0;
        const double b = edges[i] + (edges[i + 1] - edges[i]) * (p + 1) / 40.0;
        ref += gauss_legendre(20, a, b).integrate([&](double t) { return f(t) * g(t); });
      }
    CHECK(inner(f, g) == doctest::Approx(ref).epsilon(1e-11));
    CHECK(quadrature_inner(f, g) == doctest::Approx(ref).epsilon(1e-11));
    CHECK(norm_sq(f) >= 0.0);
  }
}

TEST_CASE("derivative agrees with finite differences") {
  std::mt19937_64 rng(2);
  const double T = 1.0;
  const auto f = random_function(T, rng);
  const auto df = f.derivative();
  for (double t : {0.05, 0.33, 0.61, 0.9}) {
    const double h = 1e-6;
    CHECK(df(t) == doctest::Approx((f(t + h) - f(t - h)) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("trigonometric orthogonality") {
  const double T = 3.0;
  CHECK(inner(cosine(2, T), cosine(2, T)) == doctest::Approx(T / 2));
  CHECK(inner(cosine(0, T), cosine(0, T)) == doctest::Approx(T));
  CHECK(std::abs(inner(cosine(2, T), cosine(3, T))) < 1e-14);
  ModeFunction s(T);
  s.add_sin(1, 1.0);
  // int_0^T cos(2 pi t/T) sin(pi t/T) dt = 2 * 1 * T / ((1 - 4) pi)
  CHECK(inner(cosine(2, T), s) == doctest::Approx(-2 * T / (3 * pi)));
}

TEST_CASE("arithmetic and simplification") {
  const double T = 1.0;
  auto f = harmonic_sym(2.0, T);
  auto g = f;
  g *= 2.0;
  g -= f;
  g -= f;
  g.simplify();
  CHECK(g.is_zero());
  auto h = cosine(1, T) + 3.0 * harmonic_antisym(1.0, T);
  CHECK(h(0.3) == doctest::Approx(std::cos(pi * 0.3) + 3 * (std::exp(-0.3) - std::exp(0.3 - 1))));
}

TEST_CASE("supports are clipped and breakpoints reported") {
  ModeFunction f(1.0);
  f.add_term({1.0, 0, 0.0, 0.0, 0.0, 0.25, 2.0});
  f.add_term({1.0, 0, 0.0, 0.0, 0.0, 3.0, 4.0});
  CHECK(f.terms.size() == 1);
  CHECK(f(1.0) == 1.0);
  CHECK(f(0.2) == 0.0);
  CHECK(f.breakpoints() == std::vector<double>{0.25});
}

TEST_CASE("exponential moments") {
  for (std::complex<double> mu : {std::complex<double>(-0.3, 0), {-40.0, 0}, {-2.0, 7.0}, {0.0, 0.0}}) {
    const double w = 1.7;
    for (int k = 0; k <= 8; ++k) {
      const auto rule = gauss_legendre(60, 0.0, w);
      const double re = rule.integrate([&](double s) { return (std::pow(s, k) * std::exp(mu * s)).real(); });
      const double im = rule.integrate([&](double s) { return (std::pow(s, k) * std::exp(mu * s)).imag(); });
      const auto m = detail::exp_moment(mu, w, k);
      CHECK(m.real() == doctest::Approx(re).epsilon(1e-12));
      CHECK(m.imag() == doctest::Approx(im).epsilon(1e-12));
    }
  }
}
