#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>
#include <random>

#include "lifts/quadrature.hpp"
#include "lifts/spectral.hpp"

using namespace lifts;
using std::numbers::pi;

namespace {
ModelParams interval(double a, double b) { return ModelParams::make(ConvexDomain::interval(a, b), Potential::uniform()); }
ModelParams unit_square() {
  return ModelParams::make(ConvexDomain::box(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 2)), Potential::uniform());
}
}  // namespace

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
  const auto rule = gauss_legendre(5, 0.0, 2.0);
  CHECK(rule.integrate([](double x) { return std::pow(x, 9); }) == doctest::Approx(std::pow(2.0, 10) / 10));
  CHECK(rule.integrate([](double) { return 1.0; }) == doctest::Approx(2.0));
}

TEST_CASE("interval eigenvalues are k pi / L") {
  const EigenBasis b(interval(0, 2), 5);
  REQUIRE(b.size() == 6);
  for (std::size_t k = 0; k < b.size(); ++k) CHECK(b.alpha(k) == doctest::Approx(k * pi / 2));
  Vector x(1);
  x << 0.3;
  CHECK(b.eval(2, x) == doctest::Approx(std::sqrt(2.0) * std::cos(2 * pi * 0.3 / 2)));
}

TEST_CASE("box modes are sorted by alpha") {
  const EigenBasis b(unit_square(), 3);
  CHECK(b.size() == 16);
  for (std::size_t k = 1; k < b.size(); ++k) CHECK(b.alpha(k) >= b.alpha(k - 1) - 1e-12);
  CHECK(b.alpha(1) == doctest::Approx(pi / 2));  // (0,1) mode on the long side
}

TEST_CASE("basis is orthonormal under its quadrature") {
  const EigenBasis b(unit_square(), 3);
  const auto& q = b.quadrature();
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      double s = 0;
      for (Eigen::Index n = 0; n < q.points.cols(); ++n)
        s += q.weights(n) * b.eval(i, q.points.col(n)) * b.eval(j, q.points.col(n));
      CHECK(s == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
    }
}

TEST_CASE("gradient and Hessian agree with finite differences") {
  const EigenBasis b(unit_square(), 3);
  Vector x(2);
  x << 0.37, 1.21;
  const double h = 1e-5;
  for (std::size_t k = 0; k < b.size(); ++k) {
    const Vector g = b.gradient(k, x);
    const Matrix H = b.hessian(k, x);
    for (int a = 0; a < 2; ++a) {
      Vector e = Vector::Zero(2);
      e(a) = h;
      CHECK(g(a) == doctest::Approx((b.eval(k, x + e) - b.eval(k, x - e)) / (2 * h)).epsilon(1e-6));
      const Vector dg = (b.gradient(k, x + e) - b.gradient(k, x - e)) / (2 * h);
      for (int c = 0; c < 2; ++c) CHECK(H(c, a) == doctest::Approx(dg(c)).epsilon(1e-6));
    }
    // Laplacian eigen-relation
    CHECK(H.trace() == doctest::Approx(-b.alpha(k) * b.alpha(k) * b.eval(k, x)).epsilon(1e-9));
  }
}

TEST_CASE("apply_G inverts -L on mean-zero coefficients") {
  const EigenBasis b(interval(0, 1), 6);
  Vector c = Vector::LinSpaced(7, 0.0, 3.0);
  const Vector g = apply_G(b, c);
  for (Eigen::Index k = 1; k < 7; ++k) CHECK(g(k) * b.alpha(k) * b.alpha(k) == doctest::Approx(c(k)));
  c(0) = 1.0;
  CHECK_THROWS(apply_G(b, c));
}

TEST_CASE("Hessian bound holds on random spans and is tight in 1D") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n;
  const EigenBasis b1(interval(0, 1), 10), b2(unit_square(), 4);
  for (int t = 0; t < 20; ++t) {
    Vector c1(b1.size()), c2(b2.size());
    for (auto& v : c1) v = n(rng);
    for (auto& v : c2) v = n(rng);
    const auto h1 = check_hessian_bound(b1, c1);
    CHECK(h1.pass);
    CHECK(h1.lhs == doctest::Approx(h1.rhs).epsilon(1e-10));
    CHECK(check_hessian_bound(b2, c2).pass);
    CHECK(check_hessian_bound(b2, c2, 2.0).pass);
  }
}

TEST_CASE("hessian_norm_sq matches quadrature") {
  const EigenBasis b(unit_square(), 3);
  const auto& q = b.quadrature();
  for (std::size_t k = 0; k < b.size(); ++k) {
    double s = 0;
    for (Eigen::Index n = 0; n < q.points.cols(); ++n) s += q.weights(n) * b.hessian(k, q.points.col(n)).squaredNorm();
    CHECK(b.hessian_norm_sq(k) == doctest::Approx(s).epsilon(1e-10));
  }
}

TEST_CASE("unsupported geometries are rejected") {
  const auto p = ModelParams::make(ConvexDomain::ball(Eigen::Vector2d(0, 0), 1.0), Potential::uniform(), 1.0);
  CHECK_THROWS(EigenBasis(p, 3));
}
