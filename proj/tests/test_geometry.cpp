#include <doctest.h>

#include <stdexcept>

#include <random>

#include "lifts/geometry.hpp"
#include "lifts/model.hpp"

using namespace lifts;

namespace {
Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

ConvexDomain triangle() {
  Matrix A(3, 2);
  A << -1, 0, 0, -1, 1, 1;
  return ConvexDomain::halfspaces(A, vec({0, 0, 1}));
}
}  // namespace

TEST_CASE("constructors reject malformed domains") {
  CHECK_THROWS_AS(ConvexDomain::interval(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(ConvexDomain::ball(vec({0, 0}), -1), std::invalid_argument);
  CHECK_THROWS_AS(ConvexDomain::box(vec({0, 0}), vec({1, 0})), std::invalid_argument);
  Matrix A(1, 2);
  A << 1, 0;
  CHECK_THROWS_AS(ConvexDomain::halfspaces(A, vec({1})), std::invalid_argument);  // unbounded
}

TEST_CASE("diameters of simple shapes") {
  CHECK(diameter(ConvexDomain::interval(0, 3)) == doctest::Approx(3));
  CHECK(diameter(ConvexDomain::box(vec({0, 0}), vec({3, 4}))) == doctest::Approx(5));
  CHECK(diameter(ConvexDomain::ball(vec({1, 1}), 2)) == doctest::Approx(4));
  CHECK(diameter(triangle()) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("ray exit on the unit disc") {
  const auto d = ConvexDomain::ball(vec({0, 0}), 1);
  const auto hit = ray_exit(d, vec({0, 0}), vec({2, 0}));
  CHECK(hit.time_to_hit == doctest::Approx(0.5));
  CHECK(hit.point(0) == doctest::Approx(1));
  CHECK(hit.normal(0) == doctest::Approx(1));
  CHECK_FALSE(hit.is_corner());
}

TEST_CASE("ray exit into a corner reports every active normal") {
  const auto d = ConvexDomain::box(vec({0, 0}), vec({1, 1}));
  const auto hit = ray_exit(d, vec({0.5, 0.5}), vec({1, 1}));
  CHECK(hit.time_to_hit == doctest::Approx(0.5));
  CHECK(hit.is_corner());
}

TEST_CASE("reflection is an isometry that flips the normal component") {
  const Vector n = vec({0.6, 0.8});
  const Vector v = vec({1.5, -2.0});
  const Vector r = reflect(v, n);
  CHECK(r.norm() == doctest::Approx(v.norm()));
  CHECK(r.dot(n) == doctest::Approx(-v.dot(n)));
  CHECK((reflect(r, n) - v).norm() < 1e-15);
}

TEST_CASE("ray exits from random interior points land on the boundary") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  const std::vector<ConvexDomain> domains{ConvexDomain::ball(vec({0.3, -0.2}), 1.3),
                                          ConvexDomain::ellipsoid(vec({0, 0}), vec({2, 0.5})),
                                          ConvexDomain::box(vec({0, 0}), vec({1, 2})), triangle()};
  for (const auto& d : domains) {
    for (int i = 0; i < 500; ++i) {
      Vector x = d.interior_point();
      for (int tries = 0; tries < 50; ++tries) {
        Vector y = d.interior_point() + 0.9 * vec({u(rng), u(rng)});
        if (constraint_value(d, y) < -1e-6) {
          x = y;
          break;
        }
      }
      const Vector v = vec({u(rng), u(rng)});
      if (v.norm() < 1e-3) continue;
      const auto hit = ray_exit(d, x, v);
      CHECK(hit.time_to_hit > 0);
      CHECK(std::abs(constraint_value(d, hit.point)) < 1e-9);
      CHECK(hit.normal.dot(v) > 0);
      CHECK(hit.normal.norm() == doctest::Approx(1));
    }
  }
}

TEST_CASE("analytic m for intervals and boxes") {
  CHECK(*analytic_m(ConvexDomain::interval(0, 2), Potential::uniform()) == doctest::Approx(M_PI * M_PI / 4));
  CHECK(*analytic_m(ConvexDomain::box(vec({0, 0}), vec({1, 3})), Potential::uniform()) ==
        doctest::Approx(M_PI * M_PI / 9));
  CHECK_FALSE(analytic_m(ConvexDomain::ball(vec({0, 0}), 1), Potential::uniform()).has_value());
  CHECK_THROWS(ModelParams::make(ConvexDomain::ball(vec({0, 0}), 1), Potential::uniform()));
  const auto p = ModelParams::make(ConvexDomain::ball(vec({0, 0}), 1), Potential::uniform(), 2.0);
  CHECK(p.m == 2.0);
  CHECK(p.m_provenance == MProvenance::user_supplied);
}

TEST_CASE("quadratic potential gradient and curvature bound") {
  const auto U = Potential::quadratic(vec({1, 0}), vec({2, 3}));
  CHECK(U.value(vec({2, 1})) == doctest::Approx(0.5 * (2 + 3)));
  CHECK((U.gradient(vec({2, 1})) - vec({2, 3})).norm() < 1e-15);
  CHECK(U.rho() == 0.0);
  CHECK_THROWS(Potential::quadratic(vec({0}), vec({-1})));
  CHECK(Potential::quadratic(vec({0}), vec({-1}), 1.5).rho() == 1.5);
}
