#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>

#include "lifts/constants.hpp"

using namespace lifts;
using std::numbers::pi;

TEST_CASE("constants at T = pi, m = 1") {
  const auto r = constants(3.14159265, 1.0, 0.0);
  CHECK(r.C0 == doctest::Approx(125.478).epsilon(1e-5));
  CHECK(r.C1 == doctest::Approx(1564.62).epsilon(2e-5));
  CHECK(r.C1 == doctest::Approx(1163 + 3964 / (pi * pi)).epsilon(1e-8));  // T is pi to 9 digits
  CHECK(r.gamma_opt == doctest::Approx(3.531).epsilon(1e-3));
}

TEST_CASE("divergence constants from their definitions") {
  const double T = 0.7, m = 3.0, rho = 2.0;
  CHECK(c0_bound(T, m) == doctest::Approx(2 * T * T + 43 / m));
  const double c1 = 290 + 991 / (m * T * T) + 43 * std::max(1 / m, T * T / (pi * pi)) * rho;
  CHECK(c1_bound(T, m, rho) == doctest::Approx(c1));
  const auto r = constants(T, m, rho);
  CHECK(r.C0 == doctest::Approx(2 * r.c0));
  CHECK(r.C1 == doctest::Approx(3 + 4 * r.c1));
}

TEST_CASE("gamma_opt maximises the decay rate") {
  const auto r = constants(1.3, 2.0, 1.0);
  CHECK(r.gamma_opt == doctest::Approx(std::sqrt(r.C1 / r.C0)));
  const double best = decay_rate(r.gamma_opt, r.C0, r.C1);
  CHECK(best == doctest::Approx(1 / (2 * std::sqrt(r.C0 * r.C1))));
  for (double f : {0.5, 0.9, 1.1, 2.0}) CHECK(decay_rate(f * r.gamma_opt, r.C0, r.C1) < best);
}

TEST_CASE("relaxation bounds and optimality factors") {
  const auto r = constants(pi, 1.0, 0.0, 2.0);
  CHECK(r.nu == doctest::Approx(2 / (4 * r.C0 + r.C1)));
  CHECK(r.t_rel_rhmc == doctest::Approx(1 / r.nu + pi));
  CHECK(r.t_rel_langevin == doctest::Approx(2 / r.nu + pi));
  CHECK(r.lower_bound == doctest::Approx(0.5));
  CHECK(r.c_opt_rhmc == doctest::Approx(r.t_rel_rhmc / 0.5));
  CHECK(lift_lower_bound(2 / (pi * pi)) == doctest::Approx(1 / (2 * pi)));
}

TEST_CASE("closed-form gamma_opt matches the optimum at T = pi / sqrt(m)") {
  for (double m : {0.25, 1.0, 7.0})
    for (double rho : {0.0, 3.0})
      CHECK(gamma_opt_closed_form(m, rho) == doctest::Approx(constants(pi / std::sqrt(m), m, rho).gamma_opt));
}

TEST_CASE("invalid inputs") {
  CHECK_THROWS_AS(constants(0.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(constants(1.0, -1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(constants(1.0, 1.0, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(constants(1.0, 1.0, 0.0, 0.0), std::invalid_argument);
}
