#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>

#include "lifts/constants.hpp"
#include "lifts/divergence.hpp"

using namespace lifts;
using std::numbers::pi;

namespace {
std::shared_ptr<const EigenBasis> unit_basis(int cap) {
  return std::make_shared<const EigenBasis>(
      build_basis(ModelParams::make(ConvexDomain::interval(0, 1), Potential::uniform()), cap));
}

// f = h' + alpha^2 g for one mode, checked pointwise.
double mode_residual(const ModeFunction& f, const ModeFunction& h, const ModeFunction& g, double alpha) {
  const auto dh = h.derivative();
  double worst = 0;
  for (int i = 0; i <= 200; ++i) {
    const double t = f.T * i / 200.0;
    worst = std::max(worst, std::abs(f(t) - dh(t) - alpha * alpha * g(t)));
  }
  return worst;
}
}  // namespace

TEST_CASE("random test functions have mean zero and the requested size") {
  const auto b = unit_basis(8);
  const auto f = random_space_time(b, 2.0, b->size(), 10, 3);
  CHECK(f.size() == b->size());
  CHECK(std::abs(f.mean()) < 1e-14);
  const auto g = random_space_time(b, 2.0, b->size(), 10, 3);
  CHECK(g.norm_sq() == f.norm_sq());
}

TEST_CASE("H0 projection is orthogonal") {
  const auto b = unit_basis(8);
  const auto f = random_space_time(b, 1.0, b->size(), 12, 5);
  const auto p = project_H0(f);
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double a = b->alpha(k);
    CHECK(std::abs(inner(p.perp.modes[k], harmonic_antisym(a, 1.0))) < 1e-10);
    if (a > 0) CHECK(std::abs(inner(p.perp.modes[k], harmonic_sym(a, 1.0))) < 1e-10);
  }
}

TEST_CASE("perp mode solve satisfies the ODE and Neumann conditions") {
  for (double alpha : {0.0, 0.5, 3.0, 40.0}) {
    const double T = 1.3;
    ModeFunction f(T);
    f.add_cos(1, 1.0);
    f.add_cos(4, -0.5);
    if (alpha > 0) {
      f += 0.7 * harmonic_sym(alpha, T);
      f += -0.2 * harmonic_antisym(alpha, T);
    }
    const auto s = solve_perp_mode(f, alpha);
    const auto u = s.g;
    CHECK(mode_residual(f, s.h, s.g, alpha) < 1e-10);
    CHECK(std::abs(s.h(0)) < 1e-12);
    CHECK(std::abs(s.h(T)) < 1e-12);
    (void)u;
  }
}

TEST_CASE("low-band cases") {
  const double T = 0.5, alpha = pi;  // alpha T < 2
  const auto a = solve_low_antisym(alpha, T, 2.0);
  CHECK(mode_residual(2.0 * harmonic_antisym(alpha, T), a.h, a.g, alpha) < 1e-12);
  CHECK(a.g.is_zero());
  CHECK(std::abs(a.h(0)) < 1e-14);
  CHECK(std::abs(a.h(T)) < 1e-14);

  const auto s = solve_low_sym(alpha, T, -1.5);
  CHECK(mode_residual(-1.5 * harmonic_sym(alpha, T), s.h, s.g, alpha) < 1e-10);
  for (double t : {0.0, T}) {
    CHECK(std::abs(s.h(t)) < 1e-12);
    CHECK(std::abs(s.g(t)) < 1e-12);
  }
}

TEST_CASE("high-band cases") {
  const double T = 1.0, alpha = 5 * pi;
  for (Parity p : {Parity::antisymmetric, Parity::symmetric}) {
    const auto s = solve_high(alpha, T, p, 0.8);
    const auto f = 0.8 * (p == Parity::antisymmetric ? harmonic_antisym(alpha, T) : harmonic_sym(alpha, T));
    CHECK(mode_residual(f, s.h, s.g, alpha) < 1e-9);
    for (double t : {0.0, T}) {
      CHECK(std::abs(s.h(t)) < 1e-12);
      CHECK(std::abs(s.g(t)) < 1e-12);
      CHECK(std::abs(s.v(t)) < 1e-12);
    }
    CHECK(norm_sq(s.v) <= norm_sq(s.u) / (30 * alpha * alpha));
    const auto w = s.u - s.v.derivative();
    CHECK(norm_sq(w - s.w) < 1e-20 * norm_sq(s.u));
  }
}

TEST_CASE("decompose certifies random inputs") {
  const auto b = unit_basis(12);
  for (double T : {0.1, 1.0, 10.0}) {
    const auto f = random_space_time(b, T, b->size(), 16, 17);
    const auto sol = decompose(f);
    CHECK(sol.residual < 1e-10);
    CHECK(sol.dirichlet_max < 1e-10);
    const auto bc = verify_bounds(sol, pi * pi, 0.0);
    CHECK(bc.pass);
    CHECK(bc.c0 == doctest::Approx(c0_bound(T, pi * pi)));
  }
}

TEST_CASE("decompose is linear") {
  const auto b = unit_basis(6);
  const auto f1 = random_space_time(b, 1.0, b->size(), 8, 1);
  const auto f2 = random_space_time(b, 1.0, b->size(), 8, 2);
  auto sum = f1;
  sum *= 2.0;
  sum += f2;
  const auto s1 = decompose(f1), s2 = decompose(f2), s = decompose(sum);
  auto h = s1.h;
  h *= 2.0;
  h += s2.h;
  auto diff = s.h;
  h *= -1.0;
  diff += h;
  CHECK(diff.norm_sq() < 1e-20 * s.h.norm_sq());
}

TEST_CASE("closed-form norms match quadrature") {
  const auto b = unit_basis(6);
  const auto f = random_space_time(b, 2.0, b->size(), 8, 4);
  const auto sol = decompose(f);
  const auto [res, fn] = quadrature_residual(f, sol.h, sol.g);
  CHECK(fn == doctest::Approx(sol.norms.f).epsilon(1e-10));
  CHECK(res < 1e-20 * fn);
  // ||grad g||^2 = sum alpha^2 ||g_k||^2 on the 1D basis
  double grad = 0;
  for (std::size_t k = 0; k < b->size(); ++k) grad += b->alpha(k) * b->alpha(k) * norm_sq(sol.g.modes[k]);
  CHECK(sol.norms.grad_g == doctest::Approx(grad));
}

TEST_CASE("routing by band") {
  const auto b = unit_basis(4);
  const double T = 2.0 / pi;  // alpha_1 T = 2 exactly: tie goes to the low band
  auto f = SpaceTimeFunction::zero(b, T);
  f.modes[1] = harmonic_antisym(b->alpha(1), T);
  f.modes[2] = harmonic_sym(b->alpha(2), T);
  f.modes[3].add_cos(3, 1.0);
  const auto sol = decompose(f);
  CHECK(sol.routes[1] == kRouteLowAntisym);
  CHECK(sol.routes[2] == kRouteHighSym);
  CHECK((sol.routes[3] & kRoutePerp) != 0);  // a cosine also has a harmonic component
  CHECK(sol.routes[0] == 0);
}

TEST_CASE("zero input and mean violations") {
  const auto b = unit_basis(4);
  const auto zero = SpaceTimeFunction::zero(b, 1.0);
  const auto sol = decompose(zero);
  const auto bc = verify_bounds(sol, pi * pi, 0.0);
  CHECK(bc.ratio0 == 0.0);
  CHECK(bc.pass);
  auto f = zero;
  f.modes[0].add_cos(0, 1.0);
  CHECK_THROWS(decompose(f));
}
