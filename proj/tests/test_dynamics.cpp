#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>

#include "lifts/dynamics.hpp"
#include "lifts/ensemble.hpp"

using namespace lifts;
using std::numbers::pi;

namespace {
Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}
ModelParams unit_interval() { return ModelParams::make(ConvexDomain::interval(0, 1), Potential::uniform()); }
ModelParams disc() { return ModelParams::make(ConvexDomain::ball(vec({0, 0}), 1), Potential::uniform(), 1.0); }
}  // namespace

TEST_CASE("overdamped step folds large displacements back into the interval") {
  const auto p = unit_interval();
  PhaseState s{vec({0.2}), Vector()};
  const auto next = step_overdamped(s, p, 1.0, vec({2.5}));  // 0.2 + 2.5 = 2.7 -> 0.7
  CHECK(next.x(0) == doctest::Approx(0.7));
  const auto back = step_overdamped(s, p, 1.0, vec({-0.5}));  // -0.3 -> 0.3
  CHECK(back.x(0) == doctest::Approx(0.3));
}

TEST_CASE("billiard flight in an interval is periodic") {
  const auto p = unit_interval();
  PhaseState s{vec({0.25}), vec({1.0})};
  const auto out = flight(s, p, 2.0);
  CHECK(out.x(0) == doctest::Approx(0.25));
  CHECK(out.v(0) == doctest::Approx(1.0));
  CHECK(out.reflections == 2);
  CHECK(out.t == doctest::Approx(2.0));
}

TEST_CASE("billiard flight is reversible") {
  const auto p = disc();
  PhaseState s{vec({0.1, -0.3}), vec({0.7, 1.9})};
  auto out = flight(s, p, 13.7);
  out.v = -out.v;
  const auto back = flight(out, p, 13.7);
  CHECK((back.x - s.x).norm() < 1e-9);
  CHECK((back.v + s.v).norm() < 1e-9);
}

TEST_CASE("processes stay confined and billiards conserve speed") {
  const auto p = ModelParams::make(ConvexDomain::box(vec({0, 0}), vec({1, 2})), Potential::uniform());
  for (Process proc : {Process::overdamped, Process::billiard, Process::rhmc, Process::kinetic_langevin}) {
    SimConfig c;
    c.process = proc;
    c.gamma = 1.5;
    c.dt = 0.01;
    RandomStream rng(1, 0, StreamPurpose::dynamics);
    PhaseState s{vec({0.5, 1.0}), has_velocity(proc) ? vec({3.0, -1.0}) : Vector()};
    const double speed = s.v.size() ? s.v.norm() : 0.0;
    for (int i = 0; i < 200; ++i) {
      s = advance(s, c, p, 0.1, rng);
      CHECK(contains(p.domain, s.x));
      if (proc == Process::billiard) CHECK(s.v.norm() == doctest::Approx(speed).epsilon(1e-12));
    }
    CHECK(s.t == doctest::Approx(20.0));
  }
}

TEST_CASE("RHMC refreshes at rate gamma") {
  const auto p = unit_interval();
  RandomStream rng(2, 0, StreamPurpose::dynamics);
  PhaseState s{vec({0.5}), vec({1.0})};
  const double gamma = 3.0, horizon = 2000.0;
  s = step_rhmc(s, p, gamma, horizon, rng);
  // Poisson(6000): five standard deviations is about 387.
  CHECK(std::abs(static_cast<double>(s.refreshes) - gamma * horizon) < 400.0);
}

TEST_CASE("RHMC with scripted refresh times") {
  const auto p = unit_interval();
  PhaseState s{vec({0.0}), vec({1.0})};
  std::vector<double> waits{0.3, 0.4, 10.0};
  std::size_t i = 0;
  const auto out = step_rhmc_with(s, p, 1.0, [&] { return waits[i++]; }, [] { return vec({-0.5}); });
  CHECK(out.refreshes == 2);
  CHECK(out.x(0) == doctest::Approx(0.05));  // 0.3 -> 0.1 -> -0.05 reflected at 0
  CHECK(out.v(0) == doctest::Approx(0.5));
}

TEST_CASE("kinetic Langevin with gamma = 0 and no noise is a billiard") {
  const auto p = unit_interval();
  PhaseState s{vec({0.2}), vec({0.9})};
  for (int i = 0; i < 10; ++i) s = step_kinetic_langevin(s, p, 0.0, 0.1, vec({0.0}), vec({0.0}));
  const auto ref = flight(PhaseState{vec({0.2}), vec({0.9})}, p, 1.0);
  CHECK(s.x(0) == doctest::Approx(ref.x(0)));
  CHECK(s.v(0) == doctest::Approx(ref.v(0)));
}

TEST_CASE("quadratic flight follows harmonic motion") {
  const auto p = ModelParams::make(ConvexDomain::interval(-10, 10), Potential::quadratic(vec({0}), vec({4})), 1.0);
  PhaseState s{vec({1.0}), vec({0.0})};
  const auto out = flight(s, p, 0.7);
  CHECK(out.x(0) == doctest::Approx(std::cos(2 * 0.7)));
  CHECK(out.v(0) == doctest::Approx(-2 * std::sin(2 * 0.7)));
  CHECK(out.reflections == 0);
}

TEST_CASE("step-size bias of kinetic Langevin in a quadratic well is small") {
  // Stationary variance of x is 1/precision; the splitting error is O(dt^2).
  const auto p = ModelParams::make(ConvexDomain::interval(-50, 50), Potential::quadratic(vec({0}), vec({1})), 1.0);
  SimConfig c;
  c.process = Process::kinetic_langevin;
  c.gamma = 1.0;
  c.dt = 0.05;
  RandomStream rng(4, 0, StreamPurpose::dynamics);
  PhaseState s{vec({0.0}), vec({0.0})};
  s = advance(s, c, p, 50.0, rng);
  double sum = 0;
  const int n = 40000;
  for (int i = 0; i < n; ++i) {
    s = advance(s, c, p, 1.0, rng);
    sum += s.x(0) * s.x(0);
  }
  CHECK(sum / n == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("ensemble output does not depend on the thread count") {
  const auto p = unit_interval();
  SimConfig c;
  c.process = Process::rhmc;
  c.gamma = 2.0;
  c.seed = 5;
  const std::vector<Observable> obs{{"x", [](const PhaseState& s) { return s.x(0); }}};
  const auto grid = uniform_grid(1.0, 10);
  const auto a = run_ensemble(c, p, 64, point_mass(vec({0.0}), c.process), obs, grid, 1);
  const auto b = run_ensemble(c, p, 64, point_mass(vec({0.0}), c.process), obs, grid, 3);
  CHECK(a.mean == b.mean);
  CHECK(a.per_chain[0] == b.per_chain[0]);
  CHECK(a.times.size() == 11);
}

TEST_CASE("overdamped ensemble decays like the first Neumann mode") {
  const auto p = unit_interval();
  SimConfig c;
  c.process = Process::overdamped;
  c.dt = 0.01;
  c.seed = 6;
  const std::vector<Observable> obs{{"e1", [](const PhaseState& s) { return std::sqrt(2.0) * std::cos(pi * s.x(0)); }}};
  const auto res = run_ensemble(c, p, 20000, point_mass(vec({0.0}), c.process), obs, {0.0, 0.1, 0.2});
  for (int j = 0; j < 3; ++j) {
    const double expected = std::sqrt(2.0) * std::exp(-pi * pi / 2 * res.times[j]);
    CHECK(std::abs(res.mean(0, j) - expected) < 5 * res.std_error(0, j) + 1e-12);
  }
}

TEST_CASE("random streams are reproducible and keyed") {
  RandomStream a(1, 2, StreamPurpose::dynamics), b(1, 2, StreamPurpose::dynamics), c(1, 3, StreamPurpose::dynamics);
  const double x = a.normal();
  CHECK(x == b.normal());
  CHECK(x != c.normal());
  CHECK(a.exponential(2.0) > 0);
}

TEST_CASE("configuration validation") {
  SimConfig c;
  c.dt = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  CHECK_THROWS_AS(parse_process("hmc"), std::invalid_argument);
  CHECK(parse_process("langevin") == Process::kinetic_langevin);
}
