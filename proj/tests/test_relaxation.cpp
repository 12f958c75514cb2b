#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>
#include <random>

#include "lifts/constants.hpp"
#include "lifts/relaxation.hpp"

using namespace lifts;
using std::numbers::pi;

TEST_CASE("exact exponential is fitted exactly") {
  std::vector<double> t, y, se;
  for (int i = 0; i <= 50; ++i) {
    t.push_back(0.1 * i);
    y.push_back(3.0 * std::exp(-1.7 * 0.1 * i));
    se.push_back(1e-6);
  }
  const auto e = fit_decay(t, y, se, {});
  CHECK(e.rate == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(e.n_points == 51);
  CHECK(e.ci_low <= e.rate);
  CHECK(e.ci_high >= e.rate);
}

TEST_CASE("fit window stops at the noise floor") {
  std::vector<double> t, y, se;
  for (int i = 0; i <= 100; ++i) {
    t.push_back(0.1 * i);
    y.push_back(std::exp(-0.1 * i));
    se.push_back(0.01);
  }
  const auto e = fit_decay(t, y, se, {});
  // exp(-t) > 0.03 iff t < 3.506
  CHECK(e.t_end == doctest::Approx(3.5));
}

TEST_CASE("negative series are fitted by magnitude") {
  std::vector<double> t, y, se;
  for (int i = 0; i < 30; ++i) {
    t.push_back(i);
    y.push_back(-std::exp(-0.05 * i));
    se.push_back(1e-4);
  }
  CHECK(fit_decay(t, y, se, {}).rate == doctest::Approx(0.05));
}

TEST_CASE("too little signal is reported") {
  std::vector<double> t{0, 1, 2}, y{1, 0.5, 0.25}, se{0.1, 0.1, 0.1};
  CHECK_THROWS_AS(fit_decay(t, y, se, {}), InsufficientSignal);
  std::vector<double> t2, y2, se2;
  for (int i = 0; i < 40; ++i) {
    t2.push_back(i);
    y2.push_back(0.01);
    se2.push_back(0.1);
  }
  CHECK_THROWS_AS(fit_decay(t2, y2, se2, {}), InsufficientSignal);
}

TEST_CASE("least-squares slope") {
  CHECK(ls_slope({0, 1, 2, 3}, {1, 3, 5, 7}) == doctest::Approx(2.0));
  CHECK_THROWS(ls_slope({1}, {1}));
}

TEST_CASE("gamma rules") {
  GammaSpec g;
  CHECK(g.gamma(pi * pi) == doctest::Approx(gamma_opt_closed_form(pi * pi, 0.0)));
  g.rule = GammaRule::fixed;
  g.value = 2.5;
  CHECK(g.gamma(7.0) == 2.5);
  g.rule = GammaRule::scaled;
  CHECK(g.gamma(4.0) == doctest::Approx(5.0));
  CHECK(parse_gamma_rule("scaled") == GammaRule::scaled);
  CHECK_THROWS(parse_gamma_rule("best"));
}

TEST_CASE("optimality report brackets a plausible proxy") {
  const double m = pi * pi;
  const auto rep = optimality_report(Process::rhmc, m, 0.0, 0.8);
  CHECK(rep.lower_bound == doctest::Approx(1 / (2 * pi)));
  CHECK(rep.t_rel_proxy == doctest::Approx(1.25));
  CHECK(rep.upper_bound == doctest::Approx(2 * std::sqrt((4 * pi * pi + 86) / m * (1163 + 3964 / (pi * pi))) + 1.0));
  CHECK(rep.pass);
  CHECK_FALSE(optimality_report(Process::rhmc, m, 0.0, 100.0).pass);
  CHECK_THROWS(optimality_report(Process::overdamped, m, 0.0, 1.0));
}

TEST_CASE("small scaling experiment recovers the diffusive exponent") {
  Budget b = default_budget(Process::overdamped);
  b.chains = 2000;
  b.bootstrap = 20;
  b.threads = 1;
  const auto r = scaling_experiment(Process::overdamped, {1, 2, 3, 4}, {}, b);
  CHECK(r.rows.size() == 4);
  CHECK(r.slope == doctest::Approx(2.0).epsilon(0.15));
  CHECK(r.slope_ci_low <= r.slope);
  CHECK(r.slope_ci_high >= r.slope);
  for (const auto& row : r.rows) CHECK(row.t_rel_proxy >= row.lower_bound);
  CHECK_THROWS(scaling_experiment(Process::overdamped, {1, 2}, {}, b));
}
