#include <cmath>
#include <vector>

#include "doctest.h"
#include "glimm/errors.hpp"
#include "glimm/riemann_generalized.hpp"
#include "helpers.hpp"

using namespace glimm;

namespace {

double log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

GeneralizedFan burgers_fan(const SystemDef& sys, double t0, double x0, double ul, double ur) {
  return make_generalized(solve_classical(sys, t0, x0, State{ul}, State{ur}));
}

}  // namespace

TEST_CASE("generalized solution without source is the classical fan") {
  auto sys = testing::burgers();
  const GeneralizedFan g = burgers_fan(*sys, 0.3, 0.1, 0.0, 1.0);
  for (double xi : {-0.5, 0.0, 0.25, 0.5, 0.99, 1.5}) {
    const double t = 0.35;
    const double x = 0.1 + xi * 0.05;
    CHECK(evaluate_generalized(g, t, x) == sample_fan(g.fan, (x - 0.1) / (t - 0.3)));
  }
}

TEST_CASE("generalized solution: constant state grows by the frozen source") {
  auto sys = testing::burgers({ScalarSourceKind::Constant, 1.0, 0.0});
  const GeneralizedFan g = burgers_fan(*sys, 0.0, 0.0, 0.0, 0.0);
  CHECK(evaluate_generalized(g, 0.1, 0.0)[0] == doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("generalized solution: shock with exponential source, right side") {
  auto sys = testing::burgers({ScalarSourceKind::Exponential, 1.0, 1.0});
  const GeneralizedFan g = burgers_fan(*sys, 0.0, 0.0, 1.0, 0.0);
  // xi = 1 is right of the shock (speed 1/2); q frozen at t0 = 0 gives 1
  CHECK(evaluate_generalized(g, 0.2, 0.2)[0] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(evaluate_generalized(g, 0.2, 0.0)[0] == doctest::Approx(1.2).epsilon(1e-15));
}

TEST_CASE("cfl ratio") {
  auto b = testing::burgers();
  CHECK(cfl_check(*b, 1.0, 1.0, {State{0.5}, State{-0.25}}) == doctest::Approx(0.5));
  auto e = testing::euler14();
  const State rest = to_conserved(1.4, {1.0, 0.0, 1.0});
  CHECK(cfl_check(*e, 0.5, 1.0, {rest}) == doctest::Approx(0.5 * std::sqrt(1.4)).epsilon(1e-14));
  CHECK(cfl_check(*e, 1e-9, 1.0, {rest}) < 1e-8);
}

TEST_CASE("test function and its derivatives") {
  const TestFunction th(0.0, 2.0, -1.0, 1.0);
  CHECK(th(1.0, 0.0) == 1.0);
  CHECK(th(2.5, 0.0) == 0.0);
  CHECK(th(1.0, 1.0) == 0.0);
  const double h = 1e-6;
  for (double t : {0.3, 1.1, 1.7})
    for (double x : {-0.6, 0.2, 0.9}) {
      CHECK(th.dt(t, x) == doctest::Approx((th(t + h, x) - th(t - h, x)) / (2 * h)).epsilon(1e-7));
      CHECK(th.dx(t, x) == doctest::Approx((th(t, x + h) - th(t, x - h)) / (2 * h)).epsilon(1e-7));
    }
  // integral of (1 - z^2)^2 over [-1, 1] is 16 / 15
  double mass = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) mass += th(0.0 + (i + 0.5) * 2.0 / n, 0.0) * 2.0 / n;
  CHECK(mass == doctest::Approx(th.time_mass()).epsilon(1e-8));
  CHECK_THROWS_AS(TestFunction(1.0, 1.0, 0.0, 1.0), ConfigError);
}

TEST_CASE("residual of a constant fan is pure boundary bookkeeping") {
  auto sys = testing::burgers();
  auto eul = testing::euler14();
  const TestFunction th(-0.5, 0.7, -0.4, 0.6);
  {
    const GeneralizedFan g = burgers_fan(*sys, 0.1, 0.05, 0.7, 0.7);
    const ResidualBreakdown rb = residual_delta(*sys, g, 0.02, 0.04, th, 16);
    CHECK(std::abs(rb.remainder[0]) <= 1e-10);
  }
  {
    const State u = to_conserved(1.4, {0.8, 0.3, 1.2});
    const GeneralizedFan g = make_generalized(solve_classical(*eul, 0.0, 0.0, u, u));
    const ResidualBreakdown rb = residual_delta(*eul, g, 0.01, 0.03, th, 16);
    CHECK(norm_inf(rb.remainder) <= 1e-10);
  }
}

TEST_CASE("residual quadrature self-convergence") {
  auto sys = testing::burgers({ScalarSourceKind::Exponential, 1.0, 1.0});
  const TestFunction th(-1.0, 1.0, -1.0, 1.0);
  const GeneralizedFan g = burgers_fan(*sys, 0.0, 0.0, 1.0, 0.0);
  const double a = residual_delta(*sys, g, 0.05, 0.1, th, 64).remainder[0];
  const double b = residual_delta(*sys, g, 0.05, 0.1, th, 128).remainder[0];
  CHECK(std::abs(a - b) <= 1e-6 * std::abs(b));
}

TEST_CASE("residual consistency order under refinement") {
  const TestFunction th(-1.0, 1.0, -1.0, 1.0);
  std::vector<double> ss;
  for (double s : {1.0 / 40, 1.0 / 80, 1.0 / 160}) ss.push_back(s);

  SUBCASE("source free shock is an exact weak solution") {
    auto sys = testing::burgers();
    for (double s : ss) {
      const GeneralizedFan g = burgers_fan(*sys, 0.0, 0.0, 1.0, 0.0);
      CHECK(std::abs(residual_delta(*sys, g, s, 2 * s, th, 16).remainder[0]) <= 1e-15);
    }
  }
  SUBCASE("sourced shock, fixed jump") {
    auto sys = testing::burgers({ScalarSourceKind::Exponential, 1.0, 1.0});
    std::vector<double> res;
    for (double s : ss) {
      const GeneralizedFan g = burgers_fan(*sys, 0.0, 0.0, 1.0, 0.0);
      res.push_back(std::abs(residual_delta(*sys, g, s, 2 * s, th, 16).remainder[0]));
    }
    CHECK(log_slope(ss, res) >= 1.7);
  }
  SUBCASE("sourced shock, jump proportional to s") {
    auto sys = testing::burgers({ScalarSourceKind::Exponential, 1.0, 1.0});
    std::vector<double> res;
    for (double s : ss) {
      const GeneralizedFan g = burgers_fan(*sys, 0.0, 0.0, 1.0, 1.0 - 40.0 * s);
      res.push_back(std::abs(residual_delta(*sys, g, s, 2 * s, th, 16).remainder[0]));
    }
    CHECK(log_slope(ss, res) >= 2.7);
  }
}

TEST_CASE("residual rejects bad arguments") {
  auto sys = testing::burgers();
  const TestFunction th(-1.0, 1.0, -1.0, 1.0);
  const GeneralizedFan g = burgers_fan(*sys, 0.0, 0.0, 1.0, 0.0);
  CHECK_THROWS_AS(residual_delta(*sys, g, 0.1, 0.1, th, 4), ConfigError);
  CHECK_THROWS_AS(residual_delta(*sys, g, 0.1, 0.01, th, 16), CflViolated);
}

TEST_CASE("entropy form of Burgers") {
  auto sys = testing::burgers({ScalarSourceKind::Exponential, 1.0, 1.0});
  const EntropyPair pair = *sys->entropy_pair();
  const BalanceForm form = entropy_form(*sys, pair);
  const State u{0.6};
  CHECK(form.density(u)[0] == doctest::Approx(0.18));
  CHECK(form.flux(0.0, 0.0, u)[0] == doctest::Approx(0.072));
  CHECK(form.source(0.5, 0.0, u)[0] == doctest::Approx(0.6 * std::exp(-0.5)));
}
