#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "glimm/errors.hpp"
#include "glimm/functionals.hpp"
#include "helpers.hpp"

using namespace glimm;

namespace {

StrengthVector sv(State eps) {
  StrengthVector v;
  for (std::size_t i = 0; i < eps.size(); ++i)
    v.kinds.push_back(eps[i] < 0 ? WaveKind::Shock : WaveKind::Rarefaction);
  v.eps = eps;
  return v;
}

// Enumeration of all (i, j) pairs straight from the definition.
double potential_oracle(const StrengthVector& a, const StrengthVector& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.eps.size(); ++i)
    for (std::size_t j = 0; j < b.eps.size(); ++j) {
      const bool shock = a.kinds[i] == WaveKind::Shock || b.kinds[j] == WaveKind::Shock;
      if (i > j || (i == j && shock)) d += std::abs(a.eps[i]) * std::abs(b.eps[j]);
    }
  return d;
}

SchemeConfig config(double r, double t_end) {
  SchemeConfig c;
  c.r = r;
  c.x_min = -1.0;
  c.x_max = 1.0;
  c.t_end = t_end;
  return c;
}

}  // namespace

TEST_CASE("approaching pairs") {
  CHECK(approaching({1, WaveKind::Shock, -0.1}, {0, WaveKind::Shock, -0.1}));
  CHECK_FALSE(approaching({0, WaveKind::Rarefaction, 0.1}, {0, WaveKind::Rarefaction, 0.1}));
  CHECK_FALSE(approaching({0, WaveKind::Shock, -0.1}, {1, WaveKind::Shock, -0.1}));
  CHECK(approaching({0, WaveKind::Rarefaction, 0.1}, {0, WaveKind::Shock, -0.1}));
}

TEST_CASE("interaction potential examples") {
  CHECK(interaction_potential(sv({0.0, -0.2}), sv({-0.1, 0.0})) == doctest::Approx(0.02));
  CHECK(interaction_potential(sv({0.3, 0.0}), sv({0.4, 0.0})) == 0.0);
  CHECK(interaction_potential(sv({-0.1, 0.0}), sv({-0.2, 0.0})) == doctest::Approx(0.02));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-1, 1);
  for (int n = 0; n < 200; ++n) {
    const StrengthVector a = sv({d(rng), d(rng), d(rng)});
    const StrengthVector b = sv({d(rng), d(rng), d(rng)});
    CHECK(interaction_potential(a, b) == doctest::Approx(potential_oracle(a, b)).epsilon(1e-14));
  }
}

TEST_CASE("quadratic functional: prefix sums against enumeration") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(-1, 1);
  for (int n = 0; n < 50; ++n) {
    std::vector<StrengthRecord> pieces;
    for (int h = 0; h < 20; h += 2)
      for (CrossingSide side : {CrossingSide::TypeII, CrossingSide::TypeI})
        pieces.push_back({0, h, side, sv({d(rng), d(rng)})});
    CHECK(quadratic_functional(pieces) ==
          doctest::Approx(quadratic_functional_pairs(pieces)).epsilon(1e-13));
  }
  CHECK(quadratic_functional({}) == 0.0);
}

TEST_CASE("total variation") {
  CHECK(total_variation({State{0.2}, State{0.2}, State{0.2}}) == 0.0);
  CHECK(total_variation({State{1.0}, State{0.0}}) == 1.0);
  CHECK(total_variation({State{0.0}, State{1.0}, State{0.0}}) == 2.0);
}

TEST_CASE("level functionals") {
  auto sys = testing::burgers();
  const auto first = [&](const InitialData& u0) {
    const SchemeConfig c = make_config(*sys, config(0.1, 0.2));
    const RunOutput out = run(*sys, c, u0);
    REQUIRE_FALSE(out.failure);
    REQUIRE_FALSE(out.diagnostics.empty());
    return out.diagnostics.front();
  };
  SUBCASE("constant level") {
    const LevelDiagnostics d = first([](double) { return State{0.3}; });
    CHECK(d.L == 0.0);
    CHECK(d.Q == 0.0);
    CHECK(d.F == 0.0);
    CHECK(d.TV == 0.0);
  }
  SUBCASE("single shock") {
    const LevelDiagnostics d = first([](double x) { return State{x < 0 ? 0.4 : 0.0}; });
    CHECK(d.L == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(d.Q == 0.0);
    CHECK(d.F == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(d.TV == doctest::Approx(0.4).epsilon(1e-15));
  }
  SUBCASE("two approaching shocks") {
    const LevelDiagnostics d =
        first([](double x) { return State{x < 0 ? 0.3 : x < 0.2 ? 0.2 : 0.0}; });
    CHECK(d.L == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(d.Q == doctest::Approx(0.02).epsilon(1e-14));
    CHECK(d.F == doctest::Approx(0.3 + 10 * 0.02).epsilon(1e-14));
  }
}

TEST_CASE("source-free functional does not increase") {
  auto sys = testing::burgers();
  SchemeConfig draft = config(0.02, 1.0);
  const SchemeConfig c = make_config(*sys, draft);
  const RunOutput out = run(*sys, c, [](double x) {
    return State{x < -0.4 ? 0.5 : x < 0.0 ? 0.1 : x < 0.3 ? 0.4 : -0.2};
  });
  REQUIRE_FALSE(out.failure);
  for (std::size_t k = 1; k < out.diagnostics.size(); ++k)
    CHECK(out.diagnostics[k].F <= out.diagnostics[k - 1].F + 1e-10);
}

TEST_CASE("Glimm interaction estimate: structured cases") {
  auto ps = testing::psys();
  const GlimmEstimateReport rep = check_glimm_estimate(*ps, 1000, 0.05, 1);
  CHECK(rep.zero_trials > 0);
  CHECK(rep.max_zero_numerator <= 1e-8);
  CHECK(std::isfinite(rep.max_ratio));
  CHECK(rep.max_ratio < 10.0);
  CHECK(rep.bin_medians.size() == 5);

  // same 1-rarefaction curve: strengths add
  const State ul{1.0, 0.0};
  const State um = ps->wave_curve(0, 0, 0, ul, 0.03);
  const State ur = ps->wave_curve(0, 0, 0, um, 0.02);
  const StrengthVector a = wave_strengths(solve_classical(*ps, 0, 0, ul, um));
  const StrengthVector b = wave_strengths(solve_classical(*ps, 0, 0, um, ur));
  const StrengthVector g = wave_strengths(solve_classical(*ps, 0, 0, ul, ur));
  CHECK(interaction_potential(a, b) <= 1e-12);
  CHECK(norm1(g.eps - (a.eps + b.eps)) <= 1e-8);
  CHECK(g.eps[0] == doctest::Approx(0.05).epsilon(1e-8));
}

TEST_CASE("perturbed interaction estimate decreases under refinement") {
  auto sys = p_system({2.0, 1.0}, testing::psys()->phase_box(), 0.5);
  const PerturbedEstimateReport rep =
      check_perturbed_estimate(*sys, 200, {0.02, 0.01, 0.005}, 2.0, 2.0, 3);
  REQUIRE(rep.levels.size() == 3);
  CHECK(rep.levels[1].max_residual < rep.levels[0].max_residual);
  CHECK(rep.levels[2].max_residual < rep.levels[1].max_residual);
  CHECK(rep.slope > 0.0);
  CHECK(rep.passed);
}

TEST_CASE("weak residual of a constant solution") {
  auto sys = testing::burgers();
  const SchemeConfig c = make_config(*sys, config(0.05, 0.5));
  const InitialData u0 = [](double) { return State{0.4}; };
  RunOptions opt;
  opt.keep_levels = true;
  const RunOutput out = run(*sys, c, u0, opt);
  const TestFunction th(-0.3, 0.4, -0.6, 0.5);
  CHECK(std::abs(weak_residual(*sys, out, u0, th)[0]) <= 1e-10);
  const TestFunction wide(-0.3, 0.4, -1.0, 0.5);
  CHECK_THROWS_AS(weak_residual(*sys, out, u0, wide), SupportExceedsWindow);
}

TEST_CASE("weak residual of the ODE trajectory decreases with s") {
  auto sys = scalar_system({ScalarFluxKind::Zero}, {ScalarSourceKind::Cosine, 1.0, 1.0},
                           testing::scalar_box(0.0, 2.0));
  const InitialData u0 = [](double) { return State{0.0}; };
  const TestFunction th(-0.5, 0.9, -0.5, 0.5);
  double prev = 1e300;
  for (double s : {0.02, 0.01, 0.005}) {
    SchemeConfig draft = config(0.1, 1.0);
    draft.s = s;
    RunOptions opt;
    opt.keep_levels = true;
    const RunOutput out = run(*sys, make_config(*sys, draft), u0, opt);
    const double res = std::abs(weak_residual(*sys, out, u0, th)[0]);
    CHECK(res < prev);
    prev = res;
  }
}

TEST_CASE("entropy residual of synthetic trajectories") {
  auto sys = testing::burgers();
  const EntropyPair pair = *sys->entropy_pair();
  const BalanceForm form = entropy_form(*sys, pair);
  const TestFunction th(0.2, 0.8, -0.5, 0.5);
  const InitialData none = [](double) { return State{0.0}; };

  // stationary non-entropic jump 0 | 1
  const double bad = function_residual(
      form, [](double, double x) { return State{x < 0 ? 0.0 : 1.0}; },
      [](double) { return std::vector<double>{0.0}; }, none, th, 8, 64)[0];
  CHECK(bad < 0.0);
  // -[Phi] = -1/3 times the time mass of theta at x = 0
  CHECK(bad == doctest::Approx(-th.time_mass() / 3.0).epsilon(1e-8));

  // entropic shock 1 | 0 moving at speed 1/2
  const double good = function_residual(
      form, [](double t, double x) { return State{x < 0.5 * t ? 1.0 : 0.0}; },
      [](double t) { return std::vector<double>{0.5 * t}; }, none, th, 64, 64)[0];
  double oracle = 0.0;
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    const double t = 0.2 + (i + 0.5) * 0.6 / n;
    oracle += th(t, 0.5 * t) * 0.6 / n;
  }
  CHECK(good > 0.0);
  CHECK(good == doctest::Approx(oracle / 12.0).epsilon(1e-4));
}
