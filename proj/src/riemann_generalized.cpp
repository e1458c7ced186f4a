#include "glimm/riemann_generalized.hpp"

#include <algorithm>
#include <cmath>

#include "glimm/errors.hpp"
#include "quadrature.hpp"

namespace glimm {

GeneralizedFan make_generalized(WaveFan fan) { return GeneralizedFan{std::move(fan)}; }

State evaluate_generalized(const GeneralizedFan& gfan, double t, double x) {
  const double dt = t - gfan.t0();
  const State w = sample_fan(gfan.fan, (x - gfan.x0()) / dt);
  return w + dt * gfan.frozen_q(w);
}

// ---------------------------------------------------------------- test function

namespace {

struct Bump {
  double lo, hi;

  double z(double y) const { return (2.0 * y - (lo + hi)) / (hi - lo); }
  double value(double y) const {
    const double zz = z(y);
    if (std::abs(zz) >= 1.0) return 0.0;
    const double b = 1.0 - zz * zz;
    return b * b;
  }
  double derivative(double y) const {
    const double zz = z(y);
    if (std::abs(zz) >= 1.0) return 0.0;
    return -4.0 * zz * (1.0 - zz * zz) * 2.0 / (hi - lo);
  }
};

}  // namespace

TestFunction::TestFunction(double t_lo, double t_hi, double x_lo, double x_hi)
    : t_lo_(t_lo), t_hi_(t_hi), x_lo_(x_lo), x_hi_(x_hi) {
  if (!(t_hi > t_lo) || !(x_hi > x_lo)) throw ConfigError("test function: empty support");
}

double TestFunction::operator()(double t, double x) const {
  return Bump{t_lo_, t_hi_}.value(t) * Bump{x_lo_, x_hi_}.value(x);
}

double TestFunction::dt(double t, double x) const {
  return Bump{t_lo_, t_hi_}.derivative(t) * Bump{x_lo_, x_hi_}.value(x);
}

double TestFunction::dx(double t, double x) const {
  return Bump{t_lo_, t_hi_}.value(t) * Bump{x_lo_, x_hi_}.derivative(x);
}

// ---------------------------------------------------------------- forms

BalanceForm weak_form(const SystemDef& system) {
  BalanceForm form;
  form.density = [](const State& u) { return u; };
  form.flux = [&system](double t, double x, const State& u) { return system.flux(t, x, u); };
  form.source = [&system](double t, double x, const State& u) { return system.source(t, x, u); };
  return form;
}

BalanceForm entropy_form(const SystemDef& system, const EntropyPair& pair) {
  BalanceForm form;
  form.density = [pair](const State& u) { return State{pair.entropy(u)}; };
  form.flux = [pair](double t, double x, const State& u) { return State{pair.flux(t, x, u)}; };
  form.source = [&system, pair](double t, double x, const State& u) {
    return State{dot(pair.entropy_gradient(u), system.combined_source(t, x, u)) +
                 pair.flux_x(t, x, u)};
  };
  return form;
}

// ---------------------------------------------------------------- residual

namespace {

// Ray positions of the fan at time t.
std::vector<double> rays(const GeneralizedFan& gfan, double t) {
  std::vector<double> xs;
  const double dt = t - gfan.t0();
  for (const Wave& w : gfan.fan.waves)
    for (double sigma : {w.lower_speed, w.upper_speed}) xs.push_back(gfan.x0() + sigma * dt);
  return xs;
}

std::vector<double> with_support(std::vector<double> cuts, double lo, double hi) {
  cuts.push_back(lo);
  cuts.push_back(hi);
  return cuts;
}

}  // namespace

ResidualBreakdown residual_delta(const SystemDef& system, const GeneralizedFan& gfan, double s,
                                 double r, const TestFunction& theta, int quad_n) {
  return residual_delta(weak_form(system), gfan, s, r, theta, quad_n);
}

State rectangle_integral(const BalanceForm& form, const GeneralizedFan& gfan, double s, double r,
                         const TestFunction& theta, int quad_n) {
  if (quad_n < 1) throw ConfigError("residual: quad_n must be positive");
  if (!(s > 0.0) || !(r > 0.0)) throw ConfigError("residual: s and r must be positive");
  if (gfan.fan.max_abs_speed() * s > r)
    throw CflViolated("residual: a wave ray leaves the rectangle");

  const double t0 = gfan.t0();
  const double x0 = gfan.x0();
  const std::size_t dim = form.density(gfan.fan.states.front()).size();

  State delta = State::zero(dim);
  quad::gauss(t0, t0 + s, {theta.t_lo(), theta.t_hi()}, quad_n, [&](double t, double wt) {
    const std::vector<double> cuts = with_support(rays(gfan, t), theta.x_lo(), theta.x_hi());
    quad::gauss(x0 - r, x0 + r, cuts, quad_n, [&](double x, double wx) {
      const State w = evaluate_generalized(gfan, t, x);
      delta += (wt * wx) * (theta.dt(t, x) * form.density(w) + theta.dx(t, x) * form.flux(t, x, w) +
                            theta(t, x) * form.source(t, x, w));
    });
  });
  return delta;
}

ResidualBreakdown residual_delta(const BalanceForm& form, const GeneralizedFan& gfan, double s,
                                 double r, const TestFunction& theta, int quad_n) {
  if (quad_n < 8) throw ConfigError("residual: quad_n must be at least 8");
  const State delta = rectangle_integral(form, gfan, s, r, theta, quad_n);
  const double t0 = gfan.t0();
  const double x0 = gfan.x0();
  const double lo = x0 - r;
  const double hi = x0 + r;
  const std::vector<double> support{theta.x_lo(), theta.x_hi()};

  State boundary = State::zero(delta.size());
  const double t1 = t0 + s;
  quad::gauss(lo, hi, with_support(rays(gfan, t1), theta.x_lo(), theta.x_hi()), quad_n,
              [&](double x, double w) {
                boundary += (w * theta(t1, x)) * form.density(evaluate_generalized(gfan, t1, x));
              });
  const State dl = form.density(gfan.fan.states.front());
  const State dr = form.density(gfan.fan.states.back());
  quad::gauss(lo, x0, support, quad_n, [&](double x, double w) { boundary -= (w * theta(t0, x)) * dl; });
  quad::gauss(x0, hi, support, quad_n, [&](double x, double w) { boundary -= (w * theta(t0, x)) * dr; });
  quad::gauss(t0, t1, {theta.t_lo(), theta.t_hi()}, quad_n, [&](double t, double w) {
    boundary += (w * theta(t, hi)) * form.flux(t, hi, evaluate_generalized(gfan, t, hi));
    boundary -= (w * theta(t, lo)) * form.flux(t, lo, evaluate_generalized(gfan, t, lo));
  });

  return ResidualBreakdown{delta, boundary, delta - boundary};
}

double cfl_check(const SystemDef& system, double s, double r, const std::vector<State>& states,
                 double t, double x) {
  double m = 0.0;
  for (const State& u : states)
    for (double l : system.eigen(t, x, u).values) m = std::max(m, std::abs(l));
  return s / r * m;
}

}  // namespace glimm
