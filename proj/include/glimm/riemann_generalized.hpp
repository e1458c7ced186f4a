#pragma once

// First-order asymptotic solution of the generalized Riemann problem,
//   W_G(t,x) = W_C(xi) + (t - t0) q(t0, x0, W_C(xi)),
// and a quadrature estimator of its weak-form consistency residual.

#include <functional>

#include "glimm/riemann_classical.hpp"

namespace glimm {

struct GeneralizedFan {
  WaveFan fan;

  double t0() const { return fan.t0; }
  double x0() const { return fan.x0; }
  /// u -> q(t0, x0, u) with the coefficients frozen at the fan anchor.
  State frozen_q(const State& u) const { return fan.system->combined_source(fan.t0, fan.x0, u); }
};

GeneralizedFan make_generalized(WaveFan fan);

State evaluate_generalized(const GeneralizedFan& gfan, double t, double x);

/// theta(t,x) = phi(t) psi(x) with phi, psi the bump (1 - z^2)^2 rescaled to
/// [t_lo, t_hi] and [x_lo, x_hi]; zero outside.
class TestFunction {
 public:
  TestFunction(double t_lo, double t_hi, double x_lo, double x_hi);

  double operator()(double t, double x) const;
  double dt(double t, double x) const;
  double dx(double t, double x) const;

  double t_lo() const { return t_lo_; }
  double t_hi() const { return t_hi_; }
  double x_lo() const { return x_lo_; }
  double x_hi() const { return x_hi_; }

  /// Integral of phi over its support.
  double time_mass() const { return 8.0 / 15.0 * (t_hi_ - t_lo_); }

 private:
  double t_lo_, t_hi_, x_lo_, x_hi_;
};

/// Integrand triple (density, flux, source) of a divergence-form identity.
struct BalanceForm {
  std::function<State(const State&)> density;
  std::function<State(double t, double x, const State&)> flux;
  std::function<State(double t, double x, const State&)> source;
};

/// (u, f, g) of the system itself.
BalanceForm weak_form(const SystemDef& system);
/// (U, Phi, P) with P = grad U . (g - f_x) + Phi_x, packed as 1-vectors.
BalanceForm entropy_form(const SystemDef& system, const EntropyPair& pair);

struct ResidualBreakdown {
  State delta;      // the space-time integral over the fan rectangle
  State boundary;   // top - bottom + right - left boundary integrals
  State remainder;  // delta - boundary
};

/// Space-time integral of density theta_t + flux theta_x + source theta over
/// [t0, t0+s] x [x0-r, x0+r] evaluated on W_G.
State rectangle_integral(const BalanceForm& form, const GeneralizedFan& gfan, double s, double r,
                         const TestFunction& theta, int quad_n);

/// Residual over [t0, t0+s] x [x0-r, x0+r]: 3-point Gauss on quad_n panels
/// in t and, at each time node, quad_n panels between consecutive rays and support edges of theta.
ResidualBreakdown residual_delta(const SystemDef& system, const GeneralizedFan& gfan, double s,
                                 double r, const TestFunction& theta, int quad_n);
ResidualBreakdown residual_delta(const BalanceForm& form, const GeneralizedFan& gfan, double s,
                                 double r, const TestFunction& theta, int quad_n);

/// (s/r) max |lambda_i(t, x, u)| over the given states.
double cfl_check(const SystemDef& system, double s, double r, const std::vector<State>& states,
                 double t = 0.0, double x = 0.0);

}  // namespace glimm
