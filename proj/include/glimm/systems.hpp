#pragma once

// Balance laws  u_t + f(t,x,u)_x = g(t,x,u)  and the built-in catalog:
// scalar laws with a time/space source, the isentropic p-system, and the
// Euler equations in a (possibly moving) duct of cross-section a(t,x).

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "glimm/state.hpp"

namespace glimm {

enum class FieldCharacter { GenuinelyNonlinear, LinearlyDegenerate };

/// Box around a reference state u*; the admissible neighbourhood of a run.
class PhaseBox {
 public:
  PhaseBox() = default;
  PhaseBox(State center, State half_widths);

  const State& center() const { return center_; }
  const State& half_widths() const { return half_widths_; }
  bool contains(const State& u) const;
  PhaseBox scaled(double factor) const;

 private:
  State center_;
  State half_widths_;
};

struct Eigensystem {
  State values;   // increasing
  Matrix vectors; // column i is r_i
};

/// Convex entropy U with flux Phi, compatible with the system flux.
struct EntropyPair {
  std::function<double(const State&)> entropy;
  std::function<State(const State&)> entropy_gradient;
  std::function<double(double t, double x, const State&)> flux;
  std::function<double(double t, double x, const State&)> flux_x;
};

class SystemDef {
 public:
  virtual ~SystemDef() = default;

  virtual std::string name() const = 0;
  std::size_t p() const { return characters_.size(); }
  const std::vector<FieldCharacter>& characters() const { return characters_; }
  const PhaseBox& phase_box() const { return box_; }

  virtual State flux(double t, double x, const State& u) const = 0;
  virtual State source(double t, double x, const State& u) const = 0;
  /// Partial derivative of the flux in x at fixed u.
  virtual State flux_x(double t, double x, const State& u) const;
  /// q = g - f_x, the only combination entering the generalized solver.
  State combined_source(double t, double x, const State& u) const {
    return source(t, x, u) - flux_x(t, x, u);
  }

  virtual Matrix jacobian(double t, double x, const State& u) const = 0;
  /// Eigenvalues in increasing order; GNL vectors scaled so grad(lambda).r = 1,
  /// LD vectors of unit Euclidean norm.
  virtual Eigensystem eigen(double t, double x, const State& u) const = 0;
  virtual double eigenvalue(std::size_t family, double t, double x, const State& u) const;

  /// Physical admissibility independent of the box (positivity etc.).
  virtual bool admissible(const State& u) const { return u.all_finite(); }
  bool in_phase_box(const State& u) const { return admissible(u) && box_.contains(u); }

  /// Point at parameter eps on the forward i-wave curve issued from `from`
  /// with frozen coefficients at (t, x). For GNL families eps is the change
  /// of lambda_i (rarefaction for eps >= 0, shock for eps < 0); for LD
  /// families eps is the arc length along the contact curve.
  virtual State wave_curve(std::size_t family, double t, double x, const State& from,
                           double eps) const = 0;

  /// Closed-form intermediate states u_0..u_p, when the system has one.
  virtual std::optional<std::vector<State>> exact_intermediate_states(double t, double x,
                                                                      const State& ul,
                                                                      const State& ur) const;

  /// Signed contact parameter between two states on the same LD curve.
  virtual double contact_parameter(std::size_t family, double t, double x, const State& from,
                                   const State& to) const;

  virtual std::optional<EntropyPair> entropy_pair() const { return std::nullopt; }

  /// Upper bound of |lambda_i| over the phase box (all t, x).
  virtual double max_speed_bound() const;

 protected:
  SystemDef(std::vector<FieldCharacter> characters, PhaseBox box);

 private:
  std::vector<FieldCharacter> characters_;
  PhaseBox box_;
};

using SystemPtr = std::shared_ptr<const SystemDef>;

// ---------------------------------------------------------------- scalar

enum class ScalarFluxKind { Burgers, VariableBurgers, Cubic, Linear, Zero };

/// f(x,u): Burgers u^2/2, c(x) u^2/2 with c = 1 + amplitude sin(k x),
/// cubic u^3/3, linear speed*u, or zero.
struct ScalarFlux {
  ScalarFluxKind kind = ScalarFluxKind::Burgers;
  double speed = 0.0;
  double amplitude = 0.0;
  double wavenumber = 1.0;
};

enum class ScalarSourceKind { None, Constant, Exponential, Cosine, Damping };

/// g(t,u): 0, A, A e^{-k t}, A cos(k t), or -k u.
struct ScalarSource {
  ScalarSourceKind kind = ScalarSourceKind::None;
  double amplitude = 0.0;
  double rate = 1.0;

  double operator()(double t, double u) const;
};

class ScalarSystem final : public SystemDef {
 public:
  ScalarSystem(ScalarFlux flux, ScalarSource source, PhaseBox box);

  std::string name() const override;
  State flux(double t, double x, const State& u) const override;
  State source(double t, double x, const State& u) const override;
  State flux_x(double t, double x, const State& u) const override;
  Matrix jacobian(double t, double x, const State& u) const override;
  Eigensystem eigen(double t, double x, const State& u) const override;
  double eigenvalue(std::size_t family, double t, double x, const State& u) const override;
  State wave_curve(std::size_t family, double t, double x, const State& from,
                   double eps) const override;
  std::optional<std::vector<State>> exact_intermediate_states(double t, double x,
                                                              const State& ul,
                                                              const State& ur) const override;
  std::optional<EntropyPair> entropy_pair() const override;
  double max_speed_bound() const override;

  const ScalarFlux& flux_spec() const { return flux_; }
  const ScalarSource& source_spec() const { return source_; }

  double characteristic_speed(double x, double u) const;
  double flux_value(double x, double u) const;
  double flux_second_derivative(double x, double u) const;

 private:
  double coefficient(double x) const;
  double coefficient_x(double x) const;

  ScalarFlux flux_;
  ScalarSource source_;
};

SystemPtr scalar_system(ScalarFlux flux, ScalarSource source, PhaseBox box);

// ---------------------------------------------------------------- p-system

/// p(v) = kappa v^{-gamma}, gamma > 1.
struct GammaLawPressure {
  double gamma = 2.0;
  double kappa = 1.0;

  double pressure(double v) const;
  double dpressure(double v) const;
  double sound_speed(double v) const;  // sqrt(-p'(v))
  double sound_speed_dv(double v) const;
  double volume_for_speed(double c) const;
  double riemann_integral(double v) const;  // antiderivative of sqrt(-p')
};

/// Lagrangian isentropic gas u = (v, w): v_t - w_x = 0, w_t + p(v)_x = -damping w.
class PSystem final : public SystemDef {
 public:
  PSystem(GammaLawPressure pressure, PhaseBox box, double damping = 0.0);

  std::string name() const override { return "p_system"; }
  State flux(double t, double x, const State& u) const override;
  State source(double t, double x, const State& u) const override;
  Matrix jacobian(double t, double x, const State& u) const override;
  Eigensystem eigen(double t, double x, const State& u) const override;
  double eigenvalue(std::size_t family, double t, double x, const State& u) const override;
  bool admissible(const State& u) const override;
  State wave_curve(std::size_t family, double t, double x, const State& from,
                   double eps) const override;
  std::optional<EntropyPair> entropy_pair() const override;
  double max_speed_bound() const override;

  const GammaLawPressure& pressure() const { return pressure_; }
  double damping() const { return damping_; }

 private:
  GammaLawPressure pressure_;
  double damping_;
};

SystemPtr p_system(GammaLawPressure pressure, PhaseBox box, double damping = 0.0);

// ---------------------------------------------------------------- Euler

enum class DuctKind { Constant, Linear, Gaussian, CosineBump };

/// Cross-section a(t,x) = base(x) * (1 + modulation sin(omega t)).
///   Constant:   base = a0
///   Linear:     base = a0 + slope x
///   Gaussian:   base = a0 + amplitude exp(-((x-center)/width)^2)
///   CosineBump: base = a0 + amplitude (1 + cos(pi (x-center)/width))/2, |x-center| < width
struct DuctGeometry {
  DuctKind kind = DuctKind::Constant;
  double a0 = 1.0;
  double slope = 0.0;
  double amplitude = 0.0;
  double center = 0.0;
  double width = 1.0;
  double modulation = 0.0;
  double omega = 0.0;

  double area(double t, double x) const;
  double area_t(double t, double x) const;
  double area_x(double t, double x) const;
  bool is_constant() const;
};

struct Primitive {
  double rho = 1.0;
  double v = 0.0;
  double p = 1.0;
};

State to_conserved(double gamma, const Primitive& w);
Primitive to_primitive(double gamma, const State& u);

struct EulerStar {
  double pressure = 0.0;
  double velocity = 0.0;
  double rho_left = 0.0;
  double rho_right = 0.0;
};

/// Ideal gas, u = (rho, rho v, rho E), with optional duct geometry source.
class EulerSystem final : public SystemDef {
 public:
  EulerSystem(double gamma, std::optional<DuctGeometry> duct, PhaseBox box);

  std::string name() const override { return duct_ ? "euler_duct" : "euler"; }
  State flux(double t, double x, const State& u) const override;
  State source(double t, double x, const State& u) const override;
  Matrix jacobian(double t, double x, const State& u) const override;
  Eigensystem eigen(double t, double x, const State& u) const override;
  double eigenvalue(std::size_t family, double t, double x, const State& u) const override;
  bool admissible(const State& u) const override;
  State wave_curve(std::size_t family, double t, double x, const State& from,
                   double eps) const override;
  std::optional<std::vector<State>> exact_intermediate_states(double t, double x,
                                                              const State& ul,
                                                              const State& ur) const override;
  std::optional<EntropyPair> entropy_pair() const override;

  double gamma() const { return gamma_; }
  const std::optional<DuctGeometry>& duct() const { return duct_; }

  /// Star pressure / velocity from Newton on the two-sided pressure function.
  EulerStar star(const Primitive& left, const Primitive& right) const;

 private:
  double gamma_;
  std::optional<DuctGeometry> duct_;
};

SystemPtr euler_system(double gamma, PhaseBox box);
SystemPtr euler_duct_system(double gamma, DuctGeometry duct, PhaseBox box);

}  // namespace glimm
