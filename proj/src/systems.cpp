#include "glimm/systems.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "glimm/errors.hpp"

namespace glimm {

namespace {

// Bisection on a function that changes sign over [lo, hi]; the bracket is
// shrunk to adjacent doubles.
template <class F>
double bisect(F&& f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

// ---------------------------------------------------------------- PhaseBox

PhaseBox::PhaseBox(State center, State half_widths)
    : center_(std::move(center)), half_widths_(std::move(half_widths)) {
  if (center_.size() != half_widths_.size())
    throw ConfigError("phase box: center and half_widths differ in length");
  if (!center_.all_finite()) throw ConfigError("phase box: non-finite center");
  for (double h : half_widths_)
    if (!(h > 0.0) || !std::isfinite(h))
      throw ConfigError("phase box: half widths must be positive and finite");
}

bool PhaseBox::contains(const State& u) const {
  if (u.size() != center_.size() || !u.all_finite()) return false;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (std::abs(u[i] - center_[i]) > half_widths_[i]) return false;
  return true;
}

PhaseBox PhaseBox::scaled(double factor) const {
  return PhaseBox(center_, factor * half_widths_);
}

// ---------------------------------------------------------------- SystemDef

SystemDef::SystemDef(std::vector<FieldCharacter> characters, PhaseBox box)
    : characters_(std::move(characters)), box_(std::move(box)) {
  if (characters_.empty() || characters_.size() > kMaxComponents)
    throw ConfigError("system: unsupported number of families");
  if (box_.center().size() != characters_.size())
    throw ConfigError("system: phase box dimension does not match the system");
}

State SystemDef::flux_x(double, double, const State& u) const { return State::zero(u.size()); }

double SystemDef::eigenvalue(std::size_t family, double t, double x, const State& u) const {
  return eigen(t, x, u).values[family];
}

std::optional<std::vector<State>> SystemDef::exact_intermediate_states(double, double,
                                                                       const State&,
                                                                       const State&) const {
  return std::nullopt;
}

double SystemDef::contact_parameter(std::size_t family, double t, double x, const State& from,
                                    const State& to) const {
  const State jump = to - from;
  const State r = eigen(t, x, from).vectors.column(family);
  const double len = norm2(jump);
  return dot(jump, r) >= 0.0 ? len : -len;
}

double SystemDef::max_speed_bound() const {
  constexpr int kPoints = 7;
  const std::size_t n = p();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= kPoints;
  double best = 0.0;
  bool any = false;
  for (std::size_t idx = 0; idx < total; ++idx) {
    State u = box_.center();
    std::size_t rest = idx;
    for (std::size_t i = 0; i < n; ++i) {
      const int k = static_cast<int>(rest % kPoints);
      rest /= kPoints;
      u[i] += box_.half_widths()[i] * (2.0 * k / (kPoints - 1) - 1.0);
    }
    if (!admissible(u)) continue;
    any = true;
    const Eigensystem es = eigen(0.0, 0.0, u);
    for (double l : es.values) best = std::max(best, std::abs(l));
  }
  if (!any) throw ConfigError("phase box contains no admissible state");
  return best;
}

// ---------------------------------------------------------------- scalar

double ScalarSource::operator()(double t, double u) const {
  switch (kind) {
    case ScalarSourceKind::None: return 0.0;
    case ScalarSourceKind::Constant: return amplitude;
    case ScalarSourceKind::Exponential: return amplitude * std::exp(-rate * t);
    case ScalarSourceKind::Cosine: return amplitude * std::cos(rate * t);
    case ScalarSourceKind::Damping: return -rate * u;
  }
  return 0.0;
}

namespace {

FieldCharacter scalar_character(ScalarFluxKind kind) {
  switch (kind) {
    case ScalarFluxKind::Linear:
    case ScalarFluxKind::Zero: return FieldCharacter::LinearlyDegenerate;
    default: return FieldCharacter::GenuinelyNonlinear;
  }
}

}  // namespace

ScalarSystem::ScalarSystem(ScalarFlux flux, ScalarSource source, PhaseBox box)
    : SystemDef({scalar_character(flux.kind)}, std::move(box)), flux_(flux), source_(source) {
  if (flux_.kind == ScalarFluxKind::VariableBurgers && !(std::abs(flux_.amplitude) < 1.0))
    throw ConfigError("variable Burgers flux needs |amplitude| < 1");
  if (characters()[0] == FieldCharacter::GenuinelyNonlinear) {
    const double lo = phase_box().center()[0] - phase_box().half_widths()[0];
    const double hi = phase_box().center()[0] + phase_box().half_widths()[0];
    for (int k = 0; k <= 100; ++k) {
      const double u = lo + (hi - lo) * k / 100.0;
      if (!(flux_second_derivative(0.0, u) > 0.0))
        throw ConfigError("scalar flux is not strictly convex over the phase box");
    }
  }
}

std::string ScalarSystem::name() const {
  switch (flux_.kind) {
    case ScalarFluxKind::Burgers: return "scalar:burgers";
    case ScalarFluxKind::VariableBurgers: return "scalar:variable_burgers";
    case ScalarFluxKind::Cubic: return "scalar:cubic";
    case ScalarFluxKind::Linear: return "scalar:linear";
    case ScalarFluxKind::Zero: return "scalar:zero";
  }
  return "scalar";
}

double ScalarSystem::coefficient(double x) const {
  if (flux_.kind != ScalarFluxKind::VariableBurgers) return 1.0;
  return 1.0 + flux_.amplitude * std::sin(flux_.wavenumber * x);
}

double ScalarSystem::coefficient_x(double x) const {
  if (flux_.kind != ScalarFluxKind::VariableBurgers) return 0.0;
  return flux_.amplitude * flux_.wavenumber * std::cos(flux_.wavenumber * x);
}

double ScalarSystem::flux_value(double x, double u) const {
  switch (flux_.kind) {
    case ScalarFluxKind::Burgers: return 0.5 * u * u;
    case ScalarFluxKind::VariableBurgers: return coefficient(x) * 0.5 * u * u;
    case ScalarFluxKind::Cubic: return u * u * u / 3.0;
    case ScalarFluxKind::Linear: return flux_.speed * u;
    case ScalarFluxKind::Zero: return 0.0;
  }
  return 0.0;
}

double ScalarSystem::characteristic_speed(double x, double u) const {
  switch (flux_.kind) {
    case ScalarFluxKind::Burgers: return u;
    case ScalarFluxKind::VariableBurgers: return coefficient(x) * u;
    case ScalarFluxKind::Cubic: return u * u;
    case ScalarFluxKind::Linear: return flux_.speed;
    case ScalarFluxKind::Zero: return 0.0;
  }
  return 0.0;
}

double ScalarSystem::flux_second_derivative(double x, double u) const {
  switch (flux_.kind) {
    case ScalarFluxKind::Burgers: return 1.0;
    case ScalarFluxKind::VariableBurgers: return coefficient(x);
    case ScalarFluxKind::Cubic: return 2.0 * u;
    default: return 0.0;
  }
}

State ScalarSystem::flux(double, double x, const State& u) const { return {flux_value(x, u[0])}; }

State ScalarSystem::source(double t, double, const State& u) const { return {source_(t, u[0])}; }

State ScalarSystem::flux_x(double, double x, const State& u) const {
  if (flux_.kind != ScalarFluxKind::VariableBurgers) return {0.0};
  return {coefficient_x(x) * 0.5 * u[0] * u[0]};
}

Matrix ScalarSystem::jacobian(double, double x, const State& u) const {
  Matrix a(1);
  a(0, 0) = characteristic_speed(x, u[0]);
  return a;
}

Eigensystem ScalarSystem::eigen(double, double x, const State& u) const {
  Eigensystem es{State{characteristic_speed(x, u[0])}, Matrix(1)};
  es.vectors(0, 0) = characters()[0] == FieldCharacter::GenuinelyNonlinear
                         ? 1.0 / flux_second_derivative(x, u[0])
                         : 1.0;
  return es;
}

double ScalarSystem::eigenvalue(std::size_t, double, double x, const State& u) const {
  return characteristic_speed(x, u[0]);
}

State ScalarSystem::wave_curve(std::size_t, double, double x, const State& from,
                               double eps) const {
  const double u = from[0];
  switch (flux_.kind) {
    case ScalarFluxKind::Burgers: return {u + eps};
    case ScalarFluxKind::VariableBurgers: return {u + eps / coefficient(x)};
    case ScalarFluxKind::Cubic: {
      const double target = u * u + eps;
      if (target < 0.0) throw NoSolution("cubic flux: wave parameter leaves the convex branch");
      return {std::sqrt(target)};
    }
    case ScalarFluxKind::Linear:
    case ScalarFluxKind::Zero: return {u + eps};
  }
  return from;
}

std::optional<std::vector<State>> ScalarSystem::exact_intermediate_states(double, double,
                                                                          const State& ul,
                                                                          const State& ur) const {
  return std::vector<State>{ul, ur};
}

std::optional<EntropyPair> ScalarSystem::entropy_pair() const {
  EntropyPair pair;
  pair.entropy = [](const State& u) { return 0.5 * u[0] * u[0]; };
  pair.entropy_gradient = [](const State& u) { return State{u[0]}; };
  const ScalarFlux spec = flux_;
  auto coeff = [spec](double x) {
    return spec.kind == ScalarFluxKind::VariableBurgers
               ? 1.0 + spec.amplitude * std::sin(spec.wavenumber * x)
               : 1.0;
  };
  pair.flux = [spec, coeff](double, double x, const State& s) {
    const double u = s[0];
    switch (spec.kind) {
      case ScalarFluxKind::Burgers: return u * u * u / 3.0;
      case ScalarFluxKind::VariableBurgers: return coeff(x) * u * u * u / 3.0;
      case ScalarFluxKind::Cubic: return u * u * u * u / 4.0;
      case ScalarFluxKind::Linear: return spec.speed * 0.5 * u * u;
      case ScalarFluxKind::Zero: return 0.0;
    }
    return 0.0;
  };
  pair.flux_x = [spec](double, double x, const State& s) {
    if (spec.kind != ScalarFluxKind::VariableBurgers) return 0.0;
    const double u = s[0];
    return spec.amplitude * spec.wavenumber * std::cos(spec.wavenumber * x) * u * u * u / 3.0;
  };
  return pair;
}

double ScalarSystem::max_speed_bound() const {
  const double lo = phase_box().center()[0] - phase_box().half_widths()[0];
  const double hi = phase_box().center()[0] + phase_box().half_widths()[0];
  const double m = std::max(std::abs(lo), std::abs(hi));
  switch (flux_.kind) {
    case ScalarFluxKind::Burgers: return m;
    case ScalarFluxKind::VariableBurgers: return (1.0 + std::abs(flux_.amplitude)) * m;
    case ScalarFluxKind::Cubic: return m * m;
    case ScalarFluxKind::Linear: return std::abs(flux_.speed);
    case ScalarFluxKind::Zero: return 0.0;
  }
  return m;
}

SystemPtr scalar_system(ScalarFlux flux, ScalarSource source, PhaseBox box) {
  return std::make_shared<ScalarSystem>(flux, source, std::move(box));
}

// ---------------------------------------------------------------- p-system

double GammaLawPressure::pressure(double v) const { return kappa * std::pow(v, -gamma); }

double GammaLawPressure::dpressure(double v) const {
  return -gamma * kappa * std::pow(v, -gamma - 1.0);
}

double GammaLawPressure::sound_speed(double v) const {
  return std::sqrt(gamma * kappa) * std::pow(v, -0.5 * (gamma + 1.0));
}

double GammaLawPressure::sound_speed_dv(double v) const {
  return -0.5 * (gamma + 1.0) * sound_speed(v) / v;
}

double GammaLawPressure::volume_for_speed(double c) const {
  return std::pow(c / std::sqrt(gamma * kappa), -2.0 / (gamma + 1.0));
}

double GammaLawPressure::riemann_integral(double v) const {
  return 2.0 * std::sqrt(gamma * kappa) / (1.0 - gamma) * std::pow(v, 0.5 * (1.0 - gamma));
}

PSystem::PSystem(GammaLawPressure pressure, PhaseBox box, double damping)
    : SystemDef({FieldCharacter::GenuinelyNonlinear, FieldCharacter::GenuinelyNonlinear},
                std::move(box)),
      pressure_(pressure),
      damping_(damping) {
  if (!(pressure_.gamma > 1.0) || !(pressure_.kappa > 0.0))
    throw ConfigError("p-system: gamma-law needs gamma > 1 and kappa > 0");
  if (!(phase_box().center()[0] - phase_box().half_widths()[0] > 0.0))
    throw ConfigError("p-system: phase box crosses v <= 0");
}

State PSystem::flux(double, double, const State& u) const {
  return {-u[1], pressure_.pressure(u[0])};
}

State PSystem::source(double, double, const State& u) const {
  if (damping_ == 0.0) return State::zero(2);
  return {0.0, -damping_ * u[1]};
}

Matrix PSystem::jacobian(double, double, const State& u) const {
  Matrix a(2);
  a(0, 1) = -1.0;
  a(1, 0) = pressure_.dpressure(u[0]);
  return a;
}

Eigensystem PSystem::eigen(double, double, const State& u) const {
  const double c = pressure_.sound_speed(u[0]);
  const double dc = pressure_.sound_speed_dv(u[0]);
  Eigensystem es{State{-c, c}, Matrix(2)};
  es.vectors.set_column(0, State{1.0 / -dc, c / -dc});
  es.vectors.set_column(1, State{1.0 / dc, -c / dc});
  return es;
}

double PSystem::eigenvalue(std::size_t family, double, double, const State& u) const {
  const double c = pressure_.sound_speed(u[0]);
  return family == 0 ? -c : c;
}

bool PSystem::admissible(const State& u) const { return u.all_finite() && u[0] > 0.0; }

State PSystem::wave_curve(std::size_t family, double, double, const State& from,
                          double eps) const {
  const double v0 = from[0];
  const double w0 = from[1];
  const double c0 = pressure_.sound_speed(v0);
  const double c = family == 0 ? c0 - eps : c0 + eps;
  if (!(c > 0.0)) throw NoSolution("p-system: wave curve reaches zero sound speed");
  const double v = pressure_.volume_for_speed(c);
  const double g = pressure_.riemann_integral(v) - pressure_.riemann_integral(v0);
  const double dp = pressure_.pressure(v) - pressure_.pressure(v0);
  if (family == 0) {
    if (eps >= 0.0) return {v, w0 + g};
    return {v, w0 - std::sqrt(dp * (v0 - v))};
  }
  if (eps >= 0.0) return {v, w0 - g};
  return {v, w0 - std::sqrt(-dp * (v - v0))};
}

std::optional<EntropyPair> PSystem::entropy_pair() const {
  const GammaLawPressure law = pressure_;
  EntropyPair pair;
  pair.entropy = [law](const State& u) {
    return 0.5 * u[1] * u[1] + law.kappa * std::pow(u[0], 1.0 - law.gamma) / (law.gamma - 1.0);
  };
  pair.entropy_gradient = [law](const State& u) { return State{-law.pressure(u[0]), u[1]}; };
  pair.flux = [law](double, double, const State& u) { return law.pressure(u[0]) * u[1]; };
  pair.flux_x = [](double, double, const State&) { return 0.0; };
  return pair;
}

double PSystem::max_speed_bound() const {
  return pressure_.sound_speed(phase_box().center()[0] - phase_box().half_widths()[0]);
}

SystemPtr p_system(GammaLawPressure pressure, PhaseBox box, double damping) {
  return std::make_shared<PSystem>(pressure, std::move(box), damping);
}

// ---------------------------------------------------------------- duct

double DuctGeometry::area(double t, double x) const {
  double base = a0;
  switch (kind) {
    case DuctKind::Constant: break;
    case DuctKind::Linear: base = a0 + slope * x; break;
    case DuctKind::Gaussian: {
      const double z = (x - center) / width;
      base = a0 + amplitude * std::exp(-z * z);
      break;
    }
    case DuctKind::CosineBump: {
      const double z = (x - center) / width;
      if (std::abs(z) < 1.0) base = a0 + amplitude * 0.5 * (1.0 + std::cos(std::numbers::pi * z));
      break;
    }
  }
  return base * (1.0 + modulation * std::sin(omega * t));
}

double DuctGeometry::area_x(double t, double x) const {
  double d = 0.0;
  switch (kind) {
    case DuctKind::Constant: break;
    case DuctKind::Linear: d = slope; break;
    case DuctKind::Gaussian: {
      const double z = (x - center) / width;
      d = -2.0 * z / width * amplitude * std::exp(-z * z);
      break;
    }
    case DuctKind::CosineBump: {
      const double z = (x - center) / width;
      if (std::abs(z) < 1.0)
        d = -amplitude * 0.5 * std::numbers::pi / width * std::sin(std::numbers::pi * z);
      break;
    }
  }
  return d * (1.0 + modulation * std::sin(omega * t));
}

double DuctGeometry::area_t(double t, double x) const {
  if (modulation == 0.0) return 0.0;
  const double base = area(0.0, x);
  return base * modulation * omega * std::cos(omega * t);
}

bool DuctGeometry::is_constant() const {
  const bool flat = kind == DuctKind::Constant || (kind == DuctKind::Linear && slope == 0.0) ||
                    ((kind == DuctKind::Gaussian || kind == DuctKind::CosineBump) &&
                     amplitude == 0.0);
  return flat && (modulation == 0.0 || omega == 0.0);
}

// ---------------------------------------------------------------- Euler

State to_conserved(double gamma, const Primitive& w) {
  return {w.rho, w.rho * w.v, w.p / (gamma - 1.0) + 0.5 * w.rho * w.v * w.v};
}

Primitive to_primitive(double gamma, const State& u) {
  Primitive w;
  w.rho = u[0];
  w.v = u[1] / u[0];
  w.p = (gamma - 1.0) * (u[2] - 0.5 * u[1] * w.v);
  return w;
}

EulerSystem::EulerSystem(double gamma, std::optional<DuctGeometry> duct, PhaseBox box)
    : SystemDef({FieldCharacter::GenuinelyNonlinear, FieldCharacter::LinearlyDegenerate,
                 FieldCharacter::GenuinelyNonlinear},
                std::move(box)),
      gamma_(gamma),
      duct_(duct) {
  if (!(gamma_ > 1.0)) throw ConfigError("euler: gamma must exceed 1");
  if (duct_) {
    const double lowest = duct_->a0 + std::min(0.0, duct_->amplitude);
    if (duct_->kind != DuctKind::Linear && !(lowest > 0.0))
      throw ConfigError("euler duct: cross-section must stay positive");
    if (!(std::abs(duct_->modulation) < 1.0))
      throw ConfigError("euler duct: modulation must satisfy |m| < 1");
  }
}

State EulerSystem::flux(double, double, const State& u) const {
  const Primitive w = to_primitive(gamma_, u);
  return {u[1], u[1] * w.v + w.p, (u[2] + w.p) * w.v};
}

State EulerSystem::source(double t, double x, const State& u) const {
  if (!duct_) return State::zero(3);
  const double ax = duct_->area_x(t, x);
  const double at = duct_->area_t(t, x);
  if (ax == 0.0 && at == 0.0) return State::zero(3);
  const double a = duct_->area(t, x);
  if (!(a > 0.0)) throw OutOfPhaseBox("euler duct: non-positive cross-section at x = " + std::to_string(x));
  const Primitive w = to_primitive(gamma_, u);
  const State g1{u[1], u[1] * w.v, (u[2] + w.p) * w.v};
  return (-ax / a) * g1 - (at / a) * u;
}

Matrix EulerSystem::jacobian(double, double, const State& u) const {
  const Primitive w = to_primitive(gamma_, u);
  const double g = gamma_;
  const double v = w.v;
  const double h = (u[2] + w.p) / w.rho;
  Matrix a(3);
  a(0, 1) = 1.0;
  a(1, 0) = 0.5 * (g - 3.0) * v * v;
  a(1, 1) = (3.0 - g) * v;
  a(1, 2) = g - 1.0;
  a(2, 0) = v * (0.5 * (g - 1.0) * v * v - h);
  a(2, 1) = h - (g - 1.0) * v * v;
  a(2, 2) = g * v;
  return a;
}

Eigensystem EulerSystem::eigen(double, double, const State& u) const {
  const Primitive w = to_primitive(gamma_, u);
  const double c = std::sqrt(gamma_ * w.p / w.rho);
  const double v = w.v;
  // Map a primitive direction (drho, dv, dp) to conserved variables.
  auto lift = [&](double drho, double dv, double dp) {
    return State{drho, v * drho + w.rho * dv, dp / (gamma_ - 1.0) + 0.5 * v * v * drho + w.rho * v * dv};
  };
  const double k1 = -2.0 / ((gamma_ + 1.0) * c);
  const double k3 = 2.0 / ((gamma_ + 1.0) * c);
  Eigensystem es{State{v - c, v, v + c}, Matrix(3)};
  es.vectors.set_column(0, lift(k1 * w.rho, -k1 * c, k1 * w.rho * c * c));
  es.vectors.set_column(1, (1.0 / (1.0 + 0.5 * v * v)) * lift(1.0, 0.0, 0.0));
  es.vectors.set_column(2, lift(k3 * w.rho, k3 * c, k3 * w.rho * c * c));
  return es;
}

double EulerSystem::eigenvalue(std::size_t family, double, double, const State& u) const {
  const Primitive w = to_primitive(gamma_, u);
  const double c = std::sqrt(gamma_ * w.p / w.rho);
  return w.v + (static_cast<double>(family) - 1.0) * c;
}

bool EulerSystem::admissible(const State& u) const {
  if (!u.all_finite() || !(u[0] > 0.0)) return false;
  return to_primitive(gamma_, u).p > 0.0;
}

EulerStar EulerSystem::star(const Primitive& l, const Primitive& r) const {
  const double g = gamma_;
  const double cl = std::sqrt(g * l.p / l.rho);
  const double cr = std::sqrt(g * r.p / r.rho);
  if (2.0 / (g - 1.0) * (cl + cr) <= r.v - l.v)
    throw NoSolution("euler: initial data generate vacuum");

  // Two-sided pressure function f(p) = f_L(p) + f_R(p) + (v_R - v_L).
  auto side = [g](const Primitive& s, double c, double p, double& df) {
    if (p > s.p) {
      const double a = 2.0 / ((g + 1.0) * s.rho);
      const double b = (g - 1.0) / (g + 1.0) * s.p;
      const double q = std::sqrt(a / (p + b));
      df = q * (1.0 - 0.5 * (p - s.p) / (p + b));
      return (p - s.p) * q;
    }
    const double ratio = p / s.p;
    df = std::pow(ratio, -0.5 * (g + 1.0) / g) / (s.rho * c);
    return 2.0 * c / (g - 1.0) * (std::pow(ratio, 0.5 * (g - 1.0) / g) - 1.0);
  };

  const double dv = r.v - l.v;
  // Acoustic (linearized) guess.
  double p = 0.5 * (l.p + r.p) - 0.125 * dv * (l.rho + r.rho) * (cl + cr);
  p = std::max(p, 1e-8 * std::min(l.p, r.p));
  double fl = 0.0;
  double fr = 0.0;
  bool converged = false;
  for (int it = 0; it < 100; ++it) {
    double dfl = 0.0;
    double dfr = 0.0;
    fl = side(l, cl, p, dfl);
    fr = side(r, cr, p, dfr);
    const double f = fl + fr + dv;
    double step = f / (dfl + dfr);
    double next = p - step;
    while (!(next > 0.0)) {
      step *= 0.5;
      next = p - step;
    }
    const double change = std::abs(next - p);
    p = next;
    if (change <= 1e-15 * p) {
      converged = true;
      break;
    }
  }
  double dfl = 0.0;
  double dfr = 0.0;
  fl = side(l, cl, p, dfl);
  fr = side(r, cr, p, dfr);
  const double residual = std::abs(fl + fr + dv);
  if (!converged && residual > 1e-12 * (cl + cr))
    throw NoSolution("euler: star pressure iteration did not converge");

  const double mu2 = (g - 1.0) / (g + 1.0);
  auto star_density = [&](const Primitive& s) {
    const double ratio = p / s.p;
    if (p > s.p) return s.rho * (ratio + mu2) / (mu2 * ratio + 1.0);
    return s.rho * std::pow(ratio, 1.0 / g);
  };
  EulerStar out;
  out.pressure = p;
  out.velocity = 0.5 * (l.v + r.v) + 0.5 * (fr - fl);
  out.rho_left = star_density(l);
  out.rho_right = star_density(r);
  return out;
}

std::optional<std::vector<State>> EulerSystem::exact_intermediate_states(double, double,
                                                                         const State& ul,
                                                                         const State& ur) const {
  if (!admissible(ul) || !admissible(ur))
    throw OutOfPhaseBox("euler: inadmissible Riemann data " + to_string(ul) + " | " + to_string(ur));
  if (ul == ur) return std::vector<State>{ul, ul, ul, ul};
  const Primitive l = to_primitive(gamma_, ul);
  const Primitive r = to_primitive(gamma_, ur);
  const EulerStar s = star(l, r);
  return std::vector<State>{ul, to_conserved(gamma_, {s.rho_left, s.velocity, s.pressure}),
                            to_conserved(gamma_, {s.rho_right, s.velocity, s.pressure}), ur};
}

State EulerSystem::wave_curve(std::size_t family, double, double, const State& from,
                              double eps) const {
  const double g = gamma_;
  const double mu2 = (g - 1.0) / (g + 1.0);
  const Primitive w = to_primitive(g, from);
  const double c0 = std::sqrt(g * w.p / w.rho);

  if (family == 1) {
    const double rho = w.rho + eps / (1.0 + 0.5 * w.v * w.v);
    if (!(rho > 0.0)) throw NoSolution("euler: contact curve reaches zero density");
    return to_conserved(g, {rho, w.v, w.p});
  }

  const double sign = family == 0 ? -1.0 : 1.0;  // lambda = v + sign c
  if (eps >= 0.0) {
    const double c = c0 + sign * eps * (g - 1.0) / (g + 1.0);
    if (!(c > 0.0)) throw NoSolution("euler: rarefaction reaches vacuum");
    const double p = w.p * std::pow(c / c0, 2.0 * g / (g - 1.0));
    const double rho = w.rho * std::pow(p / w.p, 1.0 / g);
    const double v = w.v + sign * 2.0 * (c - c0) / (g - 1.0);
    return to_conserved(g, {rho, v, p});
  }

  // Shock branch: the Hugoniot locus parametrized by the far-side pressure.
  auto shock_state = [&](double p) {
    const double ratio = p / w.p;
    const double rho = w.rho * (ratio + mu2) / (mu2 * ratio + 1.0);
    const double jump = std::sqrt(std::abs((p - w.p) * (1.0 / w.rho - 1.0 / rho)));
    return Primitive{rho, w.v - jump, p};
  };
  auto lambda_change = [&](double p) {
    const Primitive s = shock_state(p);
    return s.v + sign * std::sqrt(g * s.p / s.rho) - (w.v + sign * c0);
  };
  double p = 0.0;
  if (family == 0) {
    double hi = 2.0 * w.p;
    for (int it = 0; lambda_change(hi) > eps; ++it) {
      if (it > 200) throw NoSolution("euler: 1-shock parameter out of range");
      hi *= 2.0;
    }
    p = bisect([&](double q) { return lambda_change(q) - eps; }, w.p, hi);
  } else {
    const double lo = 1e-300;
    if (lambda_change(lo) > eps) throw NoSolution("euler: 3-shock parameter out of range");
    p = bisect([&](double q) { return lambda_change(q) - eps; }, lo, w.p);
  }
  return to_conserved(g, shock_state(p));
}

std::optional<EntropyPair> EulerSystem::entropy_pair() const {
  const double g = gamma_;
  EntropyPair pair;
  auto specific = [g](const State& u) {
    const Primitive w = to_primitive(g, u);
    return std::log(w.p) - g * std::log(w.rho);
  };
  pair.entropy = [g, specific](const State& u) { return -u[0] * specific(u) / (g - 1.0); };
  pair.entropy_gradient = [g, specific](const State& u) {
    const Primitive w = to_primitive(g, u);
    const double s = specific(u);
    return State{(g - s) / (g - 1.0) - 0.5 * w.rho * w.v * w.v / w.p, w.rho * w.v / w.p,
                 -w.rho / w.p};
  };
  pair.flux = [g, specific](double, double, const State& u) {
    return -u[1] * specific(u) / (g - 1.0);
  };
  pair.flux_x = [](double, double, const State&) { return 0.0; };
  return pair;
}

SystemPtr euler_system(double gamma, PhaseBox box) {
  return std::make_shared<EulerSystem>(gamma, std::nullopt, std::move(box));
}

SystemPtr euler_duct_system(double gamma, DuctGeometry duct, PhaseBox box) {
  return std::make_shared<EulerSystem>(gamma, duct, std::move(box));
}

}  // namespace glimm
