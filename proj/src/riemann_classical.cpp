#include "glimm/riemann_classical.hpp"

#include <cmath>
#include <limits>

#include "glimm/errors.hpp"

namespace glimm {

const char* to_string(WaveKind kind) {
  switch (kind) {
    case WaveKind::Shock: return "shock";
    case WaveKind::Rarefaction: return "rarefaction";
    case WaveKind::Contact: return "contact";
  }
  return "?";
}

State WaveFan::strengths() const {
  State eps = State::zero(waves.size());
  for (std::size_t i = 0; i < waves.size(); ++i) eps[i] = waves[i].strength;
  return eps;
}

bool WaveFan::degenerate() const {
  for (const Wave& w : waves)
    if (w.strength != 0.0) return false;
  return true;
}

double WaveFan::max_abs_speed() const {
  double m = 0.0;
  for (const Wave& w : waves) m = std::max({m, std::abs(w.lower_speed), std::abs(w.upper_speed)});
  return m;
}

State compose_wave_curves(const SystemDef& system, double t0, double x0, const State& from,
                          const State& eps) {
  State u = from;
  for (std::size_t i = 0; i < system.p(); ++i)
    if (eps[i] != 0.0) u = system.wave_curve(i, t0, x0, u, eps[i]);
  return u;
}

namespace {

// Curve parameters eps with compose(ul, eps) = ur, by damped Newton with a
// central-difference Jacobian.
State newton_parameters(const SystemDef& system, double t0, double x0, const State& ul,
                        const State& ur, const SolveOptions& options) {
  const std::size_t p = system.p();
  const double scale = 1.0 + norm_inf(ur);
  auto residual = [&](const State& eps) {
    return compose_wave_curves(system, t0, x0, ul, eps) - ur;
  };

  State eps;
  const Matrix r = system.eigen(t0, x0, ul).vectors;
  if (!solve_linear(r, ur - ul, eps)) throw NoSolution("riemann: singular eigenvector basis");

  State f = residual(eps);
  double fnorm = norm_inf(f);
  for (int it = 0; it < options.max_iterations; ++it) {
    if (fnorm <= options.tolerance * scale) return eps;
    Matrix jac(p);
    for (std::size_t j = 0; j < p; ++j) {
      const double h = 1e-6 * std::max(1e-3, std::abs(eps[j]));
      State ep = eps;
      State em = eps;
      ep[j] += h;
      em[j] -= h;
      jac.set_column(j, (1.0 / (2.0 * h)) * (residual(ep) - residual(em)));
    }
    State step;
    if (!solve_linear(jac, -f, step)) throw NoSolution("riemann: singular Newton Jacobian");
    double damping = 1.0;
    bool accepted = false;
    for (int half = 0; half < 40; ++half, damping *= 0.5) {
      const State trial = eps + damping * step;
      State ft;
      try {
        ft = residual(trial);
      } catch (const NoSolution&) {
        continue;
      }
      const double tn = norm_inf(ft);
      if (tn < fnorm || tn <= options.tolerance * scale) {
        eps = trial;
        f = ft;
        fnorm = tn;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  if (fnorm <= options.tolerance * scale) return eps;
  throw NoSolution("riemann: Newton did not converge for " + to_string(ul) + " | " +
                   to_string(ur));
}

double shock_speed(const SystemDef& system, double t0, double x0, const State& a,
                   const State& b) {
  const State du = b - a;
  const State df = system.flux(t0, x0, b) - system.flux(t0, x0, a);
  if (du.size() == 1) return df[0] / du[0];
  return dot(df, du) / dot(du, du);
}

}  // namespace

WaveFan solve_classical(const SystemDef& system, double t0, double x0, const State& ul,
                        const State& ur, const SolveOptions& options) {
  const std::size_t p = system.p();
  if (ul.size() != p || ur.size() != p) throw ConfigError("riemann: state dimension mismatch");
  if (options.check_phase_box) {
    if (!system.in_phase_box(ul))
      throw OutOfPhaseBox("riemann: left state " + to_string(ul) + " outside the phase box");
    if (!system.in_phase_box(ur))
      throw OutOfPhaseBox("riemann: right state " + to_string(ur) + " outside the phase box");
  }
  if (options.jump_radius && norm_inf(ur - ul) > *options.jump_radius)
    throw NoSolution("riemann: jump exceeds the small-jump radius");

  WaveFan fan;
  fan.system = &system;
  fan.t0 = t0;
  fan.x0 = x0;
  std::vector<double> params(p, 0.0);
  bool have_params = false;

  if (ul == ur) {
    fan.states.assign(p + 1, ul);
    have_params = true;
  } else if (auto exact = system.exact_intermediate_states(t0, x0, ul, ur)) {
    fan.states = std::move(*exact);
  } else {
    const State eps = newton_parameters(system, t0, x0, ul, ur, options);
    fan.states.reserve(p + 1);
    fan.states.push_back(ul);
    State u = ul;
    for (std::size_t i = 0; i < p; ++i) {
      if (eps[i] != 0.0) u = system.wave_curve(i, t0, x0, u, eps[i]);
      fan.states.push_back(u);
      params[i] = eps[i];
    }
    fan.states.back() = ur;
    have_params = true;
  }
  if (fan.states.size() != p + 1) throw NoSolution("riemann: wrong number of states");
  fan.states.front() = ul;
  fan.states.back() = ur;

  if (options.check_phase_box) {
    const PhaseBox wide = system.phase_box().scaled(options.box_enlargement);
    for (std::size_t i = 1; i < p; ++i)
      if (!system.admissible(fan.states[i]) || !wide.contains(fan.states[i]))
        throw OutOfPhaseBox("riemann: intermediate state " + to_string(fan.states[i]) +
                            " leaves the enlarged phase box");
  }

  fan.waves.resize(p);
  for (std::size_t i = 0; i < p; ++i) {
    Wave& w = fan.waves[i];
    w.family = i;
    w.left_state = fan.states[i];
    w.right_state = fan.states[i + 1];
    const bool gnl = system.characters()[i] == FieldCharacter::GenuinelyNonlinear;
    const double lam_l = system.eigenvalue(i, t0, x0, w.left_state);
    if (w.left_state == w.right_state) {
      w.strength = 0.0;
      w.kind = gnl ? WaveKind::Rarefaction : WaveKind::Contact;
      w.lower_speed = w.upper_speed = lam_l;
      continue;
    }
    if (gnl) {
      const double lam_r = system.eigenvalue(i, t0, x0, w.right_state);
      w.strength = have_params ? params[i] : lam_r - lam_l;
      if (w.strength < 0.0) {
        w.kind = WaveKind::Shock;
        w.lower_speed = w.upper_speed =
            shock_speed(system, t0, x0, w.left_state, w.right_state);
      } else {
        w.kind = WaveKind::Rarefaction;
        w.lower_speed = lam_l;
        w.upper_speed = lam_r;
      }
    } else {
      w.kind = WaveKind::Contact;
      w.strength = system.contact_parameter(i, t0, x0, w.left_state, w.right_state);
      w.lower_speed = w.upper_speed = lam_l;
    }
  }
  return fan;
}

State sample_fan(const WaveFan& fan, double xi) {
  for (const Wave& w : fan.waves) {
    if (xi <= w.lower_speed) return w.left_state;
    if (xi < w.upper_speed)
      return fan.system->wave_curve(w.family, fan.t0, fan.x0, w.left_state, xi - w.lower_speed);
  }
  return fan.states.back();
}

StrengthVector wave_strengths(const WaveFan& fan) {
  StrengthVector out{fan.strengths(), {}};
  out.kinds.reserve(fan.waves.size());
  for (const Wave& w : fan.waves) out.kinds.push_back(w.kind);
  return out;
}

}  // namespace glimm
