#pragma once

// Classical Riemann problem with the flux frozen at an anchor (t0, x0):
// the Lax fan of at most p+1 constant states joined by elementary waves.

#include <optional>
#include <vector>

#include "glimm/systems.hpp"

namespace glimm {

enum class WaveKind { Shock, Rarefaction, Contact };

const char* to_string(WaveKind kind);

struct Wave {
  std::size_t family = 0;  // 0-based
  WaveKind kind = WaveKind::Rarefaction;
  double strength = 0.0;
  double lower_speed = 0.0;
  double upper_speed = 0.0;
  State left_state;
  State right_state;
};

struct WaveFan {
  /// The system the fan was solved for; must outlive the fan.
  const SystemDef* system = nullptr;
  double t0 = 0.0;
  double x0 = 0.0;
  std::vector<State> states;  // u_0 = uL, ..., u_p = uR
  std::vector<Wave> waves;

  State strengths() const;
  bool degenerate() const;
  /// Largest |sigma| over all wave edges.
  double max_abs_speed() const;
};

struct SolveOptions {
  /// Reject jumps with max-norm above this radius. Unset: no check.
  std::optional<double> jump_radius;
  bool check_phase_box = true;
  /// Intermediate states must lie in the phase box scaled by this factor.
  double box_enlargement = 2.0;
  double tolerance = 1e-12;
  int max_iterations = 100;
};

WaveFan solve_classical(const SystemDef& system, double t0, double x0, const State& ul,
                        const State& ur, const SolveOptions& options = {});

/// Self-similar value at ray xi = (x - x0)/(t - t0). On a ray that carries a
/// discontinuity the left limit is returned.
State sample_fan(const WaveFan& fan, double xi);

struct StrengthVector {
  State eps;
  std::vector<WaveKind> kinds;
};

StrengthVector wave_strengths(const WaveFan& fan);

/// Composition of the p forward wave curves from `from` with parameters eps.
State compose_wave_curves(const SystemDef& system, double t0, double x0, const State& from,
                          const State& eps);

}  // namespace glimm
