#pragma once

// Generalized random-choice scheme on the staggered mesh t_k = k s, x_h = h r.
// Cells of level k sit at indices h with k + h odd, Riemann fans at k + h even.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "glimm/riemann_generalized.hpp"

namespace glimm {

// ---------------------------------------------------------------- sampling

/// 2 * (base-2 radical inverse of k) - 1; k >= 1.
double van_der_corput(std::uint64_t k);

enum class SequenceKind { VanDerCorput, SeededUniform };

struct SequenceSpec {
  SequenceKind kind = SequenceKind::VanDerCorput;
  std::uint64_t seed = 0;
};

const char* to_string(SequenceKind kind);

/// a_1, a_2, ... in (-1, 1).
class EquidistributedSequence {
 public:
  explicit EquidistributedSequence(SequenceSpec spec);
  /// a_k for k >= 1; uniform draws are generated in order and cached.
  double at(std::uint64_t k);

 private:
  SequenceSpec spec_;
  std::mt19937_64 rng_;
  std::vector<double> cache_;
};

// ---------------------------------------------------------------- config

enum class Boundary { ConstantExtension, Periodic };

const char* to_string(Boundary b);

struct SchemeConfig {
  double r = 0.0;
  double s = 0.0;            // 0 on input: derived from the CFL bound
  double lambda_star = 0.0;  // r / s, filled by make_config
  double x_min = 0.0;
  double x_max = 0.0;
  double t_end = 0.0;
  SequenceSpec sequence;
  Boundary boundary = Boundary::ConstantExtension;
  double K = 10.0;
  double cfl_safety = 0.9;
  int threads = 1;

  int h_min() const;  // x_min / r, even
  int h_max() const;  // x_max / r, even
  std::size_t cells() const { return static_cast<std::size_t>(h_max() - h_min()) / 2; }
  /// Number of time steps: levels 0..steps() with k s <= t_end.
  std::size_t steps() const;
};

/// Validates the draft and resolves s and lambda_star against the system's
/// phase-box speed bound.
SchemeConfig make_config(const SystemDef& system, SchemeConfig draft);

// ---------------------------------------------------------------- levels

struct MeshLevel {
  std::size_t k = 0;
  int h_first = 0;                  // cells at h_first + 2 j
  std::vector<State> states;        // u_{k,h}
  std::vector<State> tilde_states;  // sampled values before the source correction
  int fan_h_first = 0;              // fans at fan_h_first + 2 j
  std::vector<GeneralizedFan> fans;

  int cell_h(std::size_t j) const { return h_first + 2 * static_cast<int>(j); }
  int fan_h(std::size_t j) const { return fan_h_first + 2 * static_cast<int>(j); }
};

using InitialData = std::function<State(double x)>;

MeshLevel initialize(const SystemDef& system, const SchemeConfig& config, const InitialData& u0);

/// State of the cell at h, with ghost cells from the boundary closure.
const State& neighbor(const MeshLevel& level, int h, const SchemeConfig& config);

/// Fills level.fans: one classical fan per even-parity index, anchored at (k s, h r).
void solve_level_fans(const SystemDef& system, MeshLevel& level, const SchemeConfig& config);

/// Level k+1 from the fans of level k sampled at xi = a_next * lambda_star.
MeshLevel sample_step(const SystemDef& system, const MeshLevel& level, double a_next,
                      const SchemeConfig& config);

/// Runs fn(i) for i in [0, n) over `threads` workers in contiguous chunks. An
/// exception from the lowest failing index is rethrown.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

// ---------------------------------------------------------------- run

struct LevelDiagnostics {
  std::size_t k = 0;
  double t = 0.0;
  double L = 0.0;
  double Q = 0.0;
  double F = 0.0;
  double TV = 0.0;
  double F_budget_used = 0.0;
};

struct Snapshot {
  std::size_t k = 0;
  double t = 0.0;
  std::vector<double> x;
  std::vector<State> u;
};

struct RunFailure {
  std::string kind;  // error class name
  std::string message;
  std::size_t k = 0;
};

struct RunOptions {
  std::vector<double> snapshot_times;
  bool diagnostics = true;
  /// Keep every level (without fans) for trajectory residuals.
  bool keep_levels = false;
  std::function<void(const MeshLevel& level, const MeshLevel& next)> observer;
};

struct RunOutput {
  SchemeConfig config;
  std::vector<Snapshot> snapshots;
  std::vector<LevelDiagnostics> diagnostics;
  std::vector<MeshLevel> levels;
  MeshLevel final_level;
  std::optional<RunFailure> failure;

  /// Rethrows the recorded failure as the matching error type.
  void throw_if_failed() const;
};

Snapshot make_snapshot(const MeshLevel& level, const SchemeConfig& config);

/// Runs the scheme to t_end. Scheme errors do not propagate: the output up
/// to the failing level is returned with `failure` set.
RunOutput run(const SystemDef& system, const SchemeConfig& config, const InitialData& u0,
              const RunOptions& options = {});

/// Class name of a library error ("OutOfPhaseBox", ...).
std::string error_kind(const std::exception& e);

}  // namespace glimm
