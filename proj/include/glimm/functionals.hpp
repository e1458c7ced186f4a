#pragma once

// Wave bookkeeping on the level curves J_{k+1/2}: interaction potential D,
// the functionals L, Q, F = L + K Q, total variation, empirical interaction
// estimates, and weak / entropy residuals of computed trajectories.

#include <cstdint>
#include <vector>

#include "glimm/glimm_scheme.hpp"

namespace glimm {

struct WaveEntry {
  std::size_t family = 0;
  WaveKind kind = WaveKind::Rarefaction;
  double strength = 0.0;
};

/// alpha lies to the left of beta.
bool approaching(const WaveEntry& alpha, const WaveEntry& beta);

/// Sum of |alpha_i beta_j| over approaching pairs.
double interaction_potential(const StrengthVector& alpha, const StrengthVector& beta);

enum class CrossingSide { TypeI, TypeII };

struct StrengthRecord {
  std::size_t k = 0;
  int h = 0;  // emitting fan
  CrossingSide side = CrossingSide::TypeI;
  StrengthVector strengths;
};

/// Waves crossing J_{k+1/2}, left to right. For each fan h of `level` the
/// piece eps(u_{k,h-1}, ~u_{k+1,h}) (type II) precedes eps(~u_{k+1,h}, u_{k,h+1})
/// (type I); both are solved at the fan anchor (k s, h r).
std::vector<StrengthRecord> curve_strengths(const SystemDef& system, const MeshLevel& level,
                                            const MeshLevel& next, const SchemeConfig& config);

double linear_functional(const std::vector<StrengthRecord>& pieces);
/// Q over pairs of pieces from different fans, by prefix sums per family.
double quadratic_functional(const std::vector<StrengthRecord>& pieces);
/// The same sum by direct enumeration of all pairs.
double quadratic_functional_pairs(const std::vector<StrengthRecord>& pieces);

double total_variation(const std::vector<State>& states);

LevelDiagnostics level_functionals(const SystemDef& system, const MeshLevel& level,
                                   const MeshLevel& next, const SchemeConfig& config);

// ---------------------------------------------------------------- estimates

struct EstimateTrial {
  double D = 0.0;
  double lhs = 0.0;    // |gamma - (alpha + beta)| or the perturbed residual
  double bound = 0.0;  // the bound shape the lhs is compared to
  double additivity = 0.0;  // |D(gamma,delta) - D(alpha,delta) - D(beta,delta)|
  double delta_norm = 0.0;
};

struct GlimmEstimateReport {
  std::vector<EstimateTrial> trials;
  double max_ratio = 0.0;
  double max_zero_numerator = 0.0;  // max lhs over trials with D <= 1e-12
  std::size_t zero_trials = 0;
  std::vector<double> bin_edges;    // log10 of the smallest D per bin
  std::vector<double> bin_medians;  // median ratio per bin
  double max_additivity_ratio = 0.0;
  bool medians_non_increasing_as_D_shrinks = false;
  bool passed = false;
};

/// Random triples around the phase-box center at a common anchor. A share of
/// the trials is structured (beta = 0, same-family rarefaction chains).
GlimmEstimateReport check_glimm_estimate(const SystemDef& system, std::size_t trials,
                                         double jump_scale, std::uint64_t seed = 1);

struct PerturbedLevel {
  double s = 0.0;
  double r = 0.0;
  double jump = 0.0;
  double max_residual = 0.0;  // max over trials of |gamma - (alpha + beta)|
  double max_ratio = 0.0;     // max of residual / bound
  /// max of (|gamma| - |alpha| - |beta|)_+ / bound, with
  /// bound = D + (|alpha|+|beta|)(|mu_L|+|mu_R|+s+r) + |mu_R - mu_L|
  double max_excess_ratio = 0.0;
};

struct PerturbedEstimateReport {
  std::vector<PerturbedLevel> levels;
  double slope = 0.0;
  bool passed = false;
};

/// Replays alpha at (t0, x0-r), beta at (t0, x0+r), gamma at (t0+s, x0) with
/// end-state perturbations mu = -s q(t0+s, x0, u), on a ladder of s with
/// r = lambda_star s and jumps proportional to s.
PerturbedEstimateReport check_perturbed_estimate(const SystemDef& system, std::size_t trials,
                                                 const std::vector<double>& s_ladder,
                                                 double lambda_star, double jump_per_s,
                                                 std::uint64_t seed = 1);

// ---------------------------------------------------------------- residuals

/// Sum over all fan rectangles of a run of the space-time integral of
/// density theta_t + flux theta_x + source theta, plus the initial term of u0.
/// Requires RunOutput::levels.
State trajectory_residual(const SystemDef& system, const BalanceForm& form,
                          const RunOutput& output, const InitialData& u0,
                          const TestFunction& theta, int quad_n = 2);

State weak_residual(const SystemDef& system, const RunOutput& output, const InitialData& u0,
                    const TestFunction& theta, int quad_n = 2);

double entropy_residual(const SystemDef& system, const RunOutput& output, const InitialData& u0,
                        const EntropyPair& pair, const TestFunction& theta, int quad_n = 2);

/// Residual of an explicit piecewise-smooth function u(t,x) whose
/// discontinuities at time t are breaks(t); 3-point Gauss on nt x nx panels
/// per smooth region over the support of theta.
State function_residual(const BalanceForm& form, const std::function<State(double, double)>& u,
                        const std::function<std::vector<double>(double)>& breaks,
                        const InitialData& u0, const TestFunction& theta, int nt, int nx);

}  // namespace glimm
