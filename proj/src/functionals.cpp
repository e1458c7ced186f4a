#include "glimm/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "glimm/errors.hpp"
#include "quadrature.hpp"

namespace glimm {

bool approaching(const WaveEntry& alpha, const WaveEntry& beta) {
  if (alpha.family > beta.family) return true;
  return alpha.family == beta.family &&
         (alpha.kind == WaveKind::Shock || beta.kind == WaveKind::Shock);
}

double interaction_potential(const StrengthVector& alpha, const StrengthVector& beta) {
  double d = 0.0;
  for (std::size_t i = 0; i < alpha.eps.size(); ++i)
    for (std::size_t j = 0; j < beta.eps.size(); ++j)
      if (approaching({i, alpha.kinds[i], alpha.eps[i]}, {j, beta.kinds[j], beta.eps[j]}))
        d += std::abs(alpha.eps[i] * beta.eps[j]);
  return d;
}

// ---------------------------------------------------------------- level curve

std::vector<StrengthRecord> curve_strengths(const SystemDef& system, const MeshLevel& level,
                                            const MeshLevel& next, const SchemeConfig& config) {
  if (next.tilde_states.size() != level.fans.size())
    throw Error("curve strengths: the next level does not match the fans");
  const std::size_t n = level.fans.size();
  std::vector<StrengthRecord> pieces(2 * n);
  SolveOptions opts;
  opts.check_phase_box = false;
  const double t = static_cast<double>(level.k) * config.s;
  parallel_for(n, config.threads, [&](std::size_t j) {
    const int h = level.fan_h(j);
    const double x = h * config.r;
    const State& tilde = next.tilde_states[j];
    StrengthRecord& left = pieces[2 * j];
    StrengthRecord& right = pieces[2 * j + 1];
    left.k = right.k = level.k;
    left.h = right.h = h;
    left.side = CrossingSide::TypeII;
    right.side = CrossingSide::TypeI;
    left.strengths =
        wave_strengths(solve_classical(system, t, x, neighbor(level, h - 1, config), tilde, opts));
    right.strengths =
        wave_strengths(solve_classical(system, t, x, tilde, neighbor(level, h + 1, config), opts));
  });
  return pieces;
}

double linear_functional(const std::vector<StrengthRecord>& pieces) {
  double l = 0.0;
  for (const StrengthRecord& p : pieces) l += norm1(p.strengths.eps);
  return l;
}

double quadratic_functional(const std::vector<StrengthRecord>& pieces) {
  if (pieces.empty()) return 0.0;
  const std::size_t p = pieces.front().strengths.eps.size();
  // Per family: strength sums of all earlier fans, and of their shocks only.
  State all = State::zero(p);
  State shocks = State::zero(p);
  State fan_all = State::zero(p);
  State fan_shocks = State::zero(p);
  double q = 0.0;
  for (std::size_t m = 0; m < pieces.size(); ++m) {
    const StrengthRecord& piece = pieces[m];
    if (m > 0 && (piece.h != pieces[m - 1].h || piece.k != pieces[m - 1].k)) {
      all += fan_all;
      shocks += fan_shocks;
      fan_all = State::zero(p);
      fan_shocks = State::zero(p);
    }
    const StrengthVector& b = piece.strengths;
    for (std::size_t j = 0; j < p; ++j) {
      double partners = b.kinds[j] == WaveKind::Shock ? all[j] : shocks[j];
      for (std::size_t i = j + 1; i < p; ++i) partners += all[i];
      q += std::abs(b.eps[j]) * partners;
    }
    for (std::size_t i = 0; i < p; ++i) {
      fan_all[i] += std::abs(b.eps[i]);
      if (b.kinds[i] == WaveKind::Shock) fan_shocks[i] += std::abs(b.eps[i]);
    }
  }
  return q;
}

double quadratic_functional_pairs(const std::vector<StrengthRecord>& pieces) {
  double q = 0.0;
  for (std::size_t a = 0; a < pieces.size(); ++a)
    for (std::size_t b = a + 1; b < pieces.size(); ++b) {
      if (pieces[a].h == pieces[b].h && pieces[a].k == pieces[b].k) continue;
      q += interaction_potential(pieces[a].strengths, pieces[b].strengths);
    }
  return q;
}

double total_variation(const std::vector<State>& states) {
  double tv = 0.0;
  for (std::size_t j = 0; j + 1 < states.size(); ++j) tv += norm1(states[j + 1] - states[j]);
  return tv;
}

LevelDiagnostics level_functionals(const SystemDef& system, const MeshLevel& level,
                                   const MeshLevel& next, const SchemeConfig& config) {
  const std::vector<StrengthRecord> pieces = curve_strengths(system, level, next, config);
  LevelDiagnostics d;
  d.k = level.k;
  d.t = static_cast<double>(level.k) * config.s;
  d.L = linear_functional(pieces);
  d.Q = quadratic_functional(pieces);
  d.F = d.L + config.K * d.Q;
  d.TV = total_variation(level.states);
  return d;
}

// ---------------------------------------------------------------- estimates

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double slope_fit(const std::vector<double>& x, const std::vector<double>& y) {
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

struct Sampler {
  const SystemDef& system;
  std::mt19937_64 rng;

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  }
  State base_state(double shrink) {
    const PhaseBox& box = system.phase_box();
    for (int attempt = 0; attempt < 1000; ++attempt) {
      State u = box.center();
      for (std::size_t i = 0; i < u.size(); ++i) u[i] += shrink * box.half_widths()[i] * uniform(-1, 1);
      if (system.in_phase_box(u)) return u;
    }
    throw ConfigError("estimate: could not sample an admissible base state");
  }
  State jump(double scale) {
    State d = State::zero(system.p());
    for (std::size_t i = 0; i < d.size(); ++i)
      d[i] = scale * system.phase_box().half_widths()[i] * uniform(-1, 1);
    return d;
  }
};

StrengthVector strengths_at(const SystemDef& system, double t, double x, const State& a,
                            const State& b) {
  SolveOptions opts;
  opts.check_phase_box = false;
  return wave_strengths(solve_classical(system, t, x, a, b, opts));
}

}  // namespace

GlimmEstimateReport check_glimm_estimate(const SystemDef& system, std::size_t trials,
                                         double jump_scale, std::uint64_t seed) {
  GlimmEstimateReport report;
  Sampler sampler{system, std::mt19937_64(seed)};
  const std::size_t p = system.p();
  const std::size_t levels = 5;
  // generic trials: fixed (u_L, direction) draws replayed on a ladder of
  // half-decade magnitudes, so each level sees the same directions
  std::vector<std::vector<double>> ratios(levels);
  std::vector<double> level_min_d(levels, std::numeric_limits<double>::infinity());
  State base, d1, d2, d3;
  std::size_t ladder = 0;

  for (std::size_t n = 0; n < trials; ++n) {
    State ul, um, ur, ur2;
    std::size_t level = levels;
    switch (n % 10) {
      case 0: {  // beta = 0
        const double mag = jump_scale * std::pow(10.0, -2.0 * sampler.uniform(0, 1));
        ul = sampler.base_state(0.3);
        um = ul + sampler.jump(mag);
        ur = um;
        ur2 = ur + sampler.jump(mag);
        break;
      }
      case 1: {  // two waves of one family, same kind of rarefaction / contact
        const double mag = jump_scale * std::pow(10.0, -2.0 * sampler.uniform(0, 1));
        const std::size_t f = (n / 10) % p;
        const double scale = mag * norm_inf(system.phase_box().half_widths());
        ul = sampler.base_state(0.3);
        um = system.wave_curve(f, 0, 0, ul, scale * sampler.uniform(0, 1));
        ur = system.wave_curve(f, 0, 0, um, scale * sampler.uniform(0, 1));
        ur2 = ur + sampler.jump(mag);
        break;
      }
      default: {
        level = ladder++ % levels;
        // the largest rung must be admissible so every rung sees the same draws
        for (int attempt = 0; level == 0; ++attempt) {
          if (attempt == 1000) throw ConfigError("estimate: could not sample admissible jumps");
          base = sampler.base_state(0.3);
          d1 = sampler.jump(1.0);
          d2 = sampler.jump(1.0);
          d3 = sampler.jump(1.0);
          const State a = base + jump_scale * d1;
          const State b = a + jump_scale * d2;
          if (system.in_phase_box(a) && system.in_phase_box(b) &&
              system.in_phase_box(b + jump_scale * d3))
            break;
        }
        const double mag = jump_scale * std::pow(10.0, -0.5 * static_cast<double>(level));
        ul = base;
        um = ul + mag * d1;
        ur = um + mag * d2;
        ur2 = ur + mag * d3;
      }
    }
    if (!system.in_phase_box(um) || !system.in_phase_box(ur) || !system.in_phase_box(ur2))
      continue;

    const StrengthVector alpha = strengths_at(system, 0, 0, ul, um);
    const StrengthVector beta = strengths_at(system, 0, 0, um, ur);
    const StrengthVector gamma = strengths_at(system, 0, 0, ul, ur);
    const StrengthVector delta = strengths_at(system, 0, 0, ur, ur2);

    EstimateTrial trial;
    trial.D = interaction_potential(alpha, beta);
    trial.lhs = norm1(gamma.eps - (alpha.eps + beta.eps));
    trial.bound = trial.D;
    trial.delta_norm = norm1(delta.eps);
    trial.additivity = std::abs(interaction_potential(gamma, delta) -
                                interaction_potential(alpha, delta) -
                                interaction_potential(beta, delta));
    if (trial.D <= 1e-12) {
      ++report.zero_trials;
      report.max_zero_numerator = std::max(report.max_zero_numerator, trial.lhs);
    } else {
      const double ratio = trial.lhs / trial.D;
      report.max_ratio = std::max(report.max_ratio, ratio);
      if (level < levels) {
        ratios[level].push_back(ratio);
        level_min_d[level] = std::min(level_min_d[level], trial.D);
      }
      if (trial.delta_norm > 0.0)
        report.max_additivity_ratio =
            std::max(report.max_additivity_ratio, trial.additivity / (trial.delta_norm * trial.D));
    }
    report.trials.push_back(trial);
  }

  // One bin per magnitude level, smallest D first.
  report.medians_non_increasing_as_D_shrinks = true;
  for (std::size_t b = 0; b < levels; ++b) {
    const std::size_t level = levels - 1 - b;
    if (ratios[level].empty()) {
      report.medians_non_increasing_as_D_shrinks = false;
      continue;
    }
    report.bin_edges.push_back(std::log10(level_min_d[level]));
    report.bin_medians.push_back(median(ratios[level]));
    const std::size_t m = report.bin_medians.size();
    if (m > 1 && report.bin_medians[m - 2] > report.bin_medians[m - 1])
      report.medians_non_increasing_as_D_shrinks = false;
  }

  report.passed = std::isfinite(report.max_ratio) && report.medians_non_increasing_as_D_shrinks &&
                  report.max_zero_numerator <= 1e-8;
  return report;
}

PerturbedEstimateReport check_perturbed_estimate(const SystemDef& system, std::size_t trials,
                                                 const std::vector<double>& s_ladder,
                                                 double lambda_star, double jump_per_s,
                                                 std::uint64_t seed) {
  PerturbedEstimateReport report;
  const double t0 = 0.0;
  const double x0 = 0.0;
  for (double s : s_ladder) {
    PerturbedLevel lv;
    lv.s = s;
    lv.r = lambda_star * s;
    lv.jump = jump_per_s * s;
    // identical draws on every rung, only rescaled
    Sampler sampler{system, std::mt19937_64(seed)};
    for (std::size_t n = 0; n < trials; ++n) {
      const State ul = sampler.base_state(0.3);
      const State um = ul + sampler.jump(lv.jump);
      const State ur = um + sampler.jump(lv.jump);
      const State mu_l = -s * system.combined_source(t0 + s, x0, ul);
      const State mu_r = -s * system.combined_source(t0 + s, x0, ur);
      const StrengthVector alpha = strengths_at(system, t0, x0 - lv.r, ul, um);
      const StrengthVector beta = strengths_at(system, t0, x0 + lv.r, um, ur);
      const StrengthVector gamma = strengths_at(system, t0 + s, x0, ul + mu_l, ur + mu_r);
      const double a = norm1(alpha.eps);
      const double b = norm1(beta.eps);
      const double bound = interaction_potential(alpha, beta) +
                           (a + b) * (norm1(mu_l) + norm1(mu_r) + s + lv.r) +
                           norm1(mu_r - mu_l);
      const double residual = norm1(gamma.eps - (alpha.eps + beta.eps));
      const double excess = std::max(0.0, norm1(gamma.eps) - a - b);
      lv.max_residual = std::max(lv.max_residual, residual);
      if (bound > 0.0) {
        lv.max_ratio = std::max(lv.max_ratio, residual / bound);
        lv.max_excess_ratio = std::max(lv.max_excess_ratio, excess / bound);
      }
    }
    report.levels.push_back(lv);
  }

  bool all_zero = true;
  bool decreasing = true;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    const PerturbedLevel& lv = report.levels[i];
    if (lv.max_residual != 0.0) all_zero = false;
    if (i > 0 && !(lv.max_residual < report.levels[i - 1].max_residual)) decreasing = false;
    if (lv.max_residual > 0.0) {
      xs.push_back(lv.s);
      ys.push_back(lv.max_residual);
    }
  }
  if (all_zero) {
    report.slope = std::numeric_limits<double>::infinity();
    report.passed = true;
  } else {
    report.slope = xs.size() >= 2 ? slope_fit(xs, ys) : 0.0;
    report.passed = decreasing && xs.size() == report.levels.size() && report.slope > 0.0;
  }
  return report;
}

// ---------------------------------------------------------------- residuals

State trajectory_residual(const SystemDef& system, const BalanceForm& form,
                          const RunOutput& output, const InitialData& u0,
                          const TestFunction& theta, int quad_n) {
  const SchemeConfig& config = output.config;
  if (output.levels.empty()) throw Error("trajectory residual: the run kept no levels");
  const std::size_t last = output.levels.back().k;
  const double t_window = static_cast<double>(last) * config.s;
  if (theta.t_hi() > t_window)
    throw SupportExceedsWindow("test function extends beyond the computed time window");
  if (theta.x_lo() < config.x_min + config.r || theta.x_hi() > config.x_max - config.r)
    throw SupportExceedsWindow("test function extends beyond the computed space window");

  const std::size_t dim = form.density(output.levels.front().states.front()).size();
  State total = State::zero(dim);

  for (const MeshLevel& stored : output.levels) {
    if (stored.k >= last) break;
    const double t0 = static_cast<double>(stored.k) * config.s;
    if (t0 + config.s <= theta.t_lo() || t0 >= theta.t_hi()) continue;
    MeshLevel level = stored;
    solve_level_fans(system, level, config);
    std::vector<State> parts(level.fans.size(), State::zero(dim));
    parallel_for(level.fans.size(), config.threads, [&](std::size_t j) {
      const double x0 = level.fan_h(j) * config.r;
      if (x0 + config.r <= theta.x_lo() || x0 - config.r >= theta.x_hi()) return;
      parts[j] = rectangle_integral(form, level.fans[j], config.s, config.r, theta, quad_n);
    });
    for (const State& part : parts) total += part;
  }

  // Initial term, on the level-0 cell partition so that jumps of u0 at cell
  // interfaces are resolved exactly.
  if (theta.t_lo() < 0.0) {
    const MeshLevel& first = output.levels.front();
    const std::vector<double> support{theta.x_lo(), theta.x_hi()};
    for (std::size_t j = 0; j < first.states.size(); ++j) {
      const double left = (first.cell_h(j) - 1) * config.r;
      if (left + 2.0 * config.r <= theta.x_lo() || left >= theta.x_hi()) continue;
      quad::gauss(left, left + 2.0 * config.r, support, 4, [&](double x, double w) {
        total += (w * theta(0.0, x)) * form.density(u0(x));
      });
    }
  }
  return total;
}

State weak_residual(const SystemDef& system, const RunOutput& output, const InitialData& u0,
                    const TestFunction& theta, int quad_n) {
  return trajectory_residual(system, weak_form(system), output, u0, theta, quad_n);
}

double entropy_residual(const SystemDef& system, const RunOutput& output, const InitialData& u0,
                        const EntropyPair& pair, const TestFunction& theta, int quad_n) {
  return trajectory_residual(system, entropy_form(system, pair), output, u0, theta, quad_n)[0];
}

State function_residual(const BalanceForm& form, const std::function<State(double, double)>& u,
                        const std::function<std::vector<double>(double)>& breaks,
                        const InitialData& u0, const TestFunction& theta, int nt, int nx) {
  const double t_lo = std::max(0.0, theta.t_lo());
  const double t_hi = theta.t_hi();
  const double x_lo = theta.x_lo();
  const double x_hi = theta.x_hi();
  const std::size_t dim = form.density(u(t_lo, x_lo)).size();
  State total = State::zero(dim);
  quad::gauss(t_lo, t_hi, {}, nt, [&](double t, double wt) {
    quad::gauss(x_lo, x_hi, breaks(t), nx, [&](double x, double wx) {
      const State w = u(t, x);
      total += (wt * wx) * (theta.dt(t, x) * form.density(w) + theta.dx(t, x) * form.flux(t, x, w) +
                            theta(t, x) * form.source(t, x, w));
    });
  });
  if (theta.t_lo() < 0.0)
    quad::gauss(x_lo, x_hi, breaks(0.0), nx, [&](double x, double w) {
      total += (w * theta(0.0, x)) * form.density(u0(x));
    });
  return total;
}

}  // namespace glimm
