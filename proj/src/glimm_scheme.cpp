#include "glimm/glimm_scheme.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "glimm/errors.hpp"
#include "glimm/functionals.hpp"

namespace glimm {

// ---------------------------------------------------------------- sampling

double van_der_corput(std::uint64_t k) {
  double v = 0.0;
  double base = 0.5;
  while (k) {
    if (k & 1u) v += base;
    base *= 0.5;
    k >>= 1;
  }
  return 2.0 * v - 1.0;
}

const char* to_string(SequenceKind kind) {
  return kind == SequenceKind::VanDerCorput ? "van_der_corput" : "seeded_uniform";
}

EquidistributedSequence::EquidistributedSequence(SequenceSpec spec)
    : spec_(spec), rng_(spec.seed) {}

double EquidistributedSequence::at(std::uint64_t k) {
  if (k == 0) throw ConfigError("sequence index starts at 1");
  if (spec_.kind == SequenceKind::VanDerCorput) return van_der_corput(k);
  while (cache_.size() < k) {
    // 53 random bits mapped to the open interval (0, 1)
    const double u = (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53;
    cache_.push_back(2.0 * u - 1.0);
  }
  return cache_[k - 1];
}

// ---------------------------------------------------------------- config

const char* to_string(Boundary b) {
  return b == Boundary::Periodic ? "periodic" : "constant_extension";
}

namespace {

int even_index(double x, double r, const char* what) {
  const double m = x / r;
  const double n = std::round(m);
  if (std::abs(m - n) > 1e-9 * std::max(1.0, std::abs(m)))
    throw ConfigError(std::string("domain ") + what + " is not an integer multiple of r");
  const long long i = static_cast<long long>(n);
  if (i % 2 != 0) throw ConfigError(std::string("domain ") + what + " must be an even multiple of r");
  if (std::abs(i) > (1LL << 30)) throw ConfigError("domain too large for r");
  return static_cast<int>(i);
}

}  // namespace

int SchemeConfig::h_min() const { return even_index(x_min, r, "x_min"); }
int SchemeConfig::h_max() const { return even_index(x_max, r, "x_max"); }

std::size_t SchemeConfig::steps() const {
  if (!(t_end > 0.0)) return 0;
  return static_cast<std::size_t>(std::floor(t_end / s * (1.0 + 1e-12)));
}

SchemeConfig make_config(const SystemDef& system, SchemeConfig c) {
  if (!(c.r > 0.0) || !std::isfinite(c.r)) throw ConfigError("r must be positive");
  if (!(c.x_max > c.x_min)) throw ConfigError("domain must satisfy x_min < x_max");
  if (!(c.t_end >= 0.0) || !std::isfinite(c.t_end)) throw ConfigError("t_end must be >= 0");
  if (!(c.cfl_safety > 0.0) || c.cfl_safety > 1.0) throw ConfigError("cfl_safety must lie in (0, 1]");
  if (!(c.K > 0.0)) throw ConfigError("K must be positive");
  if (c.threads < 1) throw ConfigError("threads must be at least 1");
  if (c.h_max() - c.h_min() < 4) throw ConfigError("domain must hold at least two cells");

  const double bound = system.max_speed_bound();
  if (c.s == 0.0) {
    if (!(bound > 0.0))
      throw ConfigError("the speed bound vanishes; give the time step s explicitly");
    c.s = c.cfl_safety * c.r / bound;
  } else {
    if (!(c.s > 0.0) || !std::isfinite(c.s)) throw ConfigError("s must be positive");
    if (c.s * bound > c.cfl_safety * c.r * (1.0 + 1e-12))
      throw ConfigError("s violates the CFL bound (s/r) sup|lambda| <= cfl_safety");
  }
  c.lambda_star = c.r / c.s;
  if (c.steps() > 100000000) throw ConfigError("too many time steps");
  return c;
}

// ---------------------------------------------------------------- levels

namespace {

[[noreturn]] void rethrow_with_context(const std::string& ctx) {
  try {
    throw;
  } catch (const OutOfPhaseBox& e) {
    throw OutOfPhaseBox(ctx + e.what());
  } catch (const NoSolution& e) {
    throw NoSolution(ctx + e.what());
  } catch (const CflViolated& e) {
    throw CflViolated(ctx + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(ctx + e.what());
  } catch (const Error& e) {
    throw Error(ctx + e.what());
  }
}

std::string where(std::size_t k, int h) {
  return "level " + std::to_string(k) + ", h " + std::to_string(h) + ": ";
}

}  // namespace

MeshLevel initialize(const SystemDef& system, const SchemeConfig& config, const InitialData& u0) {
  MeshLevel level;
  level.k = 0;
  level.h_first = config.h_min() + 1;
  const std::size_t n = config.cells();
  level.states.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const int h = level.cell_h(j);
    const State u = u0(h * config.r);
    if (u.size() != system.p())
      throw ConfigError("initial data has " + std::to_string(u.size()) + " components, expected " +
                        std::to_string(system.p()));
    if (!system.in_phase_box(u))
      throw OutOfPhaseBox(where(0, h) + "initial state " + to_string(u) +
                          " outside the phase box");
    level.states.push_back(u);
  }
  level.tilde_states = level.states;
  return level;
}

const State& neighbor(const MeshLevel& level, int h, const SchemeConfig& config) {
  const int n = static_cast<int>(level.states.size());
  int offset = h - level.h_first;
  if (offset >= 0 && offset <= 2 * (n - 1)) return level.states[offset / 2];
  if (config.boundary == Boundary::Periodic) {
    const int period = config.h_max() - config.h_min();
    offset = ((offset % period) + period) % period;
    return level.states[offset / 2];
  }
  return offset < 0 ? level.states.front() : level.states.back();
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t lo = w * n / workers;
      const std::size_t hi = (w + 1) * n / workers;
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void solve_level_fans(const SystemDef& system, MeshLevel& level, const SchemeConfig& config) {
  const int lo = config.h_min();
  const int hi = config.boundary == Boundary::Periodic ? config.h_max() - 1 : config.h_max();
  const int parity = static_cast<int>(level.k % 2);
  level.fan_h_first = ((lo + parity) % 2 == 0) ? lo : lo + 1;
  const std::size_t count =
      level.fan_h_first > hi ? 0 : static_cast<std::size_t>((hi - level.fan_h_first) / 2 + 1);
  level.fans.assign(count, GeneralizedFan{});
  const double t = static_cast<double>(level.k) * config.s;
  parallel_for(count, config.threads, [&](std::size_t j) {
    const int h = level.fan_h(j);
    try {
      WaveFan fan = solve_classical(system, t, h * config.r, neighbor(level, h - 1, config),
                                    neighbor(level, h + 1, config));
      if (fan.max_abs_speed() * config.s > config.r)
        throw CflViolated("a wave ray leaves its diamond (|sigma| s / r = " +
                          std::to_string(fan.max_abs_speed() * config.s / config.r) + ")");
      level.fans[j] = make_generalized(std::move(fan));
    } catch (const Error&) {
      rethrow_with_context(where(level.k, h));
    }
  });
}

MeshLevel sample_step(const SystemDef& system, const MeshLevel& level, double a_next,
                      const SchemeConfig& config) {
  MeshLevel next;
  next.k = level.k + 1;
  next.h_first = level.fan_h_first;
  const std::size_t n = level.fans.size();
  next.states.assign(n, State{});
  next.tilde_states.assign(n, State{});
  const double xi = a_next * config.lambda_star;
  parallel_for(n, config.threads, [&](std::size_t j) {
    const GeneralizedFan& g = level.fans[j];
    const State tilde = sample_fan(g.fan, xi);
    const State q = g.frozen_q(tilde);
    const bool sourced = std::any_of(q.begin(), q.end(), [](double v) { return v != 0.0; });
    const State u = sourced ? tilde + config.s * q : tilde;
    if (!system.in_phase_box(u))
      throw OutOfPhaseBox(where(next.k, level.fan_h(j)) + "state " + to_string(u) +
                          " left the phase box");
    next.tilde_states[j] = tilde;
    next.states[j] = u;
  });
  return next;
}

// ---------------------------------------------------------------- run

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const OutOfPhaseBox*>(&e)) return "OutOfPhaseBox";
  if (dynamic_cast<const NoSolution*>(&e)) return "NoSolution";
  if (dynamic_cast<const CflViolated*>(&e)) return "CflViolated";
  if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
  if (dynamic_cast<const SupportExceedsWindow*>(&e)) return "SupportExceedsWindow";
  if (dynamic_cast<const Error*>(&e)) return "Error";
  return "exception";
}

void RunOutput::throw_if_failed() const {
  if (!failure) return;
  const std::string& m = failure->message;
  if (failure->kind == "OutOfPhaseBox") throw OutOfPhaseBox(m);
  if (failure->kind == "NoSolution") throw NoSolution(m);
  if (failure->kind == "CflViolated") throw CflViolated(m);
  if (failure->kind == "ConfigError") throw ConfigError(m);
  throw Error(m);
}

Snapshot make_snapshot(const MeshLevel& level, const SchemeConfig& config) {
  Snapshot snap;
  snap.k = level.k;
  snap.t = static_cast<double>(level.k) * config.s;
  snap.u = level.states;
  snap.x.reserve(level.states.size());
  for (std::size_t j = 0; j < level.states.size(); ++j) snap.x.push_back(level.cell_h(j) * config.r);
  return snap;
}

RunOutput run(const SystemDef& system, const SchemeConfig& config, const InitialData& u0,
              const RunOptions& options) {
  RunOutput out;
  out.config = config;
  EquidistributedSequence sequence(config.sequence);
  const std::size_t steps = config.steps();

  std::vector<double> pending = options.snapshot_times;
  std::sort(pending.begin(), pending.end());
  std::size_t next_snapshot = 0;

  MeshLevel level;
  try {
    level = initialize(system, config, u0);
  } catch (const Error& e) {
    out.failure = RunFailure{error_kind(e), e.what(), 0};
    return out;
  }

  const bool want_next = options.diagnostics || static_cast<bool>(options.observer);
  double budget = 0.0;
  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * config.s;
    while (next_snapshot < pending.size() && t >= pending[next_snapshot] * (1.0 - 1e-12)) {
      out.snapshots.push_back(make_snapshot(level, config));
      ++next_snapshot;
    }
    if (options.keep_levels) {
      MeshLevel copy;
      copy.k = level.k;
      copy.h_first = level.h_first;
      copy.states = level.states;
      copy.tilde_states = level.tilde_states;
      out.levels.push_back(std::move(copy));
    }
    if (k == steps && !want_next) break;

    MeshLevel next;
    try {
      solve_level_fans(system, level, config);
      next = sample_step(system, level, sequence.at(k + 1), config);
      if (options.diagnostics) {
        LevelDiagnostics d = level_functionals(system, level, next, config);
        d.F_budget_used = budget;
        out.diagnostics.push_back(d);
      }
      if (options.observer) options.observer(level, next);
    } catch (const Error& e) {
      if (k == steps) break;  // only the diagnostics-only sample failed
      out.failure = RunFailure{error_kind(e), e.what(), k};
      out.final_level = std::move(level);
      return out;
    }
    if (k == steps) break;
    for (std::size_t j = 0; j < next.states.size(); ++j)
      budget += norm1(next.states[j] - next.tilde_states[j]);
    level = std::move(next);
  }
  while (next_snapshot < pending.size()) {
    out.snapshots.push_back(make_snapshot(level, config));
    ++next_snapshot;
  }
  out.final_level = std::move(level);
  return out;
}

}  // namespace glimm
