// One line per acceptance criterion; exit status 1 when any fails.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "glimm/config.hpp"
#include "glimm/errors.hpp"
#include "glimm/functionals.hpp"
#include "glimm/glimm_scheme.hpp"
#include "glimm/output.hpp"
#include "glimm/studies.hpp"
#include "oracles/sod_oracle.hpp"
#include "reference_glimm.hpp"

using namespace glimm;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

SchemeConfig mesh(double r, double x_min, double x_max, double t_end) {
  SchemeConfig c;
  c.r = r;
  c.x_min = x_min;
  c.x_max = x_max;
  c.t_end = t_end;
  return c;
}

// ---------------------------------------------------------------- 1

bool same_bits(const State& a, const State& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::bit_cast<std::uint64_t>(a[i]) != std::bit_cast<std::uint64_t>(b[i])) return false;
  return true;
}

// Library run vs reference over every level; returns the number of mismatched cells.
std::size_t compare_with_reference(const SystemDef& sys, const InitialData& u0) {
  SchemeConfig c = make_config(sys, mesh(1.0 / 200.0, -1.0, 1.0, 1.0));
  c.t_end = 200.5 * c.s;
  c = make_config(sys, c);
  if (c.cells() != 200 || c.steps() != 200) throw Error("mesh is not 200 cells x 200 steps");
  RunOptions opt;
  opt.diagnostics = false;
  opt.keep_levels = true;
  const RunOutput out = run(sys, c, u0, opt);
  out.throw_if_failed();

  std::vector<State> init;
  // node positions are h r with integer h
  const long h0 = std::lround(c.x_min / c.r);
  for (std::size_t j = 0; j < c.cells(); ++j)
    init.push_back(u0(static_cast<double>(h0 + 1 + 2 * static_cast<long>(j)) * c.r));
  const auto ref = reference::classical_glimm(sys, c.x_min, c.r, c.s, c.cells(), 200, init);

  std::size_t bad = out.levels.size() == ref.levels.size() ? 0 : 1;
  for (std::size_t k = 0; k < std::min(out.levels.size(), ref.levels.size()); ++k) {
    const auto& a = out.levels[k].states;
    const auto& b = ref.levels[k];
    if (a.size() != b.size()) {
      ++bad;
      continue;
    }
    for (std::size_t j = 0; j < a.size(); ++j) bad += same_bits(a[j], b[j]) ? 0 : 1;
  }
  return bad;
}

Verdict classical_reduction() {
  auto burgers = scalar_system({}, {}, PhaseBox({0.0}, {2.0}));
  const std::size_t b = compare_with_reference(*burgers, [](double x) {
    return State{x < -0.3 ? 1.0 : (x < 0.3 ? 0.2 + 0.5 * std::sin(6.0 * x) : -0.4)};
  });
  auto euler = euler_system(1.4, PhaseBox({1.0, 0.0, 2.5}, {0.95, 2.0, 2.45}));
  const std::size_t e = compare_with_reference(*euler, [](double x) {
    return x < 0.0 ? to_conserved(1.4, {1.0, 0.0, 1.0}) : to_conserved(1.4, {0.125, 0.0, 0.1});
  });
  return {b == 0 && e == 0, "mismatched cells over 200 levels: burgers " + std::to_string(b) +
                                ", euler " + std::to_string(e)};
}

// ---------------------------------------------------------------- 3

Verdict riemann_oracles() {
  auto burgers = scalar_system({}, {}, PhaseBox({0.0}, {2.0}));
  double worst_speed = 0.0;
  for (auto [l, r] : std::vector<std::pair<double, double>>{{1.0, 0.0}, {0.7, -0.3}, {1.5, 1.1}, {0.1, -1.9}}) {
    const WaveFan fan = solve_classical(*burgers, 0.0, 0.0, State{l}, State{r});
    worst_speed = std::max(worst_speed, std::abs(fan.waves.at(0).lower_speed - 0.5 * (l + r)));
    worst_speed = std::max(worst_speed, std::abs(fan.waves.at(0).upper_speed - 0.5 * (l + r)));
  }
  const double g = 1.4;
  auto euler = euler_system(g, PhaseBox({1.0, 0.0, 2.5}, {0.95, 2.0, 2.45}));
  const oracle::Star star = oracle::euler_star_bisection(g, {1.0, 0.0, 1.0}, {0.125, 0.0, 0.1});
  const WaveFan fan = solve_classical(*euler, 0.0, 0.0, to_conserved(g, {1.0, 0.0, 1.0}),
                                      to_conserved(g, {0.125, 0.0, 0.1}));
  const Primitive mid = to_primitive(g, sample_fan(fan, 0.5 * (fan.waves[1].lower_speed +
                                                                fan.waves[2].lower_speed)));
  const double dp = std::abs(mid.p - star.p), dv = std::abs(mid.v - star.v);
  return {worst_speed <= 1e-14 && dp <= 1e-10 && dv <= 1e-10,
          "burgers shock speed error " + num(worst_speed) + ", sod |dp*| " + num(dp) + " |dv*| " +
              num(dv) + " (p* " + num(star.p) + ", v* " + num(star.v) + ")"};
}

// ---------------------------------------------------------------- 6

Verdict total_variation_bound() {
  const double amp = 0.05;
  auto sourced = scalar_system({}, {ScalarSourceKind::Exponential, amp, 1.0}, PhaseBox({0.0}, {0.5}));
  auto plain = scalar_system({}, {}, PhaseBox({0.0}, {0.5}));
  const InitialData u0 = [](double x) { return State{std::abs(x) < 0.5 ? 0.1 : 0.0}; };
  const double T = 10.0;

  auto go = [&](const SystemDef& sys) {
    const SchemeConfig c = make_config(sys, mesh(1.0 / 400.0, -1.0, 1.0, T));
    RunOutput out = run(sys, c, u0);
    out.throw_if_failed();
    if (c.cells() != 400) throw Error("expected 400 cells");
    return out;
  };
  const RunOutput a = go(*sourced);
  const double tv0 = a.diagnostics.front().TV;
  double max_tv = 0.0;
  for (const auto& d : a.diagnostics) max_tv = std::max(max_tv, d.TV);
  const double g_l1 = amp * (1.0 - std::exp(-T));
  const double bound = 3.0 * (tv0 + g_l1);

  const RunOutput b = go(*plain);
  double rise = 0.0;
  for (std::size_t i = 1; i < b.diagnostics.size(); ++i)
    rise = std::max(rise, b.diagnostics[i].F - b.diagnostics[i - 1].F);
  return {std::abs(tv0 - 0.2) < 1e-14 && max_tv <= bound && rise <= 1e-10,
          "TV0 " + num(tv0) + ", max TV " + num(max_tv) + " <= " + num(bound) +
              ", source-free max F increase " + num(rise)};
}

// ---------------------------------------------------------------- 9

Verdict duct() {
  const double g = 1.4;
  const PhaseBox box({1.0, 0.0, 2.5}, {0.95, 2.0, 2.45});

  // a = 1: bitwise equal to the plain system on every level
  DuctGeometry unit;
  unit.kind = DuctKind::Constant;
  unit.a0 = 1.0;
  auto with_duct = euler_duct_system(g, unit, box);
  auto without = euler_system(g, box);
  const InitialData sod = [g](double x) {
    return x < 0.0 ? to_conserved(g, {1.0, 0.0, 1.0}) : to_conserved(g, {0.125, 0.0, 0.1});
  };
  RunOptions keep;
  keep.diagnostics = false;
  keep.keep_levels = true;
  const SchemeConfig c1 = make_config(*without, mesh(0.01, -1.0, 1.0, 0.3));
  const RunOutput p = run(*without, c1, sod, keep);
  const RunOutput d = run(*with_duct, make_config(*with_duct, mesh(0.01, -1.0, 1.0, 0.3)), sod, keep);
  std::size_t diff = p.levels.size() == d.levels.size() ? 0 : 1;
  for (std::size_t k = 0; k < std::min(p.levels.size(), d.levels.size()); ++k)
    for (std::size_t j = 0; j < p.levels[k].states.size(); ++j)
      diff += same_bits(p.levels[k].states[j], d.levels[k].states[j]) ? 0 : 1;

  // compact bump with a constant state
  DuctGeometry bump;
  bump.kind = DuctKind::CosineBump;
  bump.a0 = 1.0;
  bump.amplitude = 0.05;
  bump.center = 0.0;
  bump.width = 0.4;
  auto bumped = euler_duct_system(g, bump, box);
  const State w0 = to_conserved(g, {1.0, 0.2, 1.0});
  const double T = 1.0;
  const SchemeConfig c2 = make_config(*bumped, mesh(0.01, -1.0, 1.0, T));
  double deviation = 0.0;
  RunOptions obs;
  obs.diagnostics = false;
  obs.observer = [&](const MeshLevel&, const MeshLevel& next) {
    for (const State& u : next.states) deviation = std::max(deviation, norm_inf(u - w0));
  };
  const RunOutput b = run(*bumped, c2, [&](double) { return w0; }, obs);
  b.throw_if_failed();
  double q_sup = 0.0;
  for (int i = 0; i <= 4000; ++i)
    q_sup = std::max(q_sup, norm_inf(bumped->combined_source(0.0, -1.0 + i * 5e-4, w0)));
  const double q_l1 = q_sup * T;

  const StudyTable steady = run_study("duct-steady");
  return {diff == 0 && deviation <= 5.0 * q_l1 && steady.passed,
          "a=1 mismatched cells " + std::to_string(diff) + "; bump deviation " + num(deviation) +
              " <= " + num(5.0 * q_l1) + "; steady " + steady.summary};
}

// ---------------------------------------------------------------- 10

std::vector<std::string> run_files(const RunSpec& spec, const std::filesystem::path& dir) {
  RunOptions opt;
  opt.snapshot_times = spec.snapshot_times;
  const RunOutput out = run(*spec.system, spec.scheme, spec.initial, opt);
  std::vector<std::string> names;
  for (const auto& f : write_run_outputs(dir, spec, out)) names.push_back(f.filename().string());
  return names;
}

Verdict determinism() {
  const auto root = std::filesystem::temp_directory_path() / "glimm_acceptance_determinism";
  std::filesystem::remove_all(root);
  const std::vector<std::string> docs = {
      R"({"system": {"name": "euler"}, "domain": [-1, 1], "r": 0.01, "t_end": 0.2,
          "sequence": {"kind": "seeded_uniform", "seed": 7},
          "initial_data": {"kind": "riemann", "variables": "primitive",
                           "left": [1, 0, 1], "right": [0.125, 0, 0.1]},
          "snapshots": [0.1, 0.2]})",
      R"({"system": {"name": "scalar", "parameters": {"source": {"kind": "exponential", "amplitude": 0.05}}},
          "domain": [-1, 1], "r": 0.01, "t_end": 0.5,
          "initial_data": {"kind": "sine", "mean": [0.2], "amplitude": [0.5], "wavenumber": 3.14159},
          "snapshots": [0.25, 0.5]})"};
  std::size_t files = 0, differ = 0;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto base = root / std::to_string(i);
    const RunSpec first = parse_run_config(Json::parse(docs[i]));
    const auto names = run_files(first, base / "a");

    const RunSpec again = load_run_config((base / "a" / "manifest.json").string());
    run_files(again, base / "b");

    Json threaded = again.config;
    threaded["threads"] = 256;
    run_files(parse_run_config(threaded), base / "c");

    for (const auto& n : names) {
      const std::string ref = read_text(base / "a" / n);
      ++files;
      differ += read_text(base / "b" / n) == ref ? 0 : 1;
      if (n != "manifest.json") differ += read_text(base / "c" / n) == ref ? 0 : 1;
    }
  }
  std::filesystem::remove_all(root);
  return {differ == 0 && files > 0,
          std::to_string(files) + " files, " + std::to_string(differ) +
              " differing across manifest re-run and 256 threads"};
}

Verdict from_table(const StudyTable& t) { return {t.passed, t.summary}; }

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"classical reduction", classical_reduction},
      {"ode order", [] { return from_table(run_study("ode-order")); }},
      {"riemann oracles", riemann_oracles},
      {"consistency", [] { return from_table(run_study("consistency")); }},
      {"glimm estimate", [] { return from_table(run_check("glimm-estimate")); }},
      {"total variation", total_variation_bound},
      {"weak residual", [] { return from_table(run_study("weak-residual")); }},
      {"entropy residual", [] { return from_table(run_check("entropy")); }},
      {"duct", duct},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("aborted: ") + error_kind(e) + ": " + e.what()};
    }
    failed += v.pass ? 0 : 1;
    std::printf("criterion %2zu %-20s %s  %s\n", i + 1, criteria[i].first.c_str(),
                v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
