// glimm: run / riemann / convergence / check.
// Exit codes: 0 ok, 1 configuration error, 2 numerical abort, 3 property failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "glimm/config.hpp"
#include "glimm/errors.hpp"
#include "glimm/output.hpp"
#include "glimm/studies.hpp"

namespace fs = std::filesystem;
using namespace glimm;

namespace {

constexpr int kOk = 0;
constexpr int kConfig = 1;
constexpr int kAbort = 2;
constexpr int kProperty = 3;

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kConfig;
  return kAbort;
}

int report_error(const std::exception& e) {
  std::cerr << "glimm: " << error_kind(e) << ": " << e.what() << "\n";
  return exit_code_for(e);
}

std::string state_text(const State& u) {
  std::string s = "(";
  for (std::size_t i = 0; i < u.size(); ++i) s += (i ? ", " : "") + format_double(u[i]);
  return s + ")";
}

// ---------------------------------------------------------------- run

struct RunArgs {
  std::string config;
  std::string output_dir;
  int threads = 0;
};

int cmd_run(const RunArgs& a) {
  RunSpec spec;
  try {
    Json doc = Json::parse(read_text(a.config));
    if (a.threads > 0) doc["threads"] = a.threads;
    spec = parse_run_config(doc);
  } catch (const Json::parse_error& e) {
    std::cerr << "glimm: ConfigError: " << a.config << ": " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    return report_error(e);
  }
  const std::string dir = !a.output_dir.empty() ? a.output_dir : spec.output_dir.value_or("");
  if (dir.empty()) {
    std::cerr << "glimm: ConfigError: no output directory (config output_dir or --output-dir)\n";
    return kConfig;
  }

  RunOptions opt;
  opt.snapshot_times = spec.snapshot_times;
  const RunOutput out = run(*spec.system, spec.scheme, spec.initial, opt);
  try {
    write_run_outputs(dir, spec, out);
  } catch (const std::exception& e) {
    return report_error(e);
  }
  if (out.failure) {
    std::cerr << "glimm: run aborted at level " << out.failure->k << ": " << out.failure->kind
              << ": " << out.failure->message << "\n";
    return out.failure->kind == "ConfigError" ? kConfig : kAbort;
  }
  std::cout << "levels " << out.final_level.k << ", t = " << format_double(out.final_level.k * spec.scheme.s)
            << ", s = " << format_double(spec.scheme.s) << ", lambda* = " << format_double(spec.scheme.lambda_star)
            << ", cells " << spec.scheme.cells() << "\n";
  if (!out.diagnostics.empty()) {
    const LevelDiagnostics& d = out.diagnostics.back();
    std::cout << "final L = " << format_double(d.L) << ", Q = " << format_double(d.Q)
              << ", F = " << format_double(d.F) << ", TV = " << format_double(d.TV) << "\n";
  }
  std::cout << "outputs in " << dir << "\n";
  return kOk;
}

// ---------------------------------------------------------------- riemann

struct RiemannArgs {
  std::string system = "burgers";
  std::string system_file;
  std::string left, right;
  bool primitive = false;
  double t0 = 0.0, x0 = 0.0;
  std::string rays;
  bool generalized = false;
  std::string at;
  std::string output_dir;
};

State to_state(const SystemDef& sys, const std::string& text, bool primitive) {
  State u = parse_state(text);
  if (u.size() != sys.p())
    throw ConfigError("state " + text + " needs " + std::to_string(sys.p()) + " components");
  if (primitive) {
    const auto* e = dynamic_cast<const EulerSystem*>(&sys);
    if (!e) throw ConfigError("--primitive applies to Euler only");
    u = to_conserved(e->gamma(), {u[0], u[1], u[2]});
  }
  if (!sys.in_phase_box(u)) throw ConfigError("state " + text + " is outside the phase box");
  return u;
}

int cmd_riemann(const RiemannArgs& a) {
  SystemPtr sys;
  State ul, ur;
  try {
    const Json block = a.system_file.empty() ? system_preset(a.system)
                                             : Json::parse(read_text(a.system_file));
    sys = parse_system(block);
    ul = to_state(*sys, a.left, a.primitive);
    ur = to_state(*sys, a.right, a.primitive);
  } catch (const Json::parse_error& e) {
    std::cerr << "glimm: ConfigError: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    return report_error(e);
  }

  WaveFan fan;
  try {
    fan = solve_classical(*sys, a.t0, a.x0, ul, ur);
  } catch (const std::exception& e) {
    return report_error(e);
  }
  const auto* euler = dynamic_cast<const EulerSystem*>(sys.get());
  std::cout << "system " << sys->name() << "\n";
  std::cout << "left  " << state_text(ul) << "\nright " << state_text(ur) << "\n";
  if (fan.degenerate()) {
    std::cout << "degenerate fan, all eps = 0\n";
  }
  for (const Wave& w : fan.waves) {
    std::cout << "family " << w.family + 1 << " " << to_string(w.kind)
              << " eps=" << format_double(w.strength);
    if (w.kind == WaveKind::Rarefaction)
      std::cout << " sigma-=" << format_double(w.lower_speed) << " sigma+=" << format_double(w.upper_speed);
    else
      std::cout << " sigma=" << format_double(w.lower_speed);
    std::cout << "\n";
  }
  for (std::size_t i = 1; i + 1 < fan.states.size(); ++i) {
    std::cout << "state " << i << " " << state_text(fan.states[i]);
    if (euler) {
      const Primitive w = to_primitive(euler->gamma(), fan.states[i]);
      std::cout << "  rho=" << format_double(w.rho) << " v=" << format_double(w.v)
                << " p=" << format_double(w.p);
    }
    std::cout << "\n";
  }
  if (euler && fan.states.size() == 4 && !fan.degenerate()) {
    const Primitive w = to_primitive(euler->gamma(), fan.states[1]);
    std::cout << "star pressure " << format_double(w.p) << ", star velocity " << format_double(w.v) << "\n";
  }

  try {
    if (a.generalized || !a.at.empty()) {
      const State tx = parse_state(a.at.empty() ? "0,0" : a.at);
      if (tx.size() != 2) throw ConfigError("--at expects t,x");
      if (!(tx[0] > a.t0)) throw ConfigError("--at needs t > t0");
      const GeneralizedFan g = make_generalized(fan);
      std::cout << "W_G(" << format_double(tx[0]) << ", " << format_double(tx[1])
                << ") = " << state_text(evaluate_generalized(g, tx[0], tx[1])) << "\n";
    }
    if (!a.rays.empty()) {
      const std::vector<double> xi = parse_numbers(a.rays);
      std::vector<std::string> header{"xi"};
      for (std::size_t i = 1; i <= sys->p(); ++i) header.push_back("u" + std::to_string(i));
      std::vector<std::vector<double>> rows;
      for (std::size_t k = 0; k < xi.size(); ++k) {
        const State u = sample_fan(fan, xi[k]);
        std::vector<double> row{xi[k]};
        for (std::size_t i = 0; i < u.size(); ++i) row.push_back(u[i]);
        rows.push_back(row);
      }
      const std::string csv = csv_table(header, rows);
      if (a.output_dir.empty()) {
        std::cout << csv;
      } else {
        fs::create_directories(a.output_dir);
        write_text(fs::path(a.output_dir) / "riemann_samples.csv", csv);
      }
    }
  } catch (const std::exception& e) {
    return report_error(e);
  }
  return kOk;
}

// ---------------------------------------------------------------- studies

int emit(const StudyTable& t, const std::string& dir) {
  if (!dir.empty()) {
    fs::create_directories(dir);
    write_text(fs::path(dir) / (t.name + ".csv"), csv_table(t.header, t.rows));
    Json fits = Json::object();
    for (const auto& [k, v] : t.fits) fits[k] = v;
    const Json report{{"name", t.name}, {"passed", t.passed}, {"summary", t.summary}, {"fits", fits}};
    write_text(fs::path(dir) / (t.name + ".json"), report.dump(2) + "\n");
  }
  std::cout << t.name << ": " << (t.passed ? "PASS" : "FAIL") << ": " << t.summary << "\n";
  for (const auto& [k, v] : t.fits) std::cout << "  " << k << " = " << format_double(v) << "\n";
  return t.passed ? kOk : kProperty;
}

int cmd_convergence(const std::string& study, const std::string& dir) {
  try {
    return emit(run_study(study), dir);
  } catch (const std::exception& e) {
    return report_error(e);
  }
}

int cmd_check(const std::string& suite, const std::string& system, const std::string& dir) {
  try {
    SystemPtr sys;
    if (!system.empty()) sys = parse_system(system_preset(system));
    const StudyTable t = run_check(suite, sys);
    const int code = emit(t, dir);
    if (code != kOk) {
      // echo the record with the largest ratio
      const auto& rows = t.rows;
      std::size_t worst = 0;
      for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].back() > rows[worst].back()) worst = i;
      if (!rows.empty()) {
        std::cout << "  worst record:";
        for (std::size_t i = 0; i < t.header.size(); ++i)
          std::cout << " " << t.header[i] << "=" << format_double(rows[worst][i]);
        std::cout << "\n";
      }
    }
    return code;
  } catch (const std::exception& e) {
    return report_error(e);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized random-choice scheme for 1D balance laws"};
  app.require_subcommand(1);

  RunArgs run_args;
  CLI::App* run_cmd = app.add_subcommand("run", "Run a simulation from a JSON config or manifest");
  run_cmd->add_option("config", run_args.config, "config.json")->required();
  run_cmd->add_option("--output-dir", run_args.output_dir, "output directory (overrides the config)");
  run_cmd->add_option("--threads", run_args.threads, "worker threads (results do not depend on it)");

  RiemannArgs ra;
  CLI::App* rm = app.add_subcommand("riemann", "Solve and print one Riemann problem");
  rm->add_option("--system", ra.system, "preset: burgers, euler, p-system");
  rm->add_option("--system-file", ra.system_file, "JSON system block");
  rm->add_option("--left", ra.left, "left state, comma separated")->required();
  rm->add_option("--right", ra.right, "right state, comma separated")->required();
  rm->add_flag("--primitive", ra.primitive, "Euler states given as rho,v,p");
  rm->add_option("--t0", ra.t0, "anchor time");
  rm->add_option("--x0", ra.x0, "anchor position");
  rm->add_option("--rays", ra.rays, "sample the fan at these xi, comma separated");
  rm->add_flag("--generalized", ra.generalized, "evaluate the generalized solution");
  rm->add_option("--at", ra.at, "t,x for --generalized");
  rm->add_option("--output-dir", ra.output_dir, "where riemann_samples.csv goes");

  std::string study, study_dir;
  CLI::App* cv = app.add_subcommand("convergence", "Run a refinement study");
  cv->add_option("study", study, "consistency, weak-residual, ode-order, shock-l1, duct-steady")->required();
  cv->add_option("--output-dir", study_dir, "directory for the CSV report");

  std::string suite, check_system, check_dir;
  CLI::App* ck = app.add_subcommand("check", "Run a property-check suite");
  ck->add_option("suite", suite, "glimm-estimate, perturbed-estimate, entropy, eigenstructure")->required();
  ck->add_option("--system", check_system, "preset for glimm-estimate / eigenstructure");
  ck->add_option("--output-dir", check_dir, "directory for the CSV report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  if (run_cmd->parsed()) return cmd_run(run_args);
  if (rm->parsed()) return cmd_riemann(ra);
  if (cv->parsed()) return cmd_convergence(study, study_dir);
  if (ck->parsed()) return cmd_check(suite, check_system, check_dir);
  return kConfig;
}
