#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "glimm/config.hpp"
#include "glimm/errors.hpp"
#include "glimm/functionals.hpp"
#include "glimm/output.hpp"
#include "glimm/studies.hpp"

namespace py = pybind11;
using namespace glimm;

namespace {

std::vector<double> to_list(const State& u) { return {u.begin(), u.end()}; }

State from_list(const std::vector<double>& v) {
  if (v.empty() || v.size() > kMaxComponents) throw ConfigError("a state needs 1 to 3 components");
  State u(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) u[i] = v[i];
  return u;
}

// A preset name or a JSON system block.
SystemPtr system_from(const std::string& text) {
  if (!text.empty() && text.front() == '{') return parse_system(Json::parse(text));
  return parse_system(system_preset(text));
}

py::dict table_dict(const StudyTable& t) {
  py::dict d;
  d["name"] = t.name;
  d["header"] = t.header;
  d["rows"] = t.rows;
  py::dict fits;
  for (const auto& [k, v] : t.fits) fits[py::str(k)] = v;
  d["fits"] = fits;
  d["passed"] = t.passed;
  d["summary"] = t.summary;
  return d;
}

py::dict run_doc(const std::string& config_json, const std::optional<std::string>& output_dir) {
  const RunSpec spec = parse_run_config(Json::parse(config_json));
  RunOptions opt;
  opt.snapshot_times = spec.snapshot_times;
  RunOutput out;
  {
    py::gil_scoped_release release;
    out = run(*spec.system, spec.scheme, spec.initial, opt);
  }
  if (output_dir) write_run_outputs(*output_dir, spec, out);

  py::list snaps;
  for (const Snapshot& s : out.snapshots) {
    py::dict d;
    d["k"] = s.k;
    d["t"] = s.t;
    d["x"] = s.x;
    std::vector<std::vector<double>> u;
    for (const State& v : s.u) u.push_back(to_list(v));
    d["u"] = u;
    snaps.append(d);
  }
  py::list diags;
  for (const LevelDiagnostics& g : out.diagnostics) {
    py::dict d;
    d["k"] = g.k;
    d["t"] = g.t;
    d["L"] = g.L;
    d["Q"] = g.Q;
    d["F"] = g.F;
    d["TV"] = g.TV;
    diags.append(d);
  }
  py::dict res;
  res["manifest"] = make_manifest(spec).dump();
  res["snapshots"] = snaps;
  res["diagnostics"] = diags;
  if (out.failure) {
    py::dict f;
    f["kind"] = out.failure->kind;
    f["message"] = out.failure->message;
    f["k"] = out.failure->k;
    res["failure"] = f;
  } else {
    res["failure"] = py::none();
  }
  return res;
}

py::list riemann(const std::string& system, const std::vector<double>& left,
                 const std::vector<double>& right, double t0, double x0) {
  const SystemPtr sys = system_from(system);
  const WaveFan fan = solve_classical(*sys, t0, x0, from_list(left), from_list(right));
  py::list waves;
  for (const Wave& w : fan.waves) {
    py::dict d;
    d["family"] = w.family + 1;
    d["kind"] = std::string(to_string(w.kind));
    d["strength"] = w.strength;
    d["lower_speed"] = w.lower_speed;
    d["upper_speed"] = w.upper_speed;
    d["left"] = to_list(w.left_state);
    d["right"] = to_list(w.right_state);
    waves.append(d);
  }
  return waves;
}

std::vector<double> sample(const std::string& system, const std::vector<double>& left,
                           const std::vector<double>& right, double xi) {
  const SystemPtr sys = system_from(system);
  return to_list(sample_fan(solve_classical(*sys, 0.0, 0.0, from_list(left), from_list(right)), xi));
}

std::vector<double> generalized(const std::string& system, const std::vector<double>& left,
                                const std::vector<double>& right, double t0, double x0, double t,
                                double x) {
  const SystemPtr sys = system_from(system);
  const GeneralizedFan g =
      make_generalized(solve_classical(*sys, t0, x0, from_list(left), from_list(right)));
  return to_list(evaluate_generalized(g, t, x));
}

double potential(const std::string& system, const std::vector<double>& ul,
                 const std::vector<double>& um, const std::vector<double>& ur) {
  const SystemPtr sys = system_from(system);
  const auto a = wave_strengths(solve_classical(*sys, 0.0, 0.0, from_list(ul), from_list(um)));
  const auto b = wave_strengths(solve_classical(*sys, 0.0, 0.0, from_list(um), from_list(ur)));
  return interaction_potential(a, b);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Generalized random-choice scheme for 1D balance laws";

  auto base = py::register_exception<Error>(m, "GlimmError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<OutOfPhaseBox>(m, "OutOfPhaseBox", base.ptr());
  py::register_exception<NoSolution>(m, "NoSolution", base.ptr());
  py::register_exception<CflViolated>(m, "CflViolated", base.ptr());
  py::register_exception<SupportExceedsWindow>(m, "SupportExceedsWindow", base.ptr());

  m.def("run", &run_doc, py::arg("config_json"), py::arg("output_dir") = std::nullopt,
        "Runs a JSON configuration; optionally writes the run directory.");
  m.def("riemann", &riemann, py::arg("system"), py::arg("left"), py::arg("right"),
        py::arg("t0") = 0.0, py::arg("x0") = 0.0, "Waves of the classical Riemann problem.");
  m.def("sample", &sample, py::arg("system"), py::arg("left"), py::arg("right"), py::arg("xi"),
        "Classical Riemann solution at x / t = xi.");
  m.def("generalized", &generalized, py::arg("system"), py::arg("left"), py::arg("right"),
        py::arg("t0"), py::arg("x0"), py::arg("t"), py::arg("x"),
        "First-order generalized Riemann solution at (t, x).");
  m.def("interaction_potential", &potential, py::arg("system"), py::arg("ul"), py::arg("um"),
        py::arg("ur"), "D of the two fans (ul, um) and (um, ur).");
  m.def("study", [](const std::string& n) { return table_dict(run_study(n)); }, py::arg("name"));
  m.def("check", [](const std::string& n) { return table_dict(run_check(n)); }, py::arg("name"));
  m.def("study_names", &study_names);
  m.def("check_names", &check_names);
}
