#include "glimm/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "glimm/errors.hpp"
#include "glimm/output.hpp"

namespace glimm {

namespace {

// Strict view of one JSON object: every key read is recorded, and finish()
// rejects the rest.
class Fields {
 public:
  Fields(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("", "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const Json& raw(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) fail(key, "missing");
    return j_.at(key);
  }

  double number(const std::string& key) {
    const Json& v = raw(key);
    if (!v.is_number()) fail(key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(key, "expected a finite number");
    return d;
  }
  double number(const std::string& key, double fallback) {
    return has(key) ? number(key) : (used_.insert(key), fallback);
  }

  std::uint64_t integer(const std::string& key, std::uint64_t fallback) {
    used_.insert(key);
    if (!has(key)) return fallback;
    const Json& v = j_.at(key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
      fail(key, "expected a nonnegative integer");
    return v.get<std::uint64_t>();
  }

  std::string text(const std::string& key) {
    const Json& v = raw(key);
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
  }
  std::string text(const std::string& key, const std::string& fallback) {
    return has(key) ? text(key) : (used_.insert(key), fallback);
  }

  std::vector<double> numbers(const std::string& key) {
    const Json& v = raw(key);
    if (!v.is_array()) fail(key, "expected an array of numbers");
    std::vector<double> out;
    for (const Json& e : v) {
      if (!e.is_number()) fail(key, "expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  State state(const std::string& key, std::size_t p) {
    const std::vector<double> v = numbers(key);
    if (v.size() != p) fail(key, "expected " + std::to_string(p) + " components");
    return State(std::span<const double>(v));
  }

  Fields object(const std::string& key) { return Fields(raw(key), sub(key)); }

  std::string sub(const std::string& key) const { return path_ + "." + key; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) fail(it.key(), "unknown key");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError((key.empty() ? path_ : sub(key)) + ": " + what);
  }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> used_;
};

template <class E>
E pick(Fields& f, const std::string& key, const std::string& fallback,
       std::initializer_list<std::pair<const char*, E>> options) {
  const std::string v = f.text(key, fallback);
  for (const auto& [name, value] : options)
    if (v == name) return value;
  std::string names;
  for (const auto& o : options) names += std::string(names.empty() ? "" : ", ") + o.first;
  f.fail(key, "expected one of " + names + ", got \"" + v + "\"");
}

PhaseBox parse_box(Fields f, std::size_t p) {
  const State c = f.state("center", p);
  const State h = f.state("half_widths", p);
  f.finish();
  return PhaseBox(c, h);
}

SystemPtr parse_scalar(Fields& prm) {
  ScalarFlux flux;
  if (prm.has("flux")) {
    Fields f = prm.object("flux");
    flux.kind = pick<ScalarFluxKind>(f, "kind", "burgers",
                                     {{"burgers", ScalarFluxKind::Burgers},
                                      {"variable_burgers", ScalarFluxKind::VariableBurgers},
                                      {"cubic", ScalarFluxKind::Cubic},
                                      {"linear", ScalarFluxKind::Linear},
                                      {"zero", ScalarFluxKind::Zero}});
    flux.speed = f.number("speed", 0.0);
    flux.amplitude = f.number("amplitude", 0.0);
    flux.wavenumber = f.number("wavenumber", 1.0);
    f.finish();
  }
  ScalarSource src;
  if (prm.has("source")) {
    Fields f = prm.object("source");
    src.kind = pick<ScalarSourceKind>(f, "kind", "none",
                                      {{"none", ScalarSourceKind::None},
                                       {"constant", ScalarSourceKind::Constant},
                                       {"exponential", ScalarSourceKind::Exponential},
                                       {"cosine", ScalarSourceKind::Cosine},
                                       {"damping", ScalarSourceKind::Damping}});
    src.amplitude = f.number("amplitude", 0.0);
    src.rate = f.number("rate", 1.0);
    f.finish();
  }
  PhaseBox box({0.0}, {2.0});
  if (prm.has("phase_box")) box = parse_box(prm.object("phase_box"), 1);
  prm.finish();
  return scalar_system(flux, src, box);
}

SystemPtr parse_p_system(Fields& prm) {
  GammaLawPressure pr;
  pr.gamma = prm.number("gamma", 2.0);
  pr.kappa = prm.number("kappa", 1.0);
  const double damping = prm.number("damping", 0.0);
  PhaseBox box({1.0, 0.0}, {0.5, 1.0});
  if (prm.has("phase_box")) box = parse_box(prm.object("phase_box"), 2);
  prm.finish();
  return p_system(pr, box, damping);
}

SystemPtr parse_euler(Fields& prm) {
  const double gamma = prm.number("gamma", 1.4);
  PhaseBox box({1.0, 0.0, 2.5}, {0.95, 2.0, 2.45});
  if (prm.has("phase_box")) box = parse_box(prm.object("phase_box"), 3);
  std::optional<DuctGeometry> duct;
  if (prm.has("duct")) {
    Fields f = prm.object("duct");
    DuctGeometry d;
    d.kind = pick<DuctKind>(f, "kind", "constant",
                            {{"constant", DuctKind::Constant},
                             {"linear", DuctKind::Linear},
                             {"gaussian", DuctKind::Gaussian},
                             {"cosine_bump", DuctKind::CosineBump}});
    d.a0 = f.number("a0", 1.0);
    d.slope = f.number("slope", 0.0);
    d.amplitude = f.number("amplitude", 0.0);
    d.center = f.number("center", 0.0);
    d.width = f.number("width", 1.0);
    d.modulation = f.number("modulation", 0.0);
    d.omega = f.number("omega", 0.0);
    f.finish();
    duct = d;
  }
  prm.finish();
  return duct ? euler_duct_system(gamma, *duct, box) : euler_system(gamma, box);
}

// Reads a state written either as conserved or, for Euler, as (rho, v, p).
State read_state(Fields& f, const std::string& key, const SystemDef& sys, bool primitive) {
  State u = f.state(key, sys.p());
  if (primitive) {
    const auto* e = dynamic_cast<const EulerSystem*>(&sys);
    if (!e) f.fail("variables", "primitive variables are only defined for Euler");
    if (!(u[0] > 0.0) || !(u[2] > 0.0)) f.fail(key, "density and pressure must be positive");
    u = to_conserved(e->gamma(), {u[0], u[1], u[2]});
  }
  return u;
}

InitialData parse_initial(Fields f, const SystemDef& sys) {
  const std::string kind = f.text("kind");
  const bool primitive = pick<bool>(f, "variables", "conserved",
                                    {{"conserved", false}, {"primitive", true}});
  InitialData out;
  if (kind == "constant") {
    const State u = read_state(f, "state", sys, primitive);
    out = [u](double) { return u; };
  } else if (kind == "riemann") {
    const State ul = read_state(f, "left", sys, primitive);
    const State ur = read_state(f, "right", sys, primitive);
    const double x0 = f.number("x0", 0.0);
    out = [ul, ur, x0](double x) { return x < x0 ? ul : ur; };
  } else if (kind == "sine") {
    // mean + amplitude sin(wavenumber x), componentwise, then mapped
    const State mean = f.state("mean", sys.p());
    const State amp = f.state("amplitude", sys.p());
    const double k = f.number("wavenumber");
    double gamma = 0.0;
    if (primitive) {
      const auto* e = dynamic_cast<const EulerSystem*>(&sys);
      if (!e) f.fail("variables", "primitive variables are only defined for Euler");
      gamma = e->gamma();
    }
    out = [mean, amp, k, primitive, gamma](double x) {
      State u = mean + std::sin(k * x) * amp;
      return primitive ? to_conserved(gamma, {u[0], u[1], u[2]}) : u;
    };
  } else if (kind == "file") {
    const std::string path = f.text("path");
    const Snapshot snap = read_snapshot_csv(path);
    if (snap.x.empty()) f.fail("path", "no rows in " + path);
    if (snap.u.front().size() != sys.p()) f.fail("path", "component count does not match");
    std::vector<State> u = snap.u;
    if (primitive) {
      const auto* e = dynamic_cast<const EulerSystem*>(&sys);
      if (!e) f.fail("variables", "primitive variables are only defined for Euler");
      for (State& s : u) s = to_conserved(e->gamma(), {s[0], s[1], s[2]});
    }
    std::vector<double> xs = snap.x;
    if (!std::is_sorted(xs.begin(), xs.end())) f.fail("path", "x must be increasing");
    // piecewise constant: the value of the nearest sample at or left of x
    out = [xs, u](double x) {
      auto it = std::upper_bound(xs.begin(), xs.end(), x);
      const std::size_t j = it == xs.begin() ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
      return u[j];
    };
  } else {
    f.fail("kind", "expected one of constant, riemann, sine, file, got \"" + kind + "\"");
  }
  f.finish();
  return out;
}

}  // namespace

SystemPtr parse_system(const Json& block) {
  Fields f(block, "system");
  const std::string name = f.text("name");
  Json empty = Json::object();
  Fields prm = f.has("parameters") ? f.object("parameters") : Fields(empty, f.sub("parameters"));
  f.finish();
  if (name == "scalar" || name == "burgers") return parse_scalar(prm);
  if (name == "p_system" || name == "p-system") return parse_p_system(prm);
  if (name == "euler") return parse_euler(prm);
  f.fail("name", "expected one of scalar, burgers, p_system, euler, got \"" + name + "\"");
}

Json system_preset(const std::string& name) {
  if (name == "burgers") return Json{{"name", "scalar"}};
  if (name == "euler") return Json{{"name", "euler"}};
  if (name == "p-system" || name == "p_system") return Json{{"name", "p_system"}};
  throw ConfigError("unknown system preset \"" + name + "\" (burgers, euler, p-system)");
}

RunSpec parse_run_config(const Json& doc) {
  RunSpec spec;
  spec.config = doc;
  Fields f(doc, "config");
  spec.system = parse_system(f.raw("system"));

  SchemeConfig draft;
  const std::vector<double> domain = f.numbers("domain");
  if (domain.size() != 2 || !(domain[1] > domain[0])) f.fail("domain", "expected [x_min, x_max]");
  draft.x_min = domain[0];
  draft.x_max = domain[1];
  draft.r = f.number("r");
  draft.s = f.number("s", 0.0);
  draft.cfl_safety = f.number("cfl_safety", 0.9);
  draft.t_end = f.number("t_end");
  draft.K = f.number("K", 10.0);
  const std::uint64_t threads = f.integer("threads", 1);
  if (threads < 1 || threads > 256) f.fail("threads", "expected 1..256");
  draft.threads = static_cast<int>(threads);
  draft.boundary = pick<Boundary>(f, "boundary", "constant_extension",
                                  {{"constant_extension", Boundary::ConstantExtension},
                                   {"periodic", Boundary::Periodic}});
  if (f.has("sequence")) {
    Fields seq = f.object("sequence");
    draft.sequence.kind = pick<SequenceKind>(seq, "kind", "van_der_corput",
                                             {{"van_der_corput", SequenceKind::VanDerCorput},
                                              {"seeded_uniform", SequenceKind::SeededUniform}});
    draft.sequence.seed = seq.integer("seed", 0);
    seq.finish();
  }
  if (!(draft.t_end >= 0.0)) f.fail("t_end", "must be nonnegative");
  if (!(draft.K > 0.0)) f.fail("K", "must be positive");
  spec.scheme = make_config(*spec.system, draft);

  spec.initial = parse_initial(f.object("initial_data"), *spec.system);
  if (f.has("snapshots")) spec.snapshot_times = f.numbers("snapshots");
  for (double t : spec.snapshot_times)
    if (!(t >= 0.0) || t > draft.t_end) f.fail("snapshots", "times must lie in [0, t_end]");
  if (f.has("output_dir")) spec.output_dir = f.text("output_dir");

  if (f.has("resolved")) {
    Fields r = f.object("resolved");
    const auto same = [&](const std::string& key, double ours) {
      if (r.number(key) != ours) r.fail(key, "does not match the recomputed value");
    };
    same("s", spec.scheme.s);
    same("lambda_star", spec.scheme.lambda_star);
    same("K", spec.scheme.K);
    same("steps", static_cast<double>(spec.scheme.steps()));
    same("cells", static_cast<double>(spec.scheme.cells()));
    if (r.text("sequence") != to_string(spec.scheme.sequence.kind))
      r.fail("sequence", "does not match the configured sequence");
    if (r.text("system") != spec.system->name())
      r.fail("system", "does not match the configured system");
    r.finish();
  }
  f.finish();
  return spec;
}

RunSpec load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_run_config(doc);
}

Json make_manifest(const RunSpec& spec) {
  Json m = spec.config;
  m.erase("resolved");
  m["resolved"] = Json{{"s", spec.scheme.s},
                       {"lambda_star", spec.scheme.lambda_star},
                       {"K", spec.scheme.K},
                       {"sequence", to_string(spec.scheme.sequence.kind)},
                       {"system", spec.system->name()},
                       {"steps", spec.scheme.steps()},
                       {"cells", spec.scheme.cells()}};
  return m;
}

std::vector<double> parse_numbers(const std::string& text) {
  std::string t = text;
  t.erase(std::remove_if(t.begin(), t.end(), [](char c) { return c == '[' || c == ']' || c == ' '; }),
          t.end());
  std::vector<double> v;
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double d = 0.0;
    try {
      d = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !std::isfinite(d))
      throw ConfigError("cannot parse numbers \"" + text + "\"");
    v.push_back(d);
  }
  if (v.empty()) throw ConfigError("cannot parse numbers \"" + text + "\"");
  return v;
}

State parse_state(const std::string& text) {
  const std::vector<double> v = parse_numbers(text);
  if (v.size() > kMaxComponents) throw ConfigError("too many components in \"" + text + "\"");
  return State(std::span<const double>(v));
}

}  // namespace glimm
