#include <cmath>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "glimm/config.hpp"
#include "glimm/errors.hpp"
#include "glimm/output.hpp"
#include "glimm/studies.hpp"

using namespace glimm;

namespace {

Json small_scalar_doc() {
  return Json::parse(R"({
    "system": {"name": "scalar"},
    "domain": [-1.0, 1.0],
    "r": 0.1,
    "t_end": 0.5,
    "initial_data": {"kind": "riemann", "left": [1.0], "right": [0.0]},
    "snapshots": [0.25, 0.5]
  })");
}

}  // namespace

TEST_CASE("unknown keys are rejected at every depth") {
  CHECK_NOTHROW(parse_run_config(small_scalar_doc()));

  Json top = small_scalar_doc();
  top["cfl"] = 0.5;
  CHECK_THROWS_AS(parse_run_config(top), ConfigError);

  Json nested = small_scalar_doc();
  nested["initial_data"]["xo"] = 0.0;
  CHECK_THROWS_AS(parse_run_config(nested), ConfigError);

  Json sys = small_scalar_doc();
  sys["system"]["parameters"] = Json::parse(R"({"flux": {"kind": "burgers", "speeed": 1}})");
  CHECK_THROWS_AS(parse_run_config(sys), ConfigError);

  try {
    parse_run_config(nested);
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("initial_data.xo") != std::string::npos);
  }
}

TEST_CASE("malformed values") {
  Json odd = small_scalar_doc();
  odd["domain"] = Json::array({-1.0, 1.05});
  CHECK_THROWS_AS(parse_run_config(odd), ConfigError);

  Json late = small_scalar_doc();
  late["snapshots"] = Json::array({0.7});
  CHECK_THROWS_AS(parse_run_config(late), ConfigError);

  Json threads = small_scalar_doc();
  threads["threads"] = -2;
  CHECK_THROWS_AS(parse_run_config(threads), ConfigError);
  threads["threads"] = 4;
  CHECK(parse_run_config(threads).scheme.threads == 4);

  Json wide = small_scalar_doc();
  wide["initial_data"]["left"] = Json::array({1.0, 2.0});
  CHECK_THROWS_AS(parse_run_config(wide), ConfigError);

  CHECK_THROWS_AS(parse_state("1,x"), ConfigError);
  CHECK(parse_numbers("[1, 0.5]") == std::vector<double>{1.0, 0.5});
}

TEST_CASE("manifest carries resolved values and must agree with them") {
  const RunSpec spec = parse_run_config(small_scalar_doc());
  const Json m = make_manifest(spec);
  REQUIRE(m.contains("resolved"));
  CHECK(m["resolved"]["s"].get<double>() == spec.scheme.s);
  CHECK(m["resolved"]["steps"].get<std::size_t>() == spec.scheme.steps());

  const RunSpec again = parse_run_config(m);
  CHECK(again.scheme.s == spec.scheme.s);
  CHECK(make_manifest(again).dump() == m.dump());

  Json bad = m;
  bad["resolved"]["s"] = spec.scheme.s * (1.0 + 1e-15);
  CHECK_THROWS_AS(parse_run_config(bad), ConfigError);
}

TEST_CASE("snapshot csv round trip is exact") {
  Snapshot s;
  s.k = 3;
  s.t = 1.0 / 3.0;
  s.x = {-0.1, 0.1 + 1e-17, 0.3};
  s.u = {{1.0 / 7.0, -2.5e-300}, {std::nextafter(1.0, 2.0), 0.0}, {-3.0, 1e300}};
  const std::string text = snapshot_csv(s);
  CHECK(text.rfind("t,x,u1,u2\n", 0) == 0);
  const Snapshot back = parse_snapshot_csv(text);
  CHECK(back.t == s.t);
  CHECK(back.x == s.x);
  CHECK(back.u == s.u);
  CHECK(snapshot_csv(back) == text);

  CHECK_THROWS_AS(parse_snapshot_csv("t,x,v\n0,0,1\n"), ConfigError);
  CHECK_THROWS_AS(parse_snapshot_csv("t,x,u1\n0,0,nan\n"), ConfigError);
}

TEST_CASE("diagnostics ndjson has exactly the six keys") {
  LevelDiagnostics d;
  d.k = 2;
  d.t = 0.1;
  d.L = 0.25;
  d.Q = 1e-20;
  d.F = 0.5;
  d.TV = 0.75;
  d.F_budget_used = 9.0;
  const std::string text = diagnostics_ndjson({d, d});
  CHECK(text.substr(0, text.find('\n')) ==
        R"({"k":2,"t":0.10000000000000001,"L":0.25,"Q":9.9999999999999995e-21,"F":0.5,"TV":0.75})");
  const auto back = parse_diagnostics_ndjson(text);
  REQUIRE(back.size() == 2);
  CHECK(back[1].Q == d.Q);
  CHECK_THROWS_AS(parse_diagnostics_ndjson(R"({"k":0,"t":0,"L":0,"Q":0,"F":0})"), ConfigError);
  CHECK_THROWS_AS(parse_diagnostics_ndjson(R"({"k":0,"t":0,"L":0,"Q":0,"F":0,"TV":0,"x":1})"),
                  ConfigError);
}

TEST_CASE("run outputs on disk reproduce from the manifest") {
  const auto dir = std::filesystem::temp_directory_path() / "glimm_test_io";
  std::filesystem::remove_all(dir);
  const RunSpec spec = parse_run_config(small_scalar_doc());
  const RunOutput out = run(*spec.system, spec.scheme, spec.initial, {spec.snapshot_times});
  const auto files = write_run_outputs(dir / "a", spec, out);
  CHECK(files.size() == 4);

  const RunSpec spec2 = load_run_config((dir / "a" / "manifest.json").string());
  const RunOutput out2 = run(*spec2.system, spec2.scheme, spec2.initial, {spec2.snapshot_times});
  write_run_outputs(dir / "b", spec2, out2);
  for (const auto& f : files)
    CHECK(read_text(f) == read_text(dir / "b" / f.filename()));
  std::filesystem::remove_all(dir);
}

TEST_CASE("steady duct oracle keeps the steady invariants") {
  const auto geom = steady_duct_geometry();
  const auto sys = euler_duct_system(1.4, geom, PhaseBox({1.0, 0.3, 2.5}, {0.6, 1.0, 1.5}));
  const double g = 1.4;
  auto invariants = [&](double x) {
    const Primitive w = to_primitive(g, steady_duct_state(*sys, -1.0, x));
    const double a = geom.area(0.0, x);
    const double E = w.p / (g - 1.0) + 0.5 * w.rho * w.v * w.v;
    return std::array<double, 3>{a * w.rho * w.v, (E + w.p) / w.rho, w.p / std::pow(w.rho, g)};
  };
  const auto in = invariants(-1.0);
  CHECK(in[0] == doctest::Approx(0.3 * geom.area(0.0, -1.0)).epsilon(1e-12));
  for (double x : {-0.3, 0.0, 0.2, 1.0}) {
    const auto here = invariants(x);
    for (int i = 0; i < 3; ++i) CHECK(here[i] == doctest::Approx(in[i]).epsilon(1e-10));
  }
  // subsonic acceleration through the throat
  CHECK(to_primitive(g, steady_duct_state(*sys, -1.0, 0.0)).v > 0.3);
}
