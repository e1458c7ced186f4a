#include "glimm/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "glimm/errors.hpp"

namespace glimm {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string snapshot_csv(const Snapshot& snap) {
  const std::size_t p = snap.u.empty() ? 0 : snap.u.front().size();
  std::string out = "t,x";
  for (std::size_t i = 1; i <= p; ++i) out += ",u" + std::to_string(i);
  out += '\n';
  for (std::size_t j = 0; j < snap.x.size(); ++j) {
    out += format_double(snap.t) + ',' + format_double(snap.x[j]);
    for (std::size_t i = 0; i < p; ++i) out += ',' + format_double(snap.u[j][i]);
    out += '\n';
  }
  return out;
}

std::string diagnostics_ndjson(const std::vector<LevelDiagnostics>& diags) {
  std::string out;
  for (const LevelDiagnostics& d : diags) {
    out += "{\"k\":" + std::to_string(d.k) + ",\"t\":" + format_double(d.t) +
           ",\"L\":" + format_double(d.L) + ",\"Q\":" + format_double(d.Q) +
           ",\"F\":" + format_double(d.F) + ",\"TV\":" + format_double(d.TV) + "}\n";
  }
  return out;
}

namespace {

double parse_field(const std::string& s, std::size_t line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v))
    throw ConfigError("csv line " + std::to_string(line) + ": bad number \"" + s + "\"");
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

Snapshot parse_snapshot_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("csv: empty input");
  const std::vector<std::string> header = split(line);
  if (header.size() < 3 || header.size() > 5 || header[0] != "t" || header[1] != "x")
    throw ConfigError("csv: header must be t,x,u1..up");
  const std::size_t p = header.size() - 2;
  for (std::size_t i = 0; i < p; ++i)
    if (header[2 + i] != "u" + std::to_string(i + 1)) throw ConfigError("csv: header must be t,x,u1..up");
  Snapshot snap;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    const std::vector<std::string> cols = split(line);
    if (cols.size() != p + 2) throw ConfigError("csv line " + std::to_string(n) + ": wrong column count");
    const double t = parse_field(cols[0], n);
    if (snap.x.empty()) snap.t = t;
    else if (t != snap.t) throw ConfigError("csv line " + std::to_string(n) + ": t differs");
    snap.x.push_back(parse_field(cols[1], n));
    State u = State::zero(p);
    for (std::size_t i = 0; i < p; ++i) u[i] = parse_field(cols[2 + i], n);
    snap.u.push_back(u);
  }
  return snap;
}

Snapshot read_snapshot_csv(const std::string& path) { return parse_snapshot_csv(read_text(path)); }

std::vector<LevelDiagnostics> parse_diagnostics_ndjson(const std::string& text) {
  std::vector<LevelDiagnostics> out;
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  static const std::set<std::string> keys{"k", "t", "L", "Q", "F", "TV"};
  while (std::getline(in, line)) {
    ++n;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw ConfigError("ndjson line " + std::to_string(n) + ": " + e.what());
    }
    if (!j.is_object() || j.size() != keys.size())
      throw ConfigError("ndjson line " + std::to_string(n) + ": expected keys k,t,L,Q,F,TV");
    for (auto it = j.begin(); it != j.end(); ++it)
      if (!keys.count(it.key()) || !it.value().is_number())
        throw ConfigError("ndjson line " + std::to_string(n) + ": bad key " + it.key());
    if (!j["k"].is_number_unsigned())
      throw ConfigError("ndjson line " + std::to_string(n) + ": k must be a nonnegative integer");
    LevelDiagnostics d;
    d.k = j["k"].get<std::size_t>();
    d.t = j["t"].get<double>();
    d.L = j["L"].get<double>();
    d.Q = j["Q"].get<double>();
    d.F = j["F"].get<double>();
    d.TV = j["TV"].get<double>();
    out.push_back(d);
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("cannot write " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::filesystem::path> write_run_outputs(const std::filesystem::path& dir,
                                                     const RunSpec& spec, const RunOutput& out) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> files;
  const auto put = [&](const std::string& name, const std::string& text) {
    files.push_back(dir / name);
    write_text(files.back(), text);
  };
  put("manifest.json", make_manifest(spec).dump(2) + "\n");
  for (std::size_t i = 0; i < out.snapshots.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%03zu.csv", i);
    put(name, snapshot_csv(out.snapshots[i]));
  }
  put("diagnostics.ndjson", diagnostics_ndjson(out.diagnostics));
  if (out.failure) {
    const Json f{{"kind", out.failure->kind},
                 {"message", out.failure->message},
                 {"k", out.failure->k},
                 {"last_level", out.final_level.k}};
    put("failure.json", f.dump(2) + "\n");
  }
  return files;
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_double(row[i]);
    out += '\n';
  }
  return out;
}

}  // namespace glimm
