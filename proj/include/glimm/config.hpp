#pragma once

// JSON run configurations: system, mesh, sequence, initial data, snapshots.
// Every object is checked against its key set; unknown keys are errors.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "glimm/glimm_scheme.hpp"

namespace glimm {

using Json = nlohmann::ordered_json;

/// System block: {"name": ..., "parameters": {...}}.
SystemPtr parse_system(const Json& block);

/// Presets for the command line: burgers, euler, p-system.
Json system_preset(const std::string& name);

struct RunSpec {
  Json config;  // the document as read
  SystemPtr system;
  SchemeConfig scheme;  // resolved
  InitialData initial;
  std::vector<double> snapshot_times;
  std::optional<std::string> output_dir;
};

/// Parses and validates a run document; a "resolved" block (from a manifest)
/// must agree with the values recomputed here.
RunSpec parse_run_config(const Json& doc);
RunSpec load_run_config(const std::string& path);

/// Config echo plus {"resolved": {s, lambda_star, K, sequence, ...}}.
Json make_manifest(const RunSpec& spec);

/// Parses "1,0.5" or "[1,0.5]".
std::vector<double> parse_numbers(const std::string& text);
State parse_state(const std::string& text);

}  // namespace glimm
