#pragma once

// Run artefacts: snapshot CSV (t,x,u1..up), diagnostics NDJSON, manifest,
// failure record. Floats are written with 17 significant digits.

#include <filesystem>
#include <string>
#include <vector>

#include "glimm/config.hpp"

namespace glimm {

std::string format_double(double v);

std::string snapshot_csv(const Snapshot& snap);
std::string diagnostics_ndjson(const std::vector<LevelDiagnostics>& diags);

/// Strict readers: the exact header / key set, finite numbers.
Snapshot parse_snapshot_csv(const std::string& text);
Snapshot read_snapshot_csv(const std::string& path);
std::vector<LevelDiagnostics> parse_diagnostics_ndjson(const std::string& text);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// Writes manifest.json, snapshot_NNN.csv, diagnostics.ndjson and, when the
/// run aborted, failure.json. Returns the files written.
std::vector<std::filesystem::path> write_run_outputs(const std::filesystem::path& dir,
                                                     const RunSpec& spec, const RunOutput& out);

/// Generic CSV with a header row.
std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows);

}  // namespace glimm
