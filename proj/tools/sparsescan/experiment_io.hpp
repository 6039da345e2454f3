#pragma once

#include <map>
#include <string>
#include <vector>

#include "sparsescan/simulation.hpp"

namespace sparsescan::cli {

// An experiment description read from a flat key=value file, kept both in
// typed form (for the runner) and as normalized key -> value strings (for
// the manifest echo and the canonical hash).
struct ParsedConfig {
  ExperimentConfig experiment;
  std::map<std::string, std::string> raw;
};

// Parses and validates the config document.  Unknown, duplicate, missing
// or malformed keys raise std::invalid_argument with a message naming the
// offending field.
ParsedConfig load_experiment_config(const std::string& path);

// FNV-1a 64-bit over the canonical "key=value" lines in sorted key order,
// so the hash is unchanged when the file reorders its keys.
std::string config_hash(const std::map<std::string, std::string>& raw);

// Reads critical values from a calibrate-style JSON file: either a single
// {test, n, alpha, critical} object or an array of them.
std::vector<CriticalValue> load_criticals(const std::string& path);

// Shortest %.17g rendering, the serialization used for all CSV numbers.
std::string fmt17(double v);

std::string power_csv_text(const PowerCurve& curve);

std::string power_svg_text(const ExperimentConfig& config,
                           const PowerCurve& curve);

std::string iso_utc_now();

// Precedence: explicit flag, then SPARSESCAN_WORKERS, then the hardware
// concurrency; always at least 1.
int resolve_workers(int flag_value);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace sparsescan::cli
