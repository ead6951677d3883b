// Run configuration: a JSON document of nested sections, with dotted-key
// overrides from the command line. Unknown keys are rejected.
//
//   {
//     "physical": {"wavelength": 9.6e-7, "refractive_index": 3.53, "pitch": 4e-6,
//                  "fill_factor": 0.65, "phase_contrast": 0.02, "rotation_rate": 0},
//     "solver":   {"pwe_cutoff": 10, "bands": 8},
//     "path":     {"labels": ["G", "X", "T", "G"], "samples_per_segment": 40},
//     "rotation_sweep": {"start": 0, "stop": 10, "count": 11, "spacing": "linear"},
//     "contrast_sweep": {"start": 3e-5, "stop": 1e-3, "count": 12, "spacing": "log"},
//     "pitches":  [4e-6, 6e-6],
//     "kp":       {"enabled": false, "window": 0.5},
//     "eta":      {"alpha": null, "samples": 512},
//     "output":   {"directory": "out", "format": "csv"},
//     "seed": 12345
//   }

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "rotphc/core.hpp"

namespace rotphc {

/// Malformed or inconsistent configuration (maps to the usage exit code).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Sweep {
  double start;
  double stop;
  int count;
  bool log;

  std::vector<double> values() const;
};

struct RunConfig {
  PhysicalParameters physical;
  int pwe_cutoff = 10;
  int bands = 8;
  std::vector<std::string> path_labels{"G", "X", "T", "G"};
  int samples_per_segment = 40;
  Sweep rotation_sweep{0.0, 10.0, 11, false};
  Sweep contrast_sweep{3e-5, 1e-3, 12, true};
  std::vector<double> pitches{4e-6, 6e-6};
  bool kp = false;
  double kp_window = 0.5;  // pi/Lambda
  std::optional<double> eta_alpha;
  int eta_samples = 512;
  std::string output_directory = "out";
  std::string format = "csv";
  std::uint64_t seed = 12345;

  bool svg() const { return format == "csv+svg"; }
};

nlohmann::json to_json(const RunConfig& c);
/// Strict: unknown keys and wrong types throw ConfigError naming the key.
RunConfig from_json(const nlohmann::json& j);

/// Reads a config file; parse errors carry the line and column.
nlohmann::json read_config_file(const std::string& path);

/// Sets a dotted key ("physical.phase_contrast") from its textual value.
/// The value is parsed as JSON when possible, otherwise taken as a string.
void apply_override(nlohmann::json& j, const std::string& key, const std::string& value);

/// Checks cross-field invariants (physical parameters, sweep counts and
/// spacing, format names). Throws ConfigError.
void check(const RunConfig& c);

}  // namespace rotphc
