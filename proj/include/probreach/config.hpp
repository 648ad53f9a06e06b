#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "probreach/experiments.hpp"

namespace probreach {

inline constexpr const char* kSeedEnv = "PROBREACH_SEED";

struct RunConfig {
  std::string subcommand;  // bound | drs | prs | amgf-check | simulate | experiment
  std::string preset;      // preset name, or
  std::string system;      // path of a JSON system spec
  std::string experiment;  // experiment name (experiment subcommand)
  std::optional<double> delta;    // unset: the preset's value (1e-3 for custom systems)
  std::optional<double> epsilon;  // unset: the preset's value (1/16 for custom systems)
  std::optional<std::size_t> horizon;
  std::uint64_t seed = 0;
  std::optional<std::size_t> samples;
  std::optional<std::size_t> scaling_samples;
  std::string out = "out";
  DrsBackend backend = DrsBackend::lipschitz;
  bool check = false;
  bool full = false;
  std::string config_file;
  /// One entry per key set both in the config file and on the command line.
  nlohmann::json precedence = nlohmann::json::array();
  /// Where the seed came from: default, config, env or flag.
  std::string seed_source = "default";

  /// Everything that determines the output contents (not the output path).
  nlohmann::json to_json() const;
  RunOptions run_options() const;
};

/// Parses `args` (without the program name). A JSON config file given with
/// --config supplies defaults for the same keys; command-line flags win and
/// every conflict is recorded in `precedence`. The seed is taken from
/// --seed, else $PROBREACH_SEED, else the file, else 0. Throws ConfigError
/// on unknown flags, out-of-range values or a missing system spec.
/// Returns std::nullopt after printing help.
std::optional<RunConfig> parse_config(const std::vector<std::string>& args);

/// Loads the preset or custom system named by the config and applies the
/// δ/ε/T overrides.
ExperimentPreset resolve_system(const RunConfig& config);

}  // namespace probreach
