#pragma once

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "probreach/model.hpp"
#include "probreach/uav.hpp"

namespace probreach {

/// How inputs are chosen along each sampled trajectory.
enum class InputPolicy {
  nominal,  // u_t = centre of the input set
  uniform,  // u_t drawn uniformly from the input set, independently per step
};

const char* input_policy_name(InputPolicy policy);

/// Localized Lipschitz constant over a region (a ball around the nominal
/// state, in the preset norm) at step t.
using LocalLipschitzFn = std::function<double(const BallSet& region, std::size_t t)>;

struct ExperimentPreset {
  std::string name;
  SystemModel model;
  NoiseSpec noise;
  ReachSet initial_set;
  InputPolicy input_policy = InputPolicy::nominal;
  std::size_t horizon = 0;
  double delta = 1e-3;
  double epsilon = 1.0 / 16.0;
  NormSpec norm;
  NormSpec input_norm;
  /// Lipschitz constant of f in u, in (input_norm → norm).
  double input_lipschitz = 0.0;
  /// When set, L_t is re-evaluated over the region the deviation can reach.
  LocalLipschitzFn local_lipschitz;
  std::size_t trajectories = 1000;
  /// The parameter table the preset was built from.
  nlohmann::json parameters;
};

ExperimentPreset linear_preset(std::size_t n = 2);
ExperimentPreset cobweb_preset();

struct UavOptions {
  uav::Airframe airframe;
  uav::Line line;
  uav::GuidanceGains gains;
  /// Pairs drawn per step by the localized Lipschitz estimator.
  std::size_t lipschitz_pairs = 2000;
  /// Safety factor on the sampled Lipschitz ratio.
  double lipschitz_inflation = 1.1;
  std::uint64_t lipschitz_seed = 0x11f;
};
ExperimentPreset uav_preset(const UavOptions& options = {});

std::vector<std::string> preset_names();
/// "linear" (also "linear<n>"), "cobweb", "uav". Throws ConfigError otherwise.
ExperimentPreset make_preset(const std::string& name);

/// Custom system from its JSON description:
///   {"name", "dim_state", "dim_input", "parameters": {..},
///    "dynamics": [expr, ...], "lipschitz": L | [L_0, ...],
///    "noise": {"kind": "gaussian"|"uniform_box"|"truncated_gaussian", "scales": [..],
///              "mixing": [[..]], "cap_fraction": [..], "sigma": proxy},
///    "initial_set": {"lower", "upper"} | {"center", "radius"},
///    "input_set": {"lower", "upper"}, "input_policy": "nominal"|"uniform",
///    "norm_weights": [..], "input_lipschitz": ρ, "horizon", "delta", "epsilon"}
/// Throws ConfigError on malformed input.
ExperimentPreset load_custom_system(const nlohmann::json& spec);
ExperimentPreset load_custom_system_file(const std::string& path);

}  // namespace probreach
