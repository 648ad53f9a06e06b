#include "probreach/config.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

namespace probreach {
namespace {

using nlohmann::json;

const std::vector<std::string> kSubcommands{"bound", "drs", "prs", "amgf-check", "simulate", "experiment"};

std::uint64_t parse_seed(const std::string& text, const std::string& source) {
  try {
    std::size_t used = 0;
    if (text.empty() || text[0] == '-') throw std::invalid_argument("negative");
    const auto v = std::stoull(text, &used, 0);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid seed '" + text + "' from " + source);
  }
}

json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse config file '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config file '" + path + "' must hold a JSON object");
  static const std::vector<std::string> known{"preset", "system", "delta", "epsilon", "T",       "seed",
                                              "samples", "scaling_samples", "out", "backend", "check", "full"};
  for (const auto& [k, v] : j.items())
    if (std::find(known.begin(), known.end(), k) == known.end())
      throw ConfigError("unknown key '" + k + "' in config file '" + path + "'");
  return j;
}

DrsBackend parse_backend(const std::string& s) {
  if (s == "lipschitz") return DrsBackend::lipschitz;
  if (s == "interval") return DrsBackend::interval;
  throw ConfigError("backend must be lipschitz or interval, got '" + s + "'");
}

}  // namespace

json RunConfig::to_json() const {
  json j = {{"subcommand", subcommand},
            {"seed", seed},
            {"seed_source", seed_source},
            {"backend", backend_name(backend)},
            {"check", check},
            {"full", full},
            {"precedence", precedence}};
  if (!preset.empty()) j["preset"] = preset;
  if (!system.empty()) j["system"] = system;
  if (!experiment.empty()) j["experiment"] = experiment;
  if (delta) j["delta"] = *delta;
  if (epsilon) j["epsilon"] = *epsilon;
  if (horizon) j["T"] = *horizon;
  if (samples) j["samples"] = *samples;
  if (scaling_samples) j["scaling_samples"] = *scaling_samples;
  if (!config_file.empty()) j["config_file"] = config_file;
  return j;
}

RunOptions RunConfig::run_options() const {
  RunOptions o;
  o.seed = seed;
  o.delta = delta.value_or(0.0);
  o.epsilon = epsilon.value_or(0.0);
  o.horizon = horizon.value_or(0);
  o.samples = samples.value_or(0);
  o.scaling_samples = scaling_samples.value_or(0);
  o.backend = backend;
  o.full = full;
  return o;
}

std::optional<RunConfig> parse_config(const std::vector<std::string>& args) {
  CLI::App app{"Probabilistic reachable sets for discrete-time stochastic systems", "probreach"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", std::string(kVersion));

  std::optional<std::string> preset, system, out, backend, seed_text, config_path;
  std::optional<double> delta, epsilon;
  std::optional<std::size_t> horizon, samples, scaling_samples;
  bool check = false, full = false;
  std::string experiment;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--preset", preset, "Preset system: linear, linear<n>, cobweb, uav");
    sub->add_option("--system", system, "JSON system spec (custom system)");
    sub->add_option("--config", config_path, "JSON config file; flags override its values");
    sub->add_option("--delta", delta, "Probability level delta in (0, 1) [preset value, 1e-3 default]");
    sub->add_option("--epsilon", epsilon, "Covering parameter epsilon in (0, 1) [preset value, 1/16 default]");
    sub->add_option("--T", horizon, "Horizon [preset value]");
    sub->add_option("--seed", seed_text, "Master seed [$PROBREACH_SEED, else 0]");
    sub->add_option("--samples", samples, "Trajectories (or Monte Carlo samples)");
    sub->add_option("--out", out, "Output directory [out]");
    sub->add_option("--backend", backend, "DRS backend: lipschitz or interval");
    sub->add_flag("--check", check, "Exit with status 4 when a validation check fails");
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& name : kSubcommands) {
    auto* sub = app.add_subcommand(name);
    add_common(sub);
    subs[name] = sub;
  }
  subs["bound"]->description("Deviation radii per step (bounds.csv)");
  subs["drs"]->description("Deterministic reachable-set over-approximation (drs.csv)");
  subs["prs"]->description("delta-PRS per step with Monte Carlo coverage");
  subs["amgf-check"]->description("AMGF lemma suite (amgf_check.json)");
  subs["simulate"]->description("Trajectory ensemble summaries");
  subs["experiment"]->description("Reproduce a study: linear, cobweb or uav");
  subs["experiment"]->add_option("name", experiment, "linear, cobweb or uav")->required();
  subs["experiment"]->add_flag("--full", full, "Paper-scale scaling study (1e7 samples)");
  subs["experiment"]->add_option("--scaling-samples", scaling_samples, "Samples per scaling ensemble");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return std::nullopt;
  } catch (const CLI::CallForVersion& e) {
    std::cout << kVersion << "\n";
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  RunConfig cfg;
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) cfg.subcommand = name;
  cfg.experiment = experiment;

  json file = json::object();
  if (config_path) {
    cfg.config_file = *config_path;
    file = read_config_file(*config_path);
  }

  // flag > file; conflicts are recorded.
  auto pick = [&](const char* key, auto& flag, auto& dest, auto convert) {
    const bool in_file = file.contains(key);
    if (flag) {
      if (in_file) {
        cfg.precedence.push_back({{"key", key}, {"file", file[key]}, {"flag", *flag}, {"used", "flag"}});
      }
      dest = convert(*flag);
    } else if (in_file) {
      try {
        dest = convert(file[key].template get<std::decay_t<decltype(*flag)>>());
      } catch (const json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "' has the wrong type");
      }
    }
  };
  auto id = [](auto v) { return v; };
  pick("preset", preset, cfg.preset, id);
  pick("system", system, cfg.system, id);
  pick("out", out, cfg.out, id);
  pick("delta", delta, cfg.delta, id);
  pick("epsilon", epsilon, cfg.epsilon, id);
  pick("T", horizon, cfg.horizon, id);
  pick("samples", samples, cfg.samples, id);
  pick("scaling_samples", scaling_samples, cfg.scaling_samples, id);
  std::string backend_text = "lipschitz";
  pick("backend", backend, backend_text, id);
  cfg.backend = parse_backend(backend_text);
  cfg.check = check || file.value("check", false);
  cfg.full = full || file.value("full", false);
  if (check && file.contains("check") && !file["check"].get<bool>())
    cfg.precedence.push_back({{"key", "check"}, {"file", false}, {"flag", true}, {"used", "flag"}});

  // Seed: flag > env > file > 0.
  if (seed_text) {
    cfg.seed = parse_seed(*seed_text, "--seed");
    cfg.seed_source = "flag";
    if (file.contains("seed"))
      cfg.precedence.push_back({{"key", "seed"}, {"file", file["seed"]}, {"flag", cfg.seed}, {"used", "flag"}});
  } else if (const char* env = std::getenv(kSeedEnv); env && *env) {
    cfg.seed = parse_seed(env, std::string("$") + kSeedEnv);
    cfg.seed_source = "env";
    if (file.contains("seed"))
      cfg.precedence.push_back({{"key", "seed"}, {"file", file["seed"]}, {"env", cfg.seed}, {"used", "env"}});
  } else if (file.contains("seed")) {
    const auto& s = file["seed"];
    if (s.is_number_unsigned()) cfg.seed = s.get<std::uint64_t>();
    else if (s.is_string()) cfg.seed = parse_seed(s.get<std::string>(), "config file");
    else throw ConfigError("config key 'seed' must be a non-negative integer");
    cfg.seed_source = "config";
  }

  // Validation.
  if (cfg.delta && !(*cfg.delta > 0.0 && *cfg.delta < 1.0))
    throw ConfigError("delta must lie in (0, 1), got " + std::to_string(*cfg.delta));
  if (cfg.epsilon && !(*cfg.epsilon > 0.0 && *cfg.epsilon < 1.0))
    throw ConfigError("epsilon must lie in (0, 1), got " + std::to_string(*cfg.epsilon));
  if (cfg.horizon && *cfg.horizon == 0) throw ConfigError("T must be at least 1");
  if (cfg.samples && *cfg.samples == 0) throw ConfigError("samples must be at least 1");
  if (cfg.scaling_samples && *cfg.scaling_samples < 100) throw ConfigError("scaling samples must be at least 100");
  if (!cfg.preset.empty() && !cfg.system.empty()) throw ConfigError("give either --preset or --system, not both");
  if (cfg.subcommand == "experiment") {
    if (cfg.experiment != "linear" && cfg.experiment != "cobweb" && cfg.experiment != "uav")
      throw ConfigError("unknown experiment '" + cfg.experiment + "' (expected linear, cobweb or uav)");
    if (!cfg.system.empty() || (!cfg.preset.empty() && cfg.preset != cfg.experiment))
      throw ConfigError("experiment " + cfg.experiment + " runs its own preset; drop --preset/--system");
    cfg.preset = cfg.experiment;
  } else if (cfg.subcommand != "amgf-check" && cfg.preset.empty() && cfg.system.empty()) {
    throw ConfigError("missing system spec: pass --preset <name> or --system <file.json>");
  }
  if (cfg.out.empty()) throw ConfigError("output directory must not be empty");
  return cfg;
}

ExperimentPreset resolve_system(const RunConfig& config) {
  ExperimentPreset p = config.system.empty() ? make_preset(config.preset) : load_custom_system_file(config.system);
  if (config.delta) p.delta = *config.delta;
  if (config.epsilon) p.epsilon = *config.epsilon;
  if (config.horizon) p.horizon = *config.horizon;
  return p;
}

}  // namespace probreach
