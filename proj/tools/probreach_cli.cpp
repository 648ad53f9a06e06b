#include <iostream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "probreach/config.hpp"

namespace {

using namespace probreach;

enum ExitCode { kOk = 0, kFailure = 1, kConfig = 2, kNumeric = 3, kCheckFailed = 4 };

ReportBundle dispatch(const RunConfig& cfg) {
  const RunOptions opt = cfg.run_options();
  if (cfg.subcommand == "amgf-check") return amgf_report(opt);
  if (cfg.subcommand == "experiment") return reproduce_experiment(cfg.experiment, opt);
  const ExperimentPreset preset = resolve_system(cfg);
  if (cfg.subcommand == "bound") return bound_report(preset, opt);
  if (cfg.subcommand == "drs") return drs_report(preset, opt);
  if (cfg.subcommand == "prs") return prs_report(preset, opt);
  if (cfg.subcommand == "simulate") return simulate_report(preset, opt);
  throw ConfigError("unknown subcommand '" + cfg.subcommand + "'");
}

int run(const std::vector<std::string>& args) {
  std::optional<RunConfig> cfg;
  try {
    cfg = parse_config(args);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  }
  if (!cfg) return kOk;

  try {
    const ReportBundle bundle = dispatch(*cfg);
    emit_results(bundle, cfg->out, cfg->to_json());
    for (const auto& [name, content] : bundle.files) std::cout << fmt::format("wrote {}/{}\n", cfg->out, name);
    for (const auto& c : bundle.checks)
      std::cout << fmt::format("{} {}{}\n", c.pass ? "PASS" : "FAIL", c.name, c.detail.empty() ? "" : ": " + c.detail);
    if (cfg->check && !bundle.all_pass()) {
      std::cerr << "check failed\n";
      return kCheckFailed;
    }
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const DivergenceError& e) {
    std::cerr << "numeric failure: " << e.what();
    if (e.trajectory() >= 0) std::cerr << fmt::format(" (trajectory {}, step {})", e.trajectory(), e.step());
    std::cerr << "\n";
    return kNumeric;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace

int main(int argc, char** argv) { return run(std::vector<std::string>(argv + 1, argv + argc)); }
