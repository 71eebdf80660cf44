#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ifsr/errors.hpp"
#include "ifsr/io.hpp"
#include "ifsr/pipeline.hpp"

namespace {

struct Flag {
  const char* name;
  const char* key;
  const char* help;
};

const std::vector<Flag> kFlags = {
    {"--input", "input", "input CSV (trajectory, cloud, series or labels)"},
    {"--truth", "truth", "ground-truth regimes CSV (evaluate)"},
    {"--output-dir", "output_dir", "directory for artifacts"},
    {"--seed", "seed", "RNG seed (required by simulate)"},
    {"--model", "model", "simulate: henon | f0 | henon3 | surrogate"},
    {"--T", "T", "trajectory or series length"},
    {"--burn-in", "burn_in", "iterates discarded before recording"},
    {"--tau", "tau", "delay in samples"},
    {"--m", "m", "embedding dimension"},
    {"--max-lag", "max_lag", "largest AMI lag"},
    {"--max-m", "max_m", "largest FNN dimension"},
    {"--k", "k", "neighborhood size for detection (5) or ghosts (10)"},
    {"--K", "K", "cover neighborhood size"},
    {"--J", "J", "number of cover neighborhoods"},
    {"--start", "start", "first farthest-point nexus"},
    {"--screen", "screen", "screen cover neighborhoods before gluing (true|false)"},
    {"--ladder", "ladder", "screening sizes as comma-separated divisors of K"},
    {"--epsilon", "epsilon", "connectivity scale, or auto"},
    {"--epsilon-grid", "epsilon_grid", "comma-separated scales for regime counting"},
    {"--N", "N", "number of regimes, or auto"},
    {"--period", "period", "surrogate ghost period"},
    {"--shift", "shift", "ghost shift, or auto to estimate"},
    {"--workers", "workers", "worker threads (0 = all cores)"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Detect and separate the regimes of an iterated function system from a trajectory"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  const char* commands[][2] = {
      {"simulate", "generate a Henon IFS trajectory or a ghost surrogate series"},
      {"embed", "delay-embed a scalar series; AMI and FNN curves"},
      {"detect", "decide whether a cloud is IFS-generated; pick epsilon and N"},
      {"separate", "label every step with its regime"},
      {"ghost", "find periodic ghost points in a scalar series and adjust them"},
      {"evaluate", "score labels against ground truth"},
  };

  std::string config_file;
  std::map<std::string, std::string> values;
  std::vector<CLI::Option*> options;
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_file, "key=value file; flags override it");
    for (const auto& f : kFlags) {
      options.push_back(sub->add_option(f.name, values[f.key], f.help));
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ifsr::kExitInput;
  }

  ifsr::RunConfig cfg;
  try {
    if (!config_file.empty()) {
      for (const auto& [k, v] : ifsr::read_key_values(config_file)) {
        ifsr::apply_config_entry(cfg, k, v);
      }
    }
    cfg.command = ifsr::parse_command(app.get_subcommands().front()->get_name());
    for (const auto& f : kFlags) {
      for (auto* sub : app.get_subcommands()) {
        if (sub->get_option(f.name)->count() > 0) ifsr::apply_config_entry(cfg, f.key, values[f.key]);
      }
    }
  } catch (const ifsr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ifsr::kExitInput;
  }

  const auto outcome = ifsr::run_pipeline(cfg, std::clog);
  if (outcome.exit_code != ifsr::kExitOk) std::cerr << "error: " << outcome.message << "\n";
  return outcome.exit_code;
}
