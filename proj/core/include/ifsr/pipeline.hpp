#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ifsr/io.hpp"

namespace ifsr {

enum class Command { Simulate, Embed, Detect, Separate, Ghost, Evaluate };

std::string to_string(Command c);
Command parse_command(const std::string& name);

enum ExitCode : int {
  kExitOk = 0,
  kExitInput = 1,
  kExitNoStructure = 2,
  kExitIntegrity = 3,
};

/// Every tunable of every stage. Unset optionals mean "auto" or "use the
/// stage default".
struct RunConfig {
  Command command = Command::Detect;
  std::filesystem::path input;
  std::filesystem::path truth;  // evaluate: ground-truth regimes CSV
  std::filesystem::path output_dir = ".";

  std::optional<std::uint64_t> seed;
  std::string model = "henon";  // simulate: henon | f0 | henon3 | surrogate
  std::size_t T = 30000;
  std::size_t burn_in = 1000;

  std::size_t tau = 1;
  std::size_t m = 3;
  std::size_t max_lag = 50;
  std::size_t max_m = 10;

  std::optional<std::size_t> k;  // detect: 5, ghost: 10
  std::size_t K = 40;
  std::size_t J = 10000;
  std::size_t start = 0;
  bool screen = true;
  std::vector<std::size_t> ladder{1, 2, 3, 4, 5, 6, 8};  // screening sizes as divisors of K
  std::optional<double> epsilon;
  std::vector<double> epsilon_grid{0.02, 0.03, 0.04, 0.05};
  std::optional<std::size_t> N;

  std::optional<std::size_t> period;  // surrogate: 215
  std::optional<double> shift;        // surrogate: 200, ghost: estimated
  unsigned workers = 0;               // 0: all hardware threads
};

/// Sets one field from its textual form. Keys match the CLI flag names
/// without dashes; "auto" clears epsilon, N and shift. Throws InputError.
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value);

/// Every effective parameter, in a form apply_config_entry accepts.
KeyValues describe(const RunConfig& cfg);

struct PipelineOutcome {
  int exit_code = kExitOk;
  std::string message;
  std::vector<std::filesystem::path> artifacts;
};

/// Runs one stage, writing its artifacts and manifest.txt into output_dir.
/// Errors become exit codes: input problems 1, absent IFS structure 2,
/// integrity violations 3. Progress lines go to `log`.
PipelineOutcome run_pipeline(const RunConfig& cfg, std::ostream& log);

}  // namespace ifsr
