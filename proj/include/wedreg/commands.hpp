#pragma once

// The CLI subcommands as library functions. Each returns a process exit
// code: 0 success, 1 configuration error, 2 solver failure, 3 validation
// failure. Progress and tables go to `log`, errors to `err`.

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "wedreg/config.hpp"

namespace wedreg {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitSolver = 2,
  kExitValidation = 3,
};

struct CommandOptions {
  // Empty: use the config's output directory.
  std::filesystem::path out_dir;
  int jobs = 1;
  // Overrides the eps list with a single value.
  std::optional<double> eps;
  bool inject_fault = false;
};

// Single-eps run: trajectory_eps<eps>.csv and summary.csv.
int cmd_minimize(const ExperimentConfig& config, const CommandOptions& opts,
                 std::ostream& log, std::ostream& err);

// Reference path, then one minimize per eps: trajectory_eps<eps>.csv per
// row, reference.csv and sweep_summary.csv.
int cmd_sweep(const ExperimentConfig& config, const CommandOptions& opts,
              std::ostream& log, std::ostream& err);

// Reference path alone: reference.csv on the n-interval output grid.
int cmd_reference(const ExperimentConfig& config, const CommandOptions& opts,
                  std::ostream& log, std::ostream& err);

// Invariant suite: table on `log`, validation.csv in the output directory.
int cmd_validate(const ExperimentConfig& config, const CommandOptions& opts,
                 std::ostream& log, std::ostream& err);

}  // namespace wedreg
