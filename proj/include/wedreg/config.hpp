#pragma once

// Experiment configuration: a flat key = value document with sections
//
//   [problem]   dimension (0|1), potential (power|none|quadratic|klein-gordon),
//               p, u0, u1, L, m
//   [time]      T, n
//   [sweep]     eps (comma list, optional brackets), energy_checks
//   [solver]    tol_grad, max_newton, max_cg, backtrack, armijo,
//               linear_solver (direct|cg)
//   [reference] dt
//   [output]    directory, precision
//
// '#' and ';' start comments. See docs/config.md and presets/*.cfg.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wedreg/functional.hpp"
#include "wedreg/solvers.hpp"

namespace wedreg {

struct ProblemConfig {
  int dimension = 0;
  std::string potential = "power";
  double p = 4.0;
  std::string u0 = "constant 1";
  std::string u1 = "zero";
  double half_length = 8.0;
  int interior_nodes = 127;
};

struct ExperimentConfig {
  std::string name;
  ProblemConfig problem;
  double final_time = 3.0;
  int steps = 300;
  std::vector<double> eps{0.4, 0.2, 0.1, 0.05};
  bool energy_checks = true;
  SolverOptions solver;
  double reference_dt = 1e-4;
  std::string output_directory = "out";
  int precision = 12;

  SpatialDomain domain() const;
  Nonlinearity nonlinearity() const;
  TimeGrid grid() const;
  WedProblem problem_for(double eps) const;
};

// Parses and validates. Throws ConfigError whose message lists every
// violation, one per line, prefixed with "line N:" where a line applies.
ExperimentConfig parse_config(std::string_view text);

// Re-runs the semantic checks (after command-line overrides).
void validate_config(const ExperimentConfig& config);

// Built-in presets: "fig1", "wave1d", "klein-gordon".
std::vector<std::string> preset_names();
std::string_view preset_text(std::string_view name);
ExperimentConfig preset(std::string_view name);

}  // namespace wedreg
