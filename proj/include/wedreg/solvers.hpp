#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wedreg/functional.hpp"

namespace wedreg {

enum class LinearSolver { kDirect, kConjugateGradient };

struct SolverOptions {
  // Stopping threshold on the state-unit gradient (minimize) or EL residual
  // (solve_el), see scaled_gradient_norm.
  double tol_grad = 1e-10;
  int max_newton = 100;
  // Inner PCG iteration cap; 0 means 10 * unknowns.
  int max_cg = 0;
  double backtrack = 0.5;
  double armijo = 1e-4;
  LinearSolver linear_solver = LinearSolver::kDirect;

  // 1e-10 for the scalar domain, 1e-8 for intervals.
  static SolverOptions defaults_for(const SpatialDomain& domain);
  void validate() const;
};

struct MinimizeResult {
  Trajectory traj;
  double objective = 0.0;
  double grad_norm = 0.0;
  int newton_iters = 0;
  bool converged = false;
  // Objective (minimize) or scaled residual (solve_el) per accepted iterate.
  std::vector<double> history;
  std::string message;
};

// Damped Newton on I over the free variables, Armijo backtracking.
// Default start is the affine trajectory. Hitting max_newton returns a result
// with converged = false; a non-finite objective throws SolverError.
MinimizeResult minimize(const WedProblem& prob, const SolverOptions& opts,
                        const std::optional<FreeVariables>& start = {});

// Discrete Euler-Lagrange residual
//   eps^2 delta^4 u_{i+2} - 2 eps delta^3 u_{i+1} + delta^2 u_i + A u_i
// for i = 2..n-2, column i - 2. Computed from the difference operators, not
// from the functional gradient.
Eigen::MatrixXd el_residual_field(const Trajectory& traj, const WedProblem& prob);

// Diagonal of the EL operator at each (level, dof): the state-unit scaling
// used by el_residual and solve_el.
Eigen::MatrixXd el_operator_diagonal(const Trajectory& traj,
                                     const WedProblem& prob);

// Newton on the square system EL_i = 0, i = 2..n-2, with u_{n-1}, u_n
// eliminated by delta^2 u_n = delta^3 u_n = 0. Throws SolverError (with the
// residual history in the message) when Newton fails.
MinimizeResult solve_el(const WedProblem& prob, const SolverOptions& opts);

// Uniformly sampled path on [0, T]; cubic (4-point Lagrange) interpolation
// between samples.
struct SampledPath {
  SpatialDomain domain = SpatialDomain::scalar();
  double final_time = 0.0;
  double spacing = 0.0;
  Eigen::MatrixXd samples;  // dofs x (count + 1)
  // u_t at the same times; filled by the scalar integrator only.
  Eigen::MatrixXd velocities;

  int intervals() const { return static_cast<int>(samples.cols()) - 1; }
  double time(int k) const { return k * spacing; }
  State operator()(double t) const;
  TimeFunction as_function() const;
};

// Reference integrator for u_tt - Laplace u + W'(u) = 0.
// Scalar: classical RK4. Interval: leapfrog (requires dt <= 0.9 h).
// Output on `output_intervals` uniform intervals (0: one sample per step);
// the internal step is the largest step <= dt that divides the output spacing.
SampledPath solve_limit(const SpatialDomain& domain, const Nonlinearity& nl,
                        const State& u0, const State& u1, double final_time,
                        double dt, int output_intervals = 0);

}  // namespace wedreg
