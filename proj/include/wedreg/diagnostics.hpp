#pragma once

// Post-processing of discrete minimizers: the energy integral over the
// window (tau, T - 2 tau), Euler-Lagrange and final-condition residuals,
// distances to a reference path, the recovery-sequence construction, and
// the eps -> 0 sweep driver.

#include <string>
#include <vector>

#include "wedreg/solvers.hpp"

namespace wedreg {

struct EnergyReport {
  double value = 0.0;
  double velocity = 0.0;   // int |d_t u_tau|^2
  double gradient = 0.0;   // int |grad u_tau|^2
  double potential = 0.0;  // int 2 W(u_tau) (= |u|^p for the power law)
  double window_begin = 0.0;
  double window_end = 0.0;
};

// Velocity term is exact (piecewise-constant derivative); the gradient and
// potential terms use the backward-constant interpolant on each interval.
// Throws ConfigError when n < 5.
EnergyReport energy_lhs(const Trajectory& traj, const Nonlinearity& nl);

// max over i = 2..n-2 and dofs of |EL_i| divided by the EL operator
// diagonal (state units).
double el_residual(const Trajectory& traj, const WedProblem& prob);

struct FinalResidual {
  double second = 0.0;  // |delta^2 u_n|
  double third = 0.0;   // |delta^3 u_n|
};

FinalResidual final_bc_residual(const Trajectory& traj);

enum class DistanceNorm { kSupL2, kL2L2 };

// Compares the affine interpolant of `traj` with the reference samples at
// the sample times inside [0, T].
double distance(const Trajectory& traj, const SampledPath& ref,
                DistanceNorm norm);

// |delta u_2 - u1|: how far the first unconstrained slope is from u1.
double u1_gap(const Trajectory& traj, const State& u1);

// u_0 = u0, u_1 = u0 + tau u1, u_i = backward mean of u_ref at i tau.
Trajectory recovery_trajectory(const TimeFunction& u_ref,
                               const WedProblem& prob, int quad_points = 5);

// int_0^T exp(-t/eps) (|u_tt|^2 / 2 + phi(u) / eps^2) dt by composite Simpson
// on `intervals` subintervals (rounded up to even).
double weighted_functional_quadrature(const TimeFunction& u,
                                      const TimeFunction& u_tt,
                                      const WedProblem& prob, int intervals);

struct ConvergenceRecord {
  double eps = 0.0;
  double tau = 0.0;
  double dist_sup = 0.0;
  double dist_l2 = 0.0;
  EnergyReport energy;
  FinalResidual bc_res;
  double u1_gap = 0.0;
  double objective = 0.0;
  double grad_norm = 0.0;
  double el_residual = 0.0;
  int newton_iters = 0;
  bool ok = false;
  std::string status;
  Trajectory traj;
};

// One fresh minimize per eps (same grid and data as `base`), compared with
// `reference`. Records come back in the order of eps_list; failures are
// recorded, not thrown. Up to `jobs` solves run concurrently.
std::vector<ConvergenceRecord> convergence_study(
    const WedProblem& base, const std::vector<double>& eps_list,
    const SampledPath& reference, const SolverOptions& opts, int jobs = 1);

}  // namespace wedreg
