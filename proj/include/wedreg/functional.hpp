#pragma once

// The discrete weighted functional
//
//   I(u) = sum_{i=2}^{n}   tau rho_i (1/2) |delta^2 u_i|^2
//        + sum_{i=2}^{n-2} (tau / eps^2) rho_{i+2} phi(u_i)
//
// on the affine set {u_0 = u0, delta u_1 = u1}. The free variables are
// (u_2, ..., u_n); u_0 and u_1 are substituted out by `embed`.
//
// Gradients and Hessian actions are Riesz representatives in the
// tau-weighted product <a, b> = tau * sum_k <a_k, b_k>_domain.
//
// The functions in namespace wedreg are OpenMP-parallel over time levels and
// reduce in a fixed order, so results do not depend on the thread count.
// wedreg::serial holds plain reference implementations used by the tests and
// the benchmark.

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "wedreg/spatial.hpp"
#include "wedreg/temporal.hpp"

namespace wedreg {

struct WedProblem {
  SpatialDomain domain = SpatialDomain::scalar();
  Nonlinearity nl;
  State u0;
  State u1;
  TimeGrid grid;
  double eps = 0.0;
  WeightVector weights;
};

// Validates the pieces and builds the weights for (grid, eps).
WedProblem make_problem(const SpatialDomain& domain, const Nonlinearity& nl,
                        State u0, State u1, const TimeGrid& grid, double eps);

// dofs x (n - 1); column c holds u_{c+2}.
using FreeVariables = Eigen::MatrixXd;

Trajectory embed(const FreeVariables& free, const WedProblem& prob);
FreeVariables free_part(const Trajectory& traj);
// u_i = u0 + i tau u1: the exact minimizer when the potential is disabled.
FreeVariables affine_free(const WedProblem& prob);

// tau * sum_k <a_k, b_k>_domain over free levels.
double free_inner(const WedProblem& prob, const FreeVariables& a,
                  const FreeVariables& b);

double eval_functional(const Trajectory& traj, const WedProblem& prob);
FreeVariables gradient(const Trajectory& traj, const WedProblem& prob);
FreeVariables hessian_apply(const Trajectory& traj, const FreeVariables& dir,
                            const WedProblem& prob);
FreeVariables hessian_diagonal(const Trajectory& traj, const WedProblem& prob);

// The Hessian (same Riesz scaling as hessian_apply) as a sparse symmetric
// matrix over the column-major flattening of FreeVariables.
Eigen::SparseMatrix<double> assemble_hessian(const Trajectory& traj,
                                             const WedProblem& prob);

// max |g| / diag(H): the gradient expressed in state units. Unlike the raw
// gradient it does not inherit the rho_i ~ exp(-t/eps) scaling.
double scaled_gradient_norm(const FreeVariables& grad,
                            const FreeVariables& hess_diag);

namespace serial {

double eval_functional(const Trajectory& traj, const WedProblem& prob);
FreeVariables gradient(const Trajectory& traj, const WedProblem& prob);
FreeVariables hessian_apply(const Trajectory& traj, const FreeVariables& dir,
                            const WedProblem& prob);

}  // namespace serial

}  // namespace wedreg
