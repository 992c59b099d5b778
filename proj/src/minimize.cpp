#include <Eigen/SparseCholesky>

#include <cmath>
#include <limits>
#include <sstream>

#include "wedreg/errors.hpp"
#include "wedreg/solvers.hpp"

namespace wedreg {

SolverOptions SolverOptions::defaults_for(const SpatialDomain& domain) {
  SolverOptions opts;
  opts.tol_grad = domain.is_scalar() ? 1e-10 : 1e-8;
  return opts;
}

void SolverOptions::validate() const {
  if (!(tol_grad > 0.0)) throw ConfigError("tol_grad must be positive");
  if (max_newton < 1) throw ConfigError("max_newton must be >= 1");
  if (max_cg < 0) throw ConfigError("max_cg must be >= 0 (0 = automatic)");
  if (!(backtrack > 0.0 && backtrack < 1.0)) {
    throw ConfigError("backtrack factor must lie in (0, 1)");
  }
  if (!(armijo > 0.0 && armijo < 1.0)) {
    throw ConfigError("armijo constant must lie in (0, 1)");
  }
}

namespace {

constexpr double kStepFloor = 1e-13;

Eigen::Map<const Eigen::VectorXd> flat(const FreeVariables& x) {
  return {x.data(), x.size()};
}

FreeVariables direct_direction(const Trajectory& traj, const FreeVariables& g,
                               const WedProblem& prob) {
  const Eigen::SparseMatrix<double> hess = assemble_hessian(traj, prob);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(hess);
  if (ldlt.info() != Eigen::Success) {
    throw SolverError("Hessian factorization failed");
  }
  const Eigen::VectorXd step = ldlt.solve(-flat(g));
  if (ldlt.info() != Eigen::Success || !step.allFinite()) {
    throw SolverError("Hessian solve failed");
  }
  return Eigen::Map<const FreeVariables>(step.data(), g.rows(), g.cols());
}

// Matrix-free Jacobi-preconditioned CG on hessian_apply. The Riesz-form
// Hessian is self-adjoint for free_inner, so free_inner is the CG product.
FreeVariables cg_direction(const Trajectory& traj, const FreeVariables& g,
                           const FreeVariables& diag, const WedProblem& prob,
                           const SolverOptions& opts) {
  const int cap = opts.max_cg > 0 ? opts.max_cg : static_cast<int>(10 * g.size());
  FreeVariables x = FreeVariables::Zero(g.rows(), g.cols());
  FreeVariables r = -g;
  FreeVariables z = r.cwiseQuotient(diag);
  FreeVariables p = z;
  double rz = free_inner(prob, r, z);
  const double stop = 1e-14 * std::sqrt(std::abs(rz));
  for (int it = 0; it < cap && std::sqrt(std::abs(rz)) > stop; ++it) {
    const FreeVariables hp = hessian_apply(traj, p, prob);
    const double php = free_inner(prob, p, hp);
    if (!(php > 0.0)) break;
    const double alpha = rz / php;
    x += alpha * p;
    r -= alpha * hp;
    z = r.cwiseQuotient(diag);
    const double rz_next = free_inner(prob, r, z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  return x;
}

}  // namespace

MinimizeResult minimize(const WedProblem& prob, const SolverOptions& opts,
                        const std::optional<FreeVariables>& start) {
  opts.validate();
  FreeVariables x = start ? *start : affine_free(prob);
  Trajectory traj = embed(x, prob);
  double f = eval_functional(traj, prob);
  if (!std::isfinite(f)) throw SolverError("non-finite objective at start");

  MinimizeResult res;
  res.history.push_back(f);
  double prev_step = std::numeric_limits<double>::infinity();
  for (int iter = 0;; ++iter) {
    const FreeVariables g = gradient(traj, prob);
    const FreeVariables diag = hessian_diagonal(traj, prob);
    res.grad_norm = scaled_gradient_norm(g, diag);
    res.newton_iters = iter;
    if (iter == opts.max_newton) {
      res.converged = res.grad_norm <= opts.tol_grad;
      res.message = res.converged ? "converged" : "max_newton reached";
      break;
    }

    FreeVariables step = opts.linear_solver == LinearSolver::kDirect
                             ? direct_direction(traj, g, prob)
                             : cg_direction(traj, g, diag, prob, opts);
    // A small residual alone is not enough: the Hessian is badly conditioned
    // (delta^4 against rho_i ~ exp(-t/eps)), so keep taking Newton steps
    // until they reach the rounding floor or stop shrinking.
    const double step_norm = step.cwiseAbs().maxCoeff();
    const double floor = kStepFloor * (1.0 + x.cwiseAbs().maxCoeff());
    if (res.grad_norm <= opts.tol_grad &&
        (step_norm <= floor || step_norm > 0.5 * prev_step)) {
      res.converged = true;
      res.message = "converged";
      break;
    }
    prev_step = step_norm;

    double slope = free_inner(prob, g, step);
    if (!(slope < 0.0)) {
      step = -g.cwiseQuotient(diag);
      slope = free_inner(prob, g, step);
    }

    // Armijo backtracking. Near the minimizer the predicted decrease drops
    // below the rounding level of f, so allow a few ulps of slack.
    const double slack = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(f);
    double alpha = 1.0;
    bool accepted = false;
    while (alpha > 1e-12) {
      const FreeVariables trial = x + alpha * step;
      Trajectory trial_traj = embed(trial, prob);
      const double ft = eval_functional(trial_traj, prob);
      if (std::isfinite(ft) && ft <= f + opts.armijo * alpha * slope + slack) {
        x = trial;
        traj = std::move(trial_traj);
        f = ft;
        accepted = true;
        break;
      }
      alpha *= opts.backtrack;
    }
    if (!accepted) {
      res.newton_iters = iter + 1;
      res.converged = res.grad_norm <= opts.tol_grad;
      res.message = res.converged ? "converged" : "line search stalled";
      break;
    }
    res.history.push_back(f);
  }
  if (!std::isfinite(f)) throw SolverError("non-finite objective");
  res.traj = std::move(traj);
  res.objective = f;
  return res;
}

}  // namespace wedreg
