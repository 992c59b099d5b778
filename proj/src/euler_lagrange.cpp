#include <Eigen/SparseLU>

#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "wedreg/errors.hpp"
#include "wedreg/solvers.hpp"

namespace wedreg {

namespace {

// Time stencil of eps^2 delta^4 u_{i+2} - 2 eps delta^3 u_{i+1} + delta^2 u_i
// on levels i-2 .. i+2.
std::array<double, 5> el_stencil(double eps, double tau) {
  const double e4 = eps * eps / std::pow(tau, 4);
  const double e3 = eps / std::pow(tau, 3);
  const double e2 = 1.0 / (tau * tau);
  return {
      e4 + 2.0 * e3 + e2,              // u_{i-2}
      -4.0 * e4 - 6.0 * e3 - 2.0 * e2,  // u_{i-1}
      6.0 * e4 + 6.0 * e3 + e2,        // u_i
      -4.0 * e4 - 2.0 * e3,            // u_{i+1}
      e4,                              // u_{i+2}
  };
}

}  // namespace

Eigen::MatrixXd el_residual_field(const Trajectory& traj,
                                  const WedProblem& prob) {
  const int n = prob.grid.steps;
  if (traj.states.rows() != prob.domain.dofs() ||
      traj.states.cols() != n + 1) {
    throw DimensionError("trajectory does not match the problem");
  }
  const double tau = prob.grid.tau;
  const double eps = prob.eps;
  const Eigen::MatrixXd d4 = discrete_derivative(traj.states, tau, 4);
  const Eigen::MatrixXd d3 = discrete_derivative(traj.states, tau, 3);
  const Eigen::MatrixXd d2 = discrete_derivative(traj.states, tau, 2);
  Eigen::MatrixXd res(prob.domain.dofs(), n - 3);
  for (int i = 2; i <= n - 2; ++i) {
    // delta^4 u_{i+2}, delta^3 u_{i+1} and delta^2 u_i all sit at column i-2.
    res.col(i - 2) = eps * eps * d4.col(i - 2) - 2.0 * eps * d3.col(i - 2) +
                     d2.col(i - 2) +
                     grad_phi(prob.domain, traj.states.col(i), prob.nl);
  }
  return res;
}

Eigen::MatrixXd el_operator_diagonal(const Trajectory& traj,
                                     const WedProblem& prob) {
  const int n = prob.grid.steps;
  const int m = prob.domain.dofs();
  const double a0 = el_stencil(prob.eps, prob.grid.tau)[2];
  const double stiff = prob.domain.is_scalar()
                           ? 0.0
                           : 2.0 / (prob.domain.h() * prob.domain.h());
  Eigen::MatrixXd diag(m, n - 3);
  for (int i = 2; i <= n - 2; ++i) {
    for (int j = 0; j < m; ++j) {
      diag(j, i - 2) = a0 + stiff + prob.nl.d2w(traj.states(j, i));
    }
  }
  return diag;
}

namespace {

// Unknowns are u_2..u_{n-2}; the final conditions give
// u_{n-1} = 2 u_{n-2} - u_{n-3} and u_n = 3 u_{n-2} - 2 u_{n-3}.
Trajectory expand(const Eigen::MatrixXd& y, const WedProblem& prob) {
  const int n = prob.grid.steps;
  Trajectory traj;
  traj.domain = prob.domain;
  traj.grid = prob.grid;
  traj.states.resize(prob.domain.dofs(), n + 1);
  traj.states.col(0) = prob.u0;
  traj.states.col(1) = prob.u0 + prob.grid.tau * prob.u1;
  traj.states.middleCols(2, n - 3) = y;
  const Eigen::VectorXd a = traj.states.col(n - 2);
  const Eigen::VectorXd b = traj.states.col(n - 3);
  traj.states.col(n - 1) = 2.0 * a - b;
  traj.states.col(n) = 3.0 * a - 2.0 * b;
  return traj;
}

double scaled_max(const Eigen::MatrixXd& r, const Eigen::MatrixXd& diag) {
  return r.cwiseQuotient(diag).cwiseAbs().maxCoeff();
}

Eigen::SparseMatrix<double> el_jacobian(const Trajectory& traj,
                                        const WedProblem& prob) {
  const int n = prob.grid.steps;
  const int m = prob.domain.dofs();
  const auto a = el_stencil(prob.eps, prob.grid.tau);
  const Eigen::Index size = static_cast<Eigen::Index>(m) * (n - 3);
  auto col_of = [m](int level, int j) {
    return static_cast<Eigen::Index>(level - 2) * m + j;
  };
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(size) * 10);

  for (int i = 2; i <= n - 2; ++i) {
    for (int j = 0; j < m; ++j) {
      const Eigen::Index row = col_of(i, j);
      auto add = [&](int level, double c) {
        if (level < 2) return;  // u_0, u_1 are data
        if (level <= n - 2) {
          trip.emplace_back(row, col_of(level, j), c);
        } else if (level == n - 1) {
          trip.emplace_back(row, col_of(n - 2, j), 2.0 * c);
          if (n - 3 >= 2) trip.emplace_back(row, col_of(n - 3, j), -c);
        } else {
          trip.emplace_back(row, col_of(n - 2, j), 3.0 * c);
          if (n - 3 >= 2) trip.emplace_back(row, col_of(n - 3, j), -2.0 * c);
        }
      };
      for (int s = -2; s <= 2; ++s) add(i + s, a[static_cast<std::size_t>(s + 2)]);

      double d = prob.nl.d2w(traj.states(j, i));
      if (!prob.domain.is_scalar()) {
        const double inv_h2 = 1.0 / (prob.domain.h() * prob.domain.h());
        d += 2.0 * inv_h2;
        if (j > 0) trip.emplace_back(row, col_of(i, j - 1), -inv_h2);
        if (j + 1 < m) trip.emplace_back(row, col_of(i, j + 1), -inv_h2);
      }
      trip.emplace_back(row, row, d);
    }
  }
  Eigen::SparseMatrix<double> jac(size, size);
  jac.setFromTriplets(trip.begin(), trip.end());
  jac.makeCompressed();
  return jac;
}

std::string history_string(const std::vector<double>& h) {
  std::ostringstream os;
  os.precision(3);
  for (std::size_t k = 0; k < h.size(); ++k) os << (k ? ", " : "") << h[k];
  return os.str();
}

}  // namespace

MinimizeResult solve_el(const WedProblem& prob, const SolverOptions& opts) {
  opts.validate();
  const int n = prob.grid.steps;
  Eigen::MatrixXd y = affine_free(prob).leftCols(n - 3);
  Trajectory traj = expand(y, prob);
  Eigen::MatrixXd r = el_residual_field(traj, prob);
  double norm = scaled_max(r, el_operator_diagonal(traj, prob));

  MinimizeResult res;
  res.history.push_back(norm);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  bool analyzed = false;
  int iter = 0;
  double prev_step = std::numeric_limits<double>::infinity();
  for (;; ++iter) {
    if (!std::isfinite(norm)) {
      throw SolverError("solve_el diverged; residual history: " +
                        history_string(res.history));
    }
    if (iter == opts.max_newton) {
      if (norm <= opts.tol_grad) break;
      throw SolverError("solve_el did not converge; residual history: " +
                        history_string(res.history));
    }
    const Eigen::SparseMatrix<double> jac = el_jacobian(traj, prob);
    if (!analyzed) {
      lu.analyzePattern(jac);
      analyzed = true;
    }
    lu.factorize(jac);
    if (lu.info() != Eigen::Success) {
      throw SolverError("EL Jacobian factorization failed; residual history: " +
                        history_string(res.history));
    }
    const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(r.data(), r.size());
    const Eigen::VectorXd dy = lu.solve(rhs);
    const Eigen::Map<const Eigen::MatrixXd> step(dy.data(), y.rows(), y.cols());

    // Same termination rule as minimize: residual below tolerance and the
    // Newton step at its rounding floor.
    const double step_norm = dy.cwiseAbs().maxCoeff();
    const double floor = 1e-13 * (1.0 + y.cwiseAbs().maxCoeff());
    if (norm <= opts.tol_grad &&
        (step_norm <= floor || step_norm > 0.5 * prev_step)) {
      break;
    }
    prev_step = step_norm;

    // Backtrack on the scaled residual while far from the solution; inside
    // the tolerance the full step is taken (local quadratic regime).
    double alpha = 1.0;
    bool accepted = false;
    while (alpha > 1e-8) {
      Eigen::MatrixXd trial = y + alpha * step;
      Trajectory trial_traj = expand(trial, prob);
      Eigen::MatrixXd tr = el_residual_field(trial_traj, prob);
      const double tn = scaled_max(tr, el_operator_diagonal(trial_traj, prob));
      if (std::isfinite(tn) && (tn < norm || norm <= opts.tol_grad)) {
        y = std::move(trial);
        traj = std::move(trial_traj);
        r = std::move(tr);
        norm = tn;
        accepted = true;
        break;
      }
      alpha *= opts.backtrack;
    }
    if (!accepted) {
      throw SolverError("solve_el stalled; residual history: " +
                        history_string(res.history));
    }
    res.history.push_back(norm);
  }
  res.converged = true;
  res.message = "converged";
  res.newton_iters = iter;
  res.grad_norm = norm;
  res.objective = eval_functional(traj, prob);
  res.traj = std::move(traj);
  return res;
}

}  // namespace wedreg
