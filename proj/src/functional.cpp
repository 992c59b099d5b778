#include "wedreg/functional.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "wedreg/errors.hpp"

namespace wedreg {

WedProblem make_problem(const SpatialDomain& domain, const Nonlinearity& nl,
                        State u0, State u1, const TimeGrid& grid, double eps) {
  if (u0.size() != domain.dofs() || u1.size() != domain.dofs()) {
    throw DimensionError("initial data do not match the spatial domain");
  }
  if (!u0.allFinite() || !u1.allFinite()) {
    throw ConfigError("initial data must be finite");
  }
  if (grid.steps < 4) throw ConfigError("n too small");
  WedProblem prob;
  prob.domain = domain;
  prob.nl = nl;
  prob.u0 = std::move(u0);
  prob.u1 = std::move(u1);
  prob.grid = grid;
  prob.eps = eps;
  prob.weights = build_weights(grid, eps);
  return prob;
}

Trajectory embed(const FreeVariables& free, const WedProblem& prob) {
  const int n = prob.grid.steps;
  const int m = prob.domain.dofs();
  if (free.rows() != m || free.cols() != n - 1) {
    throw DimensionError("free variables must be dofs x (n - 1)");
  }
  Trajectory traj;
  traj.domain = prob.domain;
  traj.grid = prob.grid;
  traj.states.resize(m, n + 1);
  traj.states.col(0) = prob.u0;
  traj.states.col(1) = prob.u0 + prob.grid.tau * prob.u1;
  traj.states.rightCols(n - 1) = free;
  return traj;
}

FreeVariables free_part(const Trajectory& traj) {
  return traj.states.rightCols(traj.grid.steps - 1);
}

FreeVariables affine_free(const WedProblem& prob) {
  const int n = prob.grid.steps;
  FreeVariables free(prob.domain.dofs(), n - 1);
  for (int i = 2; i <= n; ++i) {
    free.col(i - 2) = prob.u0 + (i * prob.grid.tau) * prob.u1;
  }
  return free;
}

double free_inner(const WedProblem& prob, const FreeVariables& a,
                  const FreeVariables& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("free variable shapes differ");
  }
  return prob.grid.tau * prob.domain.h() * a.cwiseProduct(b).sum();
}

namespace {

void check_traj(const Trajectory& traj, const WedProblem& prob) {
  if (traj.states.rows() != prob.domain.dofs() ||
      traj.states.cols() != prob.grid.steps + 1) {
    throw DimensionError("trajectory does not match the problem");
  }
}

void check_dir(const FreeVariables& dir, const WedProblem& prob) {
  if (dir.rows() != prob.domain.dofs() || dir.cols() != prob.grid.steps - 1) {
    throw DimensionError("direction must be dofs x (n - 1)");
  }
}

// rho_i * delta^2 x_i for i = 2..n, stored at column i (columns 0, 1 unused).
Eigen::MatrixXd weighted_second_differences(const Eigen::MatrixXd& x,
                                            const WedProblem& prob) {
  const int n = prob.grid.steps;
  const double inv_tau2 = 1.0 / (prob.grid.tau * prob.grid.tau);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(x.rows(), n + 1);
#pragma omp parallel for schedule(static)
  for (int i = 2; i <= n; ++i) {
    out.col(i) = (prob.weights[i] * inv_tau2) *
                 (x.col(i) - 2.0 * x.col(i - 1) + x.col(i - 2));
  }
  return out;
}

// Gathers (D2^T w)_k for free level k from weighted second differences.
template <typename Column>
void add_d2_transpose(const Eigen::MatrixXd& w, int k, int n, double inv_tau2,
                      Column&& out) {
  out += inv_tau2 * w.col(k);
  if (k + 1 <= n) out -= (2.0 * inv_tau2) * w.col(k + 1);
  if (k + 2 <= n) out += inv_tau2 * w.col(k + 2);
}

}  // namespace

double eval_functional(const Trajectory& traj, const WedProblem& prob) {
  check_traj(traj, prob);
  const int n = prob.grid.steps;
  const double tau = prob.grid.tau;
  const double h = prob.domain.h();
  const double pot_scale = tau / (prob.eps * prob.eps);
  const double inv_tau2 = 1.0 / (tau * tau);
  const Eigen::MatrixXd& u = traj.states;

  std::vector<double> terms(static_cast<std::size_t>(n) + 1, 0.0);
#pragma omp parallel for schedule(static)
  for (int i = 2; i <= n; ++i) {
    const double d2 =
        (inv_tau2 * (u.col(i) - 2.0 * u.col(i - 1) + u.col(i - 2))).squaredNorm();
    double term = tau * prob.weights[i] * 0.5 * h * d2;
    if (i <= n - 2) {
      term += pot_scale * prob.weights[i + 2] * phi(prob.domain, u.col(i), prob.nl);
    }
    terms[static_cast<std::size_t>(i)] = term;
  }
  // Fixed-order reduction for reproducibility across thread counts.
  return std::accumulate(terms.begin(), terms.end(), 0.0);
}

FreeVariables gradient(const Trajectory& traj, const WedProblem& prob) {
  check_traj(traj, prob);
  const int n = prob.grid.steps;
  const double inv_tau2 = 1.0 / (prob.grid.tau * prob.grid.tau);
  const double inv_eps2 = 1.0 / (prob.eps * prob.eps);
  const Eigen::MatrixXd w = weighted_second_differences(traj.states, prob);

  FreeVariables g = FreeVariables::Zero(prob.domain.dofs(), n - 1);
#pragma omp parallel for schedule(static)
  for (int k = 2; k <= n; ++k) {
    auto col = g.col(k - 2);
    add_d2_transpose(w, k, n, inv_tau2, col);
    if (k <= n - 2) {
      col += (prob.weights[k + 2] * inv_eps2) *
             grad_phi(prob.domain, traj.states.col(k), prob.nl);
    }
  }
  return g;
}

FreeVariables hessian_apply(const Trajectory& traj, const FreeVariables& dir,
                            const WedProblem& prob) {
  check_traj(traj, prob);
  check_dir(dir, prob);
  const int n = prob.grid.steps;
  const int m = prob.domain.dofs();
  const double inv_tau2 = 1.0 / (prob.grid.tau * prob.grid.tau);
  const double inv_eps2 = 1.0 / (prob.eps * prob.eps);

  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(m, n + 1);
  v.rightCols(n - 1) = dir;
  const Eigen::MatrixXd w = weighted_second_differences(v, prob);

  FreeVariables out = FreeVariables::Zero(m, n - 1);
#pragma omp parallel for schedule(static)
  for (int k = 2; k <= n; ++k) {
    auto col = out.col(k - 2);
    add_d2_transpose(w, k, n, inv_tau2, col);
    if (k <= n - 2) {
      col += (prob.weights[k + 2] * inv_eps2) *
             hess_phi_apply(prob.domain, traj.states.col(k), v.col(k), prob.nl);
    }
  }
  return out;
}

FreeVariables hessian_diagonal(const Trajectory& traj, const WedProblem& prob) {
  check_traj(traj, prob);
  const int n = prob.grid.steps;
  const int m = prob.domain.dofs();
  const double tau = prob.grid.tau;
  const double inv_tau4 = 1.0 / (tau * tau * tau * tau);
  const double inv_eps2 = 1.0 / (prob.eps * prob.eps);
  const double stiff = prob.domain.is_scalar()
                           ? 0.0
                           : 2.0 / (prob.domain.h() * prob.domain.h());
  FreeVariables diag(m, n - 1);
#pragma omp parallel for schedule(static)
  for (int k = 2; k <= n; ++k) {
    double time_part = prob.weights[k];
    if (k + 1 <= n) time_part += 4.0 * prob.weights[k + 1];
    if (k + 2 <= n) time_part += prob.weights[k + 2];
    time_part *= inv_tau4;
    for (int j = 0; j < m; ++j) {
      double d = time_part;
      if (k <= n - 2) {
        d += prob.weights[k + 2] * inv_eps2 *
             (stiff + prob.nl.d2w(traj.states(j, k)));
      }
      diag(j, k - 2) = d;
    }
  }
  return diag;
}

Eigen::SparseMatrix<double> assemble_hessian(const Trajectory& traj,
                                             const WedProblem& prob) {
  check_traj(traj, prob);
  const int n = prob.grid.steps;
  const int m = prob.domain.dofs();
  const double tau = prob.grid.tau;
  const double inv_tau4 = 1.0 / (tau * tau * tau * tau);
  const double inv_eps2 = 1.0 / (prob.eps * prob.eps);
  const Eigen::Index size = static_cast<Eigen::Index>(m) * (n - 1);
  auto index = [m](int level, int j) {
    return static_cast<Eigen::Index>(level - 2) * m + j;
  };

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(size) * (m > 1 ? 12 : 9));

  // Time coupling: rho_i D2_i^T D2_i with stencil (1, -2, 1) on levels
  // (i-2, i-1, i); levels 0 and 1 are fixed and drop out.
  constexpr double kStencil[3] = {1.0, -2.0, 1.0};
  for (int i = 2; i <= n; ++i) {
    const double scale = prob.weights[i] * inv_tau4;
    for (int a = 0; a < 3; ++a) {
      const int la = i - 2 + a;
      if (la < 2) continue;
      for (int b = 0; b < 3; ++b) {
        const int lb = i - 2 + b;
        if (lb < 2) continue;
        const double v = scale * kStencil[a] * kStencil[b];
        for (int j = 0; j < m; ++j) {
          triplets.emplace_back(index(la, j), index(lb, j), v);
        }
      }
    }
  }

  // Spatial blocks: rho_{k+2}/eps^2 (stiffness + W''(u_k)).
  const bool interval = !prob.domain.is_scalar();
  const double inv_h2 = interval ? 1.0 / (prob.domain.h() * prob.domain.h()) : 0.0;
  for (int k = 2; k <= n - 2; ++k) {
    const double scale = prob.weights[k + 2] * inv_eps2;
    for (int j = 0; j < m; ++j) {
      const double d = (interval ? 2.0 * inv_h2 : 0.0) +
                       prob.nl.d2w(traj.states(j, k));
      triplets.emplace_back(index(k, j), index(k, j), scale * d);
      if (interval && j + 1 < m) {
        triplets.emplace_back(index(k, j), index(k, j + 1), -scale * inv_h2);
        triplets.emplace_back(index(k, j + 1), index(k, j), -scale * inv_h2);
      }
    }
  }

  Eigen::SparseMatrix<double> hess(size, size);
  hess.setFromTriplets(triplets.begin(), triplets.end());
  return hess;
}

double scaled_gradient_norm(const FreeVariables& grad,
                            const FreeVariables& hess_diag) {
  if (grad.rows() != hess_diag.rows() || grad.cols() != hess_diag.cols()) {
    throw DimensionError("gradient and diagonal shapes differ");
  }
  return grad.cwiseQuotient(hess_diag).cwiseAbs().maxCoeff();
}

namespace serial {

double eval_functional(const Trajectory& traj, const WedProblem& prob) {
  check_traj(traj, prob);
  const int n = prob.grid.steps;
  const double tau = prob.grid.tau;
  const Eigen::MatrixXd d2 = discrete_derivative(traj.states, tau, 2);
  double kinetic = 0.0;
  for (int i = 2; i <= n; ++i) {
    const double s = prob.domain.norm(d2.col(i - 2));
    kinetic += tau * prob.weights[i] * 0.5 * s * s;
  }
  double potential = 0.0;
  for (int i = 2; i <= n - 2; ++i) {
    potential += tau / (prob.eps * prob.eps) * prob.weights[i + 2] *
                 phi(prob.domain, traj.states.col(i), prob.nl);
  }
  return kinetic + potential;
}

namespace {

// Scatter form of D2^T: each delta^2 term pushes into the three levels it
// touches; fixed levels 0 and 1 are skipped.
FreeVariables scatter_d2_transpose(const Eigen::MatrixXd& x,
                                   const WedProblem& prob) {
  const int n = prob.grid.steps;
  const double tau = prob.grid.tau;
  const Eigen::MatrixXd d2 = discrete_derivative(x, tau, 2);
  FreeVariables out = FreeVariables::Zero(x.rows(), n - 1);
  for (int i = 2; i <= n; ++i) {
    const State w = prob.weights[i] * d2.col(i - 2) / (tau * tau);
    out.col(i - 2) += w;
    if (i - 1 >= 2) out.col(i - 3) -= 2.0 * w;
    if (i - 2 >= 2) out.col(i - 4) += w;
  }
  return out;
}

}  // namespace

FreeVariables gradient(const Trajectory& traj, const WedProblem& prob) {
  check_traj(traj, prob);
  FreeVariables g = scatter_d2_transpose(traj.states, prob);
  const int n = prob.grid.steps;
  for (int i = 2; i <= n - 2; ++i) {
    g.col(i - 2) += prob.weights[i + 2] / (prob.eps * prob.eps) *
                    grad_phi(prob.domain, traj.states.col(i), prob.nl);
  }
  return g;
}

FreeVariables hessian_apply(const Trajectory& traj, const FreeVariables& dir,
                            const WedProblem& prob) {
  check_traj(traj, prob);
  check_dir(dir, prob);
  const int n = prob.grid.steps;
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(prob.domain.dofs(), n + 1);
  v.rightCols(n - 1) = dir;
  FreeVariables out = scatter_d2_transpose(v, prob);
  for (int i = 2; i <= n - 2; ++i) {
    out.col(i - 2) += prob.weights[i + 2] / (prob.eps * prob.eps) *
                      hess_phi_apply(prob.domain, traj.states.col(i),
                                     v.col(i), prob.nl);
  }
  return out;
}

}  // namespace serial

}  // namespace wedreg
