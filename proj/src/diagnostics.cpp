#include "wedreg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "wedreg/errors.hpp"

namespace wedreg {

EnergyReport energy_lhs(const Trajectory& traj, const Nonlinearity& nl) {
  const int n = traj.grid.steps;
  if (n < 5) throw ConfigError("energy window needs n >= 5");
  const double tau = traj.grid.tau;
  const SpatialDomain& dom = traj.domain;
  EnergyReport rep;
  rep.window_begin = tau;
  rep.window_end = traj.grid.final_time - 2.0 * tau;

  // Interval i covers ((i-1) tau, i tau]; the window is exactly i = 2..n-2.
  const Nonlinearity no_potential = Nonlinearity::none();
  for (int i = 2; i <= n - 2; ++i) {
    const State vel = (traj.state(i) - traj.state(i - 1)) / tau;
    rep.velocity += tau * dom.inner(vel, vel);
    const double grad_half = phi(dom, traj.state(i), no_potential);
    rep.gradient += tau * 2.0 * grad_half;
    double pot = 0.0;
    for (int j = 0; j < dom.dofs(); ++j) pot += nl.w(traj.states(j, i));
    rep.potential += tau * 2.0 * dom.h() * pot;
  }
  rep.value = rep.velocity + rep.gradient + rep.potential;
  return rep;
}

double el_residual(const Trajectory& traj, const WedProblem& prob) {
  const Eigen::MatrixXd r = el_residual_field(traj, prob);
  const Eigen::MatrixXd d = el_operator_diagonal(traj, prob);
  return r.cwiseQuotient(d).cwiseAbs().maxCoeff();
}

FinalResidual final_bc_residual(const Trajectory& traj) {
  const int n = traj.grid.steps;
  if (n < 4) throw ConfigError("n too small");
  const Eigen::MatrixXd tail = traj.states.rightCols(4);
  const Eigen::MatrixXd d2 = discrete_derivative(tail, traj.grid.tau, 2);
  const Eigen::MatrixXd d3 = discrete_derivative(tail, traj.grid.tau, 3);
  return {traj.domain.norm(d2.col(d2.cols() - 1)),
          traj.domain.norm(d3.col(d3.cols() - 1))};
}

double distance(const Trajectory& traj, const SampledPath& ref,
                DistanceNorm norm) {
  const double T = traj.grid.final_time;
  if (ref.final_time < T * (1.0 - 1e-12)) {
    throw DomainError("reference does not cover [0, T]");
  }
  if (ref.samples.rows() != traj.states.rows()) {
    throw DimensionError("reference and trajectory dofs differ");
  }
  double sup = 0.0;
  double sum = 0.0;
  const int last = std::min(ref.intervals(),
                            static_cast<int>(std::floor(T / ref.spacing + 1e-9)));
  for (int k = 0; k <= last; ++k) {
    const double t = std::min(ref.time(k), T);
    const State diff =
        interpolate(traj, t, InterpolationMode::kAffine) - ref.samples.col(k);
    const double d = traj.domain.norm(diff);
    sup = std::max(sup, d);
    const double w = (k == 0 || k == last) ? 0.5 : 1.0;
    sum += w * ref.spacing * d * d;
  }
  return norm == DistanceNorm::kSupL2 ? sup : std::sqrt(sum);
}

double u1_gap(const Trajectory& traj, const State& u1) {
  const State slope = (traj.state(2) - traj.state(1)) / traj.grid.tau;
  return traj.domain.norm(slope - u1);
}

Trajectory recovery_trajectory(const TimeFunction& u_ref,
                               const WedProblem& prob, int quad_points) {
  const int n = prob.grid.steps;
  const double tau = prob.grid.tau;
  Eigen::MatrixXd states(prob.domain.dofs(), n + 1);
  states.col(0) = prob.u0;
  states.col(1) = prob.u0 + tau * prob.u1;
  for (int i = 2; i <= n; ++i) {
    states.col(i) = backward_mean(u_ref, tau, i * tau, quad_points);
  }
  return make_trajectory(prob.domain, prob.grid, std::move(states));
}

double weighted_functional_quadrature(const TimeFunction& u,
                                      const TimeFunction& u_tt,
                                      const WedProblem& prob, int intervals) {
  if (intervals < 2) throw ConfigError("quadrature needs >= 2 intervals");
  if (intervals % 2 != 0) ++intervals;
  const double T = prob.grid.final_time;
  const double h = T / intervals;
  const double inv_eps2 = 1.0 / (prob.eps * prob.eps);
  auto integrand = [&](double t) {
    const State a = u_tt(t);
    const double acc = prob.domain.inner(a, a);
    return std::exp(-t / prob.eps) *
           (0.5 * acc + inv_eps2 * phi(prob.domain, u(t), prob.nl));
  };
  double sum = integrand(0.0) + integrand(T);
  for (int k = 1; k < intervals; ++k) {
    sum += (k % 2 == 1 ? 4.0 : 2.0) * integrand(k * h);
  }
  return sum * h / 3.0;
}

namespace {

ConvergenceRecord run_one(const WedProblem& base, double eps,
                          const SampledPath& reference,
                          const SolverOptions& opts) {
  ConvergenceRecord rec;
  rec.eps = eps;
  rec.tau = base.grid.tau;
  try {
    const WedProblem prob =
        make_problem(base.domain, base.nl, base.u0, base.u1, base.grid, eps);
    MinimizeResult res = minimize(prob, opts);
    rec.objective = res.objective;
    rec.grad_norm = res.grad_norm;
    rec.newton_iters = res.newton_iters;
    rec.dist_sup = distance(res.traj, reference, DistanceNorm::kSupL2);
    rec.dist_l2 = distance(res.traj, reference, DistanceNorm::kL2L2);
    rec.energy = energy_lhs(res.traj, prob.nl);
    rec.bc_res = final_bc_residual(res.traj);
    rec.u1_gap = u1_gap(res.traj, prob.u1);
    rec.el_residual = el_residual(res.traj, prob);
    rec.ok = res.converged;
    rec.status = res.converged ? "ok" : "not-converged: " + res.message;
    rec.traj = std::move(res.traj);
  } catch (const std::exception& e) {
    rec.ok = false;
    rec.status = std::string("failed: ") + e.what();
  }
  return rec;
}

}  // namespace

std::vector<ConvergenceRecord> convergence_study(
    const WedProblem& base, const std::vector<double>& eps_list,
    const SampledPath& reference, const SolverOptions& opts, int jobs) {
  std::vector<ConvergenceRecord> records(eps_list.size());
  const int count = static_cast<int>(eps_list.size());
  // Each slot is written by exactly one iteration; the merge order is the
  // input order regardless of scheduling.
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, jobs))
  for (int k = 0; k < count; ++k) {
    records[static_cast<std::size_t>(k)] =
        run_one(base, eps_list[static_cast<std::size_t>(k)], reference, opts);
  }
  return records;
}

}  // namespace wedreg
