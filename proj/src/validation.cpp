#include "wedreg/validation.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "wedreg/errors.hpp"

namespace wedreg {

CheckResult check_le(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, "<=", 0.0,
          std::isfinite(value) && value <= threshold};
}

CheckResult check_ge(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, ">=", 0.0,
          std::isfinite(value) && value >= threshold};
}

CheckResult check_in(std::string name, double value, double lo, double hi) {
  return {std::move(name), value, lo, "in", hi,
          std::isfinite(value) && value >= lo && value <= hi};
}

FreeVariables random_free(const WedProblem& prob, std::mt19937_64& rng,
                          double scale) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  FreeVariables x(prob.domain.dofs(), prob.grid.steps - 1);
  for (Eigen::Index k = 0; k < x.size(); ++k) x.data()[k] = dist(rng);
  return x;
}

double fd_gradient_error(const WedProblem& prob, const FreeVariables& x,
                         const FreeVariables& d, bool flip_sign) {
  FreeVariables g = gradient(embed(x, prob), prob);
  if (flip_sign) g = -g;
  const double analytic = free_inner(prob, g, d);
  const double h = 1e-6 * (1.0 + x.cwiseAbs().maxCoeff()) /
                   std::max(d.cwiseAbs().maxCoeff(), 1e-300);
  const FreeVariables xp = x + h * d;
  const FreeVariables xm = x - h * d;
  const double fd = (eval_functional(embed(xp, prob), prob) -
                     eval_functional(embed(xm, prob), prob)) /
                    (2.0 * h);
  return std::abs(fd - analytic) / std::max(std::abs(analytic), 1e-300);
}

double fd_hessian_error(const WedProblem& prob, const FreeVariables& x,
                        const FreeVariables& d) {
  const FreeVariables hd = hessian_apply(embed(x, prob), d, prob);
  const double h = 1e-6 * (1.0 + x.cwiseAbs().maxCoeff()) /
                   std::max(d.cwiseAbs().maxCoeff(), 1e-300);
  const FreeVariables xp = x + h * d;
  const FreeVariables xm = x - h * d;
  const FreeVariables fd =
      (gradient(embed(xp, prob), prob) - gradient(embed(xm, prob), prob)) /
      (2.0 * h);
  return (fd - hd).cwiseAbs().maxCoeff() /
         std::max(hd.cwiseAbs().maxCoeff(), 1e-300);
}

double hessian_asymmetry(const WedProblem& prob, const FreeVariables& x,
                         const FreeVariables& a, const FreeVariables& b) {
  const Trajectory traj = embed(x, prob);
  const double ahb = free_inner(prob, a, hessian_apply(traj, b, prob));
  const double hab = free_inner(prob, hessian_apply(traj, a, prob), b);
  return std::abs(ahb - hab) / std::max(std::abs(ahb), 1e-300);
}

Trajectory dense_quadratic_minimizer(const WedProblem& prob) {
  if (!prob.domain.is_scalar()) {
    throw DimensionError("dense oracle is scalar-only");
  }
  const double c = prob.nl.d2w(0.0);
  if (std::abs(prob.nl.d2w(1.0) - c) > 1e-14 * (1.0 + std::abs(c)) ||
      std::abs(prob.nl.w(0.0)) > 0.0) {
    throw ConfigError("dense oracle needs W(r) = c r^2 / 2");
  }
  const int n = prob.grid.steps;
  const double tau = prob.grid.tau;
  const double eps = prob.eps;
  // Quadratic form over the full vector (u_0, ..., u_n).
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (int i = 2; i <= n; ++i) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(n + 1);
    row[i] = 1.0 / (tau * tau);
    row[i - 1] = -2.0 / (tau * tau);
    row[i - 2] = 1.0 / (tau * tau);
    q += tau * prob.weights[i] * row * row.transpose();
  }
  for (int i = 2; i <= n - 2; ++i) {
    q(i, i) += tau / (eps * eps) * prob.weights[i + 2] * c;
  }
  Eigen::Vector2d known(prob.u0[0], prob.u0[0] + tau * prob.u1[0]);
  const Eigen::MatrixXd qff = q.bottomRightCorner(n - 1, n - 1);
  const Eigen::MatrixXd qfk = q.bottomLeftCorner(n - 1, 2);
  const Eigen::VectorXd free = qff.ldlt().solve(-qfk * known);

  Eigen::MatrixXd states(1, n + 1);
  states(0, 0) = known[0];
  states(0, 1) = known[1];
  states.rightCols(n - 1) = free.transpose();
  return make_trajectory(prob.domain, prob.grid, std::move(states));
}

double sup_distance(const Trajectory& a, const Trajectory& b) {
  if (a.states.rows() != b.states.rows() || a.states.cols() != b.states.cols()) {
    throw DimensionError("trajectories differ in shape");
  }
  double out = 0.0;
  for (Eigen::Index i = 0; i < a.states.cols(); ++i) {
    out = std::max(out, a.domain.norm(a.states.col(i) - b.states.col(i)));
  }
  return out;
}

RecoveryStudy recovery_gap_study(const WedProblem& base,
                                 const TimeFunction& u_ref,
                                 const TimeFunction& u_ref_tt, int first_steps,
                                 int halvings) {
  RecoveryStudy study;
  // The continuous value does not depend on tau; a fine Simpson rule is the
  // oracle.
  const double exact =
      weighted_functional_quadrature(u_ref, u_ref_tt, base, 200000);
  int n = first_steps;
  for (int k = 0; k <= halvings; ++k, n *= 2) {
    const WedProblem prob =
        make_problem(base.domain, base.nl, base.u0, base.u1,
                     build_grid(base.grid.final_time, n), base.eps);
    const Trajectory rec = recovery_trajectory(u_ref, prob);
    study.steps.push_back(n);
    study.gaps.push_back(eval_functional(rec, prob) - exact);
  }
  for (std::size_t k = 0; k + 1 < study.gaps.size(); ++k) {
    study.orders.push_back(
        std::log2(std::abs(study.gaps[k]) / std::abs(study.gaps[k + 1])));
  }
  return study;
}

double limit_energy_drift(const Nonlinearity& nl, double u0, double u1,
                          double final_time, double dt) {
  const SpatialDomain dom = SpatialDomain::scalar();
  const SampledPath path = solve_limit(dom, nl, State::Constant(1, u0),
                                       State::Constant(1, u1), final_time, dt);
  auto energy = [&](Eigen::Index k) {
    const double v = path.velocities(0, k);
    return 0.5 * v * v + nl.w(path.samples(0, k));
  };
  const double e0 = energy(0);
  double drift = 0.0;
  for (Eigen::Index k = 0; k < path.samples.cols(); ++k) {
    drift = std::max(drift, std::abs(energy(k) - e0));
  }
  return drift;
}

double limit_self_convergence_order(const SpatialDomain& domain,
                                    const Nonlinearity& nl, const State& u0,
                                    const State& u1, double final_time,
                                    double dt, int output_intervals) {
  const SampledPath a =
      solve_limit(domain, nl, u0, u1, final_time, dt, output_intervals);
  const SampledPath b =
      solve_limit(domain, nl, u0, u1, final_time, dt / 2, output_intervals);
  const SampledPath c =
      solve_limit(domain, nl, u0, u1, final_time, dt / 4, output_intervals);
  auto diff = [&](const SampledPath& x, const SampledPath& y) {
    double out = 0.0;
    for (Eigen::Index k = 0; k < x.samples.cols(); ++k) {
      out = std::max(out, domain.norm(x.samples.col(k) - y.samples.col(k)));
    }
    return out;
  };
  return std::log2(diff(a, b) / diff(b, c));
}

namespace {

WedProblem scalar_problem(const Nonlinearity& nl, double u0, double u1,
                          double T, int n, double eps) {
  return make_problem(SpatialDomain::scalar(), nl, State::Constant(1, u0),
                      State::Constant(1, u1), build_grid(T, n), eps);
}

WedProblem interval_problem(int m, double T, int n, double eps) {
  const SpatialDomain dom = SpatialDomain::interval(8.0, m);
  return make_problem(dom, Nonlinearity::power(4.0), make_datum(dom, "bump 1"),
                      make_datum(dom, "zero"), build_grid(T, n), eps);
}

void derivative_checks(const std::string& tag, const WedProblem& prob,
                       std::mt19937_64& rng, const ValidationOptions& opt,
                       std::vector<CheckResult>& out) {
  double grad_err = 0.0, hess_err = 0.0, asym = 0.0;
  double min_form = std::numeric_limits<double>::infinity();
  for (int probe = 0; probe < 5; ++probe) {
    const FreeVariables x = affine_free(prob) + random_free(prob, rng, 0.5);
    const FreeVariables d = random_free(prob, rng);
    const FreeVariables e = random_free(prob, rng);
    grad_err = std::max(grad_err,
                        fd_gradient_error(prob, x, d, opt.flip_gradient_sign));
    hess_err = std::max(hess_err, fd_hessian_error(prob, x, d));
    asym = std::max(asym, hessian_asymmetry(prob, x, d, e));
    const Trajectory traj = embed(x, prob);
    min_form = std::min(min_form,
                        free_inner(prob, d, hessian_apply(traj, d, prob)));
  }
  out.push_back(check_le("fd_gradient_" + tag, grad_err, 1e-6));
  out.push_back(check_le("fd_hessian_" + tag, hess_err, 1e-6));
  out.push_back(check_le("hessian_symmetry_" + tag, asym, 1e-12));
  out.push_back(check_ge("hessian_quadratic_form_" + tag, min_form, 0.0));
}

void kernel_checks(const std::string& tag, const WedProblem& prob,
                   std::mt19937_64& rng, std::vector<CheckResult>& out) {
  const FreeVariables x = affine_free(prob) + random_free(prob, rng, 0.5);
  const FreeVariables d = random_free(prob, rng);
  const Trajectory traj = embed(x, prob);
  const double f = eval_functional(traj, prob);
  const double fs = serial::eval_functional(traj, prob);
  const FreeVariables g = gradient(traj, prob);
  const FreeVariables gs = serial::gradient(traj, prob);
  const FreeVariables h = hessian_apply(traj, d, prob);
  const FreeVariables hs = serial::hessian_apply(traj, d, prob);
  const double err = std::max(
      {std::abs(f - fs) / std::abs(fs),
       (g - gs).cwiseAbs().maxCoeff() / gs.cwiseAbs().maxCoeff(),
       (h - hs).cwiseAbs().maxCoeff() / hs.cwiseAbs().maxCoeff()});
  out.push_back(check_le("parallel_vs_serial_" + tag, err, 1e-12));
}

}  // namespace

std::vector<CheckResult> run_validation(const ValidationOptions& opt) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(opt.seed);
  const Nonlinearity quartic = Nonlinearity::power(4.0);

  // Weights: rho_0 = 1 and rho_{i+1} (eps + tau) / eps = rho_i.
  {
    const TimeGrid grid = build_grid(3.0, 600);
    double worst = 0.0;
    for (double eps : {0.4, 0.05, 0.0125}) {
      const WeightVector w = build_weights(grid, eps);
      worst = std::max(worst, std::abs(w[0] - 1.0));
      for (int i = 0; i < grid.steps; ++i) {
        worst = std::max(worst, std::abs(w[i + 1] * (eps + grid.tau) / eps - w[i]) /
                                    w[i]);
      }
    }
    out.push_back(check_le("weight_recurrence", worst, 1e-13));
  }

  const WedProblem scalar = scalar_problem(quartic, 1.0, 0.0, 3.0, 40, 0.2);
  const WedProblem interval = interval_problem(15, 2.0, 20, 0.2);
  derivative_checks("scalar", scalar, rng, opt, out);
  derivative_checks("interval", interval, rng, opt, out);
  kernel_checks("scalar", scalar, rng, out);
  kernel_checks("interval", interval, rng, out);

  const SolverOptions tight;

  // Potential disabled: the affine trajectory with objective 0.
  {
    const WedProblem prob =
        scalar_problem(Nonlinearity::none(), 1.0, 0.5, 3.0, 60, 0.2);
    const MinimizeResult res = minimize(prob, tight);
    const Trajectory affine = embed(affine_free(prob), prob);
    out.push_back(check_le("affine_exact_objective", std::abs(res.objective), 1e-14));
    out.push_back(check_le("affine_exact_path", sup_distance(res.traj, affine), 1e-12));
  }

  // W(r) = r^2 / 2 against the dense normal equations.
  {
    const WedProblem prob =
        scalar_problem(Nonlinearity::quadratic(), 1.0, 0.0, 3.0, 40, 0.2);
    const MinimizeResult res = minimize(prob, tight);
    out.push_back(check_le("quadratic_dense_oracle",
                           sup_distance(res.traj, dense_quadratic_minimizer(prob)),
                           1e-10));
  }

  // Two solution paths, stationarity and final conditions.
  {
    const WedProblem prob = scalar_problem(quartic, 1.0, 0.0, 3.0, 200, 0.2);
    const MinimizeResult a = minimize(prob, tight);
    const MinimizeResult b = solve_el(prob, tight);
    out.push_back(check_le("path_equivalence_scalar",
                           sup_distance(a.traj, b.traj), 1e-8));
    out.push_back(check_le("el_residual_scalar", el_residual(a.traj, prob),
                           10.0 * tight.tol_grad));
    const FinalResidual bc = final_bc_residual(a.traj);
    out.push_back(check_le("final_conditions_scalar", std::max(bc.second, bc.third),
                           1e-6));
  }
  {
    const WedProblem prob = interval_problem(31, 2.0, 60, 0.2);
    const SolverOptions o = SolverOptions::defaults_for(prob.domain);
    const MinimizeResult a = minimize(prob, o);
    const MinimizeResult b = solve_el(prob, o);
    out.push_back(check_le("path_equivalence_interval",
                           sup_distance(a.traj, b.traj), 1e-6));
    out.push_back(check_le("el_residual_interval", el_residual(a.traj, prob),
                           10.0 * o.tol_grad));
    const FinalResidual bc = final_bc_residual(a.traj);
    out.push_back(check_le("final_conditions_interval",
                           std::max(bc.second, bc.third), 1e-5));
  }

  // Uniqueness: two random starts.
  {
    const WedProblem prob = scalar_problem(quartic, 1.0, 0.0, 3.0, 300, 0.1);
    const MinimizeResult a = minimize(prob, tight, random_free(prob, rng));
    const MinimizeResult b = minimize(prob, tight, random_free(prob, rng));
    out.push_back(check_le("uniqueness_random_starts",
                           sup_distance(a.traj, b.traj), 1e-8));
  }

  // Even W: (u0, u1) -> (-u0, -u1) leaves the energy unchanged.
  {
    const WedProblem plus = scalar_problem(quartic, 1.0, 0.3, 3.0, 120, 0.2);
    const WedProblem minus = scalar_problem(quartic, -1.0, -0.3, 3.0, 120, 0.2);
    const double ep = energy_lhs(minimize(plus, tight).traj, quartic).value;
    const double em = energy_lhs(minimize(minus, tight).traj, quartic).value;
    out.push_back(check_le("energy_sign_symmetry", std::abs(ep - em), 1e-12));
  }

  // Recovery sequence: constraints exact, gap decays under tau halving.
  {
    const WedProblem base = scalar_problem(quartic, 1.0, 0.0, 3.0, 60, 0.2);
    const TimeFunction u = [](double t) { return State::Constant(1, std::cos(t)); };
    const TimeFunction utt = [](double t) {
      return State::Constant(1, -std::cos(t));
    };
    const Trajectory rec = recovery_trajectory(u, base);
    const double constraint =
        std::max(std::abs(rec.states(0, 0) - 1.0),
                 std::abs((rec.states(0, 1) - rec.states(0, 0)) / base.grid.tau));
    out.push_back(check_le("recovery_constraints", constraint, 0.0));
    const RecoveryStudy study = recovery_gap_study(base, u, utt, 120, 3);
    out.push_back(check_ge("recovery_gap_order",
                           *std::min_element(study.orders.begin(), study.orders.end()),
                           0.8));
  }

  // Limit solvers.
  {
    const SpatialDomain dom = SpatialDomain::scalar();
    const SampledPath cosine =
        solve_limit(dom, Nonlinearity::quadratic(), State::Constant(1, 1.0),
                    State::Zero(1), 3.0, 1e-3);
    double err = 0.0;
    for (int k = 0; k <= cosine.intervals(); ++k) {
      err = std::max(err, std::abs(cosine.samples(0, k) - std::cos(cosine.time(k))));
    }
    out.push_back(check_le("limit_cosine_exact", err, 1e-8));
    out.push_back(check_le("limit_energy_drift",
                           limit_energy_drift(quartic, 1.0, 0.0, 3.0, 1e-4), 1e-8));
    out.push_back(check_in("limit_rk4_order",
                           limit_self_convergence_order(dom, quartic,
                                                        State::Constant(1, 1.0),
                                                        State::Zero(1), 3.0, 0.1, 30),
                           3.5, 4.5));
    const SpatialDomain line = SpatialDomain::interval(8.0, 127);
    out.push_back(check_in("limit_leapfrog_order",
                           limit_self_convergence_order(
                               line, quartic, make_datum(line, "bump 1"),
                               make_datum(line, "zero"), 2.0, 0.05, 40),
                           1.8, 2.2));
  }

  // The eps -> 0 sweep of the scalar preset at its configured resolution.
  {
    const WedProblem base = scalar_problem(quartic, 1.0, 0.0, 3.0, 300, 0.4);
    const SampledPath ref =
        solve_limit(base.domain, quartic, base.u0, base.u1, 3.0, 1e-4, 300);
    const auto records =
        convergence_study(base, {0.4, 0.2, 0.1, 0.05}, ref, tight, 1);
    double worst_step = -std::numeric_limits<double>::infinity();
    double emax = 0.0, emin = std::numeric_limits<double>::infinity();
    bool all_ok = true;
    for (std::size_t k = 0; k < records.size(); ++k) {
      all_ok = all_ok && records[k].ok;
      if (k > 0) {
        worst_step = std::max(worst_step, records[k].dist_sup - records[k - 1].dist_sup);
      }
      emax = std::max(emax, records[k].energy.value);
      emin = std::min(emin, records[k].energy.value);
    }
    out.push_back(check_ge("sweep_converged", all_ok ? 1.0 : 0.0, 1.0));
    // Largest increment of dist_sup along the descending eps list.
    out.push_back(check_le("sweep_distance_decreasing", worst_step,
                           -std::numeric_limits<double>::min()));
    out.push_back(check_le("sweep_energy_ratio", emax / emin, 2.0));
  }
  return out;
}

}  // namespace wedreg
