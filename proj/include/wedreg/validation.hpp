#pragma once

// Invariant suite behind `wedreg validate`, and the numerical probes it is
// built from (also used by the tests).

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "wedreg/diagnostics.hpp"

namespace wedreg {

struct CheckResult {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  // "<=" : value <= threshold; ">=" : value >= threshold;
  // "in" : threshold <= value <= upper.
  std::string relation = "<=";
  double upper = 0.0;
  bool pass = false;
};

CheckResult check_le(std::string name, double value, double threshold);
CheckResult check_ge(std::string name, double value, double threshold);
CheckResult check_in(std::string name, double value, double lo, double hi);

struct ValidationOptions {
  // Test hook: negate the analytic gradient before the finite-difference
  // comparison. The gradient checks must then fail.
  bool flip_gradient_sign = false;
  std::uint64_t seed = 1234567;
};

std::vector<CheckResult> run_validation(const ValidationOptions& options);

// Uniform random free variables in [-scale, scale].
FreeVariables random_free(const WedProblem& prob, std::mt19937_64& rng,
                          double scale = 1.0);

// Relative error between <grad I(x), d> and the central difference of I
// along d.
double fd_gradient_error(const WedProblem& prob, const FreeVariables& x,
                         const FreeVariables& d, bool flip_sign = false);

// Relative max-norm error between H(x) d and the central difference of the
// gradient along d.
double fd_hessian_error(const WedProblem& prob, const FreeVariables& x,
                        const FreeVariables& d);

// |<a, H b> - <H a, b>| relative to |<a, H b>|.
double hessian_asymmetry(const WedProblem& prob, const FreeVariables& x,
                         const FreeVariables& a, const FreeVariables& b);

// Minimizer of the scalar functional with W(r) = c r^2 / 2 by assembling the
// full quadratic form densely from the definition and solving the normal
// equations. Independent of the sparse Hessian and Newton code.
Trajectory dense_quadratic_minimizer(const WedProblem& prob);

double sup_distance(const Trajectory& a, const Trajectory& b);

struct RecoveryStudy {
  std::vector<int> steps;
  std::vector<double> gaps;    // I_tau(recovery) - quadrature of I
  std::vector<double> orders;  // log2(gap_k / gap_{k+1})
};

// Halves tau starting from `steps.front()` for `halvings` times.
RecoveryStudy recovery_gap_study(const WedProblem& base,
                                 const TimeFunction& u_ref,
                                 const TimeFunction& u_ref_tt, int first_steps,
                                 int halvings);

// max over time of |E(t) - E(0)|, E = |u'|^2 / 2 + W(u), scalar RK4 path.
double limit_energy_drift(const Nonlinearity& nl, double u0, double u1,
                          double final_time, double dt);

// Observed order log2(|x_dt - x_{dt/2}| / |x_{dt/2} - x_{dt/4}|) with
// sup-in-time spatial-L2 differences on a common output grid.
double limit_self_convergence_order(const SpatialDomain& domain,
                                    const Nonlinearity& nl, const State& u0,
                                    const State& u1, double final_time,
                                    double dt, int output_intervals);

}  // namespace wedreg
