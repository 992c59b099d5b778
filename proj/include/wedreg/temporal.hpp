#pragma once

// Uniform time grids, the exponential discrete weights
// rho_i = (eps / (eps + tau))^i, backward difference quotients, the
// backward-constant and affine interpolants of a trajectory, and the
// backward mean (1/tau) int_{t-tau}^t f(s) ds.

#include <Eigen/Core>

#include <functional>
#include <vector>

#include "wedreg/spatial.hpp"

namespace wedreg {

struct TimeGrid {
  double final_time = 0.0;
  int steps = 0;
  double tau = 0.0;

  double time(int i) const { return i * tau; }
};

// Throws ConfigError for final_time <= 0 or steps < 4 ("n too small").
TimeGrid build_grid(double final_time, int steps);

struct WeightVector {
  double eps = 0.0;
  std::vector<double> rho;  // size steps + 1, rho[0] = 1

  double operator[](int i) const { return rho[static_cast<std::size_t>(i)]; }
};

WeightVector build_weights(const TimeGrid& grid, double eps);

// k-fold backward difference along the columns of `values` (one state per
// column). Output column c holds delta^k w_{c+k}, so the output has k fewer
// columns. Throws DimensionError when there are not more than k columns.
Eigen::MatrixXd discrete_derivative(const Eigen::MatrixXd& values, double tau,
                                    int k);

// States u_0..u_n stored column-wise (dofs x (n + 1)).
struct Trajectory {
  SpatialDomain domain = SpatialDomain::scalar();
  TimeGrid grid;
  Eigen::MatrixXd states;

  int steps() const { return grid.steps; }
  auto state(int i) const { return states.col(i); }
  auto state(int i) { return states.col(i); }
  bool all_finite() const { return states.allFinite(); }
};

// Validates sizes and finiteness. Throws DimensionError / DomainError.
Trajectory make_trajectory(const SpatialDomain& domain, const TimeGrid& grid,
                           Eigen::MatrixXd states);

enum class InterpolationMode { kBackwardConstant, kAffine };

State interpolate(const Trajectory& traj, double t, InterpolationMode mode);

using TimeFunction = std::function<State(double)>;

// Composite Simpson (odd node counts), Simpson + 3/8 tail (even counts >= 4)
// or trapezoid (2 nodes) on [t - tau, t]; exact for quadratics once
// quad_points >= 3.
State backward_mean(const TimeFunction& f, double tau, double t,
                    int quad_points = 5);

}  // namespace wedreg
