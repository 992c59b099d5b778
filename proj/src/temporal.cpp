#include "wedreg/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wedreg/errors.hpp"

namespace wedreg {

TimeGrid build_grid(double final_time, int steps) {
  if (!(final_time > 0.0) || !std::isfinite(final_time)) {
    throw ConfigError("final time T must be positive");
  }
  if (steps < 4) {
    throw ConfigError("n too small: need n >= 4, got " + std::to_string(steps));
  }
  return TimeGrid{final_time, steps, final_time / steps};
}

WeightVector build_weights(const TimeGrid& grid, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw ConfigError("eps must be positive");
  }
  WeightVector w;
  w.eps = eps;
  w.rho.resize(static_cast<std::size_t>(grid.steps) + 1);
  const double ratio = eps / (eps + grid.tau);
  // Repeated multiplication keeps rho_i / rho_{i-1} = ratio exactly, which is
  // what the backward-Euler identity needs.
  w.rho[0] = 1.0;
  for (std::size_t i = 1; i < w.rho.size(); ++i) w.rho[i] = w.rho[i - 1] * ratio;
  return w;
}

Eigen::MatrixXd discrete_derivative(const Eigen::MatrixXd& values, double tau,
                                    int k) {
  if (k < 1) throw DimensionError("derivative order must be >= 1");
  if (values.cols() <= k) {
    throw DimensionError("need more than k states for delta^k");
  }
  Eigen::MatrixXd cur = values;
  for (int order = 0; order < k; ++order) {
    const Eigen::Index cols = cur.cols() - 1;
    Eigen::MatrixXd next(cur.rows(), cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
      next.col(c) = (cur.col(c + 1) - cur.col(c)) / tau;
    }
    cur = std::move(next);
  }
  return cur;
}

Trajectory make_trajectory(const SpatialDomain& domain, const TimeGrid& grid,
                           Eigen::MatrixXd states) {
  if (states.rows() != domain.dofs() || states.cols() != grid.steps + 1) {
    throw DimensionError("trajectory must be dofs x (n + 1)");
  }
  if (!states.allFinite()) throw DomainError("trajectory has non-finite entries");
  return Trajectory{domain, grid, std::move(states)};
}

State interpolate(const Trajectory& traj, double t, InterpolationMode mode) {
  const TimeGrid& g = traj.grid;
  if (!(t >= 0.0) || t > g.final_time * (1.0 + 1e-14)) {
    throw DomainError("interpolation time outside [0, T]");
  }
  if (t == 0.0) return traj.state(0);
  // Interval index i with t in ((i-1) tau, i tau]; times within rounding of
  // a node belong to that node.
  int i = static_cast<int>(std::ceil(t / g.tau - 1e-10));
  i = std::clamp(i, 1, g.steps);
  if (mode == InterpolationMode::kBackwardConstant) return traj.state(i);
  const double alpha = std::clamp((t - (i - 1) * g.tau) / g.tau, 0.0, 1.0);
  return alpha * traj.state(i) + (1.0 - alpha) * traj.state(i - 1);
}

State backward_mean(const TimeFunction& f, double tau, double t,
                    int quad_points) {
  if (!(tau > 0.0)) throw DomainError("backward mean needs tau > 0");
  if (!(t > tau)) throw DomainError("backward mean needs t > tau");
  if (quad_points < 2) throw DomainError("backward mean needs >= 2 nodes");
  const double a = t - tau;
  const int intervals = quad_points - 1;
  const double step = tau / intervals;
  auto node = [&](int k) { return f(a + k * step); };

  State sum = node(0);
  sum.setZero();
  if (intervals == 1) {
    sum = 0.5 * step * (node(0) + node(1));
  } else {
    // Simpson on an even number of intervals, closing with 3/8 on the last
    // three when the count is odd.
    const int simpson = intervals % 2 == 0 ? intervals : intervals - 3;
    for (int k = 0; k < simpson; k += 2) {
      sum += step / 3.0 * (node(k) + 4.0 * node(k + 1) + node(k + 2));
    }
    if (simpson != intervals) {
      const int k = simpson;
      sum += 3.0 * step / 8.0 *
             (node(k) + 3.0 * node(k + 1) + 3.0 * node(k + 2) + node(k + 3));
    }
  }
  return sum / tau;
}

}  // namespace wedreg
