#include <algorithm>
#include <cmath>

#include "wedreg/errors.hpp"
#include "wedreg/solvers.hpp"

namespace wedreg {

State SampledPath::operator()(double t) const {
  const int count = intervals();
  if (count < 1) throw DomainError("sampled path has no intervals");
  if (t < -1e-12 * final_time || t > final_time * (1.0 + 1e-12)) {
    throw DomainError("sample time outside [0, T]");
  }
  const double s = std::clamp(t / spacing, 0.0, static_cast<double>(count));
  if (count < 3) {
    const int k = std::min(static_cast<int>(s), count - 1);
    const double a = s - k;
    return (1.0 - a) * samples.col(k) + a * samples.col(k + 1);
  }
  const int k = std::min(static_cast<int>(std::floor(s)), count - 1);
  const int base = std::clamp(k - 1, 0, count - 3);
  State out = State::Zero(samples.rows());
  for (int a = 0; a < 4; ++a) {
    double w = 1.0;
    for (int b = 0; b < 4; ++b) {
      if (b != a) w *= (s - (base + b)) / static_cast<double>(a - b);
    }
    out += w * samples.col(base + a);
  }
  return out;
}

TimeFunction SampledPath::as_function() const {
  return [copy = *this](double t) { return copy(t); };
}

SampledPath solve_limit(const SpatialDomain& domain, const Nonlinearity& nl,
                        const State& u0, const State& u1, double final_time,
                        double dt, int output_intervals) {
  if (u0.size() != domain.dofs() || u1.size() != domain.dofs()) {
    throw DimensionError("initial data do not match the spatial domain");
  }
  if (!(final_time > 0.0)) throw ConfigError("final time must be positive");
  if (!(dt > 0.0)) throw ConfigError("reference dt must be positive");
  if (!domain.is_scalar() && dt > 0.9 * domain.h()) {
    throw ConfigError("CFL violation: leapfrog needs dt <= 0.9 h");
  }
  if (output_intervals < 0) throw ConfigError("output intervals must be >= 0");

  int outputs = output_intervals;
  int substeps = 1;
  if (outputs == 0) {
    outputs = static_cast<int>(std::ceil(final_time / dt - 1e-9));
  } else {
    const double spacing = final_time / outputs;
    substeps = std::max(1, static_cast<int>(std::ceil(spacing / dt - 1e-9)));
  }
  const double spacing = final_time / outputs;
  const double h = spacing / substeps;

  SampledPath path;
  path.domain = domain;
  path.final_time = final_time;
  path.spacing = spacing;
  path.samples.resize(domain.dofs(), outputs + 1);
  path.samples.col(0) = u0;

  auto accel = [&](const State& u) {
    State a = -stiffness_apply(domain, u);
    for (int j = 0; j < a.size(); ++j) a[j] -= nl.dw(u[j]);
    return a;
  };

  if (domain.is_scalar()) {
    // RK4 on (u, v)' = (v, -W'(u)).
    State u = u0, v = u1;
    path.velocities.resize(domain.dofs(), outputs + 1);
    path.velocities.col(0) = u1;
    for (int k = 1; k <= outputs; ++k) {
      for (int s = 0; s < substeps; ++s) {
        const State k1u = v, k1v = accel(u);
        const State k2u = v + 0.5 * h * k1v, k2v = accel(u + 0.5 * h * k1u);
        const State k3u = v + 0.5 * h * k2v, k3v = accel(u + 0.5 * h * k2u);
        const State k4u = v + h * k3v, k4v = accel(u + h * k3u);
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
      }
      path.samples.col(k) = u;
      path.velocities.col(k) = v;
    }
  } else {
    // Leapfrog with a second-order Taylor start.
    State prev = u0;
    State cur = u0 + h * u1 + 0.5 * h * h * accel(u0);
    int step = 1;
    const int total = outputs * substeps;
    if (substeps == 1) path.samples.col(1) = cur;
    while (step < total) {
      State next = 2.0 * cur - prev + h * h * accel(cur);
      prev = std::move(cur);
      cur = std::move(next);
      ++step;
      if (step % substeps == 0) path.samples.col(step / substeps) = cur;
    }
  }
  if (!path.samples.allFinite()) throw SolverError("reference solution blew up");
  return path;
}

}  // namespace wedreg
