#include <doctest.h>

#include <cmath>

#include "wedreg/diagnostics.hpp"
#include "wedreg/errors.hpp"
#include "wedreg/validation.hpp"

using namespace wedreg;
using doctest::Approx;

namespace {

WedProblem scalar_problem(double T, int n, double eps, double u0, double u1,
                          Nonlinearity nl = Nonlinearity::power(4.0)) {
  return make_problem(SpatialDomain::scalar(), nl, State::Constant(1, u0),
                      State::Constant(1, u1), build_grid(T, n), eps);
}

Trajectory scalar_traj(const TimeGrid& g, double (*f)(double)) {
  Eigen::MatrixXd s(1, g.steps + 1);
  for (int i = 0; i <= g.steps; ++i) s(0, i) = f(g.time(i));
  return make_trajectory(SpatialDomain::scalar(), g, std::move(s));
}

}  // namespace

TEST_CASE("energy_lhs") {
  const TimeGrid g = build_grid(3.0, 60);
  const auto nl = Nonlinearity::power(4.0);
  const EnergyReport zero = energy_lhs(scalar_traj(g, [](double) { return 0.0; }), nl);
  CHECK(zero.value == 0.0);
  const EnergyReport ramp =
      energy_lhs(scalar_traj(g, [](double t) { return t; }), Nonlinearity::none());
  CHECK(ramp.velocity == Approx(3.0 - 3.0 * g.tau).epsilon(1e-13));
  CHECK(ramp.window_begin == Approx(g.tau));
  CHECK(ramp.window_end == Approx(3.0 - 2.0 * g.tau));
  const EnergyReport cub = energy_lhs(scalar_traj(g, [](double t) { return t * t - t; }), nl);
  CHECK(cub.velocity >= 0.0);
  CHECK(cub.potential >= 0.0);
  CHECK(cub.value == Approx(cub.velocity + cub.gradient + cub.potential).epsilon(1e-15));
  CHECK_THROWS_AS(energy_lhs(scalar_traj(build_grid(1.0, 4), [](double t) { return t; }), nl),
                  ConfigError);
}

TEST_CASE("energy is invariant under the sign flip of the data") {
  const auto quartic = Nonlinearity::power(4.0);
  const auto dom = SpatialDomain::interval(3.0, 15);
  const auto plus = make_problem(dom, quartic, make_datum(dom, "bump 1"),
                                 make_datum(dom, "constant 0.1"), build_grid(1.0, 30), 0.2);
  const auto minus = make_problem(dom, quartic, -plus.u0, -plus.u1, plus.grid, 0.2);
  const SolverOptions o = SolverOptions::defaults_for(dom);
  const double a = energy_lhs(minimize(plus, o).traj, quartic).value;
  const double b = energy_lhs(minimize(minus, o).traj, quartic).value;
  CHECK(std::abs(a - b) <= 1e-12);
}

TEST_CASE("el_residual") {
  const auto none = scalar_problem(3.0, 40, 0.2, 1.0, 0.5, Nonlinearity::none());
  CHECK(el_residual(embed(affine_free(none), none), none) <= 1e-14);

  const auto prob = scalar_problem(3.0, 100, 0.2, 1.0, 0.0);
  const SolverOptions o;
  MinimizeResult m = minimize(prob, o);
  CHECK(el_residual(m.traj, prob) <= 10 * o.tol_grad);
  m.traj.states(0, 50) += 1e-3;
  CHECK(el_residual(m.traj, prob) > 1e-4);
}

TEST_CASE("final_bc_residual") {
  const TimeGrid g = build_grid(1.0, 10);
  const FinalResidual lin = final_bc_residual(scalar_traj(g, [](double t) { return 2 * t + 1; }));
  CHECK(lin.second == Approx(0.0).scale(1.0));
  CHECK(std::abs(lin.second) <= 1e-10);
  CHECK(std::abs(lin.third) <= 1e-8);
  const FinalResidual sq = final_bc_residual(scalar_traj(g, [](double t) { return t * t; }));
  CHECK(sq.second == Approx(2.0).epsilon(1e-10));
  CHECK(std::abs(sq.third) <= 1e-7);
}

TEST_CASE("distance") {
  const auto prob = scalar_problem(3.0, 30, 0.2, 1.0, 0.0);
  const Trajectory one = scalar_traj(prob.grid, [](double) { return 1.0; });
  SampledPath zero;
  zero.final_time = 3.0;
  zero.spacing = 0.1;
  zero.samples = Eigen::MatrixXd::Zero(1, 31);
  CHECK(distance(one, zero, DistanceNorm::kSupL2) == 1.0);
  CHECK(distance(one, zero, DistanceNorm::kL2L2) == Approx(std::sqrt(3.0)).epsilon(1e-13));

  SampledPath self = zero;
  self.samples = one.states;
  CHECK(distance(one, self, DistanceNorm::kSupL2) == 0.0);
  CHECK(distance(one, self, DistanceNorm::kL2L2) == 0.0);

  SampledPath short_ref = zero;
  short_ref.final_time = 2.0;
  short_ref.samples = Eigen::MatrixXd::Zero(1, 21);
  CHECK_THROWS_AS(distance(one, short_ref, DistanceNorm::kSupL2), DomainError);
}

TEST_CASE("recovery trajectory") {
  const auto prob = scalar_problem(2.0, 20, 0.2, 1.5, 0.0);
  const Trajectory c = recovery_trajectory([](double) { return State::Constant(1, 1.5); }, prob);
  CHECK((c.states.array() - 1.5).abs().maxCoeff() <= 1e-15);

  const auto moving = scalar_problem(2.0, 20, 0.2, 1.0, 0.75);
  const Trajectory a = recovery_trajectory(
      [](double t) { return State::Constant(1, 1.0 + 0.75 * t); }, moving);
  const double tau = moving.grid.tau;
  CHECK(a.states(0, 0) == 1.0);
  CHECK((a.states(0, 1) - a.states(0, 0)) / tau == Approx(0.75).epsilon(1e-14));
  for (int i = 2; i <= 20; ++i) {
    CHECK(a.states(0, i) == Approx(1.0 + (i * tau - tau / 2) * 0.75).epsilon(1e-14));
  }
}

TEST_CASE("recovery gap decays at first order") {
  const auto base = scalar_problem(3.0, 60, 0.2, 1.0, 0.0);
  const TimeFunction u = [](double t) { return State::Constant(1, std::cos(t)); };
  const TimeFunction utt = [](double t) { return State::Constant(1, -std::cos(t)); };
  const RecoveryStudy s = recovery_gap_study(base, u, utt, 120, 3);
  REQUIRE(s.orders.size() == 3);
  for (std::size_t k = 0; k + 1 < s.gaps.size(); ++k) {
    CHECK(std::abs(s.gaps[k + 1]) < std::abs(s.gaps[k]));
  }
  for (double order : s.orders) CHECK(order >= 0.8);
}

TEST_CASE("u1_gap") {
  const auto prob = scalar_problem(1.0, 10, 0.2, 0.0, 1.0);
  const Trajectory ramp = scalar_traj(prob.grid, [](double t) { return t; });
  CHECK(u1_gap(ramp, prob.u1) == Approx(0.0).scale(1.0));
  const Trajectory flat = scalar_traj(prob.grid, [](double) { return 0.0; });
  CHECK(u1_gap(flat, prob.u1) == 1.0);
}

TEST_CASE("convergence study") {
  const auto quartic = Nonlinearity::power(4.0);
  const auto base = scalar_problem(3.0, 300, 0.4, 1.0, 0.0);
  const SampledPath ref = solve_limit(base.domain, quartic, base.u0, base.u1, 3.0, 1e-4, 300);
  const std::vector<double> eps{0.4, 0.2, 0.1, 0.05};
  const auto serial = convergence_study(base, eps, ref, {}, 1);
  const auto threaded = convergence_study(base, eps, ref, {}, 3);
  REQUIRE(serial.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(serial[k].ok);
    CHECK(serial[k].eps == eps[k]);
    CHECK(serial[k].traj.states(0, 0) == 1.0);
    CHECK(std::isfinite(serial[k].u1_gap));
    CHECK(serial[k].dist_sup >= 0.0);
    CHECK(serial[k].dist_l2 >= 0.0);
    CHECK(threaded[k].traj.states == serial[k].traj.states);
    CHECK(threaded[k].dist_sup == serial[k].dist_sup);
    if (k > 0) CHECK(serial[k].dist_sup < serial[k - 1].dist_sup);
  }

  const auto none = scalar_problem(3.0, 60, 0.4, 1.0, 0.2, Nonlinearity::none());
  const SampledPath line =
      solve_limit(none.domain, none.nl, none.u0, none.u1, 3.0, 1e-3, 60);
  for (const auto& r : convergence_study(none, {0.3, 0.1}, line, {}, 1)) {
    CHECK(r.dist_sup <= 1e-12);
    CHECK(r.dist_l2 <= 1e-12);
  }

  SolverOptions capped;
  capped.max_newton = 1;
  const auto failed = convergence_study(base, {0.1}, ref, capped, 1);
  CHECK_FALSE(failed[0].ok);
  CHECK(failed[0].status.rfind("not-converged", 0) == 0);
}
