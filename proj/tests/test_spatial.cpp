#include <doctest.h>

#include <cmath>
#include <random>

#include "wedreg/errors.hpp"
#include "wedreg/spatial.hpp"

using namespace wedreg;
using doctest::Approx;

namespace {

State random_state(int m, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> d(-scale, scale);
  State s(m);
  for (int j = 0; j < m; ++j) s[j] = d(rng);
  return s;
}

}  // namespace

TEST_CASE("domains") {
  const auto s = SpatialDomain::scalar();
  CHECK(s.dofs() == 1);
  CHECK(s.is_scalar());
  const auto line = SpatialDomain::interval(8.0, 127);
  CHECK(line.dofs() == 127);
  CHECK(line.h() == 0.125);
  CHECK(line.node(0) == Approx(-7.875));
  CHECK(line.node(63) == Approx(0.0));
  CHECK(line.inner(State::Ones(127), State::Ones(127)) == Approx(127 * 0.125));
  CHECK_THROWS_AS(SpatialDomain::interval(0.0, 5), ConfigError);
  CHECK_THROWS_AS(SpatialDomain::interval(1.0, 0), ConfigError);
  CHECK_THROWS_AS(phi(line, State::Zero(3), Nonlinearity::power(4)), DimensionError);
}

TEST_CASE("power nonlinearity") {
  const auto nl = Nonlinearity::power(4.0);
  CHECK(nl.w(1.0) == 0.5);
  CHECK(nl.dw(1.0) == 2.0);
  CHECK(nl.d2w(1.0) == 6.0);
  CHECK(nl.dw(-2.0) == Approx(-16.0));
  const auto frac = Nonlinearity::power(2.5);
  CHECK(frac.d2w(0.0) == 0.0);
  CHECK(std::isfinite(frac.d2w(1e-300)));
  CHECK_THROWS_AS(Nonlinearity::power(2.0), ConfigError);
  CHECK_NOTHROW(nl.validate());
  const auto kg = Nonlinearity::klein_gordon(4.0);
  CHECK(kg.w(1.0) == 1.0);
  CHECK(kg.dw(1.0) == 3.0);
  CHECK(Nonlinearity::quadratic().d2w(5.0) == 1.0);
}

TEST_CASE("custom nonlinearity validation") {
  auto ok = Nonlinearity::custom(
      "cosh-like", [](double r) { return 0.5 * r * r * r * r + r * r; },
      [](double r) { return 2.0 * r * r * r + 2.0 * r; },
      [](double r) { return 6.0 * r * r + 2.0; }, 4.0, 4.0);
  CHECK_NOTHROW(ok.validate());
  auto concave = Nonlinearity::custom(
      "concave", [](double r) { return -r * r; }, [](double r) { return -2.0 * r; },
      [](double) { return -2.0; }, 4.0, 4.0);
  CHECK_THROWS_AS(concave.validate(), ConfigError);
  // Quadratic growth cannot dominate |r|^4 / C.
  auto weak = Nonlinearity::custom(
      "weak", [](double r) { return r * r; }, [](double r) { return 2.0 * r; },
      [](double) { return 2.0; }, 4.0, 2.0);
  CHECK_THROWS_AS(weak.validate(), ConfigError);
}

TEST_CASE("phi examples") {
  const auto nl = Nonlinearity::power(4.0);
  const auto s = SpatialDomain::scalar();
  CHECK(phi(s, State::Zero(1), nl) == 0.0);
  CHECK(phi(s, State::Ones(1), nl) == 0.5);
  const auto one = SpatialDomain::interval(1.0, 1);
  CHECK(one.h() == 1.0);
  CHECK(phi(one, State::Ones(1), nl) == Approx(1.5).epsilon(1e-15));
  const auto line = SpatialDomain::interval(2.0, 9);
  CHECK(phi(line, State::Zero(9), nl) == 0.0);
}

TEST_CASE("phi on the one-node interval by hand") {
  // Two edges of length h to the pinned zeros: phi = (u/h)^2 h + h W(u).
  const auto dom = SpatialDomain::interval(1.5, 1);
  const double h = dom.h(), u = 0.7;
  const double expected = u * u / h + h * 0.5 * std::pow(u, 4);
  CHECK(phi(dom, State::Constant(1, u), Nonlinearity::power(4.0)) ==
        Approx(expected).epsilon(1e-15));
}

TEST_CASE("grad_phi and hess_phi_apply") {
  const auto nl = Nonlinearity::power(4.0);
  const auto s = SpatialDomain::scalar();
  CHECK(grad_phi(s, State::Ones(1), nl)[0] == 2.0);
  CHECK(hess_phi_apply(s, State::Ones(1), State::Ones(1), nl)[0] == 6.0);

  const auto line = SpatialDomain::interval(1.0, 8);
  CHECK(grad_phi(line, State::Zero(8), nl).cwiseAbs().maxCoeff() == 0.0);
  std::mt19937_64 rng(11);
  for (int probe = 0; probe < 5; ++probe) {
    const State u = random_state(8, rng);
    const State v = random_state(8, rng);
    CHECK(hess_phi_apply(line, u, State::Zero(8), nl).cwiseAbs().maxCoeff() == 0.0);
    const double step = 1e-6;
    const double fd = (phi(line, u + step * v, nl) - phi(line, u - step * v, nl)) / (2 * step);
    const double an = line.inner(grad_phi(line, u, nl), v);
    CHECK(std::abs(fd - an) <= 1e-6 * std::abs(an));
    const State hfd = (grad_phi(line, u + step * v, nl) - grad_phi(line, u - step * v, nl)) /
                      (2 * step);
    const State h = hess_phi_apply(line, u, v, nl);
    CHECK((hfd - h).cwiseAbs().maxCoeff() <= 1e-5 * h.cwiseAbs().maxCoeff());
    CHECK(line.inner(h, v) >= 0.0);
  }
}

TEST_CASE("scalar phi reduces to W") {
  const auto nl = Nonlinearity::klein_gordon(3.0);
  const auto s = SpatialDomain::scalar();
  for (double r : {-2.0, -0.3, 0.0, 0.4, 1.7}) {
    CHECK(phi(s, State::Constant(1, r), nl) == nl.w(r));
    CHECK(grad_phi(s, State::Constant(1, r), nl)[0] == nl.dw(r));
  }
}

TEST_CASE("phi is convex") {
  const auto nl = Nonlinearity::power(3.0);
  const auto line = SpatialDomain::interval(4.0, 31);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> lam(0.0, 1.0);
  for (int probe = 0; probe < 20; ++probe) {
    const State u = random_state(31, rng, 2.0);
    const State v = random_state(31, rng, 2.0);
    const double l = lam(rng);
    const double lhs = phi(line, l * u + (1 - l) * v, nl);
    const double rhs = l * phi(line, u, nl) + (1 - l) * phi(line, v, nl);
    CHECK(lhs <= rhs + 1e-12 * std::max(1.0, rhs));
  }
}

TEST_CASE("stiffness is the Dirichlet second difference") {
  const auto line = SpatialDomain::interval(1.0, 3);  // h = 0.5
  const State v = (State(3) << 1.0, 2.0, 4.0).finished();
  const State k = stiffness_apply(line, v);
  CHECK(k[0] == Approx((2 * 1.0 - 0.0 - 2.0) / 0.25));
  CHECK(k[1] == Approx((2 * 2.0 - 1.0 - 4.0) / 0.25));
  CHECK(k[2] == Approx((2 * 4.0 - 2.0 - 0.0) / 0.25));
  CHECK(stiffness_apply(SpatialDomain::scalar(), State::Ones(1))[0] == 0.0);
}

TEST_CASE("initial data by name") {
  const auto line = SpatialDomain::interval(8.0, 127);
  CHECK(make_datum(line, "zero").cwiseAbs().maxCoeff() == 0.0);
  CHECK(make_datum(line, "constant 2.5")[17] == 2.5);
  const State b = make_datum(line, "bump 1");
  CHECK(b[63] == Approx(1.0));  // x = 0
  for (int j = 0; j < 127; ++j) {
    if (std::abs(line.node(j)) >= 1.0) CHECK(b[j] == 0.0);
    const double x = line.node(j) / 1.0;
    CHECK(b[j] == Approx(std::pow(std::max(0.0, 1 - x * x), 2)));
  }
  CHECK(make_datum(line, "bump 2 0.5")[63] == Approx(0.5));
  CHECK(make_datum(SpatialDomain::scalar(), "constant 1")[0] == 1.0);
  CHECK_THROWS_AS(make_datum(line, "wiggle"), ConfigError);
  CHECK_THROWS_AS(make_datum(line, "bump -1"), ConfigError);
  CHECK_THROWS_AS(make_datum(line, "constant"), ConfigError);
}
