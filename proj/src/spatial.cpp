#include "wedreg/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "wedreg/errors.hpp"

namespace wedreg {

SpatialDomain SpatialDomain::scalar() {
  return SpatialDomain(DomainKind::kScalar, 0.0, 1, 1.0);
}

SpatialDomain SpatialDomain::interval(double half_length, int interior_nodes) {
  if (!(half_length > 0.0) || !std::isfinite(half_length)) {
    throw ConfigError("interval half length must be positive");
  }
  if (interior_nodes < 1) {
    throw ConfigError("interval needs at least one interior node");
  }
  const double h = 2.0 * half_length / (interior_nodes + 1);
  return SpatialDomain(DomainKind::kInterval, half_length, interior_nodes, h);
}

double SpatialDomain::node(int j) const {
  if (is_scalar()) return 0.0;
  return -half_length_ + (j + 1) * h_;
}

double SpatialDomain::inner(const StateRef& a, const StateRef& b) const {
  if (a.size() != dofs_ || b.size() != dofs_) {
    throw DimensionError("state size does not match the domain");
  }
  return h_ * a.dot(b);
}

double SpatialDomain::norm(const StateRef& a) const {
  return std::sqrt(inner(a, a));
}

Nonlinearity Nonlinearity::none() { return Nonlinearity{}; }

Nonlinearity Nonlinearity::power(double p) {
  if (!(p > 2.0) || !std::isfinite(p)) {
    throw ConfigError("power nonlinearity needs p > 2");
  }
  Nonlinearity nl;
  nl.kind_ = Kind::kPower;
  nl.p_ = p;
  nl.growth_constant_ = 2.0;
  std::ostringstream os;
  os << "power(" << p << ")";
  nl.name_ = os.str();
  return nl;
}

Nonlinearity Nonlinearity::custom(std::string name, Scalar w, Scalar dw,
                                  Scalar d2w, double p,
                                  double growth_constant) {
  if (!w || !dw || !d2w) {
    throw ConfigError("custom nonlinearity needs W, W' and W''");
  }
  if (!(p > 1.0) || !(growth_constant > 0.0)) {
    throw ConfigError("custom nonlinearity needs p > 1 and C > 0");
  }
  Nonlinearity nl;
  nl.kind_ = Kind::kCustom;
  nl.p_ = p;
  nl.growth_constant_ = growth_constant;
  nl.name_ = std::move(name);
  nl.w_ = std::move(w);
  nl.dw_ = std::move(dw);
  nl.d2w_ = std::move(d2w);
  return nl;
}

Nonlinearity Nonlinearity::quadratic() {
  return custom(
      "quadratic", [](double r) { return 0.5 * r * r; },
      [](double r) { return r; }, [](double) { return 1.0; }, 2.0, 2.0);
}

Nonlinearity Nonlinearity::klein_gordon(double p) {
  if (!(p > 2.0)) throw ConfigError("klein-gordon potential needs p > 2");
  auto w = [p](double r) { return 0.5 * r * r + 0.5 * std::pow(std::abs(r), p); };
  auto dw = [p](double r) {
    return r + 0.5 * p * std::pow(std::abs(r), p - 2.0) * r;
  };
  auto d2w = [p](double r) {
    return 1.0 + 0.5 * p * (p - 1.0) * std::pow(std::abs(r), p - 2.0);
  };
  std::ostringstream os;
  os << "klein-gordon(" << p << ")";
  return custom(os.str(), w, dw, d2w, p, 4.0);
}

double Nonlinearity::w(double r) const {
  switch (kind_) {
    case Kind::kNone:
      return 0.0;
    case Kind::kPower:
      return 0.5 * std::pow(std::abs(r), p_);
    case Kind::kCustom:
      return w_(r);
  }
  return 0.0;
}

double Nonlinearity::dw(double r) const {
  switch (kind_) {
    case Kind::kNone:
      return 0.0;
    case Kind::kPower:
      return 0.5 * p_ * std::pow(std::abs(r), p_ - 2.0) * r;
    case Kind::kCustom:
      return dw_(r);
  }
  return 0.0;
}

double Nonlinearity::d2w(double r) const {
  switch (kind_) {
    case Kind::kNone:
      return 0.0;
    case Kind::kPower:
      // For 2 < p < 3 the limit value W''(0) = 0 is what pow returns.
      return 0.5 * p_ * (p_ - 1.0) * std::pow(std::abs(r), p_ - 2.0);
    case Kind::kCustom:
      return d2w_(r);
  }
  return 0.0;
}

void Nonlinearity::validate(double probe_radius, int probes) const {
  if (kind_ == Kind::kNone) return;
  std::vector<std::string> problems;
  const double pp = p_ / (p_ - 1.0);
  const double c = growth_constant_;
  for (int k = 0; k < probes; ++k) {
    const double r = -probe_radius + 2.0 * probe_radius * k / (probes - 1);
    const double wr = w(r), dwr = dw(r), d2wr = d2w(r);
    if (!std::isfinite(wr) || !std::isfinite(dwr) || !std::isfinite(d2wr)) {
      problems.push_back("non-finite potential value");
      break;
    }
    if (d2wr < 0.0) {
      problems.push_back("W'' < 0 (potential not convex)");
      break;
    }
    if (kind_ == Kind::kCustom) {
      const double rp = std::pow(std::abs(r), p_);
      if (rp / c > wr + c) {
        problems.push_back("lower growth bound (1/C)|r|^p <= W(r) + C fails");
        break;
      }
      if (std::pow(std::abs(dwr), pp) > c * (1.0 + rp) * (1.0 + 1e-12)) {
        problems.push_back("upper growth bound |W'|^p' <= C(1+|r|^p) fails");
        break;
      }
    }
  }
  if (!problems.empty()) {
    std::string msg = "nonlinearity " + name_ + ":";
    for (const auto& p : problems) msg += " " + p;
    throw ConfigError(msg);
  }
}

namespace {

void check_size(const SpatialDomain& domain, const StateRef& u) {
  if (u.size() != domain.dofs()) {
    throw DimensionError("state size does not match the domain");
  }
}

}  // namespace

double phi(const SpatialDomain& domain, const StateRef& u,
           const Nonlinearity& nl) {
  check_size(domain, u);
  if (domain.is_scalar()) return nl.w(u[0]);
  const double h = domain.h();
  const int m = domain.dofs();
  double grad = 0.0;
  double prev = 0.0;
  for (int j = 0; j <= m; ++j) {
    const double next = j < m ? u[j] : 0.0;
    const double slope = (next - prev) / h;
    grad += h * slope * slope;
    prev = next;
  }
  double pot = 0.0;
  for (int j = 0; j < m; ++j) pot += nl.w(u[j]);
  return 0.5 * grad + h * pot;
}

State stiffness_apply(const SpatialDomain& domain, const StateRef& v) {
  check_size(domain, v);
  State out = State::Zero(domain.dofs());
  if (domain.is_scalar()) return out;
  const int m = domain.dofs();
  const double inv_h2 = 1.0 / (domain.h() * domain.h());
  for (int j = 0; j < m; ++j) {
    const double left = j > 0 ? v[j - 1] : 0.0;
    const double right = j + 1 < m ? v[j + 1] : 0.0;
    out[j] = (2.0 * v[j] - left - right) * inv_h2;
  }
  return out;
}

State grad_phi(const SpatialDomain& domain, const StateRef& u,
               const Nonlinearity& nl) {
  State g = stiffness_apply(domain, u);
  for (int j = 0; j < g.size(); ++j) g[j] += nl.dw(u[j]);
  return g;
}

State hess_phi_apply(const SpatialDomain& domain, const StateRef& u,
                     const StateRef& v, const Nonlinearity& nl) {
  check_size(domain, u);
  State out = stiffness_apply(domain, v);
  for (int j = 0; j < out.size(); ++j) out[j] += nl.d2w(u[j]) * v[j];
  return out;
}

State make_datum(const SpatialDomain& domain, std::string_view spec) {
  std::istringstream in{std::string(spec)};
  std::string name;
  in >> name;
  State u = State::Zero(domain.dofs());
  if (name == "zero") {
    std::string extra;
    if (in >> extra) throw ConfigError("datum 'zero' takes no arguments");
    return u;
  }
  if (name == "constant") {
    double c = 0.0;
    if (!(in >> c) || !std::isfinite(c)) {
      throw ConfigError("datum 'constant' needs a finite value");
    }
    u.setConstant(c);
    return u;
  }
  if (name == "bump") {
    double radius = 1.0;
    double amplitude = 1.0;
    if (!(in >> radius) || !(radius > 0.0)) {
      throw ConfigError("datum 'bump' needs a positive radius");
    }
    if (!(in >> amplitude)) amplitude = 1.0;
    for (int j = 0; j < domain.dofs(); ++j) {
      const double s = domain.node(j) / radius;
      const double b = std::max(0.0, 1.0 - s * s);
      u[j] = amplitude * b * b;
    }
    return u;
  }
  throw ConfigError("unknown datum '" + std::string(spec) +
                    "' (expected zero | constant c | bump r0 [amp])");
}

}  // namespace wedreg
