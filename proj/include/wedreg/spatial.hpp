#pragma once

// Spatial model: the state space (a scalar or a Dirichlet interval
// discretized by P1 elements with mass lumping), the energy
//
//   phi(u) = 1/2 |grad u|^2 + sum_j h W(u_j),
//
// its gradient A(u) and second derivative.

#include <Eigen/Core>

#include <functional>
#include <string>
#include <string_view>

namespace wedreg {

using State = Eigen::VectorXd;
using StateRef = Eigen::Ref<const Eigen::VectorXd>;

enum class DomainKind { kScalar, kInterval };

// Either a single degree of freedom (d = 0) or the interval [-L, L] with m
// interior nodes and homogeneous Dirichlet values at +-L.
class SpatialDomain {
 public:
  static SpatialDomain scalar();
  static SpatialDomain interval(double half_length, int interior_nodes);

  DomainKind kind() const { return kind_; }
  bool is_scalar() const { return kind_ == DomainKind::kScalar; }
  int dofs() const { return dofs_; }
  double half_length() const { return half_length_; }
  // Mesh size; 1 for the scalar domain so that the inner product weight is
  // uniformly h.
  double h() const { return h_; }
  // Coordinate of interior node j (0-based). Scalar domain returns 0.
  double node(int j) const;

  double inner(const StateRef& a, const StateRef& b) const;
  double norm(const StateRef& a) const;

  bool operator==(const SpatialDomain&) const = default;

 private:
  SpatialDomain(DomainKind kind, double half_length, int dofs, double h)
      : kind_(kind), half_length_(half_length), dofs_(dofs), h_(h) {}

  DomainKind kind_;
  double half_length_;
  int dofs_;
  double h_;
};

// Convex potential W with derivative W' and second derivative W''.
//
// kPower is W(r) = |r|^p / 2, p > 2. kNone disables the potential (W = 0).
// kCustom carries user callables together with the growth exponent p and
// constant C of the bounds (1/C)|r|^p <= W(r) + C and
// |W'(r)|^{p/(p-1)} <= C (1 + |r|^p).
class Nonlinearity {
 public:
  enum class Kind { kNone, kPower, kCustom };
  using Scalar = std::function<double(double)>;

  static Nonlinearity none();
  static Nonlinearity power(double p);
  static Nonlinearity custom(std::string name, Scalar w, Scalar dw, Scalar d2w,
                             double p, double growth_constant);
  // W(r) = r^2 / 2; linear Klein-Gordon term alone.
  static Nonlinearity quadratic();
  // W(r) = r^2 / 2 + |r|^p / 2; semilinear Klein-Gordon.
  static Nonlinearity klein_gordon(double p);

  Kind kind() const { return kind_; }
  double p() const { return p_; }
  double growth_constant() const { return growth_constant_; }
  const std::string& name() const { return name_; }

  double w(double r) const;
  double dw(double r) const;
  double d2w(double r) const;

  // Checks convexity (and, for custom kinds, the growth bounds) on a probe
  // grid in [-probe_radius, probe_radius]. Throws ConfigError on failure.
  void validate(double probe_radius = 10.0, int probes = 2001) const;

 private:
  Kind kind_ = Kind::kNone;
  double p_ = 0.0;
  double growth_constant_ = 1.0;
  std::string name_ = "none";
  Scalar w_, dw_, d2w_;
};

double phi(const SpatialDomain& domain, const StateRef& u,
           const Nonlinearity& nl);

// Riesz representative of D phi(u) in the domain inner product.
State grad_phi(const SpatialDomain& domain, const StateRef& u,
               const Nonlinearity& nl);

// Riesz representative of D^2 phi(u)[v, .].
State hess_phi_apply(const SpatialDomain& domain, const StateRef& u,
                     const StateRef& v, const Nonlinearity& nl);

// Applies the Dirichlet stiffness (-Laplacian, Riesz form) only.
State stiffness_apply(const SpatialDomain& domain, const StateRef& v);

// Initial datum by name: "zero", "constant c", "bump r0 [amplitude]" with
// bump(x) = amplitude * max(0, 1 - (x/r0)^2)^2.
State make_datum(const SpatialDomain& domain, std::string_view spec);

}  // namespace wedreg
