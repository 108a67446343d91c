#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace bneck {

/// Raised for operations that need a smooth, strictly convex body.
class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised when a perturbed gauge fails the convexity gate.
class NotConvexError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class BodyKind { kPolytope, kEllipsoid, kLpBall, kPerturbed, kNumericPolar };

enum class ConvexityGate { kEnforce, kSkip };

/// Centrally symmetric convex body in R^n, represented by its gauge
/// gamma(x) = min{t >= 0 : x in tK}. Immutable and cheap to copy.
///
/// Variants:
///   Polytope      vertex form conv(+-v_i) or facet form {|<a_i, x>| <= 1}
///   Ellipsoid     {x^T A x <= 1}
///   LpBall        {sum |x_i / r_i|^p <= 1}, 1 < p < inf
///   Perturbed     gamma = gamma_base * (1 + eps * h(x/|x|)), h an even quartic form
///   NumericPolar  polar of a Perturbed body, gauge by convex conjugation
class Body {
 public:
  static Body cube(int n);
  static Body cross_polytope(int n);
  static Body polytope_from_vertices(const Eigen::MatrixXd& rows);
  static Body polytope_from_facets(const Eigen::MatrixXd& rows);
  static Body ball(int n);
  static Body ellipsoid(const Eigen::MatrixXd& a);
  static Body lp_ball(double p, int n);
  static Body lp_ball(double p, const Eigen::VectorXd& radii);
  /// h(x) = sum_j c_j m_j(x) / |x|^4 over the degree-4 monomials m_j (see
  /// perturbation_basis_size). The gate runs random midpoint convexity tests.
  static Body perturbed(const Body& base, double amplitude, const Eigen::VectorXd& coefficients,
                        ConvexityGate gate = ConvexityGate::kEnforce);
  /// Number of degree-4 monomials in n variables; restricted to the sphere they
  /// span the even spherical harmonics of degree 0, 2 and 4.
  static int perturbation_basis_size(int n);

  int dim() const;
  BodyKind kind() const;
  bool smooth() const;
  std::string name() const;

  double gauge(const Eigen::VectorXd& x) const;
  /// Support function h_K(y) = max_{x in K} <x, y>, equal to the polar gauge.
  double support(const Eigen::VectorXd& y) const;
  Eigen::VectorXd gauge_gradient(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd gauge_hessian(const Eigen::VectorXd& x) const;
  bool contains(const Eigen::VectorXd& x) const { return gauge(x) <= 1.0; }

  Body polar() const;

  /// x = u / gamma(u) on the boundary and y = grad gamma(x) on the polar boundary.
  std::pair<Eigen::VectorXd, Eigen::VectorXd> boundary_normal_pair(const Eigen::VectorXd& u) const;

  /// Half-widths of the axis-aligned bounding box, h_K(e_i).
  Eigen::VectorXd half_widths() const;

  /// Lebesgue volume when a closed form is known.
  std::optional<double> exact_volume() const;

  /// Variant payloads; empty / zero where not applicable.
  const Eigen::MatrixXd& matrix() const;
  double exponent() const;
  const Eigen::VectorXd& radii() const;
  double amplitude() const;
  const Eigen::VectorXd& coefficients() const;
  /// Base of a perturbed body, or the primal of a numeric polar.
  Body base() const;

  nlohmann::json to_json() const;
  static Body from_json(const nlohmann::json& j);

  struct Impl;
  explicit Body(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

 private:
  std::shared_ptr<const Impl> impl_;
};

}  // namespace bneck
