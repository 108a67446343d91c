#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "bneck/monomial.hpp"
#include "bneck/sphere_rule.hpp"

namespace bneck {

/// L2(S^(a-1))-orthonormal basis obtained by Gram-Schmidt on the restrictions
/// of the coordinate monomials of degree <= max_degree, taken in order of
/// increasing degree. Functions born from degree-d monomials are exactly the
/// degree-d spherical harmonics, so the degree label is a harmonic degree.
/// Dependent restrictions (x_1^2 + ... + x_a^2 = 1) are dropped.
class SphericalBasis {
 public:
  /// The rule must integrate polynomials of degree 2 * max_degree exactly.
  SphericalBasis(SphereRule rule, int max_degree);

  static std::shared_ptr<const SphericalBasis> make_default(int a, int max_degree = 4);

  int ambient_dim() const { return rule_.ambient_dim; }
  int max_degree() const { return max_degree_; }
  int size() const { return static_cast<int>(degrees_.size()); }
  int degree(int j) const { return degrees_[static_cast<std::size_t>(j)]; }
  const SphereRule& rule() const { return rule_; }

  /// Values of every basis function at an arbitrary point (ambient formula).
  Eigen::VectorXd eval(const Eigen::VectorXd& x) const;
  /// Ambient gradients, one row per basis function (size x a).
  Eigen::MatrixXd gradient(const Eigen::VectorXd& x) const;

  /// Cached tables at the rule nodes.
  const Eigen::MatrixXd& node_values() const { return node_values_; }  // nodes x size
  const Eigen::MatrixXd& node_gradient(std::size_t node) const { return node_gradients_[node]; }

  /// Monomial coefficients of the orthonormal functions (size x monomials).
  const Eigen::MatrixXd& transform() const { return transform_; }
  const std::vector<Monomial>& monomials() const { return monomials_; }

 private:
  SphereRule rule_;
  int max_degree_;
  std::vector<Monomial> monomials_;
  Eigen::MatrixXd transform_;
  std::vector<int> degrees_;
  Eigen::MatrixXd node_values_;
  std::vector<Eigen::MatrixXd> node_gradients_;
};

/// Rule used for necks over S^(a-1), exact to degree >= 8 for a >= 2.
SphereRule neck_sphere_rule(int a, int level = 1);

}  // namespace bneck
