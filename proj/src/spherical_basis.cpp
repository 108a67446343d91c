#include "bneck/spherical_basis.hpp"

#include <cmath>
#include <stdexcept>

namespace bneck {

SphericalBasis::SphericalBasis(SphereRule rule, int max_degree) : rule_(std::move(rule)), max_degree_(max_degree) {
  if (max_degree < 0) throw std::invalid_argument("SphericalBasis: negative degree cutoff");
  if (rule_.ambient_dim >= 2 && rule_.exact_degree < 2 * max_degree)
    throw std::invalid_argument("SphericalBasis: quadrature rule not exact to twice the degree cutoff");
  const int a = rule_.ambient_dim;
  monomials_ = monomials_up_to(a, max_degree);
  const auto nodes = static_cast<Eigen::Index>(rule_.size());
  const auto nmono = static_cast<Eigen::Index>(monomials_.size());

  Eigen::MatrixXd mono_values(nodes, nmono);
  for (Eigen::Index i = 0; i < nodes; ++i)
    for (Eigen::Index k = 0; k < nmono; ++k)
      mono_values(i, k) = monomials_[static_cast<std::size_t>(k)].eval(rule_.nodes[static_cast<std::size_t>(i)]);
  Eigen::VectorXd w(nodes);
  for (Eigen::Index i = 0; i < nodes; ++i) w[i] = rule_.weights[static_cast<std::size_t>(i)];

  // Modified Gram-Schmidt in the weighted inner product, applied twice.
  std::vector<Eigen::VectorXd> kept_values;
  std::vector<Eigen::VectorXd> kept_coeffs;
  for (Eigen::Index k = 0; k < nmono; ++k) {
    Eigen::VectorXd v = mono_values.col(k);
    Eigen::VectorXd c = Eigen::VectorXd::Unit(nmono, k);
    const double start = std::sqrt(v.cwiseProduct(w).dot(v));
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < kept_values.size(); ++j) {
        const double proj = kept_values[j].cwiseProduct(w).dot(v);
        v -= proj * kept_values[j];
        c -= proj * kept_coeffs[j];
      }
    }
    const double norm = std::sqrt(v.cwiseProduct(w).dot(v));
    if (norm <= 1e-10 * std::max(1.0, start)) continue;
    kept_values.push_back(v / norm);
    kept_coeffs.push_back(c / norm);
    degrees_.push_back(monomials_[static_cast<std::size_t>(k)].degree());
  }

  const auto size = static_cast<Eigen::Index>(kept_values.size());
  transform_.resize(size, nmono);
  node_values_.resize(nodes, size);
  for (Eigen::Index j = 0; j < size; ++j) {
    transform_.row(j) = kept_coeffs[static_cast<std::size_t>(j)].transpose();
    node_values_.col(j) = kept_values[static_cast<std::size_t>(j)];
  }
  node_gradients_.reserve(rule_.size());
  for (const auto& x : rule_.nodes) node_gradients_.push_back(gradient(x));
}

std::shared_ptr<const SphericalBasis> SphericalBasis::make_default(int a, int max_degree) {
  SphereRule rule = neck_sphere_rule(a);
  if (a >= 2 && rule.exact_degree < 2 * max_degree)
    throw std::invalid_argument("SphericalBasis::make_default: degree cutoff too high for the default rule");
  return std::make_shared<const SphericalBasis>(std::move(rule), max_degree);
}

Eigen::VectorXd SphericalBasis::eval(const Eigen::VectorXd& x) const {
  Eigen::VectorXd m(static_cast<Eigen::Index>(monomials_.size()));
  for (std::size_t k = 0; k < monomials_.size(); ++k) m[static_cast<Eigen::Index>(k)] = monomials_[k].eval(x);
  return transform_ * m;
}

Eigen::MatrixXd SphericalBasis::gradient(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd g(static_cast<Eigen::Index>(monomials_.size()), x.size());
  for (std::size_t k = 0; k < monomials_.size(); ++k) g.row(static_cast<Eigen::Index>(k)) = monomials_[k].gradient(x).transpose();
  return transform_ * g;
}

SphereRule neck_sphere_rule(int a, int level) {
  if (level < 0 || level > 3) throw std::invalid_argument("neck_sphere_rule: level must be 0..3");
  const int scale = 1 << level;
  switch (a) {
    case 1: return point_pair_rule();
    case 2: return circle_rule(64 * scale);
    case 3: return sphere2_rule(8 * scale, 16 * scale);
    case 4: return sphere3_rule(3 * scale, 10 * scale);
    default: throw std::invalid_argument("neck_sphere_rule: a must be 1..4");
  }
}

}  // namespace bneck
