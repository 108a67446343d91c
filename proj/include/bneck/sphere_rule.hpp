#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bneck {

/// Quadrature on the unit sphere S^(n-1) in R^n. Every node carries a
/// positively oriented orthonormal tangent frame: det[u, t_1, ..., t_(n-1)] = +1.
/// On S^0 the frame is empty and the boundary orientation of [-1, 1] is kept in
/// `orientation` (+1 at u = 1, -1 at u = -1); elsewhere orientation is +1.
struct SphereRule {
  int ambient_dim = 0;
  std::vector<Eigen::VectorXd> nodes;
  std::vector<double> weights;
  std::vector<std::vector<Eigen::VectorXd>> frames;
  std::vector<int> orientation;
  /// Polynomials in the ambient coordinates up to this degree integrate exactly.
  int exact_degree = 0;
  /// Node counts along each product factor; used to build refinements.
  std::vector<int> counts;

  std::size_t size() const { return nodes.size(); }
  double total_weight() const;
  std::string describe() const;
};

/// Surface area of S^(n-1).
double sphere_area(int ambient_dim);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights);

/// Positively oriented orthonormal basis of the tangent space at unit u.
std::vector<Eigen::VectorXd> tangent_frame(const Eigen::VectorXd& u);

SphereRule point_pair_rule();
/// Uniform angles 2*pi*(k + 1/2)/count with equal weights; trapezoid rule.
SphereRule circle_rule(int count);
/// Gauss-Legendre in cos(theta) times a uniform half-offset grid in phi.
SphereRule sphere2_rule(int polar_count, int azimuth_count);
/// Hopf coordinates u = (cos(eta) e^(i xi1), sin(eta) e^(i xi2)); Gauss-Legendre
/// in t = sin^2(eta) with measure dt dxi1 dxi2 / 2, uniform grids in xi1, xi2.
SphereRule sphere3_rule(int t_count, int angle_count);

/// level 0 is coarse, 1 the default, 2 fine; n=1..4 supported.
SphereRule default_sphere_rule(int ambient_dim, int level = 1);
/// Same construction with every node count doubled.
SphereRule refined_rule(const SphereRule& rule);

/// Quasi-uniform point set of roughly `count` points (not a quadrature):
/// uniform circle grid for n=2, Fibonacci lattice for n=3.
std::vector<Eigen::VectorXd> sphere_point_set(int ambient_dim, int count);

/// sphere_point_set with tangent frames and equal weights summing to the area.
SphereRule point_set_rule(int ambient_dim, int count);

}  // namespace bneck
