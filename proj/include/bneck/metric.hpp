#pragma once

#include <Eigen/Dense>

namespace bneck {

enum class MetricConvention {
  kDiagonal,    ///< orthonormal basis, +1 on the first a vectors and -1 on the last b
  kHyperbolic,  ///< W = V x V*, coordinates (x, y) with Q(x, y) = <x, y>
};

/// Non-degenerate symmetric bilinear form of signature (a, b).
///
/// The hyperbolic convention pairs V with V*: B((x1,y1),(x2,y2)) =
/// (<x1,y2> + <x2,y1>)/2, so that Q(x,y) = <x,y> and both V and V* are
/// isotropic. It always has a = b = n.
class Metric {
 public:
  static Metric diagonal(int spacelike, int timelike);
  static Metric hyperbolic(int n);

  int spacelike() const { return spacelike_; }
  int timelike() const { return timelike_; }
  int dim() const { return spacelike_ + timelike_; }
  MetricConvention convention() const { return convention_; }
  bool is_diagonal() const { return convention_ == MetricConvention::kDiagonal; }

  const Eigen::MatrixXd& gram() const { return gram_; }
  double bilinear(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;
  double quadratic(const Eigen::VectorXd& v) const { return bilinear(v, v); }

  /// Matrix P with Q_hyperbolic(v) = Q_diagonal(P v) for the diagonal (n, n) metric:
  /// the spacelike coordinates are (x+y)/2 and the timelike ones (x-y)/2.
  static Eigen::MatrixXd hyperbolic_to_diagonal(int n);

 private:
  Metric(int a, int b, MetricConvention convention, Eigen::MatrixXd gram);

  int spacelike_;
  int timelike_;
  MetricConvention convention_;
  Eigen::MatrixXd gram_;
};

}  // namespace bneck
