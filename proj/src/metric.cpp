#include "bneck/metric.hpp"

#include <stdexcept>

#include "bneck/alt_tensor.hpp"

namespace bneck {

Metric::Metric(int a, int b, MetricConvention convention, Eigen::MatrixXd gram)
    : spacelike_(a), timelike_(b), convention_(convention), gram_(std::move(gram)) {}

Metric Metric::diagonal(int spacelike, int timelike) {
  if (spacelike < 0 || timelike < 0 || spacelike + timelike < 1)
    throw std::invalid_argument("Metric: need a >= 0, b >= 0, a + b >= 1");
  if (spacelike + timelike > kMaxExteriorDim) throw std::invalid_argument("Metric: dimension too large");
  Eigen::VectorXd diag(spacelike + timelike);
  diag.head(spacelike).setOnes();
  diag.tail(timelike).setConstant(-1.0);
  return Metric(spacelike, timelike, MetricConvention::kDiagonal, diag.asDiagonal());
}

Metric Metric::hyperbolic(int n) {
  if (n < 1) throw std::invalid_argument("Metric: hyperbolic form needs n >= 1");
  if (2 * n > kMaxExteriorDim) throw std::invalid_argument("Metric: dimension too large");
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    g(i, n + i) = 0.5;
    g(n + i, i) = 0.5;
  }
  return Metric(n, n, MetricConvention::kHyperbolic, std::move(g));
}

double Metric::bilinear(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
  if (u.size() != dim() || v.size() != dim()) throw std::invalid_argument("Metric::bilinear: dimension mismatch");
  if (is_diagonal()) {
    const int a = spacelike_;
    return u.head(a).dot(v.head(a)) - u.tail(timelike_).dot(v.tail(timelike_));
  }
  return u.dot(gram_ * v);
}

Eigen::MatrixXd Metric::hyperbolic_to_diagonal(int n) {
  Eigen::MatrixXd p(2 * n, 2 * n);
  const Eigen::MatrixXd half = 0.5 * Eigen::MatrixXd::Identity(n, n);
  p << half, half, half, -half;
  return p;
}

}  // namespace bneck
