#pragma once

#include <functional>

#include <Eigen/Dense>

namespace bneck {

struct SmoothObjective {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> hessian;
};

struct NewtonResult {
  Eigen::VectorXd x;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Damped Newton for smooth convex objectives. The Hessian is regularized by
/// eigenvalue clamping; steps are chosen by Armijo backtracking, and a step
/// that fails Armijo but halves the gradient norm is still taken (objective
/// values built on finite differences plateau before the gradient does).
NewtonResult newton_minimize(const SmoothObjective& objective, Eigen::VectorXd x0, double gradient_tol,
                             int max_iterations = 100);

}  // namespace bneck
