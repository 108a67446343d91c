#include "bneck/newton.hpp"

#include <algorithm>
#include <cmath>

namespace bneck {

NewtonResult newton_minimize(const SmoothObjective& objective, Eigen::VectorXd x0, double gradient_tol,
                             int max_iterations) {
  NewtonResult res;
  res.x = std::move(x0);
  double f = objective.value(res.x);
  Eigen::VectorXd g = objective.gradient(res.x);
  for (int it = 0; it < max_iterations; ++it) {
    res.gradient_norm = g.norm();
    res.iterations = it;
    if (res.gradient_norm <= gradient_tol) {
      res.converged = true;
      return res;
    }
    Eigen::MatrixXd h = objective.hessian(res.x);
    h = 0.5 * (h + h.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    Eigen::VectorXd ev = es.eigenvalues();
    const double floor = 1e-10 * std::max(1.0, ev.cwiseAbs().maxCoeff());
    ev = ev.cwiseMax(floor);
    Eigen::VectorXd d = -es.eigenvectors() * (es.eigenvectors().transpose() * g).cwiseQuotient(ev);
    double slope = g.dot(d);
    if (!(slope < 0)) {
      d = -g;
      slope = -g.squaredNorm();
    }
    bool moved = false;
    for (double alpha = 1.0; alpha > 1e-12; alpha *= 0.5) {
      Eigen::VectorXd xn = res.x + alpha * d;
      const double fn = objective.value(xn);
      if (!std::isfinite(fn)) continue;
      Eigen::VectorXd gn = objective.gradient(xn);
      if (fn <= f + 1e-4 * alpha * slope || gn.norm() <= 0.5 * res.gradient_norm) {
        res.x = std::move(xn);
        f = fn;
        g = std::move(gn);
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  res.gradient_norm = g.norm();
  res.converged = res.gradient_norm <= gradient_tol;
  return res;
}

}  // namespace bneck
