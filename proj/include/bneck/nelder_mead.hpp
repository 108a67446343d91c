#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace bneck {

struct NelderMeadOptions {
  double initial_scale = 0.1;
  int max_evaluations = 200;  ///< per run; each restart gets a fresh budget
  int restarts = 3;
  double restart_shrink = 0.5;
  double value_tolerance = 1e-10;
  double simplex_tolerance = 1e-8;
};

struct NelderMeadEvaluation {
  Eigen::VectorXd x;
  double value = 0.0;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
  int runs = 0;
  std::vector<NelderMeadEvaluation> history;
};

/// Minimizes f from x0; later runs restart around the best point with a
/// simplex shrunk by restart_shrink. Non-finite values count as +inf.
/// The result is never worse than f(x0).
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x0,
                             const NelderMeadOptions& options = {});

}  // namespace bneck
