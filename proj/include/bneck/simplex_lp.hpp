#pragma once

#include <Eigen/Dense>

namespace bneck {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

const char* to_string(LpStatus status);

struct LpOptions {
  /// Feasibility and optimality tolerance (scaled by the data magnitude).
  double tolerance = 1e-9;
  /// 0 selects 50 * (rows + columns).
  int max_iterations = 0;
};

struct LpResult {
  LpStatus status = LpStatus::kIterationLimit;
  Eigen::VectorXd x;
  double objective = 0.0;
  int iterations = 0;
  /// Sum of artificial variables at the end of phase one.
  double infeasibility = 0.0;
};

/// Two-phase revised simplex for: minimize c^T x subject to A x = b, x >= 0.
///
/// Phase one starts from an all-artificial basis; pricing is Dantzig's rule and
/// falls back to Bland's rule after a run of degenerate pivots, which rules out
/// cycling. The basis is small (rows of A), so its inverse is kept densely and
/// refactored periodically.
LpResult solve_lp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                  const LpOptions& options = {});

}  // namespace bneck
