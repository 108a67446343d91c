#include "bneck/simplex_lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace bneck {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterationLimit: return "iteration-limit";
  }
  return "unknown";
}

namespace {

constexpr int kRefactorPeriod = 64;
constexpr double kPivotTol = 1e-11;

// Columns 0..n-1 are the structural variables; n..n+m-1 are artificials whose
// column i is sign_i * e_i, so the starting basis is feasible for any b.
class Tableau {
 public:
  Tableau(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double tol, int max_iter)
      : a_(a), b_(b), m_(a.rows()), n_(a.cols()), tol_(tol), max_iter_(max_iter) {
    sign_.resize(m_);
    for (Eigen::Index i = 0; i < m_; ++i) sign_[i] = b_[i] < 0 ? -1.0 : 1.0;
    basis_.resize(static_cast<std::size_t>(m_));
    is_basic_.assign(static_cast<std::size_t>(n_ + m_), 0);
    for (Eigen::Index i = 0; i < m_; ++i) {
      basis_[static_cast<std::size_t>(i)] = n_ + i;
      is_basic_[static_cast<std::size_t>(n_ + i)] = 1;
    }
    binv_ = sign_.asDiagonal();
    xb_ = b_.cwiseAbs();
  }

  Eigen::VectorXd column(Eigen::Index j) const {
    if (j < n_) return a_.col(j);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(m_);
    e[j - n_] = sign_[j - n_];
    return e;
  }

  void refactor() {
    Eigen::MatrixXd basis_matrix(m_, m_);
    for (Eigen::Index i = 0; i < m_; ++i) basis_matrix.col(i) = column(basis_[static_cast<std::size_t>(i)]);
    binv_ = basis_matrix.partialPivLu().inverse();
    xb_ = binv_ * b_;
    for (Eigen::Index i = 0; i < m_; ++i)
      if (xb_[i] < 0 && xb_[i] > -tol_) xb_[i] = 0.0;
  }

  void pivot(Eigen::Index row, Eigen::Index entering, const Eigen::VectorXd& u, double theta) {
    xb_ -= theta * u;
    xb_[row] = theta;
    const Eigen::RowVectorXd pivot_row = binv_.row(row) / u[row];
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (i == row) continue;
      if (u[i] != 0.0) binv_.row(i) -= u[i] * pivot_row;
    }
    binv_.row(row) = pivot_row;
    is_basic_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(row)])] = 0;
    basis_[static_cast<std::size_t>(row)] = entering;
    is_basic_[static_cast<std::size_t>(entering)] = 1;
  }

  // Minimizes cost over the current basis. Returns the terminal status.
  LpStatus run(const Eigen::VectorXd& cost, bool artificials_may_enter) {
    const double dtol = tol_ * std::max(1.0, cost.cwiseAbs().maxCoeff());
    bool bland = false;
    int degenerate_run = 0;
    int since_refactor = 0;
    while (true) {
      if (iterations_ >= max_iter_) return LpStatus::kIterationLimit;
      if (since_refactor >= kRefactorPeriod) {
        refactor();
        since_refactor = 0;
      }
      Eigen::VectorXd cb(m_);
      for (Eigen::Index i = 0; i < m_; ++i) cb[i] = cost[basis_[static_cast<std::size_t>(i)]];
      const Eigen::VectorXd pi = binv_.transpose() * cb;
      const Eigen::VectorXd d = cost.head(n_) - a_.transpose() * pi;

      Eigen::Index entering = -1;
      double best = -dtol;
      for (Eigen::Index j = 0; j < n_; ++j) {
        if (is_basic_[static_cast<std::size_t>(j)] || d[j] >= best) continue;
        entering = j;
        if (bland) break;
        best = d[j];
      }
      if (artificials_may_enter && (entering < 0 || !bland)) {
        for (Eigen::Index i = 0; i < m_; ++i) {
          const Eigen::Index j = n_ + i;
          const double dj = cost[j] - sign_[i] * pi[i];
          if (is_basic_[static_cast<std::size_t>(j)] || dj >= best) continue;
          entering = j;
          best = dj;
          if (bland) break;
        }
      }
      if (entering < 0) return LpStatus::kOptimal;

      const Eigen::VectorXd u = binv_ * column(entering);
      Eigen::Index leave = -1;
      double theta = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (u[i] <= kPivotTol) continue;
        const double r = std::max(xb_[i], 0.0) / u[i];
        const bool tie = leave >= 0 && std::abs(r - theta) <= 1e-12 * std::max(1.0, theta);
        bool take = r < theta && !tie;
        if (tie) {
          take = bland ? basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)] : u[i] > u[leave];
        }
        if (take) {
          leave = i;
          theta = std::min(theta, r);
        }
      }
      if (leave < 0) return LpStatus::kUnbounded;

      if (theta <= tol_) {
        if (++degenerate_run > 2 * static_cast<int>(m_)) bland = true;
      } else {
        degenerate_run = 0;
      }
      pivot(leave, entering, u, theta);
      ++iterations_;
      ++since_refactor;
    }
  }

  // Pivots zero-level artificials out of the basis where a structural column allows.
  void drive_out_artificials() {
    for (Eigen::Index r = 0; r < m_; ++r) {
      if (basis_[static_cast<std::size_t>(r)] < n_) continue;
      const Eigen::RowVectorXd row = binv_.row(r) * a_;
      Eigen::Index best = -1;
      double mag = 1e-9;
      for (Eigen::Index j = 0; j < n_; ++j) {
        if (is_basic_[static_cast<std::size_t>(j)]) continue;
        if (std::abs(row[j]) > mag) {
          mag = std::abs(row[j]);
          best = j;
        }
      }
      if (best < 0) continue;
      const Eigen::VectorXd u = binv_ * column(best);
      pivot(r, best, u, 0.0);
    }
    refactor();
  }

  double artificial_sum() const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < m_; ++i)
      if (basis_[static_cast<std::size_t>(i)] >= n_) s += std::abs(xb_[i]);
    return s;
  }

  Eigen::VectorXd solution() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
    for (Eigen::Index i = 0; i < m_; ++i) {
      const Eigen::Index j = basis_[static_cast<std::size_t>(i)];
      if (j < n_) x[j] = std::max(xb_[i], 0.0);
    }
    return x;
  }

  int iterations() const { return iterations_; }

 private:
  const Eigen::MatrixXd& a_;
  const Eigen::VectorXd& b_;
  Eigen::Index m_, n_;
  double tol_;
  int max_iter_;
  Eigen::VectorXd sign_;
  std::vector<Eigen::Index> basis_;
  std::vector<char> is_basic_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd xb_;
  int iterations_ = 0;
};

}  // namespace

LpResult solve_lp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                  const LpOptions& options) {
  if (a.rows() != b.size() || a.cols() != c.size()) throw std::invalid_argument("solve_lp: dimension mismatch");
  if (a.rows() == 0) throw std::invalid_argument("solve_lp: no constraints");
  const int max_iter = options.max_iterations > 0 ? options.max_iterations : 50 * static_cast<int>(a.rows() + a.cols());
  Tableau t(a, b, options.tolerance, max_iter);

  LpResult res;
  const Eigen::Index m = a.rows(), n = a.cols();
  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n + m);
  phase1.tail(m).setOnes();
  res.status = t.run(phase1, true);
  res.iterations = t.iterations();
  if (res.status == LpStatus::kIterationLimit) return res;
  res.infeasibility = t.artificial_sum();
  const double feas_tol = options.tolerance * std::max(1.0, b.cwiseAbs().maxCoeff());
  if (res.infeasibility > feas_tol) {
    res.status = LpStatus::kInfeasible;
    return res;
  }
  t.drive_out_artificials();

  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(n + m);
  phase2.head(n) = c;
  res.status = t.run(phase2, false);
  res.iterations = t.iterations();
  res.x = t.solution();
  res.objective = c.dot(res.x);
  return res;
}

}  // namespace bneck
