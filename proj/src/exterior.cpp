#include "bneck/exterior.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace bneck {
namespace {

SubsetMask timelike_mask(const Metric& metric) {
  return ((SubsetMask{1} << metric.dim()) - 1) & ~((SubsetMask{1} << metric.spacelike()) - 1);
}

void require_metric_dim(const AltTensor& w, const Metric& metric, const char* what) {
  if (w.dim() != metric.dim()) throw std::invalid_argument(std::string(what) + ": tensor and metric dimensions differ");
}

std::vector<SubsetMask> row_supports(const Eigen::MatrixXd& g) {
  std::vector<SubsetMask> support(static_cast<std::size_t>(g.rows()), 0);
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j)
      if (g(i, j) != 0.0) support[static_cast<std::size_t>(i)] |= SubsetMask{1} << j;
  return support;
}

bool may_pair(SubsetMask rows, SubsetMask cols, const std::vector<SubsetMask>& support) {
  SubsetMask m = rows;
  while (m) {
    if (!(support[static_cast<std::size_t>(std::countr_zero(m))] & cols)) return false;
    m &= m - 1;
  }
  m = cols;
  while (m) {
    if (!(support[static_cast<std::size_t>(std::countr_zero(m))] & rows)) return false;
    m &= m - 1;
  }
  return true;
}

double minor_det(const Eigen::MatrixXd& g, SubsetMask rows, SubsetMask cols, int k) {
  Eigen::MatrixXd sub(k, k);
  SubsetMask r = rows;
  for (int a = 0; a < k; ++a) {
    const int i = std::countr_zero(r);
    r &= r - 1;
    SubsetMask c = cols;
    for (int b = 0; b < k; ++b) {
      sub(a, b) = g(i, std::countr_zero(c));
      c &= c - 1;
    }
  }
  return k == 0 ? 1.0 : sub.determinant();
}

}  // namespace

double inner(const AltTensor& lhs, const AltTensor& rhs, const Metric& metric) {
  require_metric_dim(lhs, metric, "inner");
  if (lhs.dim() != rhs.dim() || lhs.degree() != rhs.degree())
    throw std::invalid_argument("inner: degree mismatch");
  const int k = lhs.degree();
  if (metric.is_diagonal()) {
    const SubsetMask tmask = timelike_mask(metric);
    double sum = 0.0;
    for (std::size_t r = 0; r < lhs.size(); ++r) {
      const double s = (std::popcount(lhs.subset(r) & tmask) % 2) ? -1.0 : 1.0;
      sum += s * lhs[r] * rhs[r];
    }
    return sum;
  }
  const auto support = row_supports(metric.gram());
  double sum = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if (lhs[i] == 0.0) continue;
    for (std::size_t j = 0; j < rhs.size(); ++j) {
      if (rhs[j] == 0.0) continue;
      if (!may_pair(lhs.subset(i), rhs.subset(j), support)) continue;
      sum += lhs[i] * rhs[j] * minor_det(metric.gram(), lhs.subset(i), rhs.subset(j), k);
    }
  }
  return sum;
}

double energy(const AltTensor& w, const Metric& metric) { return inner(w, w, metric); }

Eigen::MatrixXd exterior_gram(const Metric& metric, int degree) {
  const auto table = SubsetTable::get(metric.dim(), degree);
  const auto n = static_cast<Eigen::Index>(table->size());
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  const auto support = row_supports(metric.gram());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const SubsetMask mi = table->mask(static_cast<std::size_t>(i));
      const SubsetMask mj = table->mask(static_cast<std::size_t>(j));
      if (may_pair(mi, mj, support)) g(i, j) = minor_det(metric.gram(), mi, mj, degree);
    }
  }
  return g;
}

AltTensor hodge_star(const AltTensor& w, const Metric& metric) {
  require_metric_dim(w, metric, "hodge_star");
  if (!metric.is_diagonal()) throw std::invalid_argument("hodge_star: requires the diagonal convention");
  const int dim = metric.dim();
  const SubsetMask all = (SubsetMask{1} << dim) - 1;
  const SubsetMask tmask = timelike_mask(metric);
  AltTensor out(dim, dim - w.degree());
  for (std::size_t r = 0; r < w.size(); ++r) {
    if (w[r] == 0.0) continue;
    const SubsetMask m = w.subset(r);
    const SubsetMask comp = all & ~m;
    const int norm_sign = (std::popcount(m & tmask) % 2) ? -1 : 1;
    out.coeff(comp) += norm_sign * shuffle_sign(m, comp) * w[r];
  }
  return out;
}

AltTensor sigma_reflect(const AltTensor& w, const Metric& metric) {
  require_metric_dim(w, metric, "sigma_reflect");
  if (metric.convention() != MetricConvention::kHyperbolic)
    throw std::invalid_argument("sigma_reflect: requires the hyperbolic convention on V x V*");
  const SubsetMask vmask = (SubsetMask{1} << metric.spacelike()) - 1;
  AltTensor out = w;
  for (std::size_t r = 0; r < out.size(); ++r)
    if (std::popcount(out.subset(r) & vmask) % 2) out[r] = -out[r];
  return out;
}

double metric_volume_reading(const AltTensor& top, const Metric& metric) {
  require_metric_dim(top, metric, "metric_volume_reading");
  if (top.degree() != metric.dim()) throw std::invalid_argument("metric_volume_reading: needs a top-degree tensor");
  if (metric.is_diagonal()) return top[0];
  return top[0] * std::pow(-0.5, metric.spacelike());
}

SignatureReport energy_form_signature(int degree, int n) {
  if (n < 1 || degree < 0 || degree > 2 * n) throw std::invalid_argument("energy_form_signature: need 0 <= k <= 2n");
  SignatureReport rep;
  rep.degree = degree;
  rep.n = n;
  const Eigen::MatrixXd g = exterior_gram(Metric::hyperbolic(n), degree);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("energy_form_signature: eigen-solver failed");
  const Eigen::VectorXd& ev = solver.eigenvalues();
  const double radius = ev.cwiseAbs().maxCoeff();
  const double zero_thr = 1e-8 * radius;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double x = ev[i];
    if (std::abs(x) <= zero_thr) {
      ++rep.zeros;
    } else {
      if (std::abs(x) <= 1e-4 * radius) ++rep.ambiguous;
      (x > 0 ? rep.positives : rep.negatives) += 1;
    }
  }
  const int total = static_cast<int>(binomial(2 * n, degree));
  int signed_part = 0;
  if (degree % 2 == 0) signed_part = static_cast<int>(binomial(n, degree / 2));
  rep.formula_positives = (total + signed_part) / 2;
  rep.formula_negatives = (total - signed_part) / 2;
  return rep;
}

SimpleFactorization factor_simple(const AltTensor& w, double tol) {
  SimpleFactorization out;
  const int dim = w.dim();
  const int k = w.degree();
  const double scale = w.norm();
  if (k < 1 || scale == 0.0) return out;
  Eigen::MatrixXd kernel;
  if (k == dim) {
    kernel = Eigen::MatrixXd::Identity(dim, dim);
  } else {
    const auto rows = static_cast<Eigen::Index>(binomial(dim, k + 1));
    Eigen::MatrixXd action(rows, dim);
    for (int i = 0; i < dim; ++i) action.col(i) = wedge(AltTensor::monomial(dim, {i}), w).components();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(action, Eigen::ComputeFullV);
    const Eigen::VectorXd& s = svd.singularValues();
    int null_dim = 0;
    for (int i = 0; i < dim; ++i)
      if (i >= s.size() || s[i] <= tol * scale) ++null_dim;
    if (null_dim != k) return out;
    kernel = svd.matrixV().rightCols(k);
  }
  AltTensor basis = AltTensor::wedge_of(kernel);
  const double bb = basis.components().squaredNorm();
  if (bb == 0.0) return out;
  const double c = w.components().dot(basis.components()) / bb;
  out.residual = (w.components() - c * basis.components()).norm() / scale;
  if (out.residual > tol) return out;
  out.simple = true;
  for (int i = 0; i < k; ++i) out.factors.emplace_back(kernel.col(i));
  out.factors.front() *= c;
  return out;
}

namespace {

// +1 positive definite, -1 negative definite, 0 otherwise.
int plane_type(const SimpleFactorization& f, const Metric& metric, double tol) {
  const auto k = static_cast<Eigen::Index>(f.factors.size());
  Eigen::MatrixXd frame(metric.dim(), k);
  for (Eigen::Index i = 0; i < k; ++i) frame.col(i) = f.factors[static_cast<std::size_t>(i)].normalized();
  const Eigen::MatrixXd g = frame.transpose() * metric.gram() * frame;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double thr = tol * std::max(1.0, ev.cwiseAbs().maxCoeff());
  if (ev.minCoeff() > thr) return 1;
  if (ev.maxCoeff() < -thr) return -1;
  return 0;
}

}  // namespace

bool is_simple_spacelike(const AltTensor& w, const Metric& metric, double tol) {
  require_metric_dim(w, metric, "is_simple_spacelike");
  const auto f = factor_simple(w, tol);
  return f.simple && plane_type(f, metric, tol) == 1;
}

bool is_simple_timelike(const AltTensor& w, const Metric& metric, double tol) {
  require_metric_dim(w, metric, "is_simple_timelike");
  const auto f = factor_simple(w, tol);
  return f.simple && plane_type(f, metric, tol) == -1;
}

bool is_positive_spacelike_simple(const AltTensor& w, const Metric& metric, double tol) {
  if (!metric.is_diagonal() || w.degree() != metric.spacelike()) return false;
  if (!is_simple_spacelike(w, metric, tol)) return false;
  return w.coeff((SubsetMask{1} << metric.spacelike()) - 1) > 0.0;
}

bool is_positive_timelike_simple(const AltTensor& w, const Metric& metric, double tol) {
  if (!metric.is_diagonal() || w.degree() != metric.timelike()) return false;
  if (!is_simple_timelike(w, metric, tol)) return false;
  return w.coeff(timelike_mask(metric)) > 0.0;
}

}  // namespace bneck
