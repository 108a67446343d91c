#include "bneck/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bneck/parallel.hpp"

namespace bneck {
namespace {

bool use_dual_parametrization(const Body& body) {
  return (body.kind() == BodyKind::kLpBall && body.exponent() < 2.0) || body.kind() == BodyKind::kNumericPolar;
}

// Point and tangent images of the node u for the body whose boundary is
// parametrized (the primal or the polar, see use_dual_parametrization).
void parametrize(const Body& chart, const Eigen::VectorXd& u, const std::vector<Eigen::VectorXd>& frame,
                 Eigen::VectorXd& on_boundary, Eigen::VectorXd& normal, std::vector<Eigen::VectorXd>& d_boundary,
                 std::vector<Eigen::VectorXd>& d_normal) {
  const double g = chart.gauge(u);
  const Eigen::VectorXd grad = u.size() == 1 ? Eigen::VectorXd(u * (g / u.squaredNorm())) : chart.gauge_gradient(u);
  on_boundary = u / g;
  normal = grad;
  d_boundary.clear();
  d_normal.clear();
  if (frame.empty()) return;
  const Eigen::MatrixXd hess = chart.gauge_hessian(u);
  for (const auto& t : frame) {
    d_boundary.push_back(t / g - u * (grad.dot(t) / (g * g)));
    d_normal.push_back(hess * t);
  }
}

Eigen::VectorXd join(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  Eigen::VectorXd p(x.size() + y.size());
  p << x, y;
  return p;
}

}  // namespace

double min_tangent_energy(const SurfaceSample& sample, const Metric& metric) {
  const auto k = static_cast<Eigen::Index>(sample.frame.size());
  if (k == 0) return std::numeric_limits<double>::infinity();
  Eigen::MatrixXd f(metric.dim(), k);
  for (Eigen::Index i = 0; i < k; ++i) f.col(i) = sample.frame[static_cast<std::size_t>(i)];
  const Eigen::MatrixXd g = f.transpose() * metric.gram() * f;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

std::vector<SurfaceSample> kplus_samples(const Body& body, const SphereRule& rule, SurfaceDiagnostics* diagnostics) {
  const int n = body.dim();
  if (rule.ambient_dim != n) throw std::invalid_argument("kplus_samples: rule dimension differs from the body");
  if (n > 1 && !body.smooth()) throw UnsupportedOperation("kplus_samples: requires a smooth body");
  const bool dual = use_dual_parametrization(body);
  const Body chart = dual ? body.polar() : body;
  const Metric metric = Metric::hyperbolic(n);

  std::vector<SurfaceSample> out(rule.size());
  constexpr std::size_t kChunk = 32;
  const std::size_t chunks = (rule.size() + kChunk - 1) / kChunk;
  parallel_chunks(chunks, [&](std::size_t c) {
    const std::size_t end = std::min(rule.size(), (c + 1) * kChunk);
    Eigen::VectorXd a, b;
    std::vector<Eigen::VectorXd> da, db;
    for (std::size_t i = c * kChunk; i < end; ++i) {
      parametrize(chart, rule.nodes[i], rule.frames[i], a, b, da, db);
      SurfaceSample s;
      s.parameter = rule.nodes[i];
      s.weight = rule.weights[i];
      s.orientation = rule.orientation[i];
      s.point = dual ? join(b, a) : join(a, b);
      for (std::size_t k = 0; k < da.size(); ++k) s.frame.push_back(dual ? join(db[k], da[k]) : join(da[k], db[k]));
      out[i] = std::move(s);
    }
  });

  SurfaceDiagnostics diag;
  diag.min_tangent_q = std::numeric_limits<double>::infinity();
  std::vector<Eigen::VectorXd> offending;
  for (const auto& s : out) {
    const double level = metric.quadratic(s.point);
    diag.max_level_error = std::max(diag.max_level_error, std::abs(level - 1.0));
    if (s.frame.empty()) continue;
    const double q = min_tangent_energy(s, metric);
    diag.min_tangent_q = std::min(diag.min_tangent_q, q);
    if (!(q >= -1e-12)) offending.push_back(s.parameter);
    // Local starlikeness of the projection to the spacelike n-plane: the
    // radial direction and the projected tangents stay positively oriented.
    Eigen::MatrixXd m(n, n);
    m.col(0) = s.point.head(n) + s.point.tail(n);
    for (int k = 0; k + 1 < n; ++k) m.col(k + 1) = s.frame[static_cast<std::size_t>(k)].head(n) + s.frame[static_cast<std::size_t>(k)].tail(n);
    if (!(m.determinant() > 0.0)) ++diag.starlike_failures;
  }
  if (diagnostics) *diagnostics = diag;
  if (!offending.empty()) {
    std::ostringstream os;
    os << "kplus_samples: " << offending.size() << " of " << out.size()
       << " nodes have timelike tangent vectors (min tangent Q " << diag.min_tangent_q << "); first at u = (";
    for (Eigen::Index i = 0; i < offending.front().size(); ++i) os << (i ? ", " : "") << offending.front()[i];
    os << ")";
    throw SpacelikeViolation(os.str(), std::move(offending));
  }
  return out;
}

std::vector<SurfaceSample> sigma_samples(std::vector<SurfaceSample> samples) {
  for (auto& s : samples) {
    const auto n = s.point.size() / 2;
    s.point.head(n) = -s.point.head(n);
    for (auto& t : s.frame) t.head(n) = -t.head(n);
  }
  return samples;
}

std::vector<SurfaceSample> kminus_samples(const Body& body, const SphereRule& rule, SurfaceDiagnostics* diagnostics) {
  return sigma_samples(kplus_samples(body, rule, diagnostics));
}

std::vector<SurfaceSample> transform_samples(std::vector<SurfaceSample> samples, const Eigen::MatrixXd& map) {
  for (auto& s : samples) {
    if (map.cols() != s.point.size()) throw std::invalid_argument("transform_samples: map dimension mismatch");
    s.point = map * s.point;
    for (auto& t : s.frame) t = map * t;
  }
  return samples;
}

AltTensor directed_volume_surface(const std::vector<SurfaceSample>& samples) {
  if (samples.empty()) throw std::invalid_argument("directed_volume_surface: no samples");
  const auto dim = samples.front().point.size();
  const auto m = static_cast<Eigen::Index>(samples.front().frame.size()) + 1;
  AltTensor total(static_cast<int>(dim), static_cast<int>(m));
  Eigen::MatrixXd cols(dim, m);
  for (const auto& s : samples) {
    if (static_cast<Eigen::Index>(s.frame.size()) + 1 != m || s.point.size() != dim)
      throw std::invalid_argument("directed_volume_surface: inconsistent sample shapes");
    cols.col(0) = s.point;
    for (Eigen::Index k = 1; k < m; ++k) cols.col(k) = s.frame[static_cast<std::size_t>(k - 1)];
    if (m > 1) {
      const Eigen::MatrixXd f = cols.rightCols(m - 1);
      const double scale = f.colwise().norm().prod();
      const double vol = std::sqrt(std::max(0.0, (f.transpose() * f).determinant()));
      if (!(vol > 1e-12 * scale)) throw std::invalid_argument("directed_volume_surface: degenerate tangent frame");
    }
    AltTensor piece = AltTensor::wedge_of(cols);
    piece *= s.weight * s.orientation;
    total += piece;
  }
  total *= 1.0 / static_cast<double>(m);
  return total;
}

Eigen::MatrixXd sample_points(const std::vector<SurfaceSample>& samples) {
  if (samples.empty()) return {};
  Eigen::MatrixXd pts(samples.front().point.size(), static_cast<Eigen::Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) pts.col(static_cast<Eigen::Index>(i)) = samples[i].point;
  return pts;
}

}  // namespace bneck
