#include "bneck/body.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bneck/monomial.hpp"
#include "bneck/newton.hpp"
#include "bneck/rng.hpp"
#include "bneck/simplex_lp.hpp"

namespace bneck {

enum class Named { kNone, kCube, kCross, kBall };

struct Body::Impl {
  BodyKind kind = BodyKind::kEllipsoid;
  int n = 0;
  Named named = Named::kNone;
  // Polytope
  bool vertex_form = false;
  Eigen::MatrixXd rows;
  // Ellipsoid
  Eigen::MatrixXd matrix;
  double det = 1.0;
  // LpBall
  double p = 2.0;
  Eigen::VectorXd radii;
  // Perturbed, and NumericPolar (base is the perturbed primal)
  std::shared_ptr<const Impl> base;
  double amplitude = 0.0;
  Eigen::VectorXd coeffs;
  std::vector<Monomial> basis;
  bool gate_skipped = false;
};

namespace {

using Impl = Body::Impl;

double ball_volume(int n) { return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0); }

double facet_gauge(const Eigen::MatrixXd& rows, const Eigen::VectorXd& x) {
  return (rows * x).cwiseAbs().maxCoeff();
}

// min sum |lambda_i| subject to sum lambda_i v_i = x.
double vertex_gauge(const Eigen::MatrixXd& rows, const Eigen::VectorXd& x) {
  if (x.isZero(0.0)) return 0.0;
  const auto m = rows.rows(), n = rows.cols();
  Eigen::MatrixXd a(n, 2 * m);
  a.leftCols(m) = rows.transpose();
  a.rightCols(m) = -rows.transpose();
  const auto res = solve_lp(a, x, Eigen::VectorXd::Ones(2 * m));
  if (res.status != LpStatus::kOptimal)
    throw std::runtime_error(std::string("polytope gauge: linear program ") + to_string(res.status));
  return res.objective;
}

double perturbation(const Impl& b, const Eigen::VectorXd& x) {
  const double r2 = x.squaredNorm();
  double s = 0.0;
  for (std::size_t j = 0; j < b.basis.size(); ++j) s += b.coeffs[static_cast<Eigen::Index>(j)] * b.basis[j].eval(x);
  return s / (r2 * r2);
}

double gauge_of(const Impl& b, const Eigen::VectorXd& x);
Eigen::VectorXd gradient_of(const Impl& b, const Eigen::VectorXd& x);
Eigen::MatrixXd hessian_of(const Impl& b, const Eigen::VectorXd& x);

struct ConjugatePoint {
  Eigen::VectorXd x;  // maximizer of <x, y> - gamma(x)^2 / 2 for unit y
  double gauge = 0.0;
};

// Polar gauge of a smooth primal at a unit vector y via the convex conjugate of
// phi = gamma^2 / 2: grad phi(x*) = y and gamma_polar(y) = gamma(x*).
ConjugatePoint conjugate(const Impl& primal, const Eigen::VectorXd& y) {
  SmoothObjective obj;
  obj.value = [&](const Eigen::VectorXd& x) {
    const double g = gauge_of(primal, x);
    return 0.5 * g * g - x.dot(y);
  };
  obj.gradient = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    if (x.isZero(0.0)) return -y;
    return gauge_of(primal, x) * gradient_of(primal, x) - y;
  };
  obj.hessian = [&](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
    const Eigen::VectorXd g = gradient_of(primal, x);
    return g * g.transpose() + gauge_of(primal, x) * hessian_of(primal, x);
  };
  const double gy = gauge_of(primal, y);
  Eigen::VectorXd x0 = y / (gy * gy);
  auto res = newton_minimize(obj, x0, 1e-10, 200);
  if (!res.converged && res.gradient_norm > 1e-7)
    throw std::runtime_error("numeric polar: conjugate solve did not converge");
  return {res.x, gauge_of(primal, res.x)};
}

double gauge_of(const Impl& b, const Eigen::VectorXd& x) {
  switch (b.kind) {
    case BodyKind::kPolytope:
      if (b.named == Named::kCube) return x.cwiseAbs().maxCoeff();
      if (b.named == Named::kCross) return x.cwiseAbs().sum();
      return b.vertex_form ? vertex_gauge(b.rows, x) : facet_gauge(b.rows, x);
    case BodyKind::kEllipsoid:
      if (b.named == Named::kBall) return x.norm();
      return std::sqrt(std::max(0.0, x.dot(b.matrix * x)));
    case BodyKind::kLpBall: {
      const Eigen::VectorXd z = x.cwiseQuotient(b.radii).cwiseAbs();
      const double m = z.maxCoeff();
      if (m == 0.0) return 0.0;
      double s = 0.0;
      for (Eigen::Index i = 0; i < z.size(); ++i) s += std::pow(z[i] / m, b.p);
      return m * std::pow(s, 1.0 / b.p);
    }
    case BodyKind::kPerturbed: {
      if (x.isZero(0.0)) return 0.0;
      return gauge_of(*b.base, x) * (1.0 + b.amplitude * perturbation(b, x));
    }
    case BodyKind::kNumericPolar: {
      const double r = x.norm();
      if (r == 0.0) return 0.0;
      return r * conjugate(*b.base, x / r).gauge;
    }
  }
  return 0.0;
}

double support_of(const Impl& b, const Eigen::VectorXd& y) {
  switch (b.kind) {
    case BodyKind::kPolytope:
      if (b.named == Named::kCube) return y.cwiseAbs().sum();
      if (b.named == Named::kCross) return y.cwiseAbs().maxCoeff();
      return b.vertex_form ? facet_gauge(b.rows, y) : vertex_gauge(b.rows, y);
    case BodyKind::kEllipsoid:
      if (b.named == Named::kBall) return y.norm();
      return std::sqrt(std::max(0.0, y.dot(b.matrix.ldlt().solve(y))));
    case BodyKind::kLpBall: {
      Impl dual = b;
      dual.p = b.p / (b.p - 1.0);
      dual.radii = b.radii.cwiseInverse();
      return gauge_of(dual, y);
    }
    case BodyKind::kPerturbed: {
      const double r = y.norm();
      if (r == 0.0) return 0.0;
      return r * conjugate(b, y / r).gauge;
    }
    case BodyKind::kNumericPolar: return gauge_of(*b.base, y);
  }
  return 0.0;
}

void require_smooth(const Impl& b, const char* what) {
  if (b.kind == BodyKind::kPolytope)
    throw UnsupportedOperation(std::string(what) + ": polytopes have no gauge derivatives");
}

Eigen::VectorXd fd_gradient(const Impl& b, const Eigen::VectorXd& x, double step) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x, xm = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + step;
    xm[i] = x[i] - step;
    g[i] = (gauge_of(b, xp) - gauge_of(b, xm)) / (2.0 * step);
    xp[i] = xm[i] = x[i];
  }
  return g;
}

Eigen::VectorXd gradient_of(const Impl& b, const Eigen::VectorXd& x) {
  require_smooth(b, "gauge_gradient");
  switch (b.kind) {
    case BodyKind::kEllipsoid: {
      const Eigen::VectorXd ax = b.named == Named::kBall ? x : Eigen::VectorXd(b.matrix * x);
      return ax / gauge_of(b, x);
    }
    case BodyKind::kLpBall: {
      const double g = gauge_of(b, x);
      Eigen::VectorXd out(x.size());
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double z = x[i] / b.radii[i];
        const double s = z > 0 ? 1.0 : (z < 0 ? -1.0 : 0.0);
        out[i] = s * std::pow(std::abs(z) / g, b.p - 1.0) / b.radii[i];
      }
      return out;
    }
    case BodyKind::kPerturbed: return fd_gradient(b, x, 1e-6 * x.norm());
    case BodyKind::kNumericPolar: {
      const double r = x.norm();
      const auto c = conjugate(*b.base, x / r);
      return c.x / c.gauge;
    }
    default: break;
  }
  return {};
}

Eigen::MatrixXd hessian_of(const Impl& b, const Eigen::VectorXd& x) {
  require_smooth(b, "gauge_hessian");
  const auto n = x.size();
  switch (b.kind) {
    case BodyKind::kEllipsoid: {
      const double g = gauge_of(b, x);
      const Eigen::MatrixXd a = b.named == Named::kBall ? Eigen::MatrixXd::Identity(n, n) : b.matrix;
      const Eigen::VectorXd ax = a * x;
      return a / g - ax * ax.transpose() / (g * g * g);
    }
    case BodyKind::kLpBall: {
      const double g = gauge_of(b, x);
      const Eigen::VectorXd grad = gradient_of(b, x);
      Eigen::MatrixXd h = -grad * grad.transpose();
      for (Eigen::Index i = 0; i < n; ++i) {
        const double z = std::abs(x[i] / b.radii[i]) / g;
        h(i, i) += std::pow(z, b.p - 2.0) / (b.radii[i] * b.radii[i]);
      }
      return (b.p - 1.0) / g * h;
    }
    case BodyKind::kPerturbed: {
      const double step = 1e-4 * x.norm();
      const double inner = 1e-6 * x.norm();
      Eigen::MatrixXd h(n, n);
      Eigen::VectorXd xp = x, xm = x;
      for (Eigen::Index i = 0; i < n; ++i) {
        xp[i] = x[i] + step;
        xm[i] = x[i] - step;
        h.col(i) = (fd_gradient(b, xp, inner) - fd_gradient(b, xm, inner)) / (2.0 * step);
        xp[i] = xm[i] = x[i];
      }
      return 0.5 * (h + h.transpose());
    }
    case BodyKind::kNumericPolar: {
      const double r = x.norm();
      const auto c = conjugate(*b.base, x / r);
      const Eigen::VectorXd gp = gradient_of(*b.base, c.x);
      const Eigen::MatrixXd hphi = gp * gp.transpose() + c.gauge * hessian_of(*b.base, c.x);
      const Eigen::MatrixXd hconj = hphi.ldlt().solve(Eigen::MatrixXd::Identity(n, n));
      const Eigen::VectorXd grad = c.x / c.gauge;
      return (hconj - grad * grad.transpose()) / (c.gauge * r);
    }
    default: break;
  }
  return {};
}

void check_convexity(const Impl& b) {
  const int n = b.n;
  for (int i = 0; i < 2000; ++i) {
    Rng rng(0x5eedc0de, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(i));
    Eigen::VectorXd u1(n), d(n);
    for (int k = 0; k < n; ++k) u1[k] = rng.normal();
    for (int k = 0; k < n; ++k) d[k] = rng.normal();
    u1.normalize();
    const double sep = std::array{1e-2, 1e-1, 1.0}[static_cast<std::size_t>(i % 3)];
    Eigen::VectorXd u2 = (u1 + sep * d.normalized()).normalized();
    if (1.0 + b.amplitude * perturbation(b, u1) <= 0.0)
      throw NotConvexError("perturbed gauge: gauge not positive; reduce the amplitude");
    const Eigen::VectorXd x1 = u1 / gauge_of(b, u1);
    const Eigen::VectorXd x2 = u2 / gauge_of(b, u2);
    if (gauge_of(b, 0.5 * (x1 + x2)) > 1.0 + 1e-12) {
      std::ostringstream os;
      os << "perturbed gauge: midpoint convexity test failed (separation " << sep
         << "); the amplitude is too large for these coefficients";
      throw NotConvexError(os.str());
    }
  }
}

std::shared_ptr<Impl> polytope_impl(const Eigen::MatrixXd& rows, bool vertex_form) {
  if (rows.rows() < 1 || rows.cols() < 1) throw std::invalid_argument("polytope: empty row list");
  if (!rows.allFinite()) throw std::invalid_argument("polytope: non-finite entries");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(rows);
  if (lu.rank() < rows.cols())
    throw std::invalid_argument(vertex_form ? "polytope: vertices do not span R^n (degenerate body)"
                                            : "polytope: facet normals do not span R^n (unbounded body)");
  auto impl = std::make_shared<Impl>();
  impl->kind = BodyKind::kPolytope;
  impl->n = static_cast<int>(rows.cols());
  impl->rows = rows;
  impl->vertex_form = vertex_form;
  return impl;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, const char* field) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw std::invalid_argument(std::string("body json: '") + field + "' must be a non-empty array of rows");
  const auto r = static_cast<Eigen::Index>(j.size());
  const auto c = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != c)
      throw std::invalid_argument(std::string("body json: ragged rows in '") + field + "'");
    for (Eigen::Index k = 0; k < c; ++k) m(i, k) = row[static_cast<std::size_t>(k)].get<double>();
  }
  return m;
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    out.push_back(row);
  }
  return out;
}

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j, const char* field) {
  if (!j.is_array()) throw std::invalid_argument(std::string("body json: '") + field + "' must be an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

int dimension_field(const nlohmann::json& j) {
  if (!j.contains("n") || !j["n"].is_number_integer()) throw std::invalid_argument("body json: integer field 'n' required");
  const int n = j["n"].get<int>();
  if (n < 1) throw std::invalid_argument("body json: 'n' must be >= 1");
  return n;
}

}  // namespace

Body Body::cube(int n) {
  if (n < 1) throw std::invalid_argument("cube: n must be >= 1");
  auto impl = polytope_impl(Eigen::MatrixXd::Identity(n, n), false);
  impl->named = Named::kCube;
  return Body(std::move(impl));
}

Body Body::cross_polytope(int n) {
  if (n < 1) throw std::invalid_argument("cross_polytope: n must be >= 1");
  auto impl = polytope_impl(Eigen::MatrixXd::Identity(n, n), true);
  impl->named = Named::kCross;
  return Body(std::move(impl));
}

Body Body::polytope_from_vertices(const Eigen::MatrixXd& rows) { return Body(polytope_impl(rows, true)); }
Body Body::polytope_from_facets(const Eigen::MatrixXd& rows) { return Body(polytope_impl(rows, false)); }

Body Body::ball(int n) {
  if (n < 1) throw std::invalid_argument("ball: n must be >= 1");
  auto impl = std::make_shared<Impl>();
  impl->kind = BodyKind::kEllipsoid;
  impl->n = n;
  impl->named = Named::kBall;
  impl->matrix = Eigen::MatrixXd::Identity(n, n);
  return Body(std::move(impl));
}

Body Body::ellipsoid(const Eigen::MatrixXd& a) {
  if (a.rows() < 1 || a.rows() != a.cols()) throw std::invalid_argument("ellipsoid: matrix must be square");
  if (!a.allFinite()) throw std::invalid_argument("ellipsoid: non-finite entries");
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * a.cwiseAbs().maxCoeff())
    throw std::invalid_argument("ellipsoid: matrix must be symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) throw std::invalid_argument("ellipsoid: matrix must be positive definite");
  auto impl = std::make_shared<Impl>();
  impl->kind = BodyKind::kEllipsoid;
  impl->n = static_cast<int>(a.rows());
  impl->matrix = a;
  impl->det = a.determinant();
  return Body(std::move(impl));
}

Body Body::lp_ball(double p, int n) { return lp_ball(p, Eigen::VectorXd::Ones(n)); }

Body Body::lp_ball(double p, const Eigen::VectorXd& radii) {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("lp_ball: exponent must lie in (1, inf)");
  if (radii.size() < 1 || !(radii.minCoeff() > 0.0) || !radii.allFinite())
    throw std::invalid_argument("lp_ball: radii must be positive");
  auto impl = std::make_shared<Impl>();
  impl->kind = BodyKind::kLpBall;
  impl->n = static_cast<int>(radii.size());
  impl->p = p;
  impl->radii = radii;
  return Body(std::move(impl));
}

int Body::perturbation_basis_size(int n) { return static_cast<int>(monomials_of_degree(n, 4).size()); }

Body Body::perturbed(const Body& base, double amplitude, const Eigen::VectorXd& coefficients, ConvexityGate gate) {
  const auto bk = base.kind();
  if (bk != BodyKind::kEllipsoid && bk != BodyKind::kLpBall)
    throw std::invalid_argument("perturbed: base must be an ellipsoid or an lp ball");
  if (!std::isfinite(amplitude)) throw std::invalid_argument("perturbed: amplitude must be finite");
  const int n = base.dim();
  auto impl = std::make_shared<Impl>();
  impl->kind = BodyKind::kPerturbed;
  impl->n = n;
  impl->base = base.impl_;
  impl->amplitude = amplitude;
  impl->basis = monomials_of_degree(n, 4);
  if (coefficients.size() != static_cast<Eigen::Index>(impl->basis.size())) {
    std::ostringstream os;
    os << "perturbed: expected " << impl->basis.size() << " coefficients for n = " << n;
    throw std::invalid_argument(os.str());
  }
  impl->coeffs = coefficients;
  impl->gate_skipped = gate == ConvexityGate::kSkip;
  if (gate == ConvexityGate::kEnforce) check_convexity(*impl);
  return Body(std::move(impl));
}

int Body::dim() const { return impl_->n; }
BodyKind Body::kind() const { return impl_->kind; }
bool Body::smooth() const { return impl_->kind != BodyKind::kPolytope; }

std::string Body::name() const {
  const auto& b = *impl_;
  std::ostringstream os;
  switch (b.kind) {
    case BodyKind::kPolytope:
      if (b.named == Named::kCube) return "cube";
      if (b.named == Named::kCross) return "cross";
      return b.vertex_form ? "polytope(vertices)" : "polytope(facets)";
    case BodyKind::kEllipsoid: return b.named == Named::kBall ? "ball" : "ellipsoid";
    case BodyKind::kLpBall: os << "lp(p=" << b.p << ")"; return os.str();
    case BodyKind::kPerturbed: return "perturbed(" + Body(b.base).name() + ")";
    case BodyKind::kNumericPolar: return "polar(" + Body(b.base).name() + ")";
  }
  return "body";
}

namespace {
void require_dim(const Body& k, const Eigen::VectorXd& x, const char* what) {
  if (x.size() != k.dim()) throw std::invalid_argument(std::string(what) + ": point dimension mismatch");
}
}  // namespace

double Body::gauge(const Eigen::VectorXd& x) const {
  require_dim(*this, x, "gauge");
  return gauge_of(*impl_, x);
}

double Body::support(const Eigen::VectorXd& y) const {
  require_dim(*this, y, "support");
  return support_of(*impl_, y);
}

Eigen::VectorXd Body::gauge_gradient(const Eigen::VectorXd& x) const {
  require_dim(*this, x, "gauge_gradient");
  if (x.isZero(0.0)) throw std::invalid_argument("gauge_gradient: undefined at the origin");
  return gradient_of(*impl_, x);
}

Eigen::MatrixXd Body::gauge_hessian(const Eigen::VectorXd& x) const {
  require_dim(*this, x, "gauge_hessian");
  if (x.isZero(0.0)) throw std::invalid_argument("gauge_hessian: undefined at the origin");
  return hessian_of(*impl_, x);
}

Body Body::polar() const {
  const auto& b = *impl_;
  switch (b.kind) {
    case BodyKind::kPolytope: {
      auto impl = std::make_shared<Impl>(b);
      impl->vertex_form = !b.vertex_form;
      if (b.named == Named::kCube) impl->named = Named::kCross;
      if (b.named == Named::kCross) impl->named = Named::kCube;
      return Body(std::move(impl));
    }
    case BodyKind::kEllipsoid: {
      if (b.named == Named::kBall) return *this;
      auto impl = std::make_shared<Impl>(b);
      impl->matrix = b.matrix.inverse();
      impl->matrix = 0.5 * (impl->matrix + impl->matrix.transpose()).eval();
      impl->det = 1.0 / b.det;
      return Body(std::move(impl));
    }
    case BodyKind::kLpBall: return lp_ball(b.p / (b.p - 1.0), b.radii.cwiseInverse());
    case BodyKind::kPerturbed: {
      auto impl = std::make_shared<Impl>();
      impl->kind = BodyKind::kNumericPolar;
      impl->n = b.n;
      impl->base = impl_;
      return Body(std::move(impl));
    }
    case BodyKind::kNumericPolar: return Body(b.base);
  }
  return *this;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> Body::boundary_normal_pair(const Eigen::VectorXd& u) const {
  require_dim(*this, u, "boundary_normal_pair");
  if (!smooth()) throw UnsupportedOperation("boundary_normal_pair: the normal map of a polytope is multivalued");
  if (u.isZero(0.0)) throw std::invalid_argument("boundary_normal_pair: direction must be nonzero");
  const double g = gauge_of(*impl_, u);
  Eigen::VectorXd x = u / g;
  Eigen::VectorXd y = gradient_of(*impl_, u);
  return {std::move(x), std::move(y)};
}

Eigen::VectorXd Body::half_widths() const {
  const int n = dim();
  Eigen::VectorXd h(n);
  for (int i = 0; i < n; ++i) h[i] = support_of(*impl_, Eigen::VectorXd::Unit(n, i));
  return h;
}

std::optional<double> Body::exact_volume() const {
  const auto& b = *impl_;
  const int n = b.n;
  switch (b.kind) {
    case BodyKind::kPolytope:
      if (b.named == Named::kCube) return std::pow(2.0, n);
      if (b.named == Named::kCross) return std::pow(2.0, n) / std::tgamma(n + 1.0);
      return std::nullopt;
    case BodyKind::kEllipsoid: return ball_volume(n) / std::sqrt(b.det);
    case BodyKind::kLpBall: {
      double v = std::pow(std::tgamma(1.0 + 1.0 / b.p), n) / std::tgamma(1.0 + n / b.p);
      for (int i = 0; i < n; ++i) v *= 2.0 * b.radii[i];
      return v;
    }
    default: return std::nullopt;
  }
}

const Eigen::MatrixXd& Body::matrix() const { return impl_->kind == BodyKind::kPolytope ? impl_->rows : impl_->matrix; }
double Body::exponent() const { return impl_->p; }
const Eigen::VectorXd& Body::radii() const { return impl_->radii; }
double Body::amplitude() const { return impl_->amplitude; }
const Eigen::VectorXd& Body::coefficients() const { return impl_->coeffs; }

Body Body::base() const {
  if (!impl_->base) throw std::logic_error("base: body has no base");
  return Body(impl_->base);
}

nlohmann::json Body::to_json() const {
  const auto& b = *impl_;
  nlohmann::json j;
  switch (b.kind) {
    case BodyKind::kPolytope:
      if (b.named == Named::kCube) return {{"type", "cube"}, {"n", b.n}};
      if (b.named == Named::kCross) return {{"type", "cross"}, {"n", b.n}};
      j["type"] = "polytope";
      j["n"] = b.n;
      j[b.vertex_form ? "vertices" : "facets"] = matrix_to_json(b.rows);
      return j;
    case BodyKind::kEllipsoid:
      if (b.named == Named::kBall) return {{"type", "ball"}, {"n", b.n}};
      j["type"] = "ellipsoid";
      j["n"] = b.n;
      j["matrix"] = matrix_to_json(b.matrix);
      return j;
    case BodyKind::kLpBall:
      j["type"] = "lp";
      j["n"] = b.n;
      j["p"] = b.p;
      j["radii"] = vector_to_json(b.radii);
      return j;
    case BodyKind::kPerturbed:
      j["type"] = "perturbed";
      j["n"] = b.n;
      j["base"] = Body(b.base).to_json();
      j["amplitude"] = b.amplitude;
      j["coefficients"] = vector_to_json(b.coeffs);
      if (b.gate_skipped) j["convexity_gate"] = "skip";
      return j;
    case BodyKind::kNumericPolar:
      j["type"] = "polar";
      j["n"] = b.n;
      j["of"] = Body(b.base).to_json();
      return j;
  }
  return j;
}

Body Body::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("body json: expected an object");
  if (!j.contains("type") || !j["type"].is_string()) throw std::invalid_argument("body json: string field 'type' required");
  const std::string type = j["type"].get<std::string>();
  try {
    if (type == "cube") return cube(dimension_field(j));
    if (type == "cross") return cross_polytope(dimension_field(j));
    if (type == "ball") return ball(dimension_field(j));
    if (type == "ellipsoid") {
      if (!j.contains("matrix")) throw std::invalid_argument("body json: ellipsoid needs 'matrix'");
      Body k = ellipsoid(matrix_from_json(j["matrix"], "matrix"));
      if (j.contains("n") && dimension_field(j) != k.dim()) throw std::invalid_argument("body json: 'n' disagrees with 'matrix'");
      return k;
    }
    if (type == "lp") {
      if (!j.contains("p") || !j["p"].is_number()) throw std::invalid_argument("body json: lp needs numeric 'p'");
      const double p = j["p"].get<double>();
      if (j.contains("radii")) {
        Body k = lp_ball(p, vector_from_json(j["radii"], "radii"));
        if (j.contains("n") && dimension_field(j) != k.dim()) throw std::invalid_argument("body json: 'n' disagrees with 'radii'");
        return k;
      }
      return lp_ball(p, dimension_field(j));
    }
    if (type == "polytope") {
      Body k = j.contains("vertices") ? polytope_from_vertices(matrix_from_json(j["vertices"], "vertices"))
               : j.contains("facets") ? polytope_from_facets(matrix_from_json(j["facets"], "facets"))
                                      : throw std::invalid_argument("body json: polytope needs 'vertices' or 'facets'");
      if (j.contains("n") && dimension_field(j) != k.dim()) throw std::invalid_argument("body json: 'n' disagrees with rows");
      return k;
    }
    if (type == "perturbed") {
      if (!j.contains("base")) throw std::invalid_argument("body json: perturbed needs 'base'");
      const Body base = from_json(j["base"]);
      const double amp = j.value("amplitude", 0.0);
      Eigen::VectorXd c = j.contains("coefficients") ? vector_from_json(j["coefficients"], "coefficients")
                                                     : Eigen::VectorXd::Zero(perturbation_basis_size(base.dim()));
      const bool skip = j.contains("convexity_gate") && j["convexity_gate"] == "skip";
      return perturbed(base, amp, c, skip ? ConvexityGate::kSkip : ConvexityGate::kEnforce);
    }
    if (type == "polar") {
      if (!j.contains("of")) throw std::invalid_argument("body json: polar needs 'of'");
      return from_json(j["of"]).polar();
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("body json: ") + e.what());
  }
  throw std::invalid_argument("body json: unknown type '" + type + "'");
}

}  // namespace bneck
