#include "bneck/lie.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

#include "bneck/parallel.hpp"
#include "bneck/rng.hpp"

namespace bneck {

Eigen::MatrixXd signature_matrix(int a, int b) {
  if (a < 0 || b < 0 || a + b < 1) throw std::invalid_argument("signature_matrix: need a, b >= 0 and a + b >= 1");
  Eigen::VectorXd d(a + b);
  d.head(a).setOnes();
  d.tail(b).setConstant(-1.0);
  return d.asDiagonal();
}

bool is_skew(const Eigen::MatrixXd& x, int a, int b, double tol) {
  if (x.rows() != a + b || x.cols() != a + b) return false;
  const Eigen::MatrixXd g = signature_matrix(a, b);
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  return (x.transpose() * g + g * x).cwiseAbs().maxCoeff() <= tol * scale;
}

SkewGenerator::SkewGenerator(Eigen::MatrixXd x, int a, int b, double tol) : x_(std::move(x)), a_(a), b_(b) {
  if (!is_skew(x_, a, b, tol)) throw std::invalid_argument("SkewGenerator: matrix is not skew for the signature");
}

SkewGenerator SkewGenerator::conjugated(const Eigen::MatrixXd& g) const {
  const Eigen::MatrixXd y = g * x_ * g.inverse();
  return SkewGenerator(y, a_, b_, 1e-9);
}

SkewGenerator SkewGenerator::operator+(const SkewGenerator& other) const {
  return SkewGenerator(x_ + other.x_, a_, b_, 1e-10);
}

SkewGenerator SkewGenerator::operator*(double s) const { return SkewGenerator(s * x_, a_, b_, 1e-10); }

double pairing(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) { return -0.5 * (x * y).trace(); }

SkewGenerator plane_rotation(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double d, int a, int b) {
  const Eigen::MatrixXd g = signature_matrix(a, b);
  if (u.size() != a + b || v.size() != a + b) throw std::invalid_argument("plane_rotation: vector dimension mismatch");
  const double qu = u.dot(g * u), qv = v.dot(g * v), buv = u.dot(g * v);
  if (std::abs(std::abs(qu) - 1.0) > 1e-9 || std::abs(qu - qv) > 1e-9 || std::abs(buv) > 1e-9)
    throw std::invalid_argument("plane_rotation: vectors must be orthonormal and of the same type");
  const double s = qu > 0 ? 1.0 : -1.0;
  Eigen::MatrixXd x = s * d * (v * u.transpose() - u * v.transpose()) * g;
  return SkewGenerator(std::move(x), a, b, 1e-10);
}

SkewGenerator timelike_rotation(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double d, int a, int b) {
  const Eigen::MatrixXd g = signature_matrix(a, b);
  if (u.size() != a + b || v.size() != a + b) throw std::invalid_argument("timelike_rotation: vector dimension mismatch");
  if (!(u.dot(g * u) < 0.0) || !(v.dot(g * v) < 0.0))
    throw std::invalid_argument("timelike_rotation: both vectors must be timelike");
  if (b == 2) {
    Eigen::Matrix2d t;
    t << u.tail(2), v.tail(2);
    if (!(t.determinant() > 0.0)) throw std::invalid_argument("timelike_rotation: pair is not positively ordered");
  }
  return plane_rotation(u, v, d, a, b);
}

double infinitesimal_angle(const SkewGenerator& x) {
  const Eigen::MatrixXd& m = x.matrix();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd& s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > 1e-9 * std::max(1e-300, s[0])) ++rank;
  if (rank != 2) throw std::invalid_argument("infinitesimal_angle: generator is not a single-plane rotation");
  return std::sqrt(std::abs((m * m).trace()) / 2.0);
}

bool is_elliptic(const SkewGenerator& x, double tol) {
  const Eigen::MatrixXd& m = x.matrix();
  const double norm = m.norm();
  if (norm == 0.0) return true;
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, true);
  if (es.info() != Eigen::Success) throw std::runtime_error("is_elliptic: eigen-solver did not converge");
  if (es.eigenvalues().real().cwiseAbs().maxCoeff() > tol * norm) return false;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(es.eigenvectors());
  const auto& s = svd.singularValues();
  return s[s.size() - 1] >= 1e-6 * s[0];
}

Eigen::MatrixXd random_generator(int a, int b, double scale, std::uint64_t seed, std::uint64_t index) {
  Rng rng(seed, 0x6e6, index);
  const int n = a + b;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      m(i, j) = scale * rng.normal();
      m(j, i) = -m(i, j);
    }
  return m * signature_matrix(a, b);
}

Eigen::MatrixXd random_group_element(int a, int b, double scale, std::uint64_t seed, std::uint64_t index) {
  return random_generator(a, b, scale, seed, index).exp();
}

SkewGenerator random_positive_timelike_rotation(int a, std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  const int b = 2, n = a + 2;
  const Eigen::MatrixXd g = signature_matrix(a, b);
  Rng rng(seed, stream, index);
  auto bil = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) { return x.dot(g * y); };
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Eigen::VectorXd u(n), v(n);
    for (int i = 0; i < n; ++i) u[i] = rng.normal() * (i < a ? 0.5 : 1.0);
    for (int i = 0; i < n; ++i) v[i] = rng.normal() * (i < a ? 0.5 : 1.0);
    const double qu = bil(u, u);
    if (!(qu < -1e-3)) continue;
    u /= std::sqrt(-qu);
    v += bil(v, u) * u;
    const double qv = bil(v, v);
    if (!(qv < -1e-3)) continue;
    v /= std::sqrt(-qv);
    Eigen::Matrix2d t;
    t << u.tail(2), v.tail(2);
    if (t.determinant() < 0.0) std::swap(u, v);
    const double d = rng.uniform(0.1, 2.0);
    return timelike_rotation(u, v, d, a, b);
  }
  throw std::runtime_error("random_positive_timelike_rotation: no timelike frame drawn");
}

double EllipticDecomposition::margin() const {
  double t = 0.0, s = 0.0;
  for (const auto& p : planes) (p.timelike ? t : s) += p.angle;
  return t - s;
}

EllipticDecomposition decompose_elliptic(const SkewGenerator& x) {
  const Eigen::MatrixXd& m = x.matrix();
  const int a = x.spacelike(), b = x.timelike();
  const Eigen::MatrixXd g = signature_matrix(a, b);
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, true);
  EllipticDecomposition dec;
  if (es.info() != Eigen::Success) return dec;
  dec.ok = true;
  const double zero = 1e-9 * std::max(1.0, m.norm());
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double im = es.eigenvalues()[k].imag();
    if (im <= zero) continue;  // one eigenvalue per conjugate pair, skip the kernel
    const Eigen::VectorXcd z = es.eigenvectors().col(k);
    // X p = -d q and X q = d p for z = p + i q, so (q, p) is the rotation frame.
    const Eigen::VectorXd p = z.real(), q = z.imag();
    Eigen::Matrix2d gram;
    gram << q.dot(g * q), q.dot(g * p), p.dot(g * q), p.dot(g * p);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> ge(gram);
    const auto ev = ge.eigenvalues();
    const double tol = 1e-8 * ev.cwiseAbs().maxCoeff();
    PlaneAngle pa;
    if (ev.maxCoeff() < -tol) {
      pa.timelike = true;
      Eigen::Matrix2d t;
      t << q.tail(b).head(2), p.tail(b).head(2);
      pa.angle = b == 2 && t.determinant() < 0.0 ? -im : im;
    } else if (ev.minCoeff() > tol) {
      pa.angle = im;
    } else {
      dec.ok = false;
      continue;
    }
    dec.planes.push_back(pa);
  }
  return dec;
}

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(row);
  }
  return out;
}

nlohmann::json PaneitzReport::to_json() const {
  return {{"signature", {a, 2}},
          {"trials", trials},
          {"elliptic", elliptic},
          {"angle_checked", angle_checked},
          {"angle_failures", angle_failures},
          {"min_margin", min_margin},
          {"counterexamples", counterexamples}};
}

PaneitzReport paneitz_verify(int a, int trials, int min_terms, int max_terms, std::uint64_t seed, double tol) {
  if (a < 1) throw std::invalid_argument("paneitz_verify: need a >= 1");
  if (trials < 1 || min_terms < 1 || max_terms < min_terms)
    throw std::invalid_argument("paneitz_verify: need trials >= 1 and 1 <= min_terms <= max_terms");
  struct Trial {
    bool elliptic = false, checked = false;
    double margin = 0.0;
    nlohmann::json record;
  };
  std::vector<Trial> out(static_cast<std::size_t>(trials));
  parallel_chunks(out.size(), [&](std::size_t t) {
    Rng rng(seed, 0x9a7e, t);
    const int span = max_terms - min_terms + 1;
    const int terms = min_terms + static_cast<int>(rng.uniform() * span) % span;
    std::vector<SkewGenerator> rot;
    Eigen::VectorXd w(terms);
    for (int j = 0; j < terms; ++j) {
      rot.push_back(random_positive_timelike_rotation(a, seed, t + 1, static_cast<std::uint64_t>(j)));
      w[j] = -std::log(1.0 - rng.uniform());
    }
    w /= w.sum();
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(a + 2, a + 2);
    for (int j = 0; j < terms; ++j) y += w[j] * rot[static_cast<std::size_t>(j)].matrix();
    const SkewGenerator comb(y, a, 2, 1e-10);
    Trial& tr = out[t];
    tr.elliptic = is_elliptic(comb, tol);
    if (!tr.elliptic) {
      nlohmann::json terms_json = nlohmann::json::array();
      for (int j = 0; j < terms; ++j) terms_json.push_back(matrix_json(rot[static_cast<std::size_t>(j)].matrix()));
      std::vector<double> weights(w.data(), w.data() + w.size());
      tr.record = {{"trial", t}, {"weights", weights}, {"rotations", terms_json}, {"combination", matrix_json(y)}};
      return;
    }
    const auto dec = decompose_elliptic(comb);
    if (dec.ok) {
      tr.checked = true;
      tr.margin = dec.margin();
    }
  });
  PaneitzReport rep;
  rep.a = a;
  rep.trials = trials;
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (const auto& tr : out) {
    if (tr.elliptic) ++rep.elliptic;
    else rep.counterexamples.push_back(tr.record);
    if (tr.checked) {
      ++rep.angle_checked;
      rep.min_margin = std::min(rep.min_margin, tr.margin);
      if (!(tr.margin > 0.0)) ++rep.angle_failures;
    }
  }
  return rep;
}

}  // namespace bneck
