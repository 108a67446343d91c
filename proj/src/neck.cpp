#include "bneck/neck.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "bneck/exterior.hpp"
#include "bneck/parallel.hpp"
#include "bneck/rng.hpp"
#include "bneck/volumes.hpp"

namespace bneck {

NeckFunction::NeckFunction(std::shared_ptr<const SphericalBasis> basis, int b, Eigen::MatrixXd coefficients)
    : basis_(std::move(basis)), b_(b), coeffs_(std::move(coefficients)) {
  if (!basis_) throw std::invalid_argument("NeckFunction: null basis");
  if (b < 1) throw std::invalid_argument("NeckFunction: b must be >= 1");
  if (coeffs_.rows() != basis_->size() || coeffs_.cols() != b)
    throw std::invalid_argument("NeckFunction: coefficient table must be (basis size) x b");
  if (!coeffs_.allFinite()) throw std::invalid_argument("NeckFunction: non-finite coefficients");
}

NeckFunction NeckFunction::zero(std::shared_ptr<const SphericalBasis> basis, int b) {
  const int size = basis->size();
  return {std::move(basis), b, Eigen::MatrixXd::Zero(size, b)};
}

NeckFunction NeckFunction::linear(std::shared_ptr<const SphericalBasis> basis, const Eigen::MatrixXd& matrix) {
  if (matrix.cols() != basis->ambient_dim()) throw std::invalid_argument("NeckFunction::linear: matrix must be b x a");
  if (basis->max_degree() < 1) throw std::invalid_argument("NeckFunction::linear: basis has no degree-1 functions");
  const auto b = static_cast<int>(matrix.rows());
  return project(std::move(basis), b, [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return matrix * x; });
}

Eigen::VectorXd NeckFunction::value(const Eigen::VectorXd& x) const { return coeffs_.transpose() * basis_->eval(x); }

Eigen::MatrixXd NeckFunction::jacobian(const Eigen::VectorXd& x) const {
  return coeffs_.transpose() * basis_->gradient(x);
}

Eigen::VectorXd NeckFunction::node_value(std::size_t node) const {
  return coeffs_.transpose() * basis_->node_values().row(static_cast<Eigen::Index>(node)).transpose();
}

Eigen::MatrixXd NeckFunction::node_jacobian(std::size_t node) const {
  return coeffs_.transpose() * basis_->node_gradient(node);
}

NeckFunction NeckFunction::operator+(const NeckFunction& other) const {
  if (other.basis_ != basis_ || other.b_ != b_) throw std::invalid_argument("NeckFunction: mismatched operands");
  return {basis_, b_, coeffs_ + other.coeffs_};
}

Metric neck_metric(const NeckFunction& f) { return Metric::diagonal(f.a(), f.b()); }

std::vector<SurfaceSample> embed_neck(const NeckFunction& f, bool check_spacelike) {
  const int a = f.a(), b = f.b();
  const auto& rule = f.basis().rule();
  const Metric metric = neck_metric(f);
  std::vector<SurfaceSample> out;
  out.reserve(rule.size());
  std::vector<Eigen::VectorXd> offending;
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const Eigen::VectorXd& x = rule.nodes[i];
    const Eigen::VectorXd fx = f.node_value(i);
    const Eigen::MatrixXd jac = f.node_jacobian(i);
    const double r = std::sqrt(1.0 + fx.squaredNorm());
    SurfaceSample s;
    s.parameter = x;
    s.weight = rule.weights[i];
    s.orientation = rule.orientation[i];
    s.point.resize(a + b);
    s.point << r * x, fx;
    for (const auto& t : rule.frames[i]) {
      const Eigen::VectorXd jt = jac * t;
      Eigen::VectorXd d(a + b);
      d << r * t + x * (fx.dot(jt) / r), jt;
      s.frame.push_back(std::move(d));
    }
    if (check_spacelike && !s.frame.empty()) {
      const double q = min_tangent_energy(s, metric);
      worst = std::min(worst, q);
      if (!(q > 0.0)) offending.push_back(x);
    }
    out.push_back(std::move(s));
  }
  if (!offending.empty()) {
    std::ostringstream os;
    os << "embed_neck: " << offending.size() << " of " << rule.size()
       << " nodes have non-spacelike tangents (min tangent Q " << worst << "); first at x = (";
    for (Eigen::Index k = 0; k < offending.front().size(); ++k) os << (k ? ", " : "") << offending.front()[k];
    os << "); f is too steep";
    throw SpacelikeViolation(os.str(), std::move(offending));
  }
  return out;
}

NeckEnergy neck_energy_report(const NeckFunction& f) {
  const auto samples = embed_neck(f, true);
  const Metric metric = neck_metric(f);
  NeckEnergy rep;
  rep.min_tangent_q = std::numeric_limits<double>::infinity();
  for (const auto& s : samples)
    if (!s.frame.empty()) rep.min_tangent_q = std::min(rep.min_tangent_q, min_tangent_energy(s, metric));
  rep.directed_volume = directed_volume_surface(samples);
  rep.energy = energy(rep.directed_volume, metric);
  return rep;
}

double neck_energy(const NeckFunction& f) { return neck_energy_report(f).energy; }

double neck_energy_transformed(const NeckFunction& f, const Eigen::MatrixXd& map) {
  const auto samples = transform_samples(embed_neck(f, true), map);
  return energy(directed_volume_surface(samples), neck_metric(f));
}

AltTensor psi(const Eigen::MatrixXd& l, int a, int b) {
  if (l.rows() != b || l.cols() != a) throw std::invalid_argument("psi: L must be b x a");
  const int dim = a + b;
  AltTensor total(dim, a);
  std::vector<int> rest;
  for (int k = 0; k < a; ++k) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(dim);
    u.tail(b) = l.col(k);
    rest.clear();
    for (int i = 0; i < a; ++i)
      if (i != k) rest.push_back(i);
    AltTensor term = wedge(AltTensor::vector(u), AltTensor::monomial(dim, std::span<const int>(rest)));
    total += (k % 2 == 0 ? 1.0 : -1.0) * term;
  }
  return total;
}

NeckFunction harmonic_project(const NeckFunction& f, int degree) {
  if (degree < 0 || degree > f.basis().max_degree())
    throw std::invalid_argument("harmonic_project: degree exceeds the basis cutoff");
  Eigen::MatrixXd c = f.coefficients();
  for (int j = 0; j < f.basis().size(); ++j)
    if (f.basis().degree(j) != degree) c.row(j).setZero();
  return {f.basis_ptr(), f.b(), std::move(c)};
}

SecondVariation second_variation(const NeckFunction& f) {
  const int a = f.a(), b = f.b();
  if (a < 2) throw std::invalid_argument("second_variation: requires a >= 2");
  const auto& rule = f.basis().rule();
  Eigen::MatrixXd integral = Eigen::MatrixXd::Zero(b, a);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const Eigen::VectorXd& x = rule.nodes[i];
    const Eigen::MatrixXd tangential = Eigen::MatrixXd::Identity(a, a) - x * x.transpose();
    integral += rule.weights[i] * f.node_jacobian(i) * tangential;
  }
  const AltTensor t = psi(integral, a, b);
  const double kappa = a / ((a - 1.0) * (a - 1.0) * unit_ball_volume(a));
  SecondVariation sv;
  sv.a_term = a * f.l2_squared();
  sv.b_term = kappa * t.components().squaredNorm();
  return sv;
}

namespace {

double second_difference(const NeckFunction& f, double h, double q0) {
  return (neck_energy(f.scaled(h)) - 2.0 * q0 + neck_energy(f.scaled(-h))) / (h * h);
}

double richardson(const NeckFunction& f, double eps, double& coarse, double& fine) {
  const double q0 = neck_energy(NeckFunction::zero(f.basis_ptr(), f.b()));
  coarse = second_difference(f, eps, q0);
  fine = second_difference(f, 0.5 * eps, q0);
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace

FdHessian finite_diff_energy_hessian(const NeckFunction& f, double eps) {
  if (!(eps >= 1e-4 && eps <= 1e-2)) throw std::invalid_argument("finite_diff_energy_hessian: eps must lie in [1e-4, 1e-2]");
  FdHessian out;
  out.value = richardson(f, eps, out.coarse, out.fine);
  const auto refined = std::make_shared<const SphericalBasis>(refined_rule(f.basis().rule()), f.basis().max_degree());
  const NeckFunction g(refined, f.b(), f.coefficients());
  double c2 = 0.0, f2 = 0.0;
  out.noise = std::abs(richardson(g, eps, c2, f2) - out.value);
  out.scale = 2.0 * unit_ball_volume(f.a()) * f.l2_squared();
  out.noise_dominated = out.noise > 0.1 * std::max(std::abs(out.value), 1e-4 * out.scale);
  return out;
}

NeckFunction random_neck(std::shared_ptr<const SphericalBasis> basis, int b, double amplitude, std::uint64_t seed,
                         std::uint64_t index, std::uint64_t attempt) {
  Rng rng(seed, index, attempt);
  Eigen::MatrixXd c(basis->size(), b);
  for (int j = 0; j < basis->size(); ++j) {
    const double d = 1.0 + basis->degree(j);
    for (int k = 0; k < b; ++k) c(j, k) = rng.normal() * amplitude / (d * d);
  }
  return {std::move(basis), b, std::move(c)};
}

nlohmann::json LowerBoundScan::to_json() const {
  return {{"signature", {a, b}},
          {"count", count},
          {"amplitude", amplitude},
          {"seed", seed},
          {"reference", reference},
          {"min_energy", min_energy},
          {"argmin", argmin},
          {"rejected", rejected},
          {"proved_regime", proved_regime},
          {"violation", violation}};
}

LowerBoundScan lower_bound_scan(int a, int b, int count, double amplitude, std::uint64_t seed, int max_degree) {
  if (a < 1 || b < 1) throw std::invalid_argument("lower_bound_scan: need a >= 1 and b >= 1");
  if (count < 1) throw std::invalid_argument("lower_bound_scan: count must be positive");
  const auto basis = SphericalBasis::make_default(a, max_degree);
  LowerBoundScan scan;
  scan.a = a;
  scan.b = b;
  scan.count = count;
  scan.amplitude = amplitude;
  scan.seed = seed;
  const double va = unit_ball_volume(a);
  scan.reference = va * va;
  scan.proved_regime = a <= 2 || b <= 2;

  struct Slot {
    double energy = 0.0, min_q = 0.0;
    int rejected = 0;
    Eigen::MatrixXd coeffs;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(count));
  parallel_chunks(slots.size(), [&](std::size_t i) {
    Slot& s = slots[i];
    for (std::uint64_t attempt = 0; attempt < 1000; ++attempt) {
      const auto f = random_neck(basis, b, amplitude, seed, i, attempt);
      try {
        const auto rep = neck_energy_report(f);
        s.energy = rep.energy;
        s.min_q = rep.min_tangent_q;
        s.coeffs = f.coefficients();
        return;
      } catch (const SpacelikeViolation&) {
        ++s.rejected;
      }
    }
    throw std::runtime_error("lower_bound_scan: amplitude too large, no spacelike neck drawn");
  });

  scan.min_energy = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const Slot& s = slots[i];
    scan.rejected += s.rejected;
    if (s.energy < scan.min_energy) {
      scan.min_energy = s.energy;
      scan.argmin = static_cast<int>(i);
    }
    nlohmann::json coeffs = nlohmann::json::array();
    for (Eigen::Index r = 0; r < s.coeffs.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index c = 0; c < s.coeffs.cols(); ++c) row.push_back(s.coeffs(r, c));
      coeffs.push_back(row);
    }
    scan.records.push_back({{"signature", {a, b}},
                            {"seed", seed},
                            {"index", i},
                            {"energy", s.energy},
                            {"min_tangent_Q", std::isfinite(s.min_q) ? nlohmann::json(s.min_q) : nlohmann::json(nullptr)},
                            {"coefficients", coeffs}});
  }
  scan.violation = scan.min_energy < scan.reference * (1.0 - 1e-3);
  return scan;
}

}  // namespace bneck
