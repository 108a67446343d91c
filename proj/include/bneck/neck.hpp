#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "bneck/alt_tensor.hpp"
#include "bneck/metric.hpp"
#include "bneck/spherical_basis.hpp"
#include "bneck/surface.hpp"

namespace bneck {

/// Map f: S^(a-1) -> R^b, f = sum_j basis_j * coefficients.row(j).
class NeckFunction {
 public:
  NeckFunction(std::shared_ptr<const SphericalBasis> basis, int b, Eigen::MatrixXd coefficients);
  static NeckFunction zero(std::shared_ptr<const SphericalBasis> basis, int b);
  /// f(x) = matrix * x, projected onto the basis (exact for max_degree >= 1).
  static NeckFunction linear(std::shared_ptr<const SphericalBasis> basis, const Eigen::MatrixXd& matrix);
  /// L2 projection of an arbitrary function given at the rule nodes.
  template <class F>
  static NeckFunction project(std::shared_ptr<const SphericalBasis> basis, int b, F&& f);

  int a() const { return basis_->ambient_dim(); }
  int b() const { return b_; }
  const SphericalBasis& basis() const { return *basis_; }
  std::shared_ptr<const SphericalBasis> basis_ptr() const { return basis_; }
  const Eigen::MatrixXd& coefficients() const { return coeffs_; }

  Eigen::VectorXd value(const Eigen::VectorXd& x) const;
  /// Ambient Jacobian (b x a).
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const;
  Eigen::VectorXd node_value(std::size_t node) const;
  Eigen::MatrixXd node_jacobian(std::size_t node) const;

  /// Raw surface-measure L2 norm squared.
  double l2_squared() const { return coeffs_.squaredNorm(); }

  NeckFunction scaled(double s) const { return {basis_, b_, s * coeffs_}; }
  NeckFunction operator+(const NeckFunction& other) const;

 private:
  std::shared_ptr<const SphericalBasis> basis_;
  int b_;
  Eigen::MatrixXd coeffs_;
};

template <class F>
NeckFunction NeckFunction::project(std::shared_ptr<const SphericalBasis> basis, int b, F&& f) {
  const auto& rule = basis->rule();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(basis->size(), b);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const Eigen::VectorXd v = f(rule.nodes[i]);
    c += rule.weights[i] * basis->node_values().row(static_cast<Eigen::Index>(i)).transpose() * v.transpose();
  }
  return {std::move(basis), b, std::move(c)};
}

/// Diagonal metric of signature (a, b).
Metric neck_metric(const NeckFunction& f);

/// Samples of N = {(x sqrt(1 + |f(x)|^2), f(x))} on H+ = {Q = 1}. Tangents come
/// from differentiating the parametrization; throws SpacelikeViolation naming
/// the nodes where the induced metric is not positive definite.
std::vector<SurfaceSample> embed_neck(const NeckFunction& f, bool check_spacelike = true);

struct NeckEnergy {
  double energy = 0.0;
  double min_tangent_q = 0.0;
  AltTensor directed_volume{1, 0};
};

/// Q(vecvol N) with cone factor 1/a.
NeckEnergy neck_energy_report(const NeckFunction& f);
double neck_energy(const NeckFunction& f);
/// Energy of a neck moved by a linear map of R^(a+b).
double neck_energy_transformed(const NeckFunction& f, const Eigen::MatrixXd& map);

/// Psi(L) = sum_k (-1)^(k+1) L(e_k) ^ e_1 ^ .. (e_k omitted) .. ^ e_a in
/// wedge^a R^(a+b); L is b x a and L(e_k) lives in the timelike coordinates.
AltTensor psi(const Eigen::MatrixXd& l, int a, int b);

/// Degree-d harmonic component.
NeckFunction harmonic_project(const NeckFunction& f, int degree);

struct SecondVariation {
  double a_term = 0.0;  ///< a * int |f|^2
  double b_term = 0.0;  ///< kappa * |int Psi(D_T f)|^2, kappa = a / ((a-1)^2 v_a)
  double difference() const { return a_term - b_term; }
};

/// Requires a >= 2. B is normalized so that A = B on linear f.
SecondVariation second_variation(const NeckFunction& f);

struct FdHessian {
  double value = 0.0;     ///< Richardson-extrapolated d^2 Q / d eps^2 at 0
  double coarse = 0.0;    ///< second difference at eps
  double fine = 0.0;      ///< second difference at eps / 2
  double noise = 0.0;     ///< change of value under a refined quadrature rule
  double scale = 0.0;     ///< 2 v_a |f|^2
  bool noise_dominated = false;
};

/// (Q[eps f] - 2 Q[0] + Q[-eps f]) / eps^2 with one Richardson step.
FdHessian finite_diff_energy_hessian(const NeckFunction& f, double eps);

struct LowerBoundScan {
  int a = 0, b = 0;
  int count = 0;
  double amplitude = 0.0;
  std::uint64_t seed = 0;
  double reference = 0.0;  ///< v_a^2
  double min_energy = 0.0;
  int argmin = -1;
  int rejected = 0;        ///< draws discarded for non-spacelike tangents
  bool proved_regime = false;
  bool violation = false;  ///< min < reference (1 - 1e-3)
  std::vector<nlohmann::json> records;
  nlohmann::json to_json() const;
};

/// Random necks with Gaussian coefficients scaled by amplitude / (1 + degree)^2.
NeckFunction random_neck(std::shared_ptr<const SphericalBasis> basis, int b, double amplitude, std::uint64_t seed,
                         std::uint64_t index, std::uint64_t attempt = 0);

LowerBoundScan lower_bound_scan(int a, int b, int count, double amplitude, std::uint64_t seed, int max_degree = 4);

}  // namespace bneck
