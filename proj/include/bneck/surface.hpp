#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bneck/alt_tensor.hpp"
#include "bneck/body.hpp"
#include "bneck/metric.hpp"
#include "bneck/sphere_rule.hpp"

namespace bneck {

/// Quadrature node on a parametrized surface: the image of a rule node under
/// a parametrization S^(m-1) -> R^N, with the pushed-forward tangent frame.
struct SurfaceSample {
  Eigen::VectorXd point;
  std::vector<Eigen::VectorXd> frame;
  double weight = 0.0;
  /// Boundary orientation for S^0 nodes, +1 elsewhere.
  int orientation = 1;
  Eigen::VectorXd parameter;
};

/// Raised when a surface has tangent vectors that are not spacelike.
class SpacelikeViolation : public std::runtime_error {
 public:
  SpacelikeViolation(const std::string& what, std::vector<Eigen::VectorXd> offending)
      : std::runtime_error(what), offending_(std::move(offending)) {}
  const std::vector<Eigen::VectorXd>& offending_parameters() const { return offending_; }

 private:
  std::vector<Eigen::VectorXd> offending_;
};

struct SurfaceDiagnostics {
  /// Smallest eigenvalue of the tangent Gram matrix over all nodes.
  double min_tangent_q = 0.0;
  /// Largest |Q(point) - level|.
  double max_level_error = 0.0;
  /// Nodes where the local starlikeness test failed.
  int starlike_failures = 0;
};

/// Samples of K+ = {(x, y) in K x K° : <x, y> = 1} in hyperbolic coordinates
/// on V x V*, one per rule node u: x = u / gamma(u), y = grad gamma(u). Bodies
/// whose gauge Hessian blows up on the axes (lp balls with p < 2) and numeric
/// polars are parametrized through the polar body instead. Null tangents
/// (lp balls on the coordinate planes) are accepted; a tangent with Q < 0
/// raises SpacelikeViolation listing every offending node.
std::vector<SurfaceSample> kplus_samples(const Body& body, const SphereRule& rule,
                                         SurfaceDiagnostics* diagnostics = nullptr);

/// K- = sigma(K+): samples of kplus_samples with x negated.
std::vector<SurfaceSample> kminus_samples(const Body& body, const SphereRule& rule,
                                          SurfaceDiagnostics* diagnostics = nullptr);

/// sigma(x, y) = (-x, y) applied to points and frames.
std::vector<SurfaceSample> sigma_samples(std::vector<SurfaceSample> samples);

/// Applies a linear map to points and tangent frames.
std::vector<SurfaceSample> transform_samples(std::vector<SurfaceSample> samples, const Eigen::MatrixXd& map);

/// Directed volume of the cone over a closed surface of dimension m-1:
/// (1/m) sum_i w_i o_i p_i ^ t_i1 ^ ... ^ t_i(m-1).
AltTensor directed_volume_surface(const std::vector<SurfaceSample>& samples);

/// Points as the columns of a matrix.
Eigen::MatrixXd sample_points(const std::vector<SurfaceSample>& samples);

/// Smallest eigenvalue of the Gram matrix of the frame under the metric.
double min_tangent_energy(const SurfaceSample& sample, const Metric& metric);

}  // namespace bneck
