#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "bneck/body.hpp"
#include "bneck/simplex_lp.hpp"
#include "bneck/sphere_rule.hpp"

namespace bneck {

enum class VolumeMethod { kClosedForm, kMonteCarlo, kQuadrature };
enum class VolumeConvention { kLebesgue, kMetricNormalized };

const char* to_string(VolumeMethod method);
const char* to_string(VolumeConvention convention);

struct VolumeEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long samples = 0;
  VolumeMethod method = VolumeMethod::kClosedForm;
  VolumeConvention convention = VolumeConvention::kLebesgue;

  static VolumeEstimate exact(double value, VolumeConvention convention = VolumeConvention::kLebesgue);
  /// Relative standard error; 0 for exact values.
  double relative_error() const { return mean == 0.0 ? 0.0 : std_error / std::abs(mean); }
  nlohmann::json to_json() const;
};

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

/// Closed-form Lebesgue volumes: "cube" (C_n = [-1,1]^n), "cross" (its polar),
/// "ball" (unit Euclidean ball).
double closed_form_volume(const std::string& name, int n);

/// Hit-or-miss estimate inside the bounding box given by the support function.
VolumeEstimate mc_volume(const Body& body, long samples, std::uint64_t seed, std::uint64_t stream = 0);

/// Uses exact volumes whenever the body has one, Monte Carlo otherwise.
VolumeEstimate volume(const Body& body, long samples, std::uint64_t seed, std::uint64_t stream = 0);

struct MahlerReport {
  VolumeEstimate body;
  VolumeEstimate polar;
  VolumeEstimate mahler;
};

MahlerReport mahler_volume(const Body& body, long samples, std::uint64_t seed);

/// Same as mahler_volume but always by Monte Carlo, closed forms ignored.
MahlerReport mahler_volume_mc(const Body& body, long samples, std::uint64_t seed);

enum class Membership { kInside, kOutside, kIndeterminate };

/// Convex hull of a finite point cloud (points are columns), queried by a
/// phase-one simplex feasibility problem: z = P lambda, 1^T lambda = 1, lambda >= 0.
class HullCloud {
 public:
  explicit HullCloud(const Eigen::MatrixXd& points, double tolerance = 1e-9);

  Membership contains(const Eigen::VectorXd& z) const;
  const Eigen::MatrixXd& points() const { return points_; }
  int dim() const { return static_cast<int>(points_.rows()); }

 private:
  Eigen::MatrixXd points_;
  Eigen::MatrixXd system_;
  Eigen::VectorXd lo_, hi_;
  LpOptions options_;
};

Membership hull_membership(const Eigen::VectorXd& z, const Eigen::MatrixXd& cloud, double tolerance = 1e-9);

/// Point cloud K+ u K- in hyperbolic coordinates with `nodes_per_sheet`
/// quasi-uniform parameters per sheet.
Eigen::MatrixXd diamond_cloud(const Body& body, int nodes_per_sheet);

struct ProductSampling {
  long samples = 100000;
  std::uint64_t seed = 1;
  /// Budget for Monte Carlo volumes of K and its polar when no closed form exists.
  long volume_samples = 200000;
};

struct DiamondReport {
  /// Lebesgue volume of conv(K+ u K-) in V x V*.
  VolumeEstimate estimate;
  VolumeEstimate mahler;
  long inside = 0;
  long indeterminate = 0;
  int nodes_per_sheet = 0;
  bool indeterminate_warning = false;
  nlohmann::json to_json() const;
};

DiamondReport diamond_volume(const Body& body, int nodes_per_sheet, const ProductSampling& sampling);

/// Exact membership in the region bounded by the join of K+ and K-. For
/// z = (a, b) the point P with grad phi(P) - grad phi(a - P) = b, phi = gamma^2/2,
/// is unique; z lies in the region iff gamma(P) + gamma(a - P) <= 1.
struct HeartTest {
  double level = 0.0;  ///< gamma(P) + gamma(a - P), 1-homogeneous in z
  bool converged = false;
};
HeartTest heart_level(const Body& body, const Eigen::VectorXd& z);

struct HeartReport {
  /// Q(vecvol K+) by quadrature, hyperbolic convention.
  double energy = 0.0;
  /// Route (i): energy / C(2n, n), metric-normalized and Lebesgue (x 2^n).
  VolumeEstimate energy_route_metric;
  VolumeEstimate energy_route;
  /// Route (ii): Monte Carlo over K x K° with exact membership, Lebesgue.
  VolumeEstimate mc_route;
  long indeterminate = 0;
  std::string rule;
  nlohmann::json to_json() const;
};

HeartReport heart_volume(const Body& body, const SphereRule& rule, const ProductSampling& sampling);

/// Q(vecvol K+) computed with the given rule.
double kplus_energy(const Body& body, const SphereRule& rule);

struct HeartDiamondComparison {
  VolumeEstimate heart;
  VolumeEstimate diamond;
  /// Samples in the heart but outside the discretized hull (paired count).
  long heart_not_diamond = 0;
  double gap = 0.0;            ///< diamond - heart
  double combined_error = 0.0; ///< sqrt(se_h^2 + se_d^2)
  double allowance = 0.0;      ///< systematic inner-approximation allowance (absolute)
  bool holds = false;          ///< heart <= diamond + 3 combined_error + allowance
  nlohmann::json to_json() const;
};

/// Both volumes from one product sample stream (paired), Lebesgue.
HeartDiamondComparison compare_heart_diamond(const Body& body, int nodes_per_sheet, const ProductSampling& sampling,
                                             double relative_allowance);

struct IdentityReport {
  int n = 0;
  double energy = 0.0;               ///< Q(vecvol K+)
  VolumeEstimate heart;              ///< Lebesgue, Monte Carlo
  double lhs = 0.0;                  ///< C(2n,n) 2^-n Leb(K heart)
  double lhs_error = 0.0;
  double relative_gap = 0.0;         ///< |lhs - energy| / energy
  nlohmann::json to_json() const;
};

/// C(2n, n) Vol K-heart = Q(vecvol K+) with the metric-normalized volume.
IdentityReport central_identity(const Body& body, const SphereRule& rule, const ProductSampling& sampling);

/// Inner-approximation bias of the discretized hull for the ball, measured
/// against the closed form (2^n / C(2n,n)) v_n^2. Returned as a fraction.
double diamond_ball_bias(int n, int nodes_per_sheet, const ProductSampling& sampling);

}  // namespace bneck
