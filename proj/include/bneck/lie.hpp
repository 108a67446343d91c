#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace bneck {

/// G = diag(+1 x a, -1 x b).
Eigen::MatrixXd signature_matrix(int a, int b);

/// Element X of so(a, b): X^T G + G X = 0.
class SkewGenerator {
 public:
  /// Throws std::invalid_argument unless X is skew within tol * max(1, |X|).
  SkewGenerator(Eigen::MatrixXd x, int a, int b, double tol = 1e-12);

  const Eigen::MatrixXd& matrix() const { return x_; }
  int spacelike() const { return a_; }
  int timelike() const { return b_; }
  SkewGenerator conjugated(const Eigen::MatrixXd& g) const;
  SkewGenerator operator+(const SkewGenerator& other) const;
  SkewGenerator operator*(double s) const;

 private:
  Eigen::MatrixXd x_;
  int a_, b_;
};

bool is_skew(const Eigen::MatrixXd& x, int a, int b, double tol = 1e-12);

/// <X, Y> = -Tr(XY) / 2.
double pairing(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

/// Rotation generator of the plane (u, v) with X u = d v and X v = -d u.
/// Requires u, v orthonormal and of the same type (both spacelike or both timelike).
SkewGenerator plane_rotation(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double d, int a, int b);

/// plane_rotation for a timelike pair; when b = 2 the pair must be positively
/// ordered (det of the timelike coordinates of [u v] > 0).
SkewGenerator timelike_rotation(const Eigen::VectorXd& u, const Eigen::VectorXd& v, double d, int a, int b);

/// d = sqrt(|Tr X^2| / 2) for a single-plane generator (rank 2).
double infinitesimal_angle(const SkewGenerator& x);

/// Purely imaginary spectrum (|Re| <= tol |X|) and diagonalizable (eigenvector
/// matrix with sigma_min >= 1e-6 sigma_max).
bool is_elliptic(const SkewGenerator& x, double tol = 1e-8);

/// Random element of so(a, b): M G with M antisymmetric Gaussian.
Eigen::MatrixXd random_generator(int a, int b, double scale, std::uint64_t seed, std::uint64_t index);
/// exp of random_generator; an element of SO(a, b).
Eigen::MatrixXd random_group_element(int a, int b, double scale, std::uint64_t seed, std::uint64_t index);

/// Random positive timelike rotation in so(a, 2) with angle d ~ U(0.1, 2).
SkewGenerator random_positive_timelike_rotation(int a, std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

struct PlaneAngle {
  double angle = 0.0;  ///< signed for the timelike plane (positive orientation), nonnegative otherwise
  bool timelike = false;
};

struct EllipticDecomposition {
  bool ok = false;  ///< every invariant plane was definite
  std::vector<PlaneAngle> planes;
  /// Signed timelike angle minus the sum of the spacelike angles.
  double margin() const;
};

/// Splits an elliptic element into commuting plane rotations from its eigenvectors.
EllipticDecomposition decompose_elliptic(const SkewGenerator& x);

struct PaneitzReport {
  int a = 0;
  int trials = 0;
  int elliptic = 0;
  int angle_checked = 0;
  int angle_failures = 0;
  double min_margin = 0.0;
  std::vector<nlohmann::json> counterexamples;
  nlohmann::json to_json() const;
};

/// Random convex combinations of min_terms..max_terms positive timelike
/// rotations in so(a, 2), each checked for ellipticity and for the angle
/// inequality on its commuting decomposition.
PaneitzReport paneitz_verify(int a, int trials, int min_terms, int max_terms, std::uint64_t seed, double tol = 1e-8);

nlohmann::json matrix_json(const Eigen::MatrixXd& m);

}  // namespace bneck
