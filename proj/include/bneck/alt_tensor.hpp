#pragma once

#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bneck {

/// Bit set of basis indices; bit i set means e_i is a wedge factor.
using SubsetMask = std::uint32_t;

/// Largest ambient dimension supported by the dense exterior algebra.
inline constexpr int kMaxExteriorDim = 16;

double binomial(int n, int k);

/// Sorted k-subsets of {0..dim-1} in colexicographic order, shared between
/// all tensors of the same shape.
class SubsetTable {
 public:
  static std::shared_ptr<const SubsetTable> get(int dim, int degree);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  std::size_t size() const { return masks_.size(); }
  SubsetMask mask(std::size_t rank) const { return masks_[rank]; }
  std::size_t rank(SubsetMask mask) const;

 private:
  SubsetTable(int dim, int degree);

  int dim_;
  int degree_;
  std::vector<SubsetMask> masks_;
};

/// Alternating tensor of fixed degree over R^dim with dense storage on the
/// sorted index subsets. Antisymmetry is implicit in the indexing.
class AltTensor {
 public:
  AltTensor(int dim, int degree);

  static AltTensor scalar(int dim, double value);
  static AltTensor vector(const Eigen::VectorXd& v);
  /// Monomial coeff * e_{i1} ^ ... ^ e_{ik}; indices in any order, a repeated
  /// index gives the zero tensor.
  static AltTensor monomial(int dim, std::initializer_list<int> indices, double coeff = 1.0);
  static AltTensor monomial(int dim, std::span<const int> indices, double coeff = 1.0);
  /// v_1 ^ ... ^ v_k computed from the k x k minors of [v_1 ... v_k].
  static AltTensor wedge_of(std::span<const Eigen::VectorXd> vectors);
  static AltTensor wedge_of(const Eigen::MatrixXd& columns);

  int dim() const { return table_->dim(); }
  int degree() const { return table_->degree(); }
  std::size_t size() const { return coeffs_.size(); }

  double operator[](std::size_t rank) const { return coeffs_[static_cast<Eigen::Index>(rank)]; }
  double& operator[](std::size_t rank) { return coeffs_[static_cast<Eigen::Index>(rank)]; }
  double coeff(SubsetMask mask) const;
  double& coeff(SubsetMask mask);
  SubsetMask subset(std::size_t rank) const { return table_->mask(rank); }
  std::size_t rank_of(SubsetMask mask) const { return table_->rank(mask); }

  const Eigen::VectorXd& components() const { return coeffs_; }
  Eigen::VectorXd& components() { return coeffs_; }

  /// Euclidean norm of the component vector.
  double norm() const { return coeffs_.norm(); }
  bool is_zero(double tol = 0.0) const { return coeffs_.cwiseAbs().maxCoeff() <= tol; }

  AltTensor& operator+=(const AltTensor& other);
  AltTensor& operator-=(const AltTensor& other);
  AltTensor& operator*=(double s);

  friend AltTensor operator+(AltTensor lhs, const AltTensor& rhs) { return lhs += rhs; }
  friend AltTensor operator-(AltTensor lhs, const AltTensor& rhs) { return lhs -= rhs; }
  friend AltTensor operator*(double s, AltTensor t) { return t *= s; }
  friend AltTensor operator*(AltTensor t, double s) { return t *= s; }
  AltTensor operator-() const { return (*this) * -1.0; }

  std::string to_string(int precision = 6) const;

 private:
  void require_same_shape(const AltTensor& other) const;

  std::shared_ptr<const SubsetTable> table_;
  Eigen::VectorXd coeffs_;
};

/// Exterior product; degree(result) = degree(lhs) + degree(rhs).
AltTensor wedge(const AltTensor& lhs, const AltTensor& rhs);

/// Sign of the shuffle that sorts the concatenation (I, J) of two disjoint sets.
int shuffle_sign(SubsetMask first, SubsetMask second);

/// Induced action of a linear map on degree-k tensors: (M v_1) ^ ... ^ (M v_k).
AltTensor pushforward(const AltTensor& t, const Eigen::MatrixXd& map);

}  // namespace bneck
