#include "bneck/alt_tensor.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace bneck {
namespace {

constexpr int kBinomRows = 33;

constexpr std::array<std::array<std::uint64_t, kBinomRows>, kBinomRows> make_binomials() {
  std::array<std::array<std::uint64_t, kBinomRows>, kBinomRows> c{};
  for (int n = 0; n < kBinomRows; ++n) {
    c[n][0] = 1;
    for (int k = 1; k <= n; ++k) c[n][k] = c[n - 1][k - 1] + (k < n ? c[n - 1][k] : 0);
  }
  return c;
}

constexpr auto kBinom = make_binomials();

std::uint64_t ibinom(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  return kBinom[n][k];
}

}  // namespace

double binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0.0;
  if (n < kBinomRows) return static_cast<double>(kBinom[n][k]);
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

SubsetTable::SubsetTable(int dim, int degree) : dim_(dim), degree_(degree) {
  if (dim < 0 || dim > kMaxExteriorDim) throw std::invalid_argument("SubsetTable: dimension out of range");
  if (degree < 0) throw std::invalid_argument("SubsetTable: negative degree");
  if (degree > dim) return;  // identically zero space
  masks_.resize(ibinom(dim, degree));
  // Colex order: rank(mask) = sum_i C(c_i, i) over the sorted set bits c_1 < ... < c_k.
  const SubsetMask limit = SubsetMask{1} << dim;
  for (SubsetMask m = 0; m < limit; ++m) {
    if (std::popcount(m) == degree) masks_[rank(m)] = m;
  }
}

std::shared_ptr<const SubsetTable> SubsetTable::get(int dim, int degree) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const SubsetTable>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{dim, degree}];
  if (!slot) slot = std::shared_ptr<const SubsetTable>(new SubsetTable(dim, degree));
  return slot;
}

std::size_t SubsetTable::rank(SubsetMask mask) const {
  std::size_t r = 0;
  int i = 0;
  while (mask) {
    const int c = std::countr_zero(mask);
    ++i;
    r += ibinom(c, i);
    mask &= mask - 1;
  }
  return r;
}

AltTensor::AltTensor(int dim, int degree)
    : table_(SubsetTable::get(dim, degree)),
      coeffs_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(table_->size()))) {}

AltTensor AltTensor::scalar(int dim, double value) {
  AltTensor t(dim, 0);
  t.coeffs_[0] = value;
  return t;
}

AltTensor AltTensor::vector(const Eigen::VectorXd& v) {
  AltTensor t(static_cast<int>(v.size()), 1);
  for (Eigen::Index i = 0; i < v.size(); ++i) t.coeff(SubsetMask{1} << i) = v[i];
  return t;
}

AltTensor AltTensor::monomial(int dim, std::initializer_list<int> indices, double coeff) {
  return monomial(dim, std::span<const int>(indices.begin(), indices.size()), coeff);
}

AltTensor AltTensor::monomial(int dim, std::span<const int> indices, double coeff) {
  AltTensor t(dim, static_cast<int>(indices.size()));
  SubsetMask mask = 0;
  int sign = 1;
  for (int idx : indices) {
    if (idx < 0 || idx >= dim) throw std::out_of_range("AltTensor::monomial: index out of range");
    const SubsetMask bit = SubsetMask{1} << idx;
    if (mask & bit) return t;
    // Moving e_idx left past the larger indices already placed.
    if (std::popcount(mask & ~((bit << 1) - 1)) % 2) sign = -sign;
    mask |= bit;
  }
  if (t.size() > 0) t.coeff(mask) = sign * coeff;
  return t;
}

AltTensor AltTensor::wedge_of(const Eigen::MatrixXd& columns) {
  const int dim = static_cast<int>(columns.rows());
  const int k = static_cast<int>(columns.cols());
  AltTensor t(dim, k);
  if (k == 0) {
    t.coeffs_[0] = 1.0;
    return t;
  }
  Eigen::MatrixXd minor(k, k);
  for (std::size_t r = 0; r < t.size(); ++r) {
    SubsetMask m = t.subset(r);
    for (int row = 0; row < k; ++row) {
      minor.row(row) = columns.row(std::countr_zero(m));
      m &= m - 1;
    }
    switch (k) {
      case 1: t[r] = minor(0, 0); break;
      case 2: t[r] = minor(0, 0) * minor(1, 1) - minor(0, 1) * minor(1, 0); break;
      default: t[r] = minor.partialPivLu().determinant(); break;
    }
  }
  return t;
}

AltTensor AltTensor::wedge_of(std::span<const Eigen::VectorXd> vectors) {
  if (vectors.empty()) throw std::invalid_argument("AltTensor::wedge_of: need the ambient dimension");
  Eigen::MatrixXd cols(vectors.front().size(), static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != cols.rows()) throw std::invalid_argument("AltTensor::wedge_of: dimension mismatch");
    cols.col(static_cast<Eigen::Index>(i)) = vectors[i];
  }
  return wedge_of(cols);
}

double AltTensor::coeff(SubsetMask mask) const { return coeffs_[static_cast<Eigen::Index>(table_->rank(mask))]; }
double& AltTensor::coeff(SubsetMask mask) { return coeffs_[static_cast<Eigen::Index>(table_->rank(mask))]; }

void AltTensor::require_same_shape(const AltTensor& other) const {
  if (dim() != other.dim() || degree() != other.degree())
    throw std::invalid_argument("AltTensor: shape mismatch (dimension or degree)");
}

AltTensor& AltTensor::operator+=(const AltTensor& other) {
  require_same_shape(other);
  coeffs_ += other.coeffs_;
  return *this;
}

AltTensor& AltTensor::operator-=(const AltTensor& other) {
  require_same_shape(other);
  coeffs_ -= other.coeffs_;
  return *this;
}

AltTensor& AltTensor::operator*=(double s) {
  coeffs_ *= s;
  return *this;
}

std::string AltTensor::to_string(int precision) const {
  std::ostringstream os;
  os.precision(precision);
  bool first = true;
  for (std::size_t r = 0; r < size(); ++r) {
    if ((*this)[r] == 0.0) continue;
    if (!first) os << " + ";
    first = false;
    os << (*this)[r] << "*e{";
    SubsetMask m = subset(r);
    bool inner_first = true;
    while (m) {
      if (!inner_first) os << ",";
      inner_first = false;
      os << std::countr_zero(m) + 1;
      m &= m - 1;
    }
    os << "}";
  }
  if (first) os << "0";
  return os.str();
}

int shuffle_sign(SubsetMask first, SubsetMask second) {
  // Count pairs (i in first, j in second) with i > j.
  int inversions = 0;
  SubsetMask s = second;
  while (s) {
    const int j = std::countr_zero(s);
    inversions += std::popcount(first >> (j + 1));
    s &= s - 1;
  }
  return (inversions % 2) ? -1 : 1;
}

AltTensor wedge(const AltTensor& lhs, const AltTensor& rhs) {
  if (lhs.dim() != rhs.dim()) throw std::invalid_argument("wedge: dimension mismatch");
  const int dim = lhs.dim();
  const int degree = lhs.degree() + rhs.degree();
  AltTensor out(dim, degree);
  if (degree > dim) return out;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    const double a = lhs[i];
    if (a == 0.0) continue;
    const SubsetMask mi = lhs.subset(i);
    for (std::size_t j = 0; j < rhs.size(); ++j) {
      const double b = rhs[j];
      if (b == 0.0) continue;
      const SubsetMask mj = rhs.subset(j);
      if (mi & mj) continue;
      out.coeff(mi | mj) += shuffle_sign(mi, mj) * a * b;
    }
  }
  return out;
}

AltTensor pushforward(const AltTensor& t, const Eigen::MatrixXd& map) {
  if (map.cols() != t.dim()) throw std::invalid_argument("pushforward: map does not act on the tensor's space");
  const int k = t.degree();
  AltTensor out(static_cast<int>(map.rows()), k);
  if (k == 0) {
    out[0] = t[0];
    return out;
  }
  Eigen::MatrixXd cols(map.rows(), k);
  for (std::size_t r = 0; r < t.size(); ++r) {
    if (t[r] == 0.0) continue;
    SubsetMask m = t.subset(r);
    for (int c = 0; c < k; ++c) {
      cols.col(c) = map.col(std::countr_zero(m));
      m &= m - 1;
    }
    out += t[r] * AltTensor::wedge_of(cols);
  }
  return out;
}

}  // namespace bneck
