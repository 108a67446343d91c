#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bneck {

/// Coordinate monomial x_1^e_1 ... x_n^e_n.
struct Monomial {
  std::vector<int> exponents;

  int degree() const;
  double eval(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  std::string label() const;
};

/// All monomials of total degree d in n variables, lexicographically
/// descending in the exponent vector (x_1^d first).
std::vector<Monomial> monomials_of_degree(int n, int d);

/// Monomials of degree 0..max_degree, grouped by ascending degree.
std::vector<Monomial> monomials_up_to(int n, int max_degree);

}  // namespace bneck
