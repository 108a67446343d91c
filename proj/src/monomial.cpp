#include "bneck/monomial.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace bneck {
namespace {

double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

void enumerate(int n, int var, int remaining, std::vector<int>& current, std::vector<Monomial>& out) {
  if (var == n - 1) {
    current[static_cast<std::size_t>(var)] = remaining;
    out.push_back({current});
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current[static_cast<std::size_t>(var)] = e;
    enumerate(n, var + 1, remaining - e, current, out);
  }
}

}  // namespace

int Monomial::degree() const { return std::accumulate(exponents.begin(), exponents.end(), 0); }

double Monomial::eval(const Eigen::VectorXd& x) const {
  double r = 1.0;
  for (std::size_t i = 0; i < exponents.size(); ++i) r *= ipow(x[static_cast<Eigen::Index>(i)], exponents[i]);
  return r;
}

Eigen::VectorXd Monomial::gradient(const Eigen::VectorXd& x) const {
  const auto n = static_cast<Eigen::Index>(exponents.size());
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const int ek = exponents[static_cast<std::size_t>(k)];
    if (ek == 0) continue;
    double r = ek * ipow(x[k], ek - 1);
    for (Eigen::Index i = 0; i < n; ++i)
      if (i != k) r *= ipow(x[i], exponents[static_cast<std::size_t>(i)]);
    g[k] = r;
  }
  return g;
}

std::string Monomial::label() const {
  std::ostringstream os;
  bool any = false;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] == 0) continue;
    if (any) os << '*';
    os << 'x' << i + 1;
    if (exponents[i] > 1) os << '^' << exponents[i];
    any = true;
  }
  if (!any) os << '1';
  return os.str();
}

std::vector<Monomial> monomials_of_degree(int n, int d) {
  if (n < 1 || d < 0) throw std::invalid_argument("monomials_of_degree: need n >= 1, d >= 0");
  std::vector<Monomial> out;
  std::vector<int> current(static_cast<std::size_t>(n), 0);
  enumerate(n, 0, d, current, out);
  return out;
}

std::vector<Monomial> monomials_up_to(int n, int max_degree) {
  std::vector<Monomial> out;
  for (int d = 0; d <= max_degree; ++d) {
    auto part = monomials_of_degree(n, d);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace bneck
