#include <cmath>

#include <gtest/gtest.h>

#include "bneck/alt_tensor.hpp"
#include "bneck/exterior.hpp"
#include "bneck/metric.hpp"
#include "bneck/rng.hpp"

using namespace bneck;

namespace {

AltTensor random_tensor(int dim, int degree, Rng& rng) {
  AltTensor t(dim, degree);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.normal();
  return t;
}

Eigen::VectorXd random_vector(int dim, Rng& rng) {
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = rng.normal();
  return v;
}

}  // namespace

TEST(Wedge, BasisMonomial) {
  const AltTensor w = wedge(AltTensor::monomial(3, {0}), AltTensor::monomial(3, {1}));
  EXPECT_EQ(w.degree(), 2);
  EXPECT_DOUBLE_EQ(w.coeff(0b011), 1.0);
  const AltTensor r = wedge(AltTensor::monomial(3, {1}), AltTensor::monomial(3, {0}));
  EXPECT_DOUBLE_EQ(r.coeff(0b011), -1.0);
}

TEST(Wedge, VectorWithItselfVanishes) {
  Rng rng(1, 0, 0);
  const auto v = AltTensor::vector(random_vector(5, rng));
  EXPECT_TRUE(wedge(v, v).is_zero(1e-14));
}

TEST(Wedge, Bilinearity) {
  Eigen::VectorXd a(2), b(2);
  a << 1, 1;
  b << 1, -1;
  const AltTensor w = wedge(AltTensor::vector(a), AltTensor::vector(b));
  EXPECT_DOUBLE_EQ(w.coeff(0b11), -2.0);
}

TEST(Wedge, AssociativeAndGradedAnticommutative) {
  Rng rng(2, 0, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_tensor(6, 2, rng), y = random_tensor(6, 1, rng), z = random_tensor(6, 2, rng);
    const AltTensor l = wedge(wedge(x, y), z), r = wedge(x, wedge(y, z));
    EXPECT_LT((l - r).norm(), 1e-12 * (1.0 + l.norm()));
    const AltTensor xy = wedge(x, y), yx = wedge(y, x);
    EXPECT_LT((xy - yx).norm(), 1e-12 * (1.0 + xy.norm()));  // (-1)^(2*1) = +1
  }
  const auto u = random_tensor(6, 1, rng), v = random_tensor(6, 3, rng);
  EXPECT_LT((wedge(u, v) + wedge(v, u)).norm(), 1e-12);  // (-1)^(1*3) = -1
}

TEST(Wedge, DimensionMismatchThrows) {
  EXPECT_THROW(wedge(AltTensor::monomial(3, {0}), AltTensor::monomial(4, {1})), std::invalid_argument);
}

TEST(Energy, DiagonalBasisSigns) {
  const Metric m = Metric::diagonal(2, 1);
  EXPECT_DOUBLE_EQ(energy(AltTensor::monomial(3, {0}), m), 1.0);
  EXPECT_DOUBLE_EQ(energy(AltTensor::monomial(3, {2}), m), -1.0);
  EXPECT_DOUBLE_EQ(energy(AltTensor::monomial(3, {0, 2}), m), -1.0);
}

TEST(Energy, HyperbolicUnitVector) {
  Eigen::VectorXd v(2);
  v << 1, 1;
  EXPECT_DOUBLE_EQ(energy(AltTensor::vector(v), Metric::hyperbolic(1)), 1.0);
}

TEST(Energy, ConventionsAgreeAfterBasisChange) {
  const int n = 2;
  const Metric h = Metric::hyperbolic(n), d = Metric::diagonal(n, n);
  const Eigen::MatrixXd c = Metric::hyperbolic_to_diagonal(n);
  Rng rng(3, 0, 0);
  for (int k = 1; k <= 2 * n; ++k) {
    const AltTensor w = random_tensor(2 * n, k, rng);
    EXPECT_NEAR(energy(w, h), energy(pushforward(w, c), d), 1e-10 * (1.0 + std::abs(energy(w, h))));
  }
}

TEST(Energy, MultiplicativeOnDisjointMonomials) {
  const Metric m = Metric::diagonal(3, 2);
  const AltTensor i = AltTensor::monomial(5, {0, 3}), j = AltTensor::monomial(5, {1, 4});
  EXPECT_DOUBLE_EQ(energy(wedge(i, j), m), energy(i, m) * energy(j, m));
}

TEST(Inner, PolarizationAndOrthogonality) {
  const Metric m = Metric::diagonal(3, 2);
  Rng rng(4, 0, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_tensor(5, 2, rng), y = random_tensor(5, 2, rng);
    EXPECT_NEAR(inner(x, x, m), energy(x, m), 1e-12 * (1.0 + x.norm() * x.norm()));
    EXPECT_NEAR(4.0 * inner(x, y, m), energy(x + y, m) - energy(x - y, m), 1e-10 * (1.0 + x.norm() * y.norm()));
  }
  EXPECT_DOUBLE_EQ(inner(AltTensor::monomial(5, {0, 1}), AltTensor::monomial(5, {0, 2}), m), 0.0);
  EXPECT_THROW(inner(AltTensor::monomial(5, {0}), AltTensor::monomial(5, {0, 1}), m), std::invalid_argument);
}

TEST(Hodge, OnFrame) {
  const Metric m = Metric::diagonal(2, 1);
  const AltTensor s = hodge_star(AltTensor::monomial(3, {0}), m);
  EXPECT_EQ(s.degree(), 2);
  EXPECT_DOUBLE_EQ(s.coeff(0b110), 1.0);
  const Metric m22 = Metric::diagonal(2, 2);
  const AltTensor e12 = AltTensor::monomial(4, {0, 1});
  EXPECT_DOUBLE_EQ(energy(hodge_star(e12, m22), m22), energy(e12, m22));
}

TEST(Hodge, EnergySignAcrossSignatures) {
  Rng rng(5, 0, 0);
  for (int a = 0; a <= 5; ++a)
    for (int b = 0; a + b <= 7; ++b) {
      if (a + b < 1) continue;
      const Metric m = Metric::diagonal(a, b);
      for (int k = 0; k <= a + b; ++k)
        for (int trial = 0; trial < 10; ++trial) {
          const AltTensor w = random_tensor(a + b, k, rng);
          const double q = energy(w, m), qs = energy(hodge_star(w, m), m);
          EXPECT_NEAR(qs, (b % 2 ? -1.0 : 1.0) * q, 1e-9 * (1.0 + w.norm() * w.norm()));
        }
    }
}

TEST(Hodge, PositiveSpacelikeToPositiveTimelike) {
  const Metric m = Metric::diagonal(3, 2);
  Rng rng(6, 0, 0);
  int tested = 0;
  for (int trial = 0; trial < 200 && tested < 20; ++trial) {
    Eigen::MatrixXd f(5, 3);
    for (int j = 0; j < 3; ++j) {
      f.col(j) = random_vector(5, rng);
      f.col(j).tail(2) *= 0.2;
    }
    const AltTensor w = AltTensor::wedge_of(f);
    if (!is_positive_spacelike_simple(w, m)) continue;
    ++tested;
    EXPECT_TRUE(is_positive_timelike_simple(hodge_star(w, m), m));
  }
  EXPECT_GE(tested, 10);
}

TEST(Sigma, FlipsVectorEnergyAndIsInvolution) {
  const Metric h = Metric::hyperbolic(1);
  Eigen::VectorXd v(2);
  v << 1, 1;
  const AltTensor s = sigma_reflect(AltTensor::vector(v), h);
  EXPECT_DOUBLE_EQ(s[0], -1.0);
  EXPECT_DOUBLE_EQ(s[1], 1.0);
  EXPECT_DOUBLE_EQ(energy(s, h), -1.0);
  Rng rng(7, 0, 0);
  const Metric h3 = Metric::hyperbolic(3);
  for (int k = 0; k <= 6; ++k) {
    const AltTensor w = random_tensor(6, k, rng);
    EXPECT_LT((sigma_reflect(sigma_reflect(w, h3), h3) - w).norm(), 1e-14);
  }
  EXPECT_THROW(sigma_reflect(AltTensor::vector(v), Metric::diagonal(1, 1)), std::invalid_argument);
}

TEST(Sigma, MonomialEnergySign) {
  // Over the x/y monomial basis sigma negates each x factor.
  const int n = 2;
  const Metric h = Metric::hyperbolic(n);
  Rng rng(8, 0, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const AltTensor w = random_tensor(2 * n, 1, rng);
    EXPECT_NEAR(energy(sigma_reflect(w, h), h) + energy(w, h), 0.0, 1e-12);
  }
  const AltTensor m = AltTensor::monomial(4, {0, 1, 2});
  const AltTensor s = sigma_reflect(m, h);
  EXPECT_DOUBLE_EQ(s.coeff(0b0111), 1.0);  // two x indices flipped
}

TEST(Sigma, GraphTensorIdentity) {
  const int n = 3;
  const Metric h = Metric::hyperbolic(n);
  Rng rng(9, 0, 0);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXd phi(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) phi(i, j) = rng.normal();
    phi = 0.5 * (phi + phi.transpose()).eval();
    Eigen::MatrixXd cols(2 * n, n);
    cols.topRows(n) = Eigen::MatrixXd::Identity(n, n);
    cols.bottomRows(n) = phi;
    const AltTensor omega = AltTensor::wedge_of(cols);
    for (int r = 0; r < 100; ++r) {
      const AltTensor nu = random_tensor(2 * n, n, rng);
      const double lhs = inner(omega, nu, h);
      const double rhs = metric_volume_reading(wedge(sigma_reflect(omega, h), nu), h);
      EXPECT_NEAR(lhs, rhs, 1e-9 * (1.0 + std::abs(lhs)));
    }
  }
}

TEST(Signature, OracleExamples) {
  const auto k1 = energy_form_signature(1, 2);
  EXPECT_EQ(k1.positives, 2);
  EXPECT_EQ(k1.negatives, 2);
  EXPECT_EQ(k1.zeros, 0);
  const auto k4 = energy_form_signature(4, 2);
  EXPECT_EQ(k4.positives, 1);
  EXPECT_EQ(k4.negatives, 0);
  EXPECT_TRUE(k4.formula_matches());
  const auto k2 = energy_form_signature(2, 2);
  EXPECT_EQ(k2.positives, 2);
  EXPECT_EQ(k2.negatives, 4);
  EXPECT_EQ(k2.formula_positives, 4);
  EXPECT_EQ(k2.formula_negatives, 2);
}

TEST(Signature, TotalsAndNondegeneracy) {
  for (int n = 1; n <= 4; ++n)
    for (int k = 0; k <= 2 * n; ++k) {
      const auto r = energy_form_signature(k, n);
      EXPECT_EQ(r.positives + r.negatives + r.zeros, static_cast<int>(binomial(2 * n, k)));
      EXPECT_EQ(r.zeros, 0);
      EXPECT_EQ(r.ambiguous, 0);
    }
}

TEST(Simple, Examples) {
  const Metric m = Metric::diagonal(2, 1);
  EXPECT_TRUE(is_simple_spacelike(AltTensor::monomial(3, {0, 1}), m));
  EXPECT_FALSE(is_simple_spacelike(AltTensor::monomial(3, {0, 2}), m));
  const Metric e = Metric::diagonal(4, 0);
  const AltTensor w = AltTensor::monomial(4, {0, 1}) + AltTensor::monomial(4, {2, 3});
  EXPECT_FALSE(factor_simple(w).simple);
  EXPECT_FALSE(is_simple_spacelike(w, e));
  EXPECT_FALSE(is_simple_spacelike(AltTensor(4, 2), e));
}

TEST(Simple, FactorizationReproducesTensor) {
  Rng rng(10, 0, 0);
  Eigen::MatrixXd f(6, 3);
  for (int j = 0; j < 3; ++j) f.col(j) = random_vector(6, rng);
  const AltTensor w = AltTensor::wedge_of(f);
  const auto fac = factor_simple(w);
  ASSERT_TRUE(fac.simple);
  ASSERT_EQ(fac.factors.size(), 3u);
  EXPECT_LT((AltTensor::wedge_of(std::span<const Eigen::VectorXd>(fac.factors)) - w).norm(), 1e-9 * w.norm());
}
