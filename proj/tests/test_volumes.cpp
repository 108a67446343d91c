#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "bneck/body.hpp"
#include "bneck/exterior.hpp"
#include "bneck/rng.hpp"
#include "bneck/simplex_lp.hpp"
#include "bneck/sphere_rule.hpp"
#include "bneck/surface.hpp"
#include "bneck/volumes.hpp"

using namespace bneck;

namespace {

constexpr double kPi = std::numbers::pi;

// Brute-force 2D hull membership: z lies in some triangle of cloud points.
bool in_some_triangle(const Eigen::Vector2d& z, const Eigen::MatrixXd& pts) {
  const auto n = pts.cols();
  auto cross = [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a.x() * b.y() - a.y() * b.x(); };
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      for (Eigen::Index k = j + 1; k < n; ++k) {
        const Eigen::Vector2d a = pts.col(i), b = pts.col(j), c = pts.col(k);
        const double d1 = cross(b - a, z - a), d2 = cross(c - b, z - b), d3 = cross(a - c, z - c);
        const bool neg = d1 < 0 || d2 < 0 || d3 < 0, pos = d1 > 0 || d2 > 0 || d3 > 0;
        if (!(neg && pos)) return true;
      }
  return false;
}

}  // namespace

TEST(SphereRule, WeightsAndExactness) {
  for (int n = 1; n <= 4; ++n) {
    const auto rule = default_sphere_rule(n);
    EXPECT_NEAR(rule.total_weight(), sphere_area(n), 1e-10);
    for (double w : rule.weights) EXPECT_GE(w, 0.0);
    if (n == 1) continue;
    // Integral of x_1^2 over S^(n-1) equals area / n.
    double s = 0.0, s4 = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      s += rule.weights[i] * rule.nodes[i][0] * rule.nodes[i][0];
      s4 += rule.weights[i] * std::pow(rule.nodes[i][0], 4);
    }
    EXPECT_NEAR(s, sphere_area(n) / n, 1e-10);
    EXPECT_NEAR(s4, 3.0 * sphere_area(n) / (n * (n + 2.0)), 1e-10);
  }
}

TEST(SphereRule, FramesArePositiveOrthonormal) {
  for (int n = 2; n <= 4; ++n) {
    const auto rule = default_sphere_rule(n);
    for (std::size_t i = 0; i < rule.size(); i += 7) {
      Eigen::MatrixXd m(n, n);
      m.col(0) = rule.nodes[i];
      for (int k = 0; k + 1 < n; ++k) m.col(k + 1) = rule.frames[i][static_cast<std::size_t>(k)];
      EXPECT_NEAR((m.transpose() * m - Eigen::MatrixXd::Identity(n, n)).norm(), 0.0, 1e-12);
      EXPECT_NEAR(m.determinant(), 1.0, 1e-12);
    }
  }
}

TEST(ClosedForm, Examples) {
  EXPECT_DOUBLE_EQ(closed_form_volume("cube", 3), 8.0);
  EXPECT_NEAR(closed_form_volume("ball", 2), kPi, 1e-14);
  EXPECT_NEAR(closed_form_volume("cross", 3), 4.0 / 3.0, 1e-14);
  EXPECT_NEAR(closed_form_volume("ball", 5), 8.0 * kPi * kPi / 15.0, 1e-13);
  EXPECT_THROW(closed_form_volume("torus", 2), std::invalid_argument);
}

TEST(MonteCarlo, CubeAndBall) {
  const auto c = mc_volume(Body::cube(2), 10000, 1);
  EXPECT_NEAR(c.mean, 4.0, 1e-12);  // the bounding box is the cube itself
  const auto b = mc_volume(Body::ball(3), 1000000, 2);
  EXPECT_NEAR(b.mean, 4.0 * kPi / 3.0, 3.0 * b.std_error);
  EXPECT_GT(b.std_error, 0.0);
}

TEST(MonteCarlo, L15AgainstGridQuadrature) {
  // Area of {|x|^1.5 + |y|^1.5 <= 1} by composite midpoint quadrature of 4 (1 - x^1.5)^(1/1.5).
  const int m = 2000000;
  double area = 0.0;
  for (int i = 0; i < m; ++i) {
    const double x = (i + 0.5) / m;
    area += std::pow(1.0 - std::pow(x, 1.5), 1.0 / 1.5);
  }
  area *= 4.0 / m;
  const auto est = mc_volume(Body::lp_ball(1.5, 2), 400000, 3);
  EXPECT_NEAR(est.mean, area, 3.0 * est.std_error);
  EXPECT_NEAR(*Body::lp_ball(1.5, 2).exact_volume(), area, 1e-6);
}

TEST(MonteCarlo, Deterministic) {
  const auto a = mc_volume(Body::lp_ball(3.0, 3), 50000, 9);
  const auto b = mc_volume(Body::lp_ball(3.0, 3), 50000, 9);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std_error, b.std_error);
}

TEST(Mahler, ClosedForms) {
  EXPECT_NEAR(mahler_volume(Body::cube(2), 1, 1).mahler.mean, 8.0, 1e-12);
  EXPECT_NEAR(mahler_volume(Body::ball(2), 1, 1).mahler.mean, kPi * kPi, 1e-12);
  EXPECT_NEAR(mahler_volume(Body::cube(3), 1, 1).mahler.mean, 32.0 / 3.0, 1e-12);
}

TEST(Mahler, ProductOfCubeAndCross) {
  // C_1 x C_2° = conv(+-(1, +-1, 0), +-(1, 0, +-1)).
  Eigen::MatrixXd v(4, 3);
  v << 1, 1, 0, 1, -1, 0, 1, 0, 1, 1, 0, -1;
  const auto m = mahler_volume(Body::polytope_from_vertices(v), 400000, 4);
  EXPECT_NEAR(m.mahler.mean, 32.0 / 3.0, 3.0 * m.mahler.std_error);
}

TEST(Hull, CentroidAndBoundingBox) {
  Eigen::MatrixXd pts(2, 3);
  pts << 0, 1, 0, 0, 0, 1;
  EXPECT_EQ(hull_membership(Eigen::Vector2d(1.0 / 3, 1.0 / 3), pts), Membership::kInside);
  EXPECT_EQ(hull_membership(Eigen::Vector2d(2.0, 0.5), pts), Membership::kOutside);
  EXPECT_EQ(hull_membership(Eigen::Vector2d(0.6, 0.6), pts), Membership::kOutside);
}

TEST(Hull, AgreesWithTriangleOracle) {
  Rng rng(5, 0, 0);
  Eigen::MatrixXd pts(2, 12);
  for (int j = 0; j < 12; ++j) pts.col(j) = Eigen::Vector2d(rng.normal(), rng.normal());
  const HullCloud hull(pts);
  for (int i = 0; i < 500; ++i) {
    const Eigen::Vector2d z(rng.uniform(-2.5, 2.5), rng.uniform(-2.5, 2.5));
    const auto m = hull.contains(z);
    ASSERT_NE(m, Membership::kIndeterminate);
    EXPECT_EQ(m == Membership::kInside, in_some_triangle(z, pts)) << z.transpose();
  }
}

TEST(Lp, InfeasibleAndUnbounded) {
  Eigen::MatrixXd a(1, 2);
  a << 1, 1;
  Eigen::VectorXd b(1), c(2);
  b << -1;
  c << 1, 1;
  EXPECT_EQ(solve_lp(a, b, c).status, LpStatus::kInfeasible);
  b << 1;
  c << -1, 0;
  a << 1, -1;
  EXPECT_EQ(solve_lp(a, b, c).status, LpStatus::kUnbounded);
}

TEST(DirectedVolume, SegmentHandCase) {
  const auto samples = kplus_samples(Body::cube(1), point_pair_rule());
  const AltTensor v = directed_volume_surface(samples);
  ASSERT_EQ(v.degree(), 1);
  EXPECT_DOUBLE_EQ(v[0], 2.0);
  EXPECT_DOUBLE_EQ(v[1], 2.0);
  EXPECT_DOUBLE_EQ(energy(v, Metric::hyperbolic(1)), 4.0);
}

TEST(DirectedVolume, BallEnergies) {
  for (int n = 2; n <= 4; ++n) {
    const double v = unit_ball_volume(n);
    EXPECT_NEAR(kplus_energy(Body::ball(n), default_sphere_rule(n)), v * v, 1e-8 * v * v) << n;
  }
}

TEST(DirectedVolume, L4StableUnderRefinement) {
  const auto rule = default_sphere_rule(2);
  const double coarse = kplus_energy(Body::lp_ball(4.0, 2), rule);
  const double fine = kplus_energy(Body::lp_ball(4.0, 2), refined_rule(rule));
  EXPECT_NEAR(coarse, fine, 1e-6 * fine);
}

TEST(Diamond, SegmentIsSquare) {
  ProductSampling s;
  s.samples = 5000;
  const auto d = diamond_volume(Body::cube(1), 2, s);
  EXPECT_DOUBLE_EQ(d.estimate.mean, 4.0);
  EXPECT_EQ(d.indeterminate, 0);
}

TEST(Diamond, DiscBelowMahlerAndNearClosedForm) {
  ProductSampling s;
  s.samples = 30000;
  s.seed = 7;
  const auto d = diamond_volume(Body::ball(2), 128, s);
  EXPECT_LE(d.estimate.mean, d.mahler.mean);
  const double exact = 2.0 * kPi * kPi / 3.0;
  EXPECT_NEAR(d.estimate.mean, exact, 4.0 * d.estimate.std_error + 0.03 * exact);
}

TEST(Diamond, RefinementDoesNotShrinkEstimate) {
  ProductSampling s;
  s.samples = 20000;
  s.seed = 11;
  const auto coarse = diamond_volume(Body::lp_ball(4.0, 2), 8, s);
  const auto fine = diamond_volume(Body::lp_ball(4.0, 2), 64, s);
  EXPECT_GE(fine.estimate.mean, coarse.estimate.mean - 3.0 * fine.estimate.std_error);
}

TEST(Heart, SegmentHandCase) {
  ProductSampling s;
  s.samples = 5000;
  const auto h = heart_volume(Body::cube(1), point_pair_rule(), s);
  EXPECT_DOUBLE_EQ(h.energy, 4.0);
  EXPECT_DOUBLE_EQ(h.energy_route_metric.mean, 2.0);
  EXPECT_DOUBLE_EQ(h.energy_route.mean, 4.0);
}

TEST(Heart, RoutesAgreeForL3) {
  ProductSampling s;
  s.samples = 40000;
  s.seed = 3;
  const auto h = heart_volume(Body::lp_ball(3.0, 2), default_sphere_rule(2), s);
  EXPECT_NEAR(h.mc_route.mean, h.energy_route.mean, 3.0 * h.mc_route.std_error);
  EXPECT_EQ(h.indeterminate, 0);
}

TEST(Heart, DiscBothRoutesNearClosedForm) {
  ProductSampling s;
  s.samples = 40000;
  s.seed = 4;
  const auto h = heart_volume(Body::ball(2), default_sphere_rule(2), s);
  const double exact = 2.0 * kPi * kPi / 3.0;
  EXPECT_NEAR(h.energy_route.mean, exact, 1e-8 * exact);
  EXPECT_NEAR(h.mc_route.mean, exact, 0.02 * exact);
}

TEST(HeartLevel, BallMembershipClosedForm) {
  // For the ball, z = (a, b) is in the join iff |a + b| / 2 + |a - b| / 2 <= 1.
  Rng rng(8, 0, 0);
  const Body ball = Body::ball(2);
  for (int i = 0; i < 200; ++i) {
    Eigen::VectorXd z(4);
    for (int j = 0; j < 4; ++j) z[j] = rng.uniform(-1, 1);
    const auto t = heart_level(ball, z);
    ASSERT_TRUE(t.converged);
    const double oracle = 0.5 * ((z.head(2) + z.tail(2)).norm() + (z.head(2) - z.tail(2)).norm());
    EXPECT_NEAR(t.level, oracle, 1e-8);
  }
}

TEST(Compare, HeartWithinDiamond) {
  ProductSampling s;
  s.samples = 20000;
  s.seed = 5;
  for (double p : {1.5, 4.0}) {
    const auto c = compare_heart_diamond(Body::lp_ball(p, 2), 128, s, 0.005);
    EXPECT_TRUE(c.holds) << p;
    EXPECT_LE(c.heart.mean, c.diamond.mean + 3.0 * c.combined_error + c.allowance);
  }
}

TEST(Identity, SegmentExact) {
  ProductSampling s;
  s.samples = 2000;
  const auto id = central_identity(Body::cube(1), point_pair_rule(), s);
  EXPECT_DOUBLE_EQ(id.energy, 4.0);
  EXPECT_NEAR(id.lhs, 4.0, 1e-12);
}
