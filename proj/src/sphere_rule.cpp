#include "bneck/sphere_rule.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace bneck {
namespace {

constexpr double kPi = std::numbers::pi;

void push_node(SphereRule& rule, const Eigen::VectorXd& u, double w) {
  rule.nodes.push_back(u);
  rule.weights.push_back(w);
  rule.frames.push_back(tangent_frame(u));
  rule.orientation.push_back(1);
}

}  // namespace

double SphereRule::total_weight() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

std::string SphereRule::describe() const {
  std::ostringstream os;
  os << "S^" << ambient_dim - 1 << " rule, " << size() << " nodes, exact to degree " << exact_degree;
  return os.str();
}

double sphere_area(int ambient_dim) {
  if (ambient_dim < 1) throw std::invalid_argument("sphere_area: dimension must be >= 1");
  const double n = ambient_dim;
  return 2.0 * std::pow(kPi, n / 2.0) / std::tgamma(n / 2.0);
}

void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights) {
  if (count < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  nodes.assign(static_cast<std::size_t>(count), 0.0);
  weights.assign(static_cast<std::size_t>(count), 0.0);
  for (int i = 0; i < (count + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= count; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = count * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= count; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = count * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(count - 1 - i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(count - 1 - i)] = w;
  }
}

std::vector<Eigen::VectorXd> tangent_frame(const Eigen::VectorXd& u) {
  const auto n = u.size();
  std::vector<Eigen::VectorXd> frame;
  if (n <= 1) return frame;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(u);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  if (q.col(0).dot(u) < 0) q.col(0) = -q.col(0);
  q.col(0) = u;
  if (q.determinant() < 0) q.col(1) = -q.col(1);
  for (Eigen::Index i = 1; i < n; ++i) frame.emplace_back(q.col(i));
  return frame;
}

SphereRule point_pair_rule() {
  SphereRule rule;
  rule.ambient_dim = 1;
  for (int s : {1, -1}) {
    rule.nodes.push_back(Eigen::VectorXd::Constant(1, s));
    rule.weights.push_back(1.0);
    rule.frames.emplace_back();
    rule.orientation.push_back(s);
  }
  rule.exact_degree = 1;
  rule.counts = {2};
  return rule;
}

SphereRule circle_rule(int count) {
  if (count < 3) throw std::invalid_argument("circle_rule: need at least 3 nodes");
  SphereRule rule;
  rule.ambient_dim = 2;
  const double w = 2.0 * kPi / count;
  for (int k = 0; k < count; ++k) {
    const double th = w * (k + 0.5);
    Eigen::Vector2d u(std::cos(th), std::sin(th));
    rule.nodes.emplace_back(u);
    rule.weights.push_back(w);
    rule.frames.push_back({Eigen::VectorXd(Eigen::Vector2d(-u.y(), u.x()))});
    rule.orientation.push_back(1);
  }
  rule.exact_degree = count - 1;
  rule.counts = {count};
  return rule;
}

SphereRule sphere2_rule(int polar_count, int azimuth_count) {
  if (polar_count < 1 || azimuth_count < 3) throw std::invalid_argument("sphere2_rule: node counts too small");
  SphereRule rule;
  rule.ambient_dim = 3;
  std::vector<double> z, wz;
  gauss_legendre(polar_count, z, wz);
  const double dphi = 2.0 * kPi / azimuth_count;
  for (int i = 0; i < polar_count; ++i) {
    const double ct = z[static_cast<std::size_t>(i)];
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    for (int j = 0; j < azimuth_count; ++j) {
      const double ph = dphi * (j + 0.5);
      Eigen::Vector3d u(st * std::cos(ph), st * std::sin(ph), ct);
      push_node(rule, u, wz[static_cast<std::size_t>(i)] * dphi);
    }
  }
  rule.exact_degree = std::min(2 * polar_count - 1, azimuth_count - 1);
  rule.counts = {polar_count, azimuth_count};
  return rule;
}

SphereRule sphere3_rule(int t_count, int angle_count) {
  if (t_count < 1 || angle_count < 3) throw std::invalid_argument("sphere3_rule: node counts too small");
  SphereRule rule;
  rule.ambient_dim = 4;
  std::vector<double> s, ws;
  gauss_legendre(t_count, s, ws);
  const double dxi = 2.0 * kPi / angle_count;
  for (int i = 0; i < t_count; ++i) {
    const double t = 0.5 * (s[static_cast<std::size_t>(i)] + 1.0);
    const double wt = 0.5 * ws[static_cast<std::size_t>(i)];
    const double c = std::sqrt(1.0 - t), sn = std::sqrt(t);
    for (int j = 0; j < angle_count; ++j) {
      const double x1 = dxi * (j + 0.5);
      for (int k = 0; k < angle_count; ++k) {
        const double x2 = dxi * (k + 0.5);
        Eigen::Vector4d u(c * std::cos(x1), c * std::sin(x1), sn * std::cos(x2), sn * std::sin(x2));
        push_node(rule, u, 0.5 * wt * dxi * dxi);
      }
    }
  }
  rule.exact_degree = std::min(4 * t_count - 2, angle_count - 1);
  rule.counts = {t_count, angle_count};
  return rule;
}

SphereRule default_sphere_rule(int ambient_dim, int level) {
  if (level < 0 || level > 2) throw std::invalid_argument("default_sphere_rule: level must be 0, 1 or 2");
  switch (ambient_dim) {
    case 1: return point_pair_rule();
    case 2: return circle_rule(std::array{64, 256, 512}[static_cast<std::size_t>(level)]);
    case 3: {
      const int p = std::array{12, 32, 48}[static_cast<std::size_t>(level)];
      return sphere2_rule(p, 2 * p);
    }
    case 4: {
      const int t = std::array{6, 12, 16}[static_cast<std::size_t>(level)];
      return sphere3_rule(t, std::array{16, 32, 48}[static_cast<std::size_t>(level)]);
    }
    default: throw std::invalid_argument("default_sphere_rule: dimensions 1..4 only");
  }
}

SphereRule refined_rule(const SphereRule& rule) {
  switch (rule.ambient_dim) {
    case 1: return point_pair_rule();
    case 2: return circle_rule(2 * rule.counts.at(0));
    case 3: return sphere2_rule(2 * rule.counts.at(0), 2 * rule.counts.at(1));
    case 4: return sphere3_rule(2 * rule.counts.at(0), 2 * rule.counts.at(1));
    default: throw std::invalid_argument("refined_rule: unsupported dimension");
  }
}

std::vector<Eigen::VectorXd> sphere_point_set(int ambient_dim, int count) {
  std::vector<Eigen::VectorXd> pts;
  switch (ambient_dim) {
    case 1:
      pts.push_back(Eigen::VectorXd::Constant(1, 1.0));
      pts.push_back(Eigen::VectorXd::Constant(1, -1.0));
      return pts;
    case 2: {
      const auto rule = circle_rule(std::max(count, 3));
      return rule.nodes;
    }
    case 3: {
      if (count < 4) throw std::invalid_argument("sphere_point_set: need at least 4 points on S^2");
      const double golden = kPi * (3.0 - std::sqrt(5.0));
      for (int i = 0; i < count; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / count;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double ph = golden * i;
        pts.emplace_back(Eigen::Vector3d(r * std::cos(ph), r * std::sin(ph), z));
      }
      return pts;
    }
    case 4: {
      const int side = std::max(3, static_cast<int>(std::cbrt(count / 2.0)));
      return sphere3_rule(std::max(1, side / 2), 2 * side).nodes;
    }
    default: throw std::invalid_argument("sphere_point_set: dimensions 1..4 only");
  }
}

SphereRule point_set_rule(int ambient_dim, int count) {
  if (ambient_dim == 1) return point_pair_rule();
  SphereRule rule;
  rule.ambient_dim = ambient_dim;
  const auto pts = sphere_point_set(ambient_dim, count);
  const double w = sphere_area(ambient_dim) / static_cast<double>(pts.size());
  for (const auto& u : pts) push_node(rule, u, w);
  rule.exact_degree = 0;
  rule.counts = {static_cast<int>(pts.size())};
  return rule;
}

}  // namespace bneck
