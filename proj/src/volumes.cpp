#include "bneck/volumes.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "bneck/alt_tensor.hpp"
#include "bneck/exterior.hpp"
#include "bneck/metric.hpp"
#include "bneck/newton.hpp"
#include "bneck/parallel.hpp"
#include "bneck/rng.hpp"
#include "bneck/surface.hpp"

namespace bneck {

const char* to_string(VolumeMethod method) {
  switch (method) {
    case VolumeMethod::kClosedForm: return "closed-form";
    case VolumeMethod::kMonteCarlo: return "mc";
    case VolumeMethod::kQuadrature: return "quadrature";
  }
  return "unknown";
}

const char* to_string(VolumeConvention convention) {
  return convention == VolumeConvention::kLebesgue ? "lebesgue" : "metric-normalized";
}

VolumeEstimate VolumeEstimate::exact(double value, VolumeConvention convention) {
  VolumeEstimate v;
  v.mean = value;
  v.convention = convention;
  return v;
}

nlohmann::json VolumeEstimate::to_json() const {
  return {{"estimate", mean},
          {"stderr", std_error},
          {"samples", samples},
          {"method", to_string(method)},
          {"convention", to_string(convention)}};
}

namespace {

constexpr std::uint64_t kStreamPrimalVolume = 1;
constexpr std::uint64_t kStreamPolarVolume = 2;
constexpr std::uint64_t kStreamProduct = 3;
constexpr std::size_t kChunk = 1024;
constexpr long kMaxRejections = 1000000;

Eigen::VectorXd join(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  Eigen::VectorXd z(x.size() + y.size());
  z << x, y;
  return z;
}

bool chart_is_polar(const Body& body) {
  return (body.kind() == BodyKind::kLpBall && body.exponent() < 2.0) || body.kind() == BodyKind::kNumericPolar;
}

Eigen::VectorXd draw_in(const Body& body, const Eigen::VectorXd& half, Rng& rng) {
  Eigen::VectorXd x(half.size());
  for (long attempt = 0; attempt < kMaxRejections; ++attempt) {
    for (Eigen::Index k = 0; k < half.size(); ++k) x[k] = rng.uniform(-half[k], half[k]);
    if (body.gauge(x) <= 1.0) return x;
  }
  throw std::runtime_error("rejection sampling: acceptance rate too small");
}

// Uniform point of K x K° for sample index i.
struct ProductSampler {
  Body body, polar;
  Eigen::VectorXd half_body, half_polar;
  std::uint64_t seed;

  ProductSampler(const Body& k, std::uint64_t s)
      : body(k), polar(k.polar()), half_body(k.half_widths()), half_polar(polar.half_widths()), seed(s) {}

  Eigen::VectorXd draw(std::uint64_t i) const {
    Rng rng(seed, kStreamProduct, i);
    const Eigen::VectorXd x = draw_in(body, half_body, rng);
    const Eigen::VectorXd y = draw_in(polar, half_polar, rng);
    return join(x, y);
  }
};

VolumeEstimate product(const VolumeEstimate& a, const VolumeEstimate& b) {
  VolumeEstimate out;
  out.mean = a.mean * b.mean;
  out.std_error = std::hypot(a.mean * b.std_error, b.mean * a.std_error);
  out.samples = a.samples + b.samples;
  out.method = (a.method == VolumeMethod::kClosedForm && b.method == VolumeMethod::kClosedForm)
                   ? VolumeMethod::kClosedForm
                   : VolumeMethod::kMonteCarlo;
  return out;
}

// D = M f with f the hit fraction; error from both factors.
VolumeEstimate scaled_fraction(const VolumeEstimate& m, long hits, long trials) {
  VolumeEstimate out;
  out.method = VolumeMethod::kMonteCarlo;
  out.samples = trials;
  if (trials <= 0) return out;
  const double f = static_cast<double>(hits) / static_cast<double>(trials);
  out.mean = m.mean * f;
  const double var_f = f * (1.0 - f) / static_cast<double>(trials);
  out.std_error = std::sqrt(m.mean * m.mean * var_f + f * f * m.std_error * m.std_error);
  return out;
}

}  // namespace

double unit_ball_volume(int n) {
  if (n < 1) throw std::invalid_argument("unit_ball_volume: n must be >= 1");
  return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

double closed_form_volume(const std::string& name, int n) {
  if (n < 1) throw std::invalid_argument("closed_form_volume: n must be >= 1");
  if (name == "cube") return std::pow(2.0, n);
  if (name == "cross") return std::pow(2.0, n) / std::tgamma(n + 1.0);
  if (name == "ball") return unit_ball_volume(n);
  throw std::invalid_argument("closed_form_volume: unknown body '" + name + "' (expected cube, cross or ball)");
}

VolumeEstimate mc_volume(const Body& body, long samples, std::uint64_t seed, std::uint64_t stream) {
  if (samples <= 0) throw std::invalid_argument("mc_volume: sample count must be positive");
  const Eigen::VectorXd half = body.half_widths();
  const double box = (2.0 * half).prod();
  if (!(box > 0.0) || !std::isfinite(box)) throw std::invalid_argument("mc_volume: zero-volume or unbounded box");
  const auto total = static_cast<std::size_t>(samples);
  const std::size_t chunks = (total + kChunk - 1) / kChunk;
  std::vector<long> hits(chunks, 0);
  parallel_chunks(chunks, [&](std::size_t c) {
    Eigen::VectorXd x(half.size());
    const std::size_t end = std::min(total, (c + 1) * kChunk);
    long h = 0;
    for (std::size_t i = c * kChunk; i < end; ++i) {
      Rng rng(seed, stream, i);
      for (Eigen::Index k = 0; k < half.size(); ++k) x[k] = rng.uniform(-half[k], half[k]);
      if (body.gauge(x) <= 1.0) ++h;
    }
    hits[c] = h;
  });
  long h = 0;
  for (long v : hits) h += v;
  const double f = static_cast<double>(h) / static_cast<double>(samples);
  VolumeEstimate est;
  est.mean = box * f;
  est.std_error = box * std::sqrt(f * (1.0 - f) / static_cast<double>(samples));
  est.samples = samples;
  est.method = VolumeMethod::kMonteCarlo;
  return est;
}

VolumeEstimate volume(const Body& body, long samples, std::uint64_t seed, std::uint64_t stream) {
  if (auto v = body.exact_volume()) return VolumeEstimate::exact(*v);
  return mc_volume(body, samples, seed, stream);
}

MahlerReport mahler_volume(const Body& body, long samples, std::uint64_t seed) {
  MahlerReport r;
  r.body = volume(body, samples, seed, kStreamPrimalVolume);
  r.polar = volume(body.polar(), samples, seed, kStreamPolarVolume);
  r.mahler = product(r.body, r.polar);
  return r;
}

MahlerReport mahler_volume_mc(const Body& body, long samples, std::uint64_t seed) {
  MahlerReport r;
  r.body = mc_volume(body, samples, seed, kStreamPrimalVolume);
  r.polar = mc_volume(body.polar(), samples, seed, kStreamPolarVolume);
  r.mahler = product(r.body, r.polar);
  return r;
}

HullCloud::HullCloud(const Eigen::MatrixXd& points, double tolerance) : points_(points) {
  if (points.cols() < 1 || points.rows() < 1) throw std::invalid_argument("HullCloud: empty cloud");
  system_.resize(points.rows() + 1, points.cols());
  system_.topRows(points.rows()) = points;
  system_.bottomRows(1).setOnes();
  lo_ = points.rowwise().minCoeff();
  hi_ = points.rowwise().maxCoeff();
  options_.tolerance = tolerance;
}

Membership HullCloud::contains(const Eigen::VectorXd& z) const {
  if (z.size() != points_.rows()) throw std::invalid_argument("HullCloud::contains: dimension mismatch");
  const double slack = options_.tolerance * std::max(1.0, z.cwiseAbs().maxCoeff());
  for (Eigen::Index k = 0; k < z.size(); ++k)
    if (z[k] < lo_[k] - slack || z[k] > hi_[k] + slack) return Membership::kOutside;
  Eigen::VectorXd rhs(z.size() + 1);
  rhs << z, 1.0;
  const auto res = solve_lp(system_, rhs, Eigen::VectorXd::Zero(system_.cols()), options_);
  switch (res.status) {
    case LpStatus::kOptimal: return Membership::kInside;
    case LpStatus::kInfeasible: return Membership::kOutside;
    default: return Membership::kIndeterminate;
  }
}

Membership hull_membership(const Eigen::VectorXd& z, const Eigen::MatrixXd& cloud, double tolerance) {
  return HullCloud(cloud, tolerance).contains(z);
}

Eigen::MatrixXd diamond_cloud(const Body& body, int nodes_per_sheet) {
  const SphereRule rule = point_set_rule(body.dim(), nodes_per_sheet);
  const auto plus = kplus_samples(body, rule);
  const auto minus = sigma_samples(plus);
  Eigen::MatrixXd cloud(2 * body.dim(), static_cast<Eigen::Index>(plus.size() + minus.size()));
  cloud << sample_points(plus), sample_points(minus);
  return cloud;
}

nlohmann::json DiamondReport::to_json() const {
  return {{"diamond", estimate.to_json()},
          {"mahler", mahler.to_json()},
          {"inside", inside},
          {"indeterminate", indeterminate},
          {"nodes_per_sheet", nodes_per_sheet},
          {"indeterminate_warning", indeterminate_warning}};
}

DiamondReport diamond_volume(const Body& body, int nodes_per_sheet, const ProductSampling& sampling) {
  if (sampling.samples <= 0) throw std::invalid_argument("diamond_volume: sample count must be positive");
  const HullCloud hull(diamond_cloud(body, nodes_per_sheet));
  const ProductSampler sampler(body, sampling.seed);
  DiamondReport rep;
  rep.nodes_per_sheet = nodes_per_sheet;
  rep.mahler = mahler_volume(body, sampling.volume_samples, sampling.seed).mahler;

  const auto total = static_cast<std::size_t>(sampling.samples);
  constexpr std::size_t chunk = 256;
  const std::size_t chunks = (total + chunk - 1) / chunk;
  std::vector<long> inside(chunks, 0), indet(chunks, 0);
  parallel_chunks(chunks, [&](std::size_t c) {
    const std::size_t end = std::min(total, (c + 1) * chunk);
    for (std::size_t i = c * chunk; i < end; ++i) {
      const auto m = hull.contains(sampler.draw(i));
      if (m == Membership::kInside) ++inside[c];
      if (m == Membership::kIndeterminate) ++indet[c];
    }
  });
  for (std::size_t c = 0; c < chunks; ++c) {
    rep.inside += inside[c];
    rep.indeterminate += indet[c];
  }
  rep.estimate = scaled_fraction(rep.mahler, rep.inside, sampling.samples - rep.indeterminate);
  rep.indeterminate_warning = rep.indeterminate > sampling.samples / 100;
  return rep;
}

HeartTest heart_level(const Body& body, const Eigen::VectorXd& z) {
  const int n = body.dim();
  if (z.size() != 2 * n) throw std::invalid_argument("heart_level: point must lie in V x V*");
  if (n == 1) {
    // K = [-r, r]: the minimizer is p = (a + b r^2) / 2 in closed form.
    const double r = body.half_widths()[0];
    return {std::max(std::abs(z[0]) / r, std::abs(z[1]) * r), true};
  }
  // The region is symmetric under swapping K with its polar and x with y.
  const bool swap = chart_is_polar(body);
  const Body chart = swap ? body.polar() : body;
  const Eigen::VectorXd a = swap ? z.tail(n) : z.head(n);
  const Eigen::VectorXd b = swap ? z.head(n) : z.tail(n);
  const double scale = std::max(1e-300, z.norm());

  auto phi = [&](const Eigen::VectorXd& x) {
    const double g = chart.gauge(x);
    return 0.5 * g * g;
  };
  auto h = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    if (x.norm() <= 1e-14 * scale) return Eigen::VectorXd::Zero(n);
    return chart.gauge(x) * chart.gauge_gradient(x);
  };
  auto hphi = [&](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
    if (x.norm() <= 1e-14 * scale) return Eigen::MatrixXd::Identity(n, n);
    const Eigen::VectorXd g = chart.gauge_gradient(x);
    return g * g.transpose() + chart.gauge(x) * chart.gauge_hessian(x);
  };
  SmoothObjective obj;
  obj.value = [&](const Eigen::VectorXd& p) { return phi(p) + phi(a - p) - b.dot(p); };
  obj.gradient = [&](const Eigen::VectorXd& p) -> Eigen::VectorXd { return h(p) - h(a - p) - b; };
  obj.hessian = [&](const Eigen::VectorXd& p) -> Eigen::MatrixXd { return hphi(p) + hphi(a - p); };
  const auto res = newton_minimize(obj, 0.5 * (a + b), 1e-12 * scale, 100);
  HeartTest t;
  t.level = chart.gauge(res.x) + chart.gauge(a - res.x);
  t.converged = res.converged || res.gradient_norm <= 1e-7 * scale;
  return t;
}

double kplus_energy(const Body& body, const SphereRule& rule) {
  return energy(directed_volume_surface(kplus_samples(body, rule)), Metric::hyperbolic(body.dim()));
}

nlohmann::json HeartReport::to_json() const {
  return {{"energy", energy},
          {"energy_route_metric", energy_route_metric.to_json()},
          {"energy_route", energy_route.to_json()},
          {"mc_route", mc_route.to_json()},
          {"indeterminate", indeterminate},
          {"rule", rule}};
}

namespace {

struct PairedCounts {
  long heart = 0, diamond = 0, heart_only = 0, heart_indet = 0, diamond_indet = 0;
};

PairedCounts count_product(const Body& body, const ProductSampling& sampling, const HullCloud* hull, bool heart) {
  const ProductSampler sampler(body, sampling.seed);
  const auto total = static_cast<std::size_t>(sampling.samples);
  constexpr std::size_t chunk = 256;
  const std::size_t chunks = (total + chunk - 1) / chunk;
  std::vector<PairedCounts> parts(chunks);
  parallel_chunks(chunks, [&](std::size_t c) {
    const std::size_t end = std::min(total, (c + 1) * chunk);
    PairedCounts& pc = parts[c];
    for (std::size_t i = c * chunk; i < end; ++i) {
      const Eigen::VectorXd z = sampler.draw(i);
      bool in_heart = false;
      if (heart) {
        const auto t = heart_level(body, z);
        if (!t.converged) ++pc.heart_indet;
        else if (t.level <= 1.0) in_heart = true, ++pc.heart;
      }
      if (hull) {
        const auto m = hull->contains(z);
        if (m == Membership::kInside) ++pc.diamond;
        else if (m == Membership::kIndeterminate) ++pc.diamond_indet;
        else if (in_heart) ++pc.heart_only;
      }
    }
  });
  PairedCounts out;
  for (const auto& p : parts) {
    out.heart += p.heart;
    out.diamond += p.diamond;
    out.heart_only += p.heart_only;
    out.heart_indet += p.heart_indet;
    out.diamond_indet += p.diamond_indet;
  }
  return out;
}

}  // namespace

HeartReport heart_volume(const Body& body, const SphereRule& rule, const ProductSampling& sampling) {
  const int n = body.dim();
  HeartReport rep;
  rep.rule = rule.describe();
  rep.energy = kplus_energy(body, rule);
  const double c = binomial(2 * n, n);
  rep.energy_route_metric = VolumeEstimate::exact(rep.energy / c, VolumeConvention::kMetricNormalized);
  rep.energy_route_metric.method = VolumeMethod::kQuadrature;
  rep.energy_route = VolumeEstimate::exact(rep.energy / c * std::pow(2.0, n));
  rep.energy_route.method = VolumeMethod::kQuadrature;
  const auto m = mahler_volume(body, sampling.volume_samples, sampling.seed).mahler;
  const auto counts = count_product(body, sampling, nullptr, true);
  rep.indeterminate = counts.heart_indet;
  rep.mc_route = scaled_fraction(m, counts.heart, sampling.samples - counts.heart_indet);
  return rep;
}

nlohmann::json HeartDiamondComparison::to_json() const {
  return {{"heart", heart.to_json()},           {"diamond", diamond.to_json()},
          {"heart_not_diamond", heart_not_diamond}, {"gap", gap},
          {"combined_error", combined_error},   {"allowance", allowance},
          {"holds", holds}};
}

HeartDiamondComparison compare_heart_diamond(const Body& body, int nodes_per_sheet, const ProductSampling& sampling,
                                             double relative_allowance) {
  const HullCloud hull(diamond_cloud(body, nodes_per_sheet));
  const auto m = mahler_volume(body, sampling.volume_samples, sampling.seed).mahler;
  const auto counts = count_product(body, sampling, &hull, true);
  HeartDiamondComparison cmp;
  cmp.heart = scaled_fraction(m, counts.heart, sampling.samples - counts.heart_indet);
  cmp.diamond = scaled_fraction(m, counts.diamond, sampling.samples - counts.diamond_indet);
  cmp.heart_not_diamond = counts.heart_only;
  cmp.gap = cmp.diamond.mean - cmp.heart.mean;
  cmp.combined_error = std::hypot(cmp.heart.std_error, cmp.diamond.std_error);
  cmp.allowance = relative_allowance * cmp.diamond.mean;
  cmp.holds = cmp.heart.mean <= cmp.diamond.mean + 3.0 * cmp.combined_error + cmp.allowance;
  return cmp;
}

nlohmann::json IdentityReport::to_json() const {
  return {{"n", n},     {"energy", energy},         {"heart", heart.to_json()},
          {"lhs", lhs}, {"lhs_stderr", lhs_error}, {"relative_gap", relative_gap}};
}

IdentityReport central_identity(const Body& body, const SphereRule& rule, const ProductSampling& sampling) {
  const auto h = heart_volume(body, rule, sampling);
  IdentityReport rep;
  rep.n = body.dim();
  rep.energy = h.energy;
  rep.heart = h.mc_route;
  const double factor = binomial(2 * rep.n, rep.n) * std::pow(2.0, -rep.n);
  rep.lhs = factor * h.mc_route.mean;
  rep.lhs_error = factor * h.mc_route.std_error;
  rep.relative_gap = std::abs(rep.lhs - rep.energy) / std::abs(rep.energy);
  return rep;
}

double diamond_ball_bias(int n, int nodes_per_sheet, const ProductSampling& sampling) {
  const double v = unit_ball_volume(n);
  const double exact = v * v * std::pow(2.0, n) / binomial(2 * n, n);
  const auto rep = diamond_volume(Body::ball(n), nodes_per_sheet, sampling);
  return (exact - rep.estimate.mean) / exact;
}

}  // namespace bneck
