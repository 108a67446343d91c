#include "bneck/property_suite.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "bneck/body.hpp"
#include "bneck/exterior.hpp"
#include "bneck/lie.hpp"
#include "bneck/neck.hpp"
#include "bneck/rng.hpp"
#include "bneck/simplex_lp.hpp"
#include "bneck/surface.hpp"
#include "bneck/volumes.hpp"

namespace bneck {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

bool close(double x, double y, double rel) { return std::abs(x - y) <= rel * std::max(std::abs(x), std::abs(y)); }

AltTensor random_tensor(int dim, int degree, Rng& rng) {
  AltTensor t(dim, degree);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.normal();
  return t;
}

}  // namespace

std::vector<PropertyResult> run_property_suite(std::uint64_t seed) {
  std::vector<PropertyResult> out;
  auto check = [&](const std::string& name, const std::function<PropertyResult()>& body) {
    try {
      PropertyResult r = body();
      r.name = name;
      out.push_back(std::move(r));
    } catch (const std::exception& e) {
      out.push_back({name, false, std::string("exception: ") + e.what()});
    }
  };
  const double pi = std::numbers::pi;

  check("mahler_closed_forms", [&] {
    const double c3 = mahler_volume(Body::cube(3), 1, seed).mahler.mean;
    const double b2 = mahler_volume(Body::ball(2), 1, seed).mahler.mean;
    return PropertyResult{"", close(c3, 32.0 / 3.0, 1e-12) && close(b2, pi * pi, 1e-12),
                          "M(C_3) = " + num(c3) + ", M(B_2) = " + num(b2)};
  });

  check("polar_involution", [&] {
    Rng rng(seed, 11, 0);
    const Body k = Body::lp_ball(3.0, 3);
    const Body kpp = k.polar().polar();
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      Eigen::VectorXd x(3);
      for (int j = 0; j < 3; ++j) x[j] = rng.normal();
      worst = std::max(worst, std::abs(k.gauge(x) - kpp.gauge(x)) / k.gauge(x));
    }
    return PropertyResult{"", worst < 1e-9, "max relative gauge change " + num(worst)};
  });

  check("hodge_star_energy", [&] {
    const Metric m = Metric::diagonal(3, 2);
    Rng rng(seed, 12, 0);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const AltTensor w = random_tensor(5, 2, rng);
      const AltTensor s = hodge_star(w, m);
      worst = std::max(worst, std::abs(energy(s, m) - energy(w, m)) / std::max(1.0, std::abs(energy(w, m))));
    }
    return PropertyResult{"", worst < 1e-10, "Q(*w) against (-1)^b Q(w), max deviation " + num(worst)};
  });

  check("hand_case_n1", [&] {
    const Body seg = Body::cube(1);
    const double q = kplus_energy(seg, point_pair_rule());
    ProductSampling s;
    s.samples = 2000;
    s.seed = seed;
    const double d = diamond_volume(seg, 2, s).estimate.mean;
    return PropertyResult{"", close(q, 4.0, 1e-14) && close(d, 4.0, 1e-12),
                          "Q(vecvol K+) = " + num(q) + ", D = " + num(d)};
  });

  check("ball_energy", [&] {
    const double q = kplus_energy(Body::ball(2), default_sphere_rule(2));
    return PropertyResult{"", close(q, pi * pi, 1e-9), "Q(vecvol B_2+) = " + num(q)};
  });

  check("lp_small", [&] {
    // max x + y subject to x + 2y <= 4, 3x + y <= 6, as min -x - y with slacks.
    Eigen::MatrixXd a(2, 4);
    a << 1, 2, 1, 0, 3, 1, 0, 1;
    Eigen::VectorXd b(2), c(4);
    b << 4, 6;
    c << -1, -1, 0, 0;
    const auto r = solve_lp(a, b, c);
    return PropertyResult{"", r.status == LpStatus::kOptimal && close(r.objective, -2.8, 1e-12),
                          std::string(to_string(r.status)) + ", objective " + num(r.objective)};
  });

  check("flat_necks", [&] {
    double worst = 0.0;
    for (int a = 1; a <= 4; ++a) {
      const auto basis = SphericalBasis::make_default(a, a == 1 ? 1 : 2);
      const double v = unit_ball_volume(a);
      worst = std::max(worst, std::abs(neck_energy(NeckFunction::zero(basis, 2)) - v * v) / (v * v));
    }
    return PropertyResult{"", worst < 1e-9, "max relative deviation from v_a^2: " + num(worst)};
  });

  check("linear_kernel", [&] {
    const auto basis = SphericalBasis::make_default(2, 3);
    Eigen::MatrixXd l(2, 2);
    l << 0.3, -0.1, 0.2, 0.4;
    const auto sv = second_variation(NeckFunction::linear(basis, l));
    return PropertyResult{"", std::abs(sv.difference()) <= 1e-10 * sv.a_term,
                          "A = " + num(sv.a_term) + ", B = " + num(sv.b_term)};
  });

  check("neck_lower_bound", [&] {
    const auto scan = lower_bound_scan(2, 2, 40, 0.2, seed, 3);
    return PropertyResult{"", !scan.violation, "min " + num(scan.min_energy) + " against " + num(scan.reference)};
  });

  check("signature_odd_degrees", [&] {
    bool ok = true;
    int ambiguous = 0;
    for (int n = 1; n <= 3; ++n)
      for (int k = 0; k <= 2 * n; ++k) {
        const auto r = energy_form_signature(k, n);
        ambiguous += r.ambiguous;
        if (k % 2 == 1 && !r.formula_matches()) ok = false;
      }
    return PropertyResult{"", ok && ambiguous == 0, "ambiguous eigenvalues: " + std::to_string(ambiguous)};
  });

  check("paneitz", [&] {
    const auto rep = paneitz_verify(3, 50, 2, 4, seed);
    return PropertyResult{"", rep.counterexamples.empty() && rep.angle_failures == 0,
                          std::to_string(rep.elliptic) + "/" + std::to_string(rep.trials) + " elliptic"};
  });

  check("boost_not_elliptic", [&] {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(5, 5);
    x(0, 3) = 1.0;
    x(3, 0) = 1.0;
    const bool boost = is_elliptic(SkewGenerator(x, 3, 2));
    return PropertyResult{"", !boost, boost ? "boost reported elliptic" : ""};
  });

  check("central_identity_ball", [&] {
    ProductSampling s;
    s.samples = 20000;
    s.seed = seed;
    const auto id = central_identity(Body::ball(2), default_sphere_rule(2), s);
    return PropertyResult{"", id.relative_gap <= 4.0 * id.lhs_error / id.energy + 1e-3,
                          "relative gap " + num(id.relative_gap)};
  });

  return out;
}

nlohmann::json property_results_json(const std::vector<PropertyResult>& results) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : results) out.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
  return out;
}

}  // namespace bneck
