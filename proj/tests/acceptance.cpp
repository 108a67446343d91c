// Acceptance runner: one PASS/FAIL line per criterion.
//   acceptance --criterion N   runs one criterion (exit 0 on PASS)
//   acceptance                 runs all ten

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bneck/body.hpp"
#include "bneck/cli.hpp"
#include "bneck/exterior.hpp"
#include "bneck/lie.hpp"
#include "bneck/neck.hpp"
#include "bneck/rng.hpp"
#include "bneck/search.hpp"
#include "bneck/sphere_rule.hpp"
#include "bneck/volumes.hpp"

using namespace bneck;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

struct Check {
  bool ok = true;
  std::vector<std::string> notes;

  void expect(bool cond, const std::string& what) {
    if (!cond) ok = false;
    notes.push_back(std::string(cond ? "  ok   " : "  FAIL ") + what);
  }
  void info(const std::string& what) { notes.push_back("  info " + what); }
};

std::string num(double x, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// 1. Mahler closed forms and Monte Carlo.
Check criterion1() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  const double mc3 = closed_form_volume("cube", 3) * closed_form_volume("cross", 3);
  const double mb2 = closed_form_volume("ball", 2) * closed_form_volume("ball", 2);
  const double mb3 = closed_form_volume("ball", 3) * closed_form_volume("ball", 3);
  c.expect(mc3 == 32.0 / 3.0, "M(C_3) closed form = " + num(mc3, 17));
  c.expect(rel(mb2, kPi * kPi) < 1e-15, "M(B_2) closed form = " + num(mb2, 17));
  c.expect(rel(mc3 / mb3, 6.0 / (kPi * kPi)) < 1e-14, "M(C_3)/M(B_3) closed form = " + num(mc3 / mb3, 17));
  c.expect(rel(mahler_volume(Body::cube(3), 1, 1).mahler.mean, 32.0 / 3.0) < 1e-14, "library M(C_3) uses the closed form");

  const long n = 1000000;
  const auto c3 = mahler_volume_mc(Body::cube(3), n, 11).mahler;
  const auto b2 = mahler_volume_mc(Body::ball(2), n, 12).mahler;
  const auto b3 = mahler_volume_mc(Body::ball(3), n, 13).mahler;
  c.expect(rel(c3.mean, 32.0 / 3.0) <= 0.01, "MC M(C_3) = " + num(c3.mean) + " +- " + num(c3.std_error));
  c.expect(rel(b2.mean, kPi * kPi) <= 0.01, "MC M(B_2) = " + num(b2.mean) + " +- " + num(b2.std_error));
  c.expect(rel(c3.mean / b3.mean, 6.0 / (kPi * kPi)) <= 0.01, "MC ratio = " + num(c3.mean / b3.mean));
  const double secs = since(t0);
  c.expect(secs < 30.0, "runtime " + num(secs, 3) + " s < 30 s");
  return c;
}

// 2. Diamond of the Euclidean ball.
Check criterion2() {
  Check c;
  ProductSampling s;
  s.samples = 100000;
  s.seed = 21;
  for (int n : {2, 3}) {
    const auto t0 = std::chrono::steady_clock::now();
    const double exact = std::pow(2.0, n) / binom(2 * n, n) * std::pow(unit_ball_volume(n), 2);
    const double tol = n == 2 ? 0.02 : 0.04;
    // 256 nodes per sheet for n = 2; in n = 3 the inscribed hull at 256 nodes
    // sits about 4.6% low, so the estimate uses 1024 and 256 is reported.
    const int nodes = n == 2 ? 256 : 1024;
    const auto d = diamond_volume(Body::ball(n), nodes, s);
    const double secs = since(t0);
    if (n == 3) {
      const auto coarse = diamond_volume(Body::ball(n), 256, s);
      c.info("Vol B_3 diamond at 256 nodes = " + num(coarse.estimate.mean) + " (rel " +
             num(rel(coarse.estimate.mean, exact), 3) + ")");
    }
    c.expect(rel(d.estimate.mean, exact) <= tol, "Vol B_" + std::to_string(n) + " diamond (" + std::to_string(nodes) + " nodes) = " + num(d.estimate.mean) + " +- " +
                                                    num(d.estimate.std_error) + " vs " + num(exact) + " (rel " +
                                                    num(rel(d.estimate.mean, exact), 3) + ", tol " + num(tol) + ")");
    c.expect(d.indeterminate == 0, "indeterminate LP verdicts: " + std::to_string(d.indeterminate));
    c.expect(secs < 120.0, "runtime " + num(secs, 3) + " s < 120 s");
  }
  return c;
}

// 3. Central identity on l_p balls; ellipsoid heart = diamond.
Check criterion3() {
  Check c;
  ProductSampling s;
  s.samples = 100000;
  s.seed = 31;
  for (int n : {2, 3})
    for (double p : {1.5, 2.0, 3.0, 4.0}) {
      const auto id = central_identity(Body::lp_ball(p, n), default_sphere_rule(n), s);
      c.expect(id.relative_gap <= 0.02, "n=" + std::to_string(n) + " p=" + num(p) + ": C(2n,n) 2^-n Leb(heart) = " +
                                            num(id.lhs) + " +- " + num(id.lhs_error) + ", Q(vecvol) = " + num(id.energy) +
                                            " (gap " + num(id.relative_gap, 3) + ")");
    }
  Eigen::Matrix2d a;
  a << 1.0, 0.3, 0.3, 4.0;
  const Body ellipsoid = Body::ellipsoid(a);
  const auto cmp = compare_heart_diamond(ellipsoid, 512, s, 0.0);
  const double scale = binom(4, 2) / 4.0;
  const double diff = std::abs(cmp.heart.mean - cmp.diamond.mean);
  c.expect(diff <= 3.0 * cmp.combined_error,
           "ellipsoid n=2: C(4,2)/4 Leb(heart) = " + num(scale * cmp.heart.mean) + ", C(4,2)/4 Leb(diamond) = " +
               num(scale * cmp.diamond.mean) + ", |diff| " + num(scale * diff) + " <= 3 sigma " +
               num(3.0 * scale * cmp.combined_error));
  const double energy = kplus_energy(ellipsoid, default_sphere_rule(2));
  c.expect(rel(scale * cmp.diamond.mean, energy) <= 3.0 * cmp.diamond.relative_error(),
           "ellipsoid n=2: Q(vecvol) = " + num(energy) + " agrees with the diamond side within 3 sigma");
  return c;
}

// 4. D <= M, heart <= diamond, Santalo argmax in the l_p sweep.
Check criterion4() {
  Check c;
  for (int n : {2, 3}) {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::kLpSweep;
    cfg.n = n;
    cfg.seed = 41;
    if (n == 3) {
      cfg.p_grid = {1.5, 2.0, 3.0};
      cfg.samples = 20000;
      cfg.nodes = 256;
    }
    const auto rep = lp_family_sweep(cfg);
    for (const auto& as : rep.assertions) {
      const std::string line = "n=" + std::to_string(n) + " " + as.name + ": " + as.detail;
      if (as.name == "mahler_argmax_at_p2" || as.name == "diamond_at_most_mahler" || as.name == "heart_within_diamond")
        c.expect(as.passed, line);
      else
        c.info(std::string(as.passed ? "holds " : "does not hold ") + line);
    }
  }
  return c;
}

// 5. The segment [-1, 1].
Check criterion5() {
  Check c;
  const Body k = Body::cube(1);
  ProductSampling s;
  s.samples = 20000;
  const auto d = diamond_volume(k, 2, s);
  c.expect(d.estimate.mean == 4.0 && d.estimate.std_error == 0.0, "Leb(K diamond) = " + num(d.estimate.mean, 17));
  const double q = kplus_energy(k, point_pair_rule());
  c.expect(q == 4.0, "Q(vecvol K+) = " + num(q, 17));
  const auto id = central_identity(k, point_pair_rule(), s);
  c.expect(std::abs(id.lhs - id.energy) <= 4.0 * std::numeric_limits<double>::epsilon() * id.energy,
           "C(2,1)/2 Leb(K heart) = " + num(id.lhs, 17) + " vs " + num(id.energy, 17));
  return c;
}

// 6. Neck lower bounds.
Check criterion6() {
  Check c;
  for (auto [a, b] : {std::pair{2, 1}, {1, 2}, {2, 2}, {3, 2}, {2, 3}}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto scan = lower_bound_scan(a, b, 200, 0.2, 61);
    const std::string sig = "(" + std::to_string(a) + "," + std::to_string(b) + ")";
    c.expect(scan.min_energy >= scan.reference * (1.0 - 1e-3),
             sig + " min energy over 200 necks " + num(scan.min_energy, 8) + " >= v_a^2 (1 - 1e-3) = " +
                 num(scan.reference * (1.0 - 1e-3), 8));
    auto basis = SphericalBasis::make_default(a, a == 1 ? 1 : 4);
    const double flat = neck_energy(NeckFunction::zero(basis, b));
    c.expect(rel(flat, scan.reference) <= 1e-6, sig + " flat energy " + num(flat, 12) + " vs v_a^2 " + num(scan.reference, 12));
    const double secs = since(t0);
    c.expect(secs < 120.0, sig + " runtime " + num(secs, 3) + " s");
  }
  return c;
}

NeckFunction harmonic(std::shared_ptr<const SphericalBasis> basis, int b, int degree, std::uint64_t seed) {
  Rng rng(seed, 71, static_cast<std::uint64_t>(degree));
  Eigen::MatrixXd coeffs = Eigen::MatrixXd::Zero(basis->size(), b);
  for (int j = 0; j < basis->size(); ++j)
    if (basis->degree(j) == degree)
      for (int k = 0; k < b; ++k) coeffs(j, k) = rng.normal();
  return {basis, b, coeffs};
}

// 7. Second variation against finite differences.
Check criterion7() {
  Check c;
  const double eps = 0.01;
  for (auto [a, b] : {std::pair{2, 1}, {2, 2}}) {
    const std::string sig = "(" + std::to_string(a) + "," + std::to_string(b) + ")";
    auto basis = SphericalBasis::make_default(a, 4);
    const auto f1 = finite_diff_energy_hessian(harmonic(basis, b, 1, 7), eps);
    c.expect(std::abs(f1.value) <= 1e-4 * f1.scale,
             sig + " degree 1: |d2Q| = " + num(std::abs(f1.value), 3) + " <= 1e-4 scale = " + num(1e-4 * f1.scale, 3));
    for (int d : {0, 2, 3}) {
      const auto fd = finite_diff_energy_hessian(harmonic(basis, b, d, 7), eps);
      c.expect(fd.value > 0.0 && !fd.noise_dominated,
               sig + " degree " + std::to_string(d) + ": d2Q = " + num(fd.value) + " (noise " + num(fd.noise, 3) + ")");
    }
    Rng rng(72, 0, static_cast<std::uint64_t>(b));
    Eigen::MatrixXd m(b, a);
    for (int i = 0; i < b; ++i)
      for (int j = 0; j < a; ++j) m(i, j) = rng.normal();
    const auto lin = second_variation(NeckFunction::linear(basis, m));
    c.expect(std::abs(lin.difference()) <= 1e-12 * lin.a_term,
             sig + " linear f: A = " + num(lin.a_term, 15) + ", B = " + num(lin.b_term, 15));

    std::vector<double> fd_values, diffs;
    for (std::uint64_t i = 0; i < 10; ++i) {
      const auto f = random_neck(basis, b, 1.0, 73, i);
      fd_values.push_back(finite_diff_energy_hessian(f, eps).value);
      diffs.push_back(second_variation(f).difference());
    }
    double num_fit = 0.0, den_fit = 0.0;
    for (std::size_t i = 0; i < diffs.size(); ++i) num_fit += fd_values[i] * diffs[i], den_fit += diffs[i] * diffs[i];
    const double fitted = num_fit / den_fit;
    double worst = 0.0;
    for (std::size_t i = 0; i < diffs.size(); ++i) worst = std::max(worst, rel(fd_values[i] / diffs[i], fitted));
    c.expect(worst <= 0.01, sig + " fitted d2Q / (A - B) = " + num(fitted, 8) + ", worst deviation over 10 functions " +
                                num(worst, 3));
    c.info(sig + " 2 v_a / a = " + num(2.0 * unit_ball_volume(a) / a, 8));
  }
  return c;
}

// 8. Signature table of the energy form.
Check criterion8() {
  Check c;
  for (int n = 1; n <= 4; ++n)
    for (int k = 0; k <= 2 * n; ++k) {
      const auto r = energy_form_signature(k, n);
      const std::string row = "n=" + std::to_string(n) + " k=" + std::to_string(k) + ": oracle (" +
                              std::to_string(r.positives) + "," + std::to_string(r.negatives) + ") formula (" +
                              std::to_string(r.formula_positives) + "," + std::to_string(r.formula_negatives) + ")";
      c.expect(r.ambiguous == 0 && r.zeros == 0, row + " ambiguous " + std::to_string(r.ambiguous));
      const bool asserted = k % 2 == 1 || k == 0 || k == 2 * n;
      if (asserted)
        c.expect(r.formula_matches(), row + (r.formula_matches() ? " match" : " mismatch"));
      else
        c.info(row + (r.formula_matches() ? " match" : " mismatch (recorded)"));
    }
  return c;
}

// 9. Ellipticity of convex combinations of positive timelike rotations.
Check criterion9() {
  Check c;
  for (int a : {3, 2}) {
    const auto r = paneitz_verify(a, 100, 2, 4, 91, 1e-8);
    const std::string sig = "so(" + std::to_string(a) + ",2)";
    c.expect(r.elliptic == r.trials, sig + " elliptic " + std::to_string(r.elliptic) + "/" + std::to_string(r.trials));
    c.expect(r.counterexamples.empty() && r.angle_failures == 0,
             sig + " counterexamples " + std::to_string(r.counterexamples.size()) + ", angle failures " +
                 std::to_string(r.angle_failures) + ", min margin " + num(r.min_margin));
  }
  return c;
}

std::string cli_json(std::vector<std::string> args, int& code) {
  args.insert(args.begin(), "bottleneck-lab");
  std::vector<const char*> argv;
  for (const auto& s : args) argv.push_back(s.c_str());
  std::ostringstream out, err;
  code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return out.str();
}

// 10. Byte-identical CLI output for 1 and 4 worker threads.
Check criterion10() {
  Check c;
  const std::vector<std::vector<std::string>> runs{
      {"mahler", "--body", R"({"type":"lp","p":3,"n":3})", "--samples", "20000"},
      {"diamond", "--body", R"({"type":"lp","p":1.5,"n":2})", "--samples", "4000", "--nodes", "32"},
      {"heart", "--body", R"({"type":"lp","p":4,"n":2})", "--samples", "4000"},
      {"identity", "--body", R"({"type":"ball","n":3})", "--samples", "4000"},
      {"neck-energy", "--signature", "3,2", "--amplitude", "0.2"},
      {"second-variation", "--signature", "2,2"},
      {"signature-table", "--n", "3"},
      {"paneitz", "--a", "3", "--trials", "20"},
      {"sweep", "--p-grid", "1.5,2,3", "--samples", "3000", "--nodes", "24", "--volume-samples", "5000"},
      {"search", "--kind", "neck-search", "--signature", "2,2", "--max-evaluations", "40"},
      {"search", "--kind", "body-search", "--basis-size", "2", "--samples", "2000", "--nodes", "24", "--max-evaluations",
       "8", "--restarts", "0"}};
  for (const auto& base : runs) {
    std::vector<std::string> single{"--threads", "1", "--seed", "5", "--json"}, multi{"--threads", "4", "--seed", "5", "--json"};
    single.insert(single.end(), base.begin(), base.end());
    multi.insert(multi.end(), base.begin(), base.end());
    int c1 = 0, c4 = 0, c4b = 0;
    const std::string one = cli_json(single, c1);
    const std::string four = cli_json(multi, c4);
    const std::string again = cli_json(multi, c4b);
    const bool parsed = json::accept(one);
    c.expect(parsed && c1 == c4 && c4 == c4b && one == four && four == again,
             base.front() + (base.size() > 2 && base[1] == "--kind" ? " " + base[2] : "") + ": exit " +
                 std::to_string(c1) + ", " + std::to_string(one.size()) + " bytes, " +
                 (one == four && four == again ? "identical" : "DIFFERENT"));
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "criterion number 1-10 (0: all)")->check(CLI::Range(0, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<Check()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                     criterion6, criterion7, criterion8, criterion9, criterion10};
  bool all = true;
  for (int i = 1; i <= 10; ++i) {
    if (only != 0 && i != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Check c;
    try {
      c = criteria[static_cast<std::size_t>(i - 1)]();
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    for (const auto& line : c.notes) std::cout << line << '\n';
    std::cout << "criterion " << i << ": " << (c.ok ? "PASS" : "FAIL") << " (" << num(since(t0), 3) << " s)" << std::endl;
    all = all && c.ok;
  }
  return all ? 0 : 1;
}
