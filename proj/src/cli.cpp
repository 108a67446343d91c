#include "bneck/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "bneck/body.hpp"
#include "bneck/exterior.hpp"
#include "bneck/lie.hpp"
#include "bneck/neck.hpp"
#include "bneck/parallel.hpp"
#include "bneck/property_suite.hpp"
#include "bneck/search.hpp"
#include "bneck/version.hpp"
#include "bneck/volumes.hpp"

namespace bneck {

namespace {

using json = nlohmann::json;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class OptKind { kInt, kUInt, kDouble, kBool, kJson, kPair, kDoubleList, kString };

struct OptSpec {
  std::string flag;     ///< long flag without dashes
  std::string pointer;  ///< JSON pointer into the resolved config
  OptKind kind;
  std::string help;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

json parse_flag(const OptSpec& spec, const std::string& raw) {
  auto fail = [&](const std::string& what) { return UsageError("--" + spec.flag + ": " + what + " (got '" + raw + "')"); };
  try {
    std::size_t used = 0;
    switch (spec.kind) {
      case OptKind::kInt: {
        const long long v = std::stoll(raw, &used);
        if (used != raw.size()) throw fail("expected an integer");
        return v;
      }
      case OptKind::kUInt: {
        if (!raw.empty() && raw[0] == '-') throw fail("expected a nonnegative integer");
        const unsigned long long v = std::stoull(raw, &used);
        if (used != raw.size()) throw fail("expected a nonnegative integer");
        return v;
      }
      case OptKind::kDouble: {
        const double v = std::stod(raw, &used);
        if (used != raw.size()) throw fail("expected a number");
        return v;
      }
      case OptKind::kBool: return raw == "true" || raw == "1";
      case OptKind::kJson: return json::parse(raw);
      case OptKind::kString: return raw;
      case OptKind::kPair: {
        const auto parts = split(raw, ',');
        if (parts.size() != 2) throw fail("expected a,b");
        return json::array({std::stoi(parts[0]), std::stoi(parts[1])});
      }
      case OptKind::kDoubleList: {
        json arr = json::array();
        for (const auto& p : split(raw, ',')) arr.push_back(std::stod(p));
        return arr;
      }
    }
  } catch (const UsageError&) {
    throw;
  } catch (const json::parse_error& e) {
    throw fail(std::string("malformed JSON: ") + e.what());
  } catch (const std::exception&) {
    throw fail("cannot parse value");
  }
  return nullptr;
}

bool json_kind_ok(const OptSpec& spec, const json& v) {
  switch (spec.kind) {
    case OptKind::kInt: return v.is_number_integer();
    case OptKind::kUInt: return v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0);
    case OptKind::kDouble: return v.is_number();
    case OptKind::kBool: return v.is_boolean();
    case OptKind::kJson: return v.is_object();
    case OptKind::kString: return v.is_string();
    case OptKind::kPair: return v.is_array() && v.size() == 2 && v[0].is_number_integer() && v[1].is_number_integer();
    case OptKind::kDoubleList:
      return v.is_array() && std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number(); });
  }
  return false;
}

struct Outcome {
  json result;
  std::vector<std::string> lines;
  bool ok = true;
  std::string csv;
};

struct Command {
  std::string name;
  std::string help;
  std::vector<OptSpec> options;
  std::function<json()> defaults;
  /// Checks and canonicalizes the merged config.
  std::function<json(const json&)> resolve;
  std::function<Outcome(const json&)> run;
  CLI::App* app = nullptr;
  std::map<std::string, std::string> raw{};
  bool flat = false;
};

std::string num(double v, int precision = 10) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

void require_keys(const json& cfg, const std::vector<OptSpec>& specs) {
  for (const auto& [key, value] : cfg.items()) {
    if (key == "seed") continue;
    const bool known = std::any_of(specs.begin(), specs.end(), [&](const OptSpec& s) { return s.pointer == "/" + key; });
    if (!known) throw ConfigError(key, "unknown field");
  }
  for (const auto& s : specs) {
    const json::json_pointer ptr(s.pointer);
    if (cfg.contains(ptr) && !json_kind_ok(s, cfg.at(ptr)))
      throw ConfigError(s.pointer.substr(1), "wrong type");
  }
  if (!cfg.contains("seed") || !(cfg["seed"].is_number_unsigned() || (cfg["seed"].is_number_integer() && cfg["seed"].get<long long>() >= 0)))
    throw ConfigError("seed", "expected a nonnegative integer");
}

std::pair<int, int> signature_of(const json& cfg) {
  const int a = cfg.at("signature")[0].get<int>(), b = cfg.at("signature")[1].get<int>();
  if (a < 1 || a > 4 || b < 1) throw ConfigError("signature", "need 1 <= a <= 4 and b >= 1");
  return {a, b};
}

Body body_of(const json& cfg) {
  try {
    return Body::from_json(cfg.at("body"));
  } catch (const NotConvexError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("body", e.what());
  }
}

ProductSampling sampling_of(const json& cfg) {
  ProductSampling s;
  s.samples = cfg.at("samples").get<long>();
  s.seed = cfg.at("seed").get<std::uint64_t>();
  if (cfg.contains("volume_samples")) s.volume_samples = cfg.at("volume_samples").get<long>();
  if (s.samples < 1 || s.volume_samples < 1) throw ConfigError("samples", "must be positive");
  return s;
}

std::string volume_line(const std::string& label, const VolumeEstimate& v) {
  std::string s = label + " = " + num(v.mean);
  if (v.std_error > 0.0) s += " +- " + num(v.std_error, 3);
  return s + " [" + to_string(v.method) + "]";
}

std::vector<OptSpec> experiment_options(bool with_kind) {
  std::vector<OptSpec> o;
  if (with_kind) o.push_back({"kind", "/kind", OptKind::kString, "lp-sweep | body-search | neck-search | identity-suite"});
  o.insert(o.end(), {{"n", "/n", OptKind::kInt, "dimension of the body"},
                     {"signature", "/signature", OptKind::kPair, "neck signature a,b"},
                     {"p-grid", "/p_grid", OptKind::kDoubleList, "exponents of the l_p sweep"},
                     {"samples", "/samples", OptKind::kInt, "product samples per estimate"},
                     {"volume-samples", "/volume_samples", OptKind::kInt, "samples for Monte Carlo volumes"},
                     {"nodes", "/nodes", OptKind::kInt, "surface nodes per sheet"},
                     {"basis-size", "/basis_size", OptKind::kInt, "perturbation coefficients searched (-1: all)"},
                     {"amplitude", "/amplitude", OptKind::kDouble, "perturbation or starting-neck amplitude"},
                     {"cutoff", "/harmonic_cutoff", OptKind::kInt, "harmonic degree cutoff"},
                     {"systematic-tolerance", "/systematic_tolerance", OptKind::kDouble, "relative bias allowance"},
                     {"max-evaluations", "/optimizer/max_evaluations", OptKind::kInt, "evaluations per optimizer run"},
                     {"restarts", "/optimizer/restarts", OptKind::kInt, "optimizer restarts"},
                     {"initial-scale", "/optimizer/initial_scale", OptKind::kDouble, "initial simplex size"},
                     {"restart-shrink", "/optimizer/restart_shrink", OptKind::kDouble, "simplex shrink per restart"}});
  return o;
}

Outcome run_report(const json& cfg) {
  const auto config = ExperimentConfig::from_json(cfg);
  const RunReport rep = run_experiment(config);
  Outcome out;
  out.result = rep.to_json();
  out.result.erase("wall_clock_seconds");
  out.result.erase("config");
  out.csv = rep.to_csv();
  out.ok = rep.assertions_hold();
  out.lines.push_back(rep.experiment + ": " + std::to_string(rep.candidates.size()) + " candidates, best " +
                      num(rep.best_value) + ", reference " + num(rep.reference) +
                      (rep.violation ? ", VIOLATION FLAGGED" : ""));
  for (const auto& a : rep.assertions)
    out.lines.push_back(std::string(a.passed ? "  ok   " : (a.warn_only ? "  warn " : "  FAIL ")) + a.name +
                        (a.detail.empty() ? "" : ": " + a.detail));
  return out;
}

std::vector<Command> make_commands() {
  std::vector<Command> cmds;
  const json cube3 = {{"type", "cube"}, {"n", 3}};

  cmds.push_back(
      {"mahler",
       "Mahler volume Vol(K) Vol(K polar), by closed form when available and by Monte Carlo",
       {{"body", "/body", OptKind::kJson, "body as JSON, e.g. {\"type\":\"cube\",\"n\":3}"},
        {"samples", "/samples", OptKind::kInt, "Monte Carlo samples per volume (0: closed form only)"}},
       [=] { return json{{"body", cube3}, {"samples", 100000}}; },
       nullptr,
       [](const json& cfg) {
         const Body body = body_of(cfg);
         const long samples = cfg.at("samples").get<long>();
         if (samples < 0) throw ConfigError("samples", "must be nonnegative");
         const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
         Outcome out;
         const auto exact = mahler_volume(body, std::max(samples, 1L), seed);
         out.result["mahler"] = exact.mahler.to_json();
         out.result["volume"] = exact.body.to_json();
         out.result["polar_volume"] = exact.polar.to_json();
         out.lines.push_back(volume_line("M(K)", exact.mahler));
         if (samples > 0) {
           const bool already_mc = exact.mahler.method == VolumeMethod::kMonteCarlo;
           const auto mc = already_mc ? exact : mahler_volume_mc(body, samples, seed);
           out.result["monte_carlo"] = {{"mahler", mc.mahler.to_json()},
                                        {"volume", mc.body.to_json()},
                                        {"polar_volume", mc.polar.to_json()}};
           if (!already_mc) out.lines.push_back(volume_line("M(K), Monte Carlo", mc.mahler));
         }
         return out;
       }});

  cmds.push_back(
      {"diamond",
       "Volume of the convex hull of K+ and K- (Monte Carlo over K x K polar with LP hull tests)",
       {{"body", "/body", OptKind::kJson, "body as JSON"},
        {"samples", "/samples", OptKind::kInt, "product samples"},
        {"volume-samples", "/volume_samples", OptKind::kInt, "samples for volumes without closed form"},
        {"nodes", "/nodes", OptKind::kInt, "surface nodes per sheet"}},
       [=] { return json{{"body", cube3}, {"samples", 100000}, {"volume_samples", 200000}, {"nodes", 256}}; },
       nullptr,
       [](const json& cfg) {
         const Body body = body_of(cfg);
         const int nodes = cfg.at("nodes").get<int>();
         if (nodes < 1) throw ConfigError("nodes", "must be positive");
         const auto rep = diamond_volume(body, nodes, sampling_of(cfg));
         Outcome out;
         out.result = rep.to_json();
         out.lines.push_back(volume_line("D(K)", rep.estimate));
         out.lines.push_back(volume_line("M(K)", rep.mahler));
         out.lines.push_back("D/M = " + num(rep.estimate.mean / rep.mahler.mean));
         if (rep.indeterminate_warning) out.lines.push_back("warning: indeterminate hull tests above threshold");
         return out;
       }});

  const std::vector<OptSpec> heart_opts{{"body", "/body", OptKind::kJson, "body as JSON"},
                                        {"samples", "/samples", OptKind::kInt, "product samples"},
                                        {"volume-samples", "/volume_samples", OptKind::kInt, "samples for volumes"},
                                        {"level", "/level", OptKind::kInt, "quadrature refinement level (0-3)"}};
  const json heart_defaults = {{"body", {{"type", "ball"}, {"n", 2}}}, {"samples", 100000}, {"volume_samples", 200000}, {"level", 1}};

  cmds.push_back({"heart", "Volume of the region swept by segments joining K+ and K-", heart_opts,
                  [=] { return heart_defaults; }, nullptr, [](const json& cfg) {
                    const Body body = body_of(cfg);
                    const auto rule = default_sphere_rule(body.dim(), cfg.at("level").get<int>());
                    const auto rep = heart_volume(body, rule, sampling_of(cfg));
                    Outcome out;
                    out.result = rep.to_json();
                    out.lines.push_back("Q(vecvol K+) = " + num(rep.energy));
                    out.lines.push_back(volume_line("Vol K-heart (energy route)", rep.energy_route));
                    out.lines.push_back(volume_line("Vol K-heart (Monte Carlo)", rep.mc_route));
                    return out;
                  }});

  cmds.push_back({"identity", "Central identity C(2n,n) 2^-n Vol(K-heart) = Q(vecvol K+)", heart_opts,
                  [=] { return heart_defaults; }, nullptr, [](const json& cfg) {
                    const Body body = body_of(cfg);
                    const auto rule = default_sphere_rule(body.dim(), cfg.at("level").get<int>());
                    const auto rep = central_identity(body, rule, sampling_of(cfg));
                    Outcome out;
                    out.result = rep.to_json();
                    out.lines.push_back("lhs = " + num(rep.lhs) + " +- " + num(rep.lhs_error, 3));
                    out.lines.push_back("Q(vecvol K+) = " + num(rep.energy));
                    out.lines.push_back("relative gap = " + num(rep.relative_gap, 4));
                    return out;
                  }});

  cmds.push_back(
      {"neck-energy",
       "Energy of a flat or random neck in signature (a, b)",
       {{"signature", "/signature", OptKind::kPair, "a,b"},
        {"flat", "/flat", OptKind::kBool, "use the flat neck"},
        {"amplitude", "/amplitude", OptKind::kDouble, "random neck amplitude"},
        {"index", "/index", OptKind::kUInt, "random neck index"},
        {"cutoff", "/cutoff", OptKind::kInt, "harmonic degree cutoff"}},
       [] { return json{{"signature", {2, 1}}, {"flat", false}, {"amplitude", 0.1}, {"index", 0}, {"cutoff", 3}}; },
       nullptr,
       [](const json& cfg) {
         const auto [a, b] = signature_of(cfg);
         const auto basis = SphericalBasis::make_default(a, a == 1 ? 1 : cfg.at("cutoff").get<int>());
         const NeckFunction f = cfg.at("flat").get<bool>()
                                    ? NeckFunction::zero(basis, b)
                                    : random_neck(basis, b, cfg.at("amplitude").get<double>(),
                                                  cfg.at("seed").get<std::uint64_t>(), cfg.at("index").get<std::uint64_t>());
         const auto e = neck_energy_report(f);
         const double v = unit_ball_volume(a);
         Outcome out;
         out.result = {{"energy", e.energy},
                       {"min_tangent_Q", e.min_tangent_q},
                       {"reference", v * v},
                       {"coefficients", matrix_json(f.coefficients())}};
         out.lines.push_back("Q(vecvol N) = " + num(e.energy) + " (v_a^2 = " + num(v * v) + ")");
         if (a <= 2 || b <= 2) {
           out.ok = e.energy >= v * v * (1.0 - 1e-3);
           if (!out.ok) out.lines.push_back("FAIL: energy below v_a^2 in a proved regime");
         }
         return out;
       }});

  cmds.push_back(
      {"second-variation",
       "Analytic A - B against the finite-difference second derivative of the energy",
       {{"signature", "/signature", OptKind::kPair, "a,b (a >= 2)"},
        {"degree", "/degree", OptKind::kInt, "harmonic degree to keep (-1: all)"},
        {"amplitude", "/amplitude", OptKind::kDouble, "random perturbation amplitude"},
        {"index", "/index", OptKind::kUInt, "random perturbation index"},
        {"cutoff", "/cutoff", OptKind::kInt, "harmonic degree cutoff"},
        {"eps", "/eps", OptKind::kDouble, "finite-difference step"}},
       [] {
         return json{{"signature", {2, 1}}, {"degree", -1}, {"amplitude", 1.0}, {"index", 0}, {"cutoff", 3}, {"eps", 1e-3}};
       },
       nullptr,
       [](const json& cfg) {
         const auto [a, b] = signature_of(cfg);
         if (a < 2) throw ConfigError("signature", "second variation needs a >= 2");
         const auto basis = SphericalBasis::make_default(a, cfg.at("cutoff").get<int>());
         NeckFunction f = random_neck(basis, b, cfg.at("amplitude").get<double>(), cfg.at("seed").get<std::uint64_t>(),
                                      cfg.at("index").get<std::uint64_t>());
         const int degree = cfg.at("degree").get<int>();
         if (degree >= 0) f = harmonic_project(f, degree);
         const auto sv = second_variation(f);
         const auto fd = finite_diff_energy_hessian(f, cfg.at("eps").get<double>());
         const double va = unit_ball_volume(a);
         Outcome out;
         out.result = {{"A", sv.a_term},
                       {"B", sv.b_term},
                       {"A_minus_B", sv.difference()},
                       {"fd_second_derivative", fd.value},
                       {"fd_noise", fd.noise},
                       {"fd_scale", fd.scale},
                       {"noise_dominated", fd.noise_dominated},
                       {"expected_constant", 2.0 * va / a}};
         if (std::abs(sv.difference()) > 1e-9 * sv.a_term) out.result["fitted_constant"] = fd.value / sv.difference();
         out.lines.push_back("A = " + num(sv.a_term) + ", B = " + num(sv.b_term) + ", A - B = " + num(sv.difference()));
         out.lines.push_back("d2Q/deps2 = " + num(fd.value) + " (noise " + num(fd.noise, 3) + ")");
         out.ok = sv.difference() >= -1e-9 * std::max(1.0, sv.a_term);
         return out;
       }});

  cmds.push_back({"signature-table",
                  "Energy-form signature on k-tensors: eigenvalue oracle against the printed formula",
                  {{"n", "/n", OptKind::kInt, "dimension of V (1-4)"}},
                  [] { return json{{"n", 2}}; },
                  nullptr,
                  [](const json& cfg) {
                    const int n = cfg.at("n").get<int>();
                    if (n < 1 || n > 4) throw ConfigError("n", "must be 1..4");
                    Outcome out;
                    out.result["rows"] = json::array();
                    out.lines.push_back(" k  oracle(+,-,0)  formula(+,-)  match");
                    for (int k = 0; k <= 2 * n; ++k) {
                      const auto r = energy_form_signature(k, n);
                      out.result["rows"].push_back({{"k", k},
                                                    {"positives", r.positives},
                                                    {"negatives", r.negatives},
                                                    {"zeros", r.zeros},
                                                    {"ambiguous", r.ambiguous},
                                                    {"formula_positives", r.formula_positives},
                                                    {"formula_negatives", r.formula_negatives},
                                                    {"matches", r.formula_matches()}});
                      std::ostringstream os;
                      os << std::setw(2) << k << "  (" << r.positives << "," << r.negatives << "," << r.zeros << ")"
                         << "  (" << r.formula_positives << "," << r.formula_negatives << ")  "
                         << (r.formula_matches() ? "yes" : "no");
                      out.lines.push_back(os.str());
                      if (r.ambiguous > 0) out.ok = false;
                    }
                    return out;
                  }});

  cmds.push_back(
      {"paneitz",
       "Ellipticity of convex combinations of positive timelike rotations in so(a, 2)",
       {{"a", "/a", OptKind::kInt, "spacelike dimension"},
        {"trials", "/trials", OptKind::kInt, "number of random combinations"},
        {"min-terms", "/min_terms", OptKind::kInt, "fewest rotations per combination"},
        {"max-terms", "/max_terms", OptKind::kInt, "most rotations per combination"},
        {"tol", "/tol", OptKind::kDouble, "ellipticity tolerance"}},
       [] { return json{{"a", 3}, {"trials", 100}, {"min_terms", 2}, {"max_terms", 4}, {"tol", 1e-8}}; },
       nullptr,
       [](const json& cfg) {
         PaneitzReport rep;
         try {
           rep = paneitz_verify(cfg.at("a").get<int>(), cfg.at("trials").get<int>(), cfg.at("min_terms").get<int>(),
                                cfg.at("max_terms").get<int>(), cfg.at("seed").get<std::uint64_t>(),
                                cfg.at("tol").get<double>());
         } catch (const std::invalid_argument& e) {
           throw ConfigError("trials", e.what());
         }
         Outcome out;
         out.result = rep.to_json();
         out.lines.push_back(std::to_string(rep.elliptic) + "/" + std::to_string(rep.trials) + " elliptic, " +
                             std::to_string(rep.angle_failures) + " angle-inequality failures, min margin " +
                             num(rep.min_margin));
         out.ok = rep.counterexamples.empty();
         return out;
       }});

  cmds.push_back({"sweep", "M, D and heart/diamond gap across the l_p family", experiment_options(false),
                  [] {
                    ExperimentConfig c;
                    c.kind = ExperimentKind::kLpSweep;
                    return c.to_json();
                  },
                  [](const json& cfg) {
                    json c = cfg;
                    c["kind"] = to_string(ExperimentKind::kLpSweep);
                    return ExperimentConfig::from_json(c).to_json();
                  },
                  run_report});

  cmds.push_back({"search", "Nelder-Mead searches over bodies or necks", experiment_options(true),
                  [] {
                    ExperimentConfig c;
                    c.kind = ExperimentKind::kBodySearch;
                    return c.to_json();
                  },
                  [](const json& cfg) { return ExperimentConfig::from_json(cfg).to_json(); }, run_report});

  cmds.push_back({"selftest", "Cross-module property suite", {}, [] { return json::object(); }, nullptr,
                  [](const json& cfg) {
                    const auto results = run_property_suite(cfg.at("seed").get<std::uint64_t>());
                    Outcome out;
                    out.result["properties"] = property_results_json(results);
                    for (const auto& r : results) {
                      out.lines.push_back(std::string(r.passed ? "ok   " : "FAIL ") + r.name +
                                          (r.detail.empty() ? "" : ": " + r.detail));
                      out.ok = out.ok && r.passed;
                    }
                    return out;
                  }});

  for (auto& c : cmds) c.flat = c.name != "sweep" && c.name != "search";
  return cmds;
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("config file '" + path + "': " + e.what());
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical laboratory for Mahler, diamond and heart volumes, necks, and so(a,b) checks",
               "bottleneck-lab"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);
  std::uint64_t seed = 1;
  int threads = 0;
  std::string config_path, output_dir;
  bool as_json = false;
  int verbosity = 0;
  app.add_option("--seed", seed, "seed for all stochastic output")->default_val(1);
  app.add_option("--threads", threads, "worker threads (fallback: BOTTLENECK_LAB_THREADS)")->check(CLI::NonNegativeNumber);
  app.add_option("--config", config_path, "JSON config; flags override its fields");
  app.add_option("--output", output_dir, "directory for result.json, config.json and CSV output");
  app.add_flag("--json", as_json, "print the JSON result instead of the text summary");
  app.add_flag("-v,--verbose", verbosity, "print timing to stderr");

  auto cmds = make_commands();
  for (auto& c : cmds) {
    c.app = app.add_subcommand(c.name, c.help);
    for (const auto& o : c.options) {
      if (o.kind == OptKind::kBool)
        c.app->add_flag_callback("--" + o.flag, [&c, o] { c.raw[o.flag] = "true"; }, o.help);
      else
        c.app->add_option("--" + o.flag, c.raw[o.flag], o.help);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Command* cmd = nullptr;
  for (auto& c : cmds)
    if (c.app->parsed()) cmd = &c;
  if (cmd == nullptr) return kExitUsage;

  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (threads > 0) set_worker_count(threads);
    json cfg = cmd->defaults();
    if (!config_path.empty()) {
      const json file = load_config(config_path);
      if (!file.is_object()) throw UsageError("config file '" + config_path + "': top level must be an object");
      cfg.merge_patch(file);
    }
    if (app.get_option("--seed")->count() > 0 || !cfg.contains("seed")) cfg["seed"] = seed;
    for (const auto& o : cmd->options) {
      const auto it = cmd->raw.find(o.flag);
      const bool given = o.kind == OptKind::kBool ? it != cmd->raw.end() && !it->second.empty()
                                                  : cmd->app->get_option("--" + o.flag)->count() > 0;
      if (given) cfg[json::json_pointer(o.pointer)] = parse_flag(o, it->second);
    }
    if (cmd->flat) require_keys(cfg, cmd->options);
    if (cmd->resolve) cfg = cmd->resolve(cfg);

    const Outcome res = cmd->run(cfg);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const json doc = {{"schema", kSchemaVersion},
                      {"version", kVersion},
                      {"command", cmd->name},
                      {"config", cfg},
                      {"result", res.result},
                      {"passed", res.ok}};
    if (as_json) out << doc.dump(2) << '\n';
    else
      for (const auto& line : res.lines) out << line << '\n';
    if (verbosity > 0) err << cmd->name << ": " << num(seconds, 4) << " s with " << worker_count() << " workers\n";
    if (!output_dir.empty()) {
      std::filesystem::create_directories(output_dir);
      const std::filesystem::path dir(output_dir);
      json stamped = doc;
      stamped["wall_clock_seconds"] = seconds;
      std::ofstream(dir / "result.json") << stamped.dump(2) << '\n';
      std::ofstream(dir / "config.json") << cfg.dump(2) << '\n';
      if (!res.csv.empty()) std::ofstream(dir / "summary.csv") << res.csv;
    }
    return res.ok ? kExitOk : kExitAssertion;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitAssertion;
  }
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace bneck
