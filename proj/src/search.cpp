#include "bneck/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "bneck/alt_tensor.hpp"
#include "bneck/body.hpp"
#include "bneck/neck.hpp"
#include "bneck/version.hpp"
#include "bneck/volumes.hpp"

namespace bneck {

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::invalid_argument("config field '" + field + "': " + message), field_(std::move(field)) {}

const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kLpSweep: return "lp-sweep";
    case ExperimentKind::kBodySearch: return "body-search";
    case ExperimentKind::kNeckSearch: return "neck-search";
    case ExperimentKind::kIdentitySuite: return "identity-suite";
  }
  return "?";
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
  for (auto k : {ExperimentKind::kLpSweep, ExperimentKind::kBodySearch, ExperimentKind::kNeckSearch,
                 ExperimentKind::kIdentitySuite})
    if (name == to_string(k)) return k;
  throw ConfigError("kind", "unknown experiment '" + name + "'");
}

namespace {

template <class T>
T field(const nlohmann::json& j, const std::string& key, const std::string& path) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + key, e.what());
  }
}

double ball_diamond_volume(int n) {
  const double v = unit_ball_volume(n);
  return std::pow(2.0, n) / static_cast<double>(binomial(2 * n, n)) * v * v;
}

nlohmann::json vec_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

ProductSampling sampling_of(const ExperimentConfig& c, long factor = 1) {
  ProductSampling s;
  s.samples = c.samples * factor;
  s.volume_samples = c.volume_samples * factor;
  s.seed = c.seed;
  return s;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void finish_best(RunReport& rep) {
  rep.best = -1;
  for (std::size_t i = 0; i < rep.candidates.size(); ++i)
    if (rep.best < 0 || rep.candidates[i].value < rep.candidates[static_cast<std::size_t>(rep.best)].value)
      rep.best = static_cast<int>(i);
  if (rep.best >= 0) {
    const auto& c = rep.candidates[static_cast<std::size_t>(rep.best)];
    rep.best_value = c.value;
    rep.best_error = c.std_error;
    rep.best_parameters = c.parameters;
  }
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("", "configuration must be a JSON object");
  static const std::vector<std::string> known{"kind",   "n",          "signature",       "p_grid",    "samples",
                                              "volume_samples", "nodes", "basis_size", "amplitude",
                                              "harmonic_cutoff", "systematic_tolerance", "seed", "optimizer",
                                              "output"};
  for (const auto& [key, value] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError(key, "unknown field");
  if (!j.contains("kind")) throw ConfigError("kind", "missing");
  if (!j.contains("seed")) throw ConfigError("seed", "missing (every experiment needs an explicit seed)");
  ExperimentConfig c;
  c.kind = experiment_kind_from_string(field<std::string>(j, "kind", ""));
  if (j.contains("n")) c.n = field<int>(j, "n", "");
  if (j.contains("signature")) {
    const auto sig = field<std::vector<int>>(j, "signature", "");
    if (sig.size() != 2) throw ConfigError("signature", "expected [a, b]");
    c.a = sig[0];
    c.b = sig[1];
  }
  if (j.contains("p_grid")) c.p_grid = field<std::vector<double>>(j, "p_grid", "");
  if (j.contains("samples")) c.samples = field<long>(j, "samples", "");
  if (j.contains("volume_samples")) c.volume_samples = field<long>(j, "volume_samples", "");
  if (j.contains("nodes")) c.nodes = field<int>(j, "nodes", "");
  if (j.contains("basis_size")) c.basis_size = field<int>(j, "basis_size", "");
  if (j.contains("amplitude")) c.amplitude = field<double>(j, "amplitude", "");
  if (j.contains("harmonic_cutoff")) c.harmonic_cutoff = field<int>(j, "harmonic_cutoff", "");
  if (j.contains("systematic_tolerance")) c.systematic_tolerance = field<double>(j, "systematic_tolerance", "");
  c.seed = field<std::uint64_t>(j, "seed", "");
  if (j.contains("output")) c.output = field<std::string>(j, "output", "");
  if (j.contains("optimizer")) {
    const auto& o = j.at("optimizer");
    if (!o.is_object()) throw ConfigError("optimizer", "must be an object");
    for (const auto& [key, value] : o.items()) {
      if (key == "initial_scale") c.optimizer.initial_scale = field<double>(o, key, "optimizer/");
      else if (key == "max_evaluations") c.optimizer.max_evaluations = field<int>(o, key, "optimizer/");
      else if (key == "restarts") c.optimizer.restarts = field<int>(o, key, "optimizer/");
      else if (key == "restart_shrink") c.optimizer.restart_shrink = field<double>(o, key, "optimizer/");
      else throw ConfigError("optimizer/" + key, "unknown field");
    }
  }
  c.validate();
  return c;
}

nlohmann::json ExperimentConfig::to_json() const {
  return {{"kind", to_string(kind)},
          {"n", n},
          {"signature", {a, b}},
          {"p_grid", p_grid},
          {"samples", samples},
          {"volume_samples", volume_samples},
          {"nodes", nodes},
          {"basis_size", basis_size},
          {"amplitude", amplitude},
          {"harmonic_cutoff", harmonic_cutoff},
          {"systematic_tolerance", systematic_tolerance},
          {"seed", seed},
          {"optimizer",
           {{"initial_scale", optimizer.initial_scale},
            {"max_evaluations", optimizer.max_evaluations},
            {"restarts", optimizer.restarts},
            {"restart_shrink", optimizer.restart_shrink}}},
          {"output", output}};
}

void ExperimentConfig::validate() const {
  if (samples < 1) throw ConfigError("samples", "must be positive");
  if (volume_samples < 1) throw ConfigError("volume_samples", "must be positive");
  if (nodes < 2) throw ConfigError("nodes", "must be at least 2");
  if (optimizer.max_evaluations < 1) throw ConfigError("optimizer/max_evaluations", "must be positive");
  if (optimizer.restarts < 0) throw ConfigError("optimizer/restarts", "must be nonnegative");
  if (!(optimizer.initial_scale > 0.0)) throw ConfigError("optimizer/initial_scale", "must be positive");
  if (!(optimizer.restart_shrink > 0.0 && optimizer.restart_shrink <= 1.0))
    throw ConfigError("optimizer/restart_shrink", "must lie in (0, 1]");
  if (!(systematic_tolerance >= 0.0)) throw ConfigError("systematic_tolerance", "must be nonnegative");
  switch (kind) {
    case ExperimentKind::kLpSweep:
      if (n != 2 && n != 3) throw ConfigError("n", "lp-sweep needs n in {2, 3}");
      if (p_grid.empty()) throw ConfigError("p_grid", "must not be empty");
      for (double p : p_grid)
        if (!(p > 1.0) || !std::isfinite(p)) throw ConfigError("p_grid", "entries must lie in (1, inf)");
      break;
    case ExperimentKind::kBodySearch:
      if (n != 2 && n != 3) throw ConfigError("n", "body-search needs n in {2, 3}");
      if (basis_size > Body::perturbation_basis_size(n)) throw ConfigError("basis_size", "exceeds the perturbation basis");
      if (!(amplitude >= 0.0)) throw ConfigError("amplitude", "must be nonnegative");
      break;
    case ExperimentKind::kNeckSearch:
      if (a < 1 || a > 4 || b < 1 || a + b > 8) throw ConfigError("signature", "need 1 <= a <= 4, b >= 1, a + b <= 8");
      if (harmonic_cutoff < 0) throw ConfigError("harmonic_cutoff", "must be nonnegative");
      if (!(amplitude >= 0.0)) throw ConfigError("amplitude", "must be nonnegative");
      break;
    case ExperimentKind::kIdentitySuite: break;
  }
}

bool RunReport::assertions_hold() const {
  return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.passed || a.warn_only; });
}

nlohmann::json RunReport::to_json() const {
  nlohmann::json cands = nlohmann::json::array();
  for (const auto& c : candidates)
    cands.push_back({{"parameters", c.parameters}, {"value", c.value}, {"std_error", c.std_error}, {"extra", c.extra}});
  nlohmann::json asserts = nlohmann::json::array();
  for (const auto& a : assertions)
    asserts.push_back({{"name", a.name}, {"passed", a.passed}, {"warn_only", a.warn_only}, {"detail", a.detail}});
  return {{"schema", kSchemaVersion},
          {"version", kVersion},
          {"experiment", experiment},
          {"config", config},
          {"candidates", cands},
          {"best",
           {{"index", best}, {"value", best_value}, {"std_error", best_error}, {"parameters", best_parameters}}},
          {"reference", reference},
          {"tolerance", tolerance},
          {"violation", violation},
          {"confirmation", confirmation},
          {"assertions", asserts},
          {"wall_clock_seconds", wall_clock_seconds}};
}

std::string RunReport::to_csv() const {
  std::ostringstream os;
  os << "index,value,std_error,parameters,extra\n";
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    os << i << ',' << fmt(c.value) << ',' << fmt(c.std_error) << ',' << csv_escape(c.parameters.dump()) << ','
       << csv_escape(c.extra.dump()) << '\n';
  }
  return os.str();
}

RunReport lp_family_sweep(const ExperimentConfig& config) {
  config.validate();
  const auto t0 = Clock::now();
  RunReport rep;
  rep.experiment = to_string(ExperimentKind::kLpSweep);
  rep.config = config.to_json();
  const int n = config.n;
  const ProductSampling sampling = sampling_of(config);
  const double bias = std::abs(diamond_ball_bias(n, config.nodes, sampling));
  const double allowance = std::max(config.systematic_tolerance, bias);

  double best_m = -1.0, best_m_p = 0.0;
  bool hull_ok = true, ratio_ok = true;
  for (double p : config.p_grid) {
    const Body body = Body::lp_ball(p, n);
    const auto mahler = mahler_volume(body, config.volume_samples, config.seed);
    const auto cmp = compare_heart_diamond(body, config.nodes, sampling, allowance);
    CandidateRecord rec;
    rec.parameters = {{"p", p}};
    rec.value = cmp.diamond.mean;
    rec.std_error = cmp.diamond.std_error;
    rec.extra = {{"mahler", mahler.mahler.mean},
                 {"mahler_std_error", mahler.mahler.std_error},
                 {"heart", cmp.heart.mean},
                 {"heart_std_error", cmp.heart.std_error},
                 {"gap", cmp.gap},
                 {"ratio", cmp.diamond.mean / mahler.mahler.mean},
                 {"heart_within_diamond", cmp.holds}};
    hull_ok = hull_ok && cmp.holds;
    if (cmp.diamond.mean > mahler.mahler.mean + 3.0 * (cmp.diamond.std_error + mahler.mahler.std_error)) ratio_ok = false;
    if (mahler.mahler.mean > best_m) {
      best_m = mahler.mahler.mean;
      best_m_p = p;
    }
    rep.candidates.push_back(std::move(rec));
  }
  finish_best(rep);
  rep.reference = ball_diamond_volume(n);
  rep.tolerance = 3.0 * rep.best_error / rep.reference + allowance;
  rep.violation = rep.best_value < rep.reference * (1.0 - rep.tolerance);

  const bool has_two = std::find(config.p_grid.begin(), config.p_grid.end(), 2.0) != config.p_grid.end();
  rep.assertions.push_back({"mahler_argmax_at_p2", !has_two || best_m_p == 2.0, false,
                            "argmax p = " + fmt(best_m_p) + (has_two ? "" : " (p = 2 not in grid)")});
  const double best_p = rep.best >= 0 ? rep.best_parameters.at("p").get<double>() : 0.0;
  rep.assertions.push_back({"diamond_argmin_at_p2", best_p == 2.0, true, "argmin p = " + fmt(best_p)});
  rep.assertions.push_back({"diamond_at_most_mahler", ratio_ok, false, "D <= M within 3 standard errors"});
  rep.assertions.push_back({"heart_within_diamond", hull_ok, false,
                            "allowance " + fmt(allowance) + " (calibrated ball bias " + fmt(bias) + ")"});
  rep.assertions.push_back({"no_violation", !rep.violation, true, "best D against the ball value"});
  rep.wall_clock_seconds = seconds_since(t0);
  return rep;
}

RunReport body_search(const ExperimentConfig& config) {
  config.validate();
  const auto t0 = Clock::now();
  RunReport rep;
  rep.experiment = to_string(ExperimentKind::kBodySearch);
  rep.config = config.to_json();
  const int n = config.n;
  const int full = Body::perturbation_basis_size(n);
  const int k = config.basis_size < 0 ? full : config.basis_size;
  const Body ball = Body::ball(n);

  auto evaluate = [&](const Eigen::VectorXd& c, long factor, CandidateRecord& rec) {
    rec.parameters = vec_json(c);
    ProductSampling s = sampling_of(config, factor);
    if (factor > 1) s.seed = config.seed ^ 0x5eedULL;
    try {
      Body body = ball;
      if (k > 0) {
        Eigen::VectorXd padded = Eigen::VectorXd::Zero(full);
        padded.head(k) = c;
        body = Body::perturbed(ball, config.amplitude, padded);
      }
      const auto d = diamond_volume(body, config.nodes, s);
      rec.value = d.estimate.mean;
      rec.std_error = d.estimate.std_error;
      rec.extra = {{"mahler", d.mahler.mean}, {"indeterminate", d.indeterminate}};
    } catch (const NotConvexError& e) {
      rec.value = std::numeric_limits<double>::infinity();
      rec.std_error = 0.0;
      rec.extra = {{"rejected", e.what()}};
    }
    return rec.value;
  };

  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(k);
  const auto result = nelder_mead(
      [&](const Eigen::VectorXd& c) {
        CandidateRecord rec;
        const double v = evaluate(c, 1, rec);
        rep.candidates.push_back(std::move(rec));
        return v;
      },
      x0, config.optimizer);
  finish_best(rep);
  const double initial = rep.candidates.front().value;

  const double bias = std::abs(diamond_ball_bias(n, config.nodes, sampling_of(config)));
  const double allowance = std::max(config.systematic_tolerance, bias);
  rep.reference = ball_diamond_volume(n);
  rep.tolerance = 3.0 * rep.best_error / rep.reference + allowance;
  if (rep.best_value < rep.reference * (1.0 - rep.tolerance)) {
    CandidateRecord rerun;
    Eigen::VectorXd c(k);
    for (int i = 0; i < k; ++i) c[i] = rep.best_parameters.at(static_cast<std::size_t>(i)).get<double>();
    evaluate(c, 4, rerun);
    rep.confirmation = {{"initial_value", rep.best_value},
                        {"initial_std_error", rep.best_error},
                        {"rerun_value", rerun.value},
                        {"rerun_std_error", rerun.std_error},
                        {"budget_factor", 4}};
    rep.best_value = rerun.value;
    rep.best_error = rerun.std_error;
    rep.tolerance = 3.0 * rep.best_error / rep.reference + allowance;
  }
  rep.violation = rep.best_value < rep.reference * (1.0 - rep.tolerance);
  rep.assertions.push_back({"not_worse_than_start", result.value <= initial, false,
                            "start " + fmt(initial) + ", best " + fmt(result.value)});
  rep.assertions.push_back({"no_violation", !rep.violation, true,
                            "allowance " + fmt(allowance) + " (calibrated ball bias " + fmt(bias) + ")"});
  rep.wall_clock_seconds = seconds_since(t0);
  return rep;
}

RunReport neck_search(const ExperimentConfig& config) {
  config.validate();
  const auto t0 = Clock::now();
  RunReport rep;
  rep.experiment = to_string(ExperimentKind::kNeckSearch);
  rep.config = config.to_json();
  const int a = config.a, b = config.b;
  const auto basis = SphericalBasis::make_default(a, config.harmonic_cutoff);
  const auto size = static_cast<Eigen::Index>(basis->size());

  auto unpack = [&](const Eigen::VectorXd& x) {
    return NeckFunction(basis, b, Eigen::Map<const Eigen::MatrixXd>(x.data(), size, b));
  };
  const NeckFunction start = random_neck(basis, b, config.amplitude, config.seed, 0);
  const Eigen::VectorXd x0 = Eigen::Map<const Eigen::VectorXd>(start.coefficients().data(), size * b);

  const auto result = nelder_mead(
      [&](const Eigen::VectorXd& x) {
        CandidateRecord rec;
        rec.parameters = vec_json(x);
        try {
          const auto e = neck_energy_report(unpack(x));
          rec.value = e.energy;
          rec.extra = {{"min_tangent_Q", e.min_tangent_q}};
        } catch (const SpacelikeViolation& e) {
          rec.value = std::numeric_limits<double>::infinity();
          rec.extra = {{"rejected", "not spacelike"}};
        }
        const double v = rec.value;
        rep.candidates.push_back(std::move(rec));
        return v;
      },
      x0, config.optimizer);
  finish_best(rep);
  const double v = unit_ball_volume(a);
  rep.reference = v * v;
  rep.tolerance = 1e-3;
  rep.violation = rep.best_value < rep.reference * (1.0 - rep.tolerance);
  const bool proved = a <= 2 || b <= 2;
  rep.assertions.push_back({"not_worse_than_start", result.value <= rep.candidates.front().value, false, ""});
  rep.assertions.push_back({proved ? "lower_bound" : "lower_bound_exploratory", !rep.violation, !proved,
                            "min " + fmt(rep.best_value) + " against v_a^2 = " + fmt(rep.reference)});
  rep.wall_clock_seconds = seconds_since(t0);
  return rep;
}

RunReport identity_suite(const ExperimentConfig& config) {
  config.validate();
  const auto t0 = Clock::now();
  RunReport rep;
  rep.experiment = to_string(ExperimentKind::kIdentitySuite);
  rep.config = config.to_json();
  const ProductSampling sampling = sampling_of(config);
  double worst = 0.0;
  for (int n : {2, 3})
    for (double p : {1.5, 2.0, 3.0, 4.0}) {
      const Body body = Body::lp_ball(p, n);
      const auto id = central_identity(body, default_sphere_rule(n), sampling);
      CandidateRecord rec;
      rec.parameters = {{"n", n}, {"p", p}};
      rec.value = id.relative_gap;
      rec.std_error = id.lhs_error / id.energy;
      rec.extra = id.to_json();
      worst = std::max(worst, id.relative_gap);
      rep.assertions.push_back({"identity n=" + std::to_string(n) + " p=" + fmt(p), id.relative_gap <= 0.02, false,
                                "relative gap " + fmt(id.relative_gap)});
      rep.candidates.push_back(std::move(rec));
    }
  finish_best(rep);
  rep.reference = 0.0;
  rep.tolerance = 0.0;
  rep.violation = false;
  rep.wall_clock_seconds = seconds_since(t0);
  return rep;
}

RunReport run_experiment(const ExperimentConfig& config) {
  switch (config.kind) {
    case ExperimentKind::kLpSweep: return lp_family_sweep(config);
    case ExperimentKind::kBodySearch: return body_search(config);
    case ExperimentKind::kNeckSearch: return neck_search(config);
    case ExperimentKind::kIdentitySuite: return identity_suite(config);
  }
  throw std::logic_error("run_experiment: unknown kind");
}

void write_report(const RunReport& report, const std::string& directory) {
  std::filesystem::create_directories(directory);
  const std::filesystem::path dir(directory);
  std::ofstream(dir / "report.json") << report.to_json().dump(2) << '\n';
  std::ofstream(dir / "summary.csv") << report.to_csv();
  std::ofstream(dir / "config.json") << report.config.dump(2) << '\n';
}

}  // namespace bneck
