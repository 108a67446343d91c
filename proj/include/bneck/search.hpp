#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "bneck/nelder_mead.hpp"

namespace bneck {

/// Bad configuration field; `field` is a JSON-pointer-like path.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class ExperimentKind { kLpSweep, kBodySearch, kNeckSearch, kIdentitySuite };

const char* to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kLpSweep;
  int n = 2;
  int a = 2, b = 1;
  std::vector<double> p_grid{1.25, 1.5, 2.0, 3.0, 6.0};
  long samples = 10000;
  long volume_samples = 50000;
  int nodes = 96;
  int basis_size = -1;  ///< -1: full perturbation basis
  double amplitude = 0.05;
  int harmonic_cutoff = 3;
  double systematic_tolerance = 0.005;
  std::uint64_t seed = 1;
  NelderMeadOptions optimizer{};
  std::string output;

  /// Unknown fields and wrong types raise ConfigError naming the field.
  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  void validate() const;
};

struct CandidateRecord {
  nlohmann::json parameters;
  double value = 0.0;
  double std_error = 0.0;
  nlohmann::json extra = nlohmann::json::object();
};

struct Assertion {
  std::string name;
  bool passed = false;
  bool warn_only = false;
  std::string detail;
};

struct RunReport {
  std::string experiment;
  nlohmann::json config;
  std::vector<CandidateRecord> candidates;
  int best = -1;
  double best_value = 0.0;
  double best_error = 0.0;
  nlohmann::json best_parameters;
  double reference = 0.0;
  double tolerance = 0.0;  ///< relative; violation iff best_value < reference (1 - tolerance)
  bool violation = false;
  nlohmann::json confirmation;  ///< null unless a candidate violation was re-run
  std::vector<Assertion> assertions;
  double wall_clock_seconds = 0.0;

  bool assertions_hold() const;
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

/// M, D and the heart/diamond gap across the l_p family.
RunReport lp_family_sweep(const ExperimentConfig& config);
/// Nelder-Mead over perturbation coefficients of the ball minimizing D(K).
RunReport body_search(const ExperimentConfig& config);
/// Nelder-Mead over harmonic coefficients minimizing the neck energy.
RunReport neck_search(const ExperimentConfig& config);
/// Central identity over l_p balls, n in {2, 3}.
RunReport identity_suite(const ExperimentConfig& config);

RunReport run_experiment(const ExperimentConfig& config);

/// Writes <output>/report.json, <output>/summary.csv and <output>/config.json.
void write_report(const RunReport& report, const std::string& directory);

}  // namespace bneck
