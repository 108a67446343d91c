#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "bneck/nelder_mead.hpp"
#include "bneck/search.hpp"

using namespace bneck;
using nlohmann::json;

namespace {

std::string field_of(const json& j) {
  try {
    ExperimentConfig::from_json(j);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<none>";
}

json stable(const RunReport& r) {
  json j = r.to_json();
  j.erase("wall_clock_seconds");
  return j;
}

}  // namespace

TEST(NelderMead, Rosenbrock) {
  NelderMeadOptions o;
  o.max_evaluations = 2000;
  o.initial_scale = 0.5;
  const auto r = nelder_mead(
      [](const Eigen::VectorXd& x) { return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2); },
      Eigen::Vector2d(-1.2, 1.0), o);
  EXPECT_NEAR(r.x[0], 1.0, 1e-3);
  EXPECT_NEAR(r.x[1], 1.0, 1e-3);
  EXPECT_LT(r.value, 1e-6);
}

TEST(NelderMead, NeverWorseThanStartAndSurvivesInfinities) {
  NelderMeadOptions o;
  o.max_evaluations = 60;
  const auto f = [](const Eigen::VectorXd& x) {
    return x.norm() > 0.3 ? std::numeric_limits<double>::infinity() : (x - Eigen::Vector3d(0.1, 0, 0)).squaredNorm();
  };
  const Eigen::VectorXd x0 = Eigen::Vector3d::Zero();
  const auto r = nelder_mead(f, x0, o);
  EXPECT_LE(r.value, f(x0));
  EXPECT_TRUE(std::isfinite(r.value));
}

TEST(NelderMead, ZeroDimensional) {
  int calls = 0;
  const auto r = nelder_mead([&](const Eigen::VectorXd&) { return ++calls, 3.5; }, Eigen::VectorXd(0), {});
  EXPECT_DOUBLE_EQ(r.value, 3.5);
  EXPECT_EQ(calls, 1);
}

TEST(Config, Errors) {
  EXPECT_EQ(field_of({{"kind", "lp-sweep"}, {"seed", 1}, {"bogus", 2}}), "bogus");
  EXPECT_EQ(field_of({{"seed", 1}}), "kind");
  EXPECT_EQ(field_of({{"kind", "lp-sweep"}}), "seed");
  EXPECT_EQ(field_of({{"kind", "lp-sweep"}, {"seed", 1}, {"samples", "many"}}), "samples");
  EXPECT_EQ(field_of({{"kind", "lp-sweep"}, {"seed", 1}, {"p_grid", {0.5}}}), "p_grid");
  EXPECT_EQ(field_of({{"kind", "neck-search"}, {"seed", 1}, {"signature", {2}}}), "signature");
  EXPECT_EQ(field_of({{"kind", "body-search"}, {"seed", 1}, {"optimizer", {{"speed", 3}}}}), "optimizer/speed");
  EXPECT_EQ(field_of({{"kind", "lp-sweep"}, {"seed", 1}}), "<none>");
  EXPECT_THROW(experiment_kind_from_string("nope"), std::invalid_argument);
}

TEST(Config, RoundTrip) {
  const auto c = ExperimentConfig::from_json({{"kind", "neck-search"}, {"seed", 42}, {"signature", {3, 2}}, {"amplitude", 0.2}});
  const auto c2 = ExperimentConfig::from_json(c.to_json());
  EXPECT_EQ(c.to_json(), c2.to_json());
  EXPECT_EQ(c2.a, 3);
  EXPECT_EQ(c2.b, 2);
  EXPECT_EQ(c2.seed, 42u);
}

TEST(BodySearch, ZeroDimensionalIsTheBall) {
  auto c = ExperimentConfig::from_json(
      {{"kind", "body-search"}, {"seed", 3}, {"basis_size", 0}, {"samples", 20000}, {"nodes", 128}});
  const auto r = body_search(c);
  const double exact = 2.0 * std::numbers::pi * std::numbers::pi / 3.0;
  ASSERT_EQ(r.candidates.size(), 1u);
  EXPECT_NEAR(r.best_value, exact, 0.03 * exact);
  EXPECT_NEAR(r.reference, exact, 1e-12);
  EXPECT_TRUE(r.assertions_hold());
}

TEST(NeckSearch, ConvergesToFlat) {
  auto c = ExperimentConfig::from_json({{"kind", "neck-search"},
                                         {"seed", 2},
                                         {"signature", {2, 2}},
                                         {"harmonic_cutoff", 3},
                                         {"amplitude", 0.1},
                                         {"optimizer", {{"max_evaluations", 400}}}});
  const auto r = neck_search(c);
  EXPECT_FALSE(r.violation);
  EXPECT_GE(r.best_value, r.reference * (1.0 - 1e-3));
  EXPECT_LE(r.best_value, r.candidates.front().value);
  EXPECT_LT(r.best_value, r.reference * 1.01);
  EXPECT_TRUE(r.assertions_hold());
}

TEST(NeckSearch, SegmentCase) {
  auto c = ExperimentConfig::from_json(
      {{"kind", "neck-search"}, {"seed", 5}, {"signature", {1, 3}}, {"harmonic_cutoff", 1}, {"amplitude", 0.3}});
  const auto r = neck_search(c);
  EXPECT_NEAR(r.reference, 4.0, 1e-12);
  EXPECT_GE(r.best_value, 4.0 * (1.0 - 1e-3));
  EXPECT_NEAR(r.best_value, 4.0, 0.01);
}

TEST(Search, DeterministicReports) {
  const json cfg = {{"kind", "neck-search"}, {"seed", 8}, {"signature", {2, 1}}, {"optimizer", {{"max_evaluations", 50}}}};
  const auto r1 = run_experiment(ExperimentConfig::from_json(cfg));
  const auto r2 = run_experiment(ExperimentConfig::from_json(cfg));
  EXPECT_EQ(stable(r1).dump(), stable(r2).dump());
}

TEST(Search, WritesReportFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "bneck_search_test";
  std::filesystem::remove_all(dir);
  const auto r = run_experiment(ExperimentConfig::from_json(
      {{"kind", "neck-search"}, {"seed", 1}, {"optimizer", {{"max_evaluations", 20}, {"restarts", 0}}}}));
  write_report(r, dir.string());
  for (const char* name : {"report.json", "summary.csv", "config.json"}) EXPECT_TRUE(std::filesystem::exists(dir / name)) << name;
  std::ifstream csv(dir / "summary.csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_NE(header.find("value"), std::string::npos);
  std::size_t rows = 0;
  for (std::string line; std::getline(csv, line);) rows += !line.empty();
  EXPECT_EQ(rows, r.candidates.size());
  std::ifstream rep(dir / "report.json");
  const json j = json::parse(rep);
  EXPECT_EQ(j.at("experiment"), "neck-search");
  std::filesystem::remove_all(dir);
}
