#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "bneck/cli.hpp"

using nlohmann::json;

namespace {

struct Invocation {
  int code = -1;
  std::string out, err;
  json doc() const { return json::parse(out); }
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "bottleneck-lab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Invocation r;
  r.code = bneck::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << content;
  return p;
}

}  // namespace

TEST(Cli, UsageExitCodes) {
  EXPECT_EQ(invoke({}).code, bneck::kExitUsage);
  EXPECT_EQ(invoke({"frobnicate"}).code, bneck::kExitUsage);
  EXPECT_EQ(invoke({"--help"}).code, bneck::kExitOk);
  EXPECT_EQ(invoke({"mahler", "--samples", "ten"}).code, bneck::kExitUsage);
  EXPECT_EQ(invoke({"mahler", "--body", "{\"type\":\"torus\",\"n\":2}"}).code, bneck::kExitUsage);
  EXPECT_EQ(invoke({"signature-table", "--n", "9"}).code, bneck::kExitUsage);
}

TEST(Cli, MahlerCube) {
  const auto r = invoke({"mahler", "--body", "{\"type\":\"cube\",\"n\":3}", "--samples", "0", "--json"});
  ASSERT_EQ(r.code, bneck::kExitOk) << r.err;
  const json j = r.doc();
  EXPECT_NEAR(j["result"]["mahler"]["estimate"].get<double>(), 32.0 / 3.0, 1e-12);
  EXPECT_EQ(j["command"], "mahler");
  EXPECT_TRUE(j["passed"].get<bool>());
  const auto text = invoke({"mahler", "--body", "{\"type\":\"cube\",\"n\":3}", "--samples", "0"});
  EXPECT_NE(text.out.find("10.6666"), std::string::npos);
}

TEST(Cli, FlatNeckEnergy) {
  const auto r = invoke({"neck-energy", "--signature", "2,1", "--flat", "--json"});
  ASSERT_EQ(r.code, bneck::kExitOk) << r.err;
  EXPECT_NEAR(r.doc()["result"]["energy"].get<double>(), std::numbers::pi * std::numbers::pi, 1e-9);
}

TEST(Cli, SignatureTableCounts) {
  const auto r = invoke({"signature-table", "--n", "2", "--json"});
  ASSERT_EQ(r.code, bneck::kExitOk) << r.err;
  const int dims[] = {1, 4, 6, 4, 1};
  for (const auto& row : r.doc()["result"]["rows"]) {
    const int k = row["k"];
    EXPECT_EQ(row["positives"].get<int>() + row["negatives"].get<int>(), dims[k]);
    EXPECT_EQ(row["zeros"].get<int>(), 0);
  }
}

TEST(Cli, ConfigMergeAndOverride) {
  const auto cfg = temp_file("bneck_cli_cfg.json", "{\"n\": 1}");
  const auto from_file = invoke({"--config", cfg.string(), "signature-table", "--json"});
  ASSERT_EQ(from_file.code, bneck::kExitOk) << from_file.err;
  EXPECT_EQ(from_file.doc()["config"]["n"], 1);
  const auto overridden = invoke({"--config", cfg.string(), "signature-table", "--n", "2", "--json"});
  EXPECT_EQ(overridden.doc()["config"]["n"], 2);
  std::filesystem::remove(cfg);
}

TEST(Cli, MalformedConfig) {
  const auto bad = temp_file("bneck_cli_bad.json", "{\"n\": 2,");
  const auto r = invoke({"--config", bad.string(), "signature-table"});
  EXPECT_EQ(r.code, bneck::kExitUsage);
  EXPECT_FALSE(r.err.empty());
  const auto unknown = temp_file("bneck_cli_unknown.json", "{\"dimension\": 2}");
  const auto u = invoke({"--config", unknown.string(), "signature-table"});
  EXPECT_EQ(u.code, bneck::kExitUsage);
  EXPECT_NE(u.err.find("dimension"), std::string::npos);
  EXPECT_EQ(invoke({"--config", "/nonexistent/cfg.json", "signature-table"}).code, bneck::kExitUsage);
  std::filesystem::remove(bad);
  std::filesystem::remove(unknown);
}

TEST(Cli, SeedAfterSubcommandAndDeterminism) {
  const std::vector<std::string> args{"mahler", "--body", "{\"type\":\"lp\",\"p\":3,\"n\":2}", "--samples", "2000", "--seed", "7", "--json"};
  const auto a = invoke(args);
  const auto b = invoke(args);
  ASSERT_EQ(a.code, bneck::kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.doc()["config"]["seed"], 7);
}

TEST(Cli, OutputDirectory) {
  const auto dir = std::filesystem::temp_directory_path() / "bneck_cli_out";
  std::filesystem::remove_all(dir);
  const auto r = invoke({"--output", dir.string(), "paneitz", "--a", "3", "--trials", "5"});
  ASSERT_EQ(r.code, bneck::kExitOk) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "result.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "config.json"));
  std::ifstream in(dir / "result.json");
  const json j = json::parse(in);
  EXPECT_TRUE(j.contains("wall_clock_seconds"));
  std::filesystem::remove_all(dir);
}
