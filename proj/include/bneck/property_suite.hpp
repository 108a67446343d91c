#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace bneck {

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Fast cross-module property checks run by `selftest`.
std::vector<PropertyResult> run_property_suite(std::uint64_t seed);

nlohmann::json property_results_json(const std::vector<PropertyResult>& results);

}  // namespace bneck
