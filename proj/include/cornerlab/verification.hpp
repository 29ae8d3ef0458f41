#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace cornerlab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

/// Acceptance constants, configs/acceptance.json by default.
nlohmann::json load_acceptance_constants(const std::filesystem::path& path = {});

/// Ids 1..11 in order.
std::vector<int> criterion_ids();
std::string_view criterion_name(int id);

/// Runs one criterion with the given constants. Exceptions are reported as a
/// failure with the message in the detail.
CriterionResult run_criterion(int id, const nlohmann::json& constants, unsigned threads = 1);

/// "[PASS] 3 interlacing: ..." style line.
std::string format_result(const CriterionResult& result);

}  // namespace cornerlab
