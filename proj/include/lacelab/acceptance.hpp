#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace lacelab {

enum class SuiteProfile { Quick, Full };
SuiteProfile suite_profile_from(const std::string& s);

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string summary;    // measured value(s) against the pinned tolerance
  std::string module;     // provenance of an error, empty otherwise
  double seconds = 0;
  nlohmann::json data;

  /// "PASS  3 amplitude-crossover  ..." — one line, no trailing newline.
  std::string line() const;
};

inline constexpr int kCriteria = 9;

const std::vector<std::string>& criterion_names();
/// Runs one criterion; module errors become a failed result carrying their provenance.
CriterionResult run_criterion(int id, SuiteProfile profile);
std::vector<CriterionResult> run_acceptance(SuiteProfile profile, const std::vector<int>& ids = {});

}  // namespace lacelab
