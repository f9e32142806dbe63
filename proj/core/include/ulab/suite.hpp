#pragma once

#include <string>
#include <vector>

namespace ulab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string measured;  // the numbers the verdict was based on
  std::string detail;    // thresholds and setup
  double seconds = 0.0;
};

// Acceptance criteria 1..10, in order.
std::vector<int> criterion_ids();
std::string criterion_name(int id);

CriterionResult run_criterion(int id);
// Every criterion, or only the one named by `filter` ("C4", "c4" or "4").
// UsageError for a filter that names no criterion.
std::vector<CriterionResult> run_suite(const std::string& filter = "");

// "PASS C3 <name> | measured: ... | ... (0.41 s)"
std::string format_result(const CriterionResult& r);

}  // namespace ulab
