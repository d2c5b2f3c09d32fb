#pragma once

#include "nilspherical/config.hpp"
#include "nilspherical/report.hpp"

#include <functional>
#include <string>
#include <vector>

namespace nilspherical {

struct CheckOutcome {
  double defect = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

struct CheckSpec {
  std::string name;
  std::string summary;
  std::function<CheckOutcome(const RunConfig& cfg, std::uint64_t seed)> run;
};

// Declaration order is report order.
const std::vector<CheckSpec>& check_registry();

std::vector<std::string> suite_names();
// Check names of a suite; a comma-separated list of check names is also
// accepted, and "none" or "" selects nothing.
std::vector<std::string> suite_members(const std::string& suite);

// Crashing checks are recorded as failures with the exception text.
CheckResult run_check(const CheckSpec& spec, const RunConfig& cfg);
SuiteReport run_suite(const RunConfig& cfg);

}  // namespace nilspherical
