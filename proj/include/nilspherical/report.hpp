#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace nilspherical {

struct CheckResult {
  std::string name;
  std::string status;  // pass, fail or warn
  double defect = 0.0;
  double tolerance = 0.0;
  double seconds = 0.0;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::string config_digest;
  std::vector<CheckResult> checks;
  std::vector<std::string> warnings;
  bool pass() const;
};

// %.17g, so every printed double parses back to the same value.
std::string format_double(double v);

std::string report_csv(const SuiteReport& report);
nlohmann::json report_json(const SuiteReport& report);

// Fails with std::runtime_error when `dir` cannot hold the output files; run
// before any computation starts.
void preflight_output(const std::string& dir, const std::vector<std::string>& names);
void emit_report(const SuiteReport& report, const std::string& dir, const std::string& csv_name,
                 const std::string& json_name);

}  // namespace nilspherical
