#pragma once

#include "nilspherical/transform.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace nilspherical {

// Raised for every schema problem; the CLI maps it to exit code 2.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct CertificateSpec {
  int m_max = 2;
  int n_max = 4;
  int l_max = 2;
  int truncation = 32;
};

struct RunConfig {
  int n = 2;
  std::vector<double> mu_hat;
  std::vector<int> mult;
  std::vector<double> xp_star;
  std::uint64_t seed = 0;
  std::string suite = "acceptance";
  bool timing = false;
  QuadratureSpec quad;
  std::vector<InvariantTestFunction> catalog;
  std::vector<GroupElement> points;
  SphericalPoint spectral_point = Type1{0.0, {0}, 1.0};
  CertificateSpec certificate;
  std::vector<std::vector<double>> skew_matrix;  // input of `canon`
  std::string csv_name = "report.csv";
  std::string json_name = "report.json";

  SpectrumSlice slice;
  std::vector<std::string> warnings;
};

// Catalog used when the config does not list one.
std::vector<InvariantTestFunction> default_catalog();

RunConfig config_from_json(const nlohmann::json& j);
RunConfig parse_config(const std::string& path);
// Every field with defaults filled in; parsing the echo reproduces the run.
nlohmann::json config_to_json(const RunConfig& cfg);
// FNV-1a of the canonical echo, as 16 hex digits.
std::string config_digest(const RunConfig& cfg);

std::size_t edit_distance(const std::string& a, const std::string& b);

}  // namespace nilspherical
