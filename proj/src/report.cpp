#include "nilspherical/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace nilspherical {

bool SuiteReport::pass() const {
  for (const auto& c : checks)
    if (c.status == "fail") return false;
  return true;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string report_csv(const SuiteReport& r) {
  std::string out = "check,status,defect,tolerance,seconds,seed,config_digest\n";
  for (const auto& c : r.checks)
    out += c.name + "," + c.status + "," + format_double(c.defect) + "," + format_double(c.tolerance) + "," +
           format_double(c.seconds) + "," + std::to_string(r.seed) + "," + r.config_digest + "\n";
  return out;
}

nlohmann::json report_json(const SuiteReport& r) {
  nlohmann::json j;
  j["suite"] = r.suite;
  j["seed"] = r.seed;
  j["config_digest"] = r.config_digest;
  j["warnings"] = r.warnings;
  j["checks"] = nlohmann::json::array();
  for (const auto& c : r.checks)
    j["checks"].push_back({{"check", c.name},
                           {"status", c.status},
                           {"defect", format_double(c.defect)},
                           {"tolerance", format_double(c.tolerance)},
                           {"seconds", format_double(c.seconds)},
                           {"seed", r.seed},
                           {"config_digest", r.config_digest},
                           {"detail", c.detail}});
  j["pass"] = r.pass();
  return j;
}

void preflight_output(const std::string& dir, const std::vector<std::string>& names) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) throw std::runtime_error("output directory '" + dir + "' cannot be created");
  for (const auto& name : names) {
    const fs::path p = fs::path(dir) / name;
    const bool existed = fs::exists(p);
    std::ofstream probe(p, std::ios::app);
    if (!probe) throw std::runtime_error("output file '" + p.string() + "' is not writable");
    probe.close();
    if (!existed) fs::remove(p, ec);
  }
}

void emit_report(const SuiteReport& report, const std::string& dir, const std::string& csv_name,
                 const std::string& json_name) {
  namespace fs = std::filesystem;
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream out(fs::path(dir) / name, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + (fs::path(dir) / name).string() + "'");
    out << text;
  };
  write(csv_name, report_csv(report));
  write(json_name, report_json(report).dump(2) + "\n");
}

}  // namespace nilspherical
