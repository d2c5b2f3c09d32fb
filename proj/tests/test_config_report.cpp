#include "doctest.h"
#include "nilspherical/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <random>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace nilspherical;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nilspherical_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(NILSPHERICAL_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string config_error(const json& j) {
  try {
    config_from_json(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal config materializes every default") {
  const RunConfig cfg = config_from_json({{"n", 2}, {"seed", 42}});
  CHECK(cfg.slice.mu_hat == std::vector<double>{1.0});
  CHECK(cfg.slice.blocks.mult == std::vector<int>{1});
  CHECK(cfg.warnings.empty());
  const json echo = config_to_json(cfg);
  for (const char* key : {"n", "seed", "mu_hat", "mult", "xp_star", "suite", "timing", "quadrature", "catalog",
                          "points", "spectral_point", "certificate", "output"})
    CHECK(echo.contains(key));
  CHECK(echo["quadrature"]["lambda_max"] == 14.0);
  CHECK(echo["catalog"].size() == 2);
}

TEST_CASE("echoed config reproduces the run") {
  const RunConfig cfg = config_from_json(
      {{"n", 5}, {"seed", 7}, {"mu_hat", {2.0, 1.0}}, {"mult", {1, 1}}, {"quadrature", {{"truncation", 200}}}});
  const RunConfig again = config_from_json(config_to_json(cfg));
  CHECK(config_to_json(again) == config_to_json(cfg));
  CHECK(config_digest(again) == config_digest(cfg));
  CHECK(again.quad.truncation == 200);
}

TEST_CASE("normalization of the block frequencies") {
  const RunConfig cfg = config_from_json({{"n", 3}, {"seed", 1}, {"mu_hat", {2.0}}});
  REQUIRE(cfg.warnings.size() == 1);
  CHECK(cfg.slice.mu_hat[0] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("schema errors name the key") {
  const std::string unknown = config_error({{"n", 2}, {"seed", 1}, {"quadrature", {{"lamda_min", 0.1}}}});
  CHECK(unknown.find("lamda_min") != std::string::npos);
  CHECK(unknown.find("did you mean 'lambda_min'") != std::string::npos);
  CHECK(config_error({{"n", 2}, {"sede", 1}}).find("seed") != std::string::npos);
  CHECK(config_error({{"n", 2}}).find("seed") != std::string::npos);
  const std::string type = config_error({{"n", "two"}, {"seed", 1}});
  CHECK(type.find("'n'") != std::string::npos);
  CHECK(type.find("integer") != std::string::npos);
  CHECK(config_error({{"n", 2}, {"seed", 1}, {"xyzzy", 1}}).find("did you mean") == std::string::npos);
}

TEST_CASE("edit distance") {
  CHECK(edit_distance("lamda_min", "lambda_min") == 1);
  CHECK(edit_distance("", "abc") == 3);
  CHECK(edit_distance("kitten", "sitting") == 3);
  CHECK(edit_distance("same", "same") == 0);
}

TEST_CASE("config digest is stable under key reordering") {
  const json a = json::parse(R"({"n": 3, "seed": 5, "quadrature": {"r_nodes": 16, "lambda_max": 12}})");
  const json b = json::parse(R"({"quadrature": {"lambda_max": 12, "r_nodes": 16}, "seed": 5, "n": 3})");
  CHECK(config_digest(config_from_json(a)) == config_digest(config_from_json(b)));
  CHECK(config_digest(config_from_json(a)).size() == 16);
  CHECK(config_digest(config_from_json(a)) != config_digest(config_from_json({{"n", 3}, {"seed", 6}})));
}

TEST_CASE("decimal rendering round-trips") {
  std::mt19937_64 eng(3);
  std::uniform_int_distribution<std::uint64_t> bits;
  for (int k = 0; k < 10000; ++k) {
    std::uint64_t u = bits(eng);
    double v;
    std::memcpy(&v, &u, sizeof v);
    if (!std::isfinite(v)) continue;
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("suites and reports") {
  RunConfig cfg = config_from_json({{"n", 2}, {"seed", 11}});
  CHECK(suite_members("none").empty());
  CHECK(suite_members("").empty());
  CHECK(suite_members("acceptance").size() == check_registry().size());
  CHECK_THROWS_AS(suite_members("acceptence"), ConfigError);
  // Every registered check belongs to exactly one module suite.
  for (const auto& spec : check_registry()) {
    int owners = 0;
    for (const auto& s : suite_names()) {
      if (s == "acceptance" || s == "none") continue;
      const auto m = suite_members(s);
      owners += static_cast<int>(std::count(m.begin(), m.end(), spec.name));
    }
    CHECK(owners == 1);
  }

  cfg.suite = "none";
  const SuiteReport empty = run_suite(cfg);
  CHECK(empty.checks.empty());
  CHECK(empty.pass());

  cfg.suite = "combinatorics";
  const auto t0 = std::chrono::steady_clock::now();
  const SuiteReport comb = run_suite(cfg);
  CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() < 5.0);
  CHECK(comb.pass());
  REQUIRE(comb.checks.size() == 3);
  const std::string csv = report_csv(comb);
  CHECK(csv.rfind("check,status,defect,tolerance,seconds,seed,config_digest\n", 0) == 0);
  CHECK(csv == report_csv(run_suite(cfg)));
  const json js = report_json(comb);
  REQUIRE(js["checks"].size() == 3);
  for (const char* key : {"check", "status", "defect", "tolerance", "seconds", "seed", "config_digest"})
    CHECK(js["checks"][0].contains(key));

  const fs::path dir = scratch("emit");
  emit_report(comb, dir.string(), "a.csv", "a.json");
  CHECK(read_file(dir / "a.csv") == csv);
  CHECK(json::parse(read_file(dir / "a.json")) == js);
  CHECK_THROWS(preflight_output("/proc/forbidden/dir", {"a.csv"}));
}

TEST_CASE("crashing and failing checks are reported, not thrown") {
  RunConfig cfg = config_from_json({{"n", 2}, {"seed", 1}});
  const CheckSpec crash{"crash", "throws", [](const RunConfig&, std::uint64_t) -> CheckOutcome {
                          throw std::runtime_error("boom");
                        }};
  const CheckResult r = run_check(crash, cfg);
  CHECK(r.status == "fail");
  CHECK(r.detail.find("boom") != std::string::npos);
  CHECK(r.seconds == 0.0);
}

TEST_CASE("command line: exit codes and byte-stable output") {
  const fs::path dir = scratch("cli");
  const fs::path cfg = dir / "config.json";
  std::ofstream(cfg) << R"({"n": 2, "seed": 5})";
  const fs::path bad = dir / "bad.json";
  std::ofstream(bad) << R"({"n": 2, "seed": 5, "quadrature": {"lamda_min": 0.1}})";

  CHECK(run_cli("verify --config " + cfg.string() + " --suite none --out " + (dir / "a").string()) == 0);
  CHECK(run_cli("verify --config " + cfg.string() + " --suite combinatorics --out " + (dir / "b").string()) == 0);
  CHECK(run_cli("verify --config " + cfg.string() + " --suite combinatorics --out " + (dir / "c").string()) == 0);
  CHECK(read_file(dir / "b" / "report.csv") == read_file(dir / "c" / "report.csv"));
  CHECK(read_file(dir / "b" / "report.json") == read_file(dir / "c" / "report.json"));

  // The echo is a valid config that reproduces the report.
  CHECK(run_cli("verify --config " + (dir / "b" / "config.echo.json").string() + " --out " + (dir / "d").string()) == 0);
  CHECK(read_file(dir / "b" / "report.csv") == read_file(dir / "d" / "report.csv"));

  // --seed overrides the config and lands in every row.
  CHECK(run_cli("verify --config " + cfg.string() + " --suite combinatorics --seed 99 --out " + (dir / "e").string()) == 0);
  CHECK(read_file(dir / "e" / "report.csv").find(",99,") != std::string::npos);

  CHECK(run_cli("verify --config " + bad.string() + " --out " + (dir / "f").string()) == 2);
  CHECK(!fs::exists(dir / "f" / "report.csv"));
  CHECK(run_cli("verify --config " + (dir / "missing.json").string()) == 2);
  CHECK(run_cli("verify --config " + cfg.string() + " --suite nosuch") == 2);
  CHECK(run_cli("verify --config " + cfg.string() + " --suite none --out /proc/forbidden") == 2);

  // A failing check gives exit code 1 and a fail row.
  CHECK(run_cli("verify --config " + cfg.string() + " --suite ac13_integrability_regions --out " + (dir / "g").string()) == 1);
  CHECK(read_file(dir / "g" / "report.csv").find("ac13_integrability_regions,fail,") != std::string::npos);

  CHECK(run_cli("canon --config " + cfg.string()) == 2);
  const fs::path canon = dir / "canon.json";
  std::ofstream(canon) << R"({"n": 3, "seed": 1, "skew_matrix": [[0, 1, 0], [-1, 0, 2], [0, -2, 0]]})";
  CHECK(run_cli("canon --config " + canon.string() + " --out " + (dir / "h").string()) == 0);
  const json out = json::parse(read_file(dir / "h" / "canon.json"));
  CHECK(out["deltas"][0].get<double>() == doctest::Approx(std::sqrt(5.0)));
  CHECK(out["reconstruction_error"].get<double>() <= 1e-12);
}

TEST_CASE("worker count does not change results") {
  RunConfig cfg = config_from_json({{"n", 2}, {"seed", 3}});
  cfg.suite = "ac07_functional_equation";
  setenv("NILSPHERICAL_THREADS", "1", 1);
  const std::string one = report_csv(run_suite(cfg));
  setenv("NILSPHERICAL_THREADS", "3", 1);
  const std::string three = report_csv(run_suite(cfg));
  unsetenv("NILSPHERICAL_THREADS");
  CHECK(one == three);
}
