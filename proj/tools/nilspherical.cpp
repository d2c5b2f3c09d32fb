#include "nilspherical/checks.hpp"
#include "nilspherical/config.hpp"
#include "nilspherical/report.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

using namespace nilspherical;
using nlohmann::json;

namespace {

constexpr int kPass = 0, kFail = 1, kConfigError = 2;

json complex_json(cplx v) { return {{"re", v.real()}, {"im", v.imag()}}; }

std::vector<InvariantTestFunction> invertible(const RunConfig& cfg) {
  std::vector<InvariantTestFunction> out;
  for (const auto& f : cfg.catalog)
    if (f.multipliers.empty()) out.push_back(f);
  if (out.empty()) throw ConfigError("catalog has no function without multipliers");
  return out;
}

json cmd_canon(const RunConfig& cfg) {
  if (cfg.skew_matrix.empty()) throw ConfigError("canon needs 'skew_matrix' (array of rows)");
  const int n = static_cast<int>(cfg.skew_matrix.size());
  Mat a(n, n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(cfg.skew_matrix[i].size()) != n) throw ConfigError("skew_matrix must be square");
    for (int j = 0; j < n; ++j) a(i, j) = cfg.skew_matrix[i][j];
  }
  const SkewCanonicalForm f = canonicalize_skew(a);
  std::vector<std::vector<double>> rot(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rot[i][j] = f.rotation(i, j);
  const double err = (f.reconstruct() - a).norm() / std::max(a.norm(), 1e-300);
  return {{"deltas", f.deltas}, {"p0", f.p0},      {"p1", f.p1},
          {"mu", f.mu},         {"mult", f.mult},  {"rotation", rot},
          {"reconstruction_error", err}};
}

json cmd_eval(const RunConfig& cfg) {
  json out = json::array();
  const bool closed = cfg.slice.p1() == 1 && cfg.slice.a() == 1 && cfg.slice.n <= 3;
  Averaging avg = cfg.quad.sphere;
  if (!closed && std::holds_alternative<Type1>(cfg.spectral_point)) avg = MonteCarlo{100000, cfg.seed};
  for (const auto& x : cfg.points) {
    const SphericalValue v = eval_spherical(cfg.spectral_point, x, cfg.slice, avg);
    out.push_back({{"value", complex_json(v.value)}, {"std_error", v.std_error}});
  }
  return out;
}

json cmd_transform(const RunConfig& cfg) {
  json out = json::array();
  for (const auto& f : cfg.catalog)
    out.push_back({{"family", f.family}, {"value", complex_json(forward_transform(f, cfg.spectral_point, cfg.slice, cfg.quad))}});
  return out;
}

json cmd_calibrate(const RunConfig& cfg) {
  return {{"c", calibrate_c(invertible(cfg).front(), cfg.slice, cfg.quad)}};
}

json cmd_invert(const RunConfig& cfg) {
  const auto fs = invertible(cfg);
  const double c = calibrate_c(fs.front(), cfg.slice, cfg.quad);
  json out = {{"c", c}, {"functions", json::array()}};
  for (const auto& f : fs) {
    const auto res = inverse_transform_many(values_of(transform_evaluator(f, cfg.slice, cfg.quad)), cfg.points,
                                            cfg.slice, cfg.quad, c);
    json rows = json::array();
    for (std::size_t i = 0; i < res.size(); ++i)
      rows.push_back({{"value", complex_json(res[i].value)},
                      {"exact", f.base_value(cfg.points[i])},
                      {"gap", complex_json(res[i].gap)},
                      {"gap_error", res[i].gap_error},
                      {"lambda_c", res[i].lambda_c},
                      {"alpha_tail", res[i].alpha_tail},
                      {"lambda_tail", res[i].lambda_tail}});
    out["functions"].push_back({{"family", f.family}, {"points", rows}});
  }
  return out;
}

json cmd_plancherel(const RunConfig& cfg) {
  const auto fs = invertible(cfg);
  const double c = calibrate_c(fs.front(), cfg.slice, cfg.quad);
  json out = {{"c", c}, {"functions", json::array()}};
  for (const auto& f : fs)
    out["functions"].push_back({{"family", f.family}, {"defect", plancherel_defect(f, cfg.slice, cfg.quad, c)}});
  return out;
}

json cmd_certify(const RunConfig& cfg, bool& all_pass) {
  const auto grid = GridSpec::default_for(cfg.slice);
  const auto& C = cfg.certificate;
  json out = json::array();
  all_pass = true;
  for (const auto& f : invertible(cfg)) {
    const auto g = tabulate_grid(cfg.slice, grid.r_nodes, grid.lambda_nodes, C.truncation + C.l_max, C.m_max + C.l_max,
                                 transform_evaluator(f, cfg.slice, cfg.quad));
    const auto rep = decrease_certificate(g, C.m_max, C.n_max, C.l_max);
    all_pass = all_pass && rep.pass();
    json entries = json::array();
    for (const auto& e : rep.entries)
      entries.push_back({{"l", e.l}, {"m", e.m}, {"deriv", e.deriv}, {"N", e.n}, {"C", e.c}, {"inner", e.inner},
                         {"outer", e.outer}, {"pass", e.pass}});
    out.push_back({{"family", f.family}, {"pass", rep.pass()}, {"worst_ratio", rep.worst_ratio()}, {"entries", entries}});
  }
  return out;
}

void write_file(const std::string& dir, const std::string& name, const std::string& text) {
  std::ofstream o(std::filesystem::path(dir) / name, std::ios::binary | std::ios::trunc);
  if (!o) throw std::runtime_error("cannot write " + name);
  o << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spherical analysis on free two-step nilpotent groups"};
  app.require_subcommand(1);
  std::string config_path, out_dir, suite;
  std::optional<std::uint64_t> seed;
  const std::vector<std::string> commands{"canon", "eval", "transform", "invert", "plancherel", "certify",
                                          "calibrate", "verify"};
  for (const auto& name : commands) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "config file (JSON)")->required();
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--suite", suite, "suite or comma-separated check names (verify)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  RunConfig cfg;
  try {
    cfg = parse_config(config_path);
    if (seed) cfg.seed = *seed;
    if (!suite.empty()) cfg.suite = suite;
    if (command == "verify") suite_members(cfg.suite);
    for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << "\n";
    if (command == "verify" && out_dir.empty()) out_dir = ".";
    if (!out_dir.empty()) {
      std::vector<std::string> names{"config.echo.json"};
      if (command == "verify") {
        names.push_back(cfg.csv_name);
        names.push_back(cfg.json_name);
      } else {
        names.push_back(command + ".json");
      }
      preflight_output(out_dir, names);
    }
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (!out_dir.empty()) write_file(out_dir, "config.echo.json", config_to_json(cfg).dump(2) + "\n");
    if (command == "verify") {
      const SuiteReport rep = run_suite(cfg);
      emit_report(rep, out_dir, cfg.csv_name, cfg.json_name);
      std::cout << report_csv(rep);
      for (const auto& c : rep.checks)
        if (c.status != "pass") std::cerr << c.name << ": " << c.detail << "\n";
      return rep.pass() ? kPass : kFail;
    }
    json result;
    int code = kPass;
    if (command == "canon") result = cmd_canon(cfg);
    else if (command == "eval") result = cmd_eval(cfg);
    else if (command == "transform") result = cmd_transform(cfg);
    else if (command == "calibrate") result = cmd_calibrate(cfg);
    else if (command == "invert") result = cmd_invert(cfg);
    else if (command == "plancherel") result = cmd_plancherel(cfg);
    else if (command == "certify") {
      bool ok = true;
      result = cmd_certify(cfg, ok);
      code = ok ? kPass : kFail;
    }
    const std::string text = result.dump(2) + "\n";
    std::cout << text;
    if (!out_dir.empty()) write_file(out_dir, command + ".json", text);
    return code;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
}
