#include "nilspherical/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace nilspherical {

using nlohmann::json;

std::vector<InvariantTestFunction> default_catalog() {
  return {InvariantTestFunction::gaussian(1.0, 1.0),
          InvariantTestFunction::poly_gaussian({{1.0, 0.5}, {1.0}}, 1.0, 0.7)};
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

namespace {

void check_keys(const json& obj, const std::string& where, const std::vector<std::string>& known) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find(known.begin(), known.end(), key) != known.end()) continue;
    std::string best;
    std::size_t best_d = 3;
    for (const auto& k : known) {
      const std::size_t d = edit_distance(key, k);
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    std::string msg = "unknown key '" + where + key + "'";
    if (!best.empty()) msg += "; did you mean '" + best + "'?";
    throw ConfigError(msg);
  }
}

template <class T>
T get(const json& obj, const std::string& where, const std::string& key, const T& fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    std::string expected;
    if constexpr (std::is_same_v<T, bool>)
      expected = "boolean";
    else if constexpr (std::is_integral_v<T>)
      expected = "integer";
    else if constexpr (std::is_floating_point_v<T>)
      expected = "number";
    else if constexpr (std::is_same_v<T, std::string>)
      expected = "string";
    else
      expected = "array of numbers";
    throw ConfigError("key '" + where + key + "' has the wrong type; expected " + expected);
  }
}

Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), Eigen::Index(v.size())); }
std::vector<double> from_vec(const Vec& v) { return {v.data(), v.data() + v.size()}; }

InvariantTestFunction parse_function(const json& j, const std::string& where) {
  check_keys(j, where, {"family", "poly", "beta_v", "beta_z", "multipliers"});
  const auto family = get<std::string>(j, where, "family", "gaussian");
  const double bv = get<double>(j, where, "beta_v", 1.0), bz = get<double>(j, where, "beta_z", 1.0);
  if (!(bv > 0) || !(bz > 0)) throw ConfigError(where + "beta_v and beta_z must be positive");
  InvariantTestFunction f;
  if (family == "gaussian") {
    if (j.contains("poly")) throw ConfigError(where + "poly is only valid for family poly_gaussian");
    f = InvariantTestFunction::gaussian(bv, bz);
  } else if (family == "poly_gaussian") {
    f = InvariantTestFunction::poly_gaussian(get<std::vector<std::vector<double>>>(j, where, "poly", {{1.0}}), bv, bz);
  } else {
    throw ConfigError("key '" + where + "family' must be gaussian or poly_gaussian");
  }
  for (const auto& m : get<std::vector<std::string>>(j, where, "multipliers", {})) {
    try {
      f = f.times(multiplier_from_string(m));
    } catch (const ValidationError& e) {
      throw ConfigError(where + "multipliers: " + e.what());
    }
  }
  return f;
}

json function_to_json(const InvariantTestFunction& f) {
  json j;
  const bool plain = f.poly.size() == 1 && f.poly[0].size() == 1 && f.poly[0][0] == 1.0;
  j["family"] = plain ? "gaussian" : "poly_gaussian";
  if (!plain) j["poly"] = f.poly;
  j["beta_v"] = f.beta_v;
  j["beta_z"] = f.beta_z;
  std::vector<std::string> ms;
  for (auto m : f.multipliers) ms.push_back(to_string(m));
  j["multipliers"] = ms;
  return j;
}

}  // namespace

RunConfig config_from_json(const json& j) {
  check_keys(j, "", {"n", "mu_hat", "mult", "xp_star", "seed", "suite", "timing", "quadrature", "catalog", "points",
                     "spectral_point", "certificate", "skew_matrix", "output"});
  if (!j.contains("seed")) throw ConfigError("missing mandatory key 'seed' (expected integer)");
  RunConfig c;
  c.seed = get<std::uint64_t>(j, "", "seed", 0);
  c.n = get<int>(j, "", "n", 2);
  if (c.n < 2) throw ConfigError("key 'n' must be at least 2");
  c.suite = get<std::string>(j, "", "suite", c.suite);
  c.timing = get<bool>(j, "", "timing", false);
  const SpectrumSlice standard = SpectrumSlice::standard(c.n);
  c.mu_hat = get<std::vector<double>>(j, "", "mu_hat", standard.mu_hat);
  c.mult = get<std::vector<int>>(j, "", "mult", standard.blocks.mult);
  c.xp_star = get<std::vector<double>>(j, "", "xp_star", {});
  try {
    c.slice = SpectrumSlice::make(c.n, c.mu_hat, c.mult, to_vec(c.xp_star), &c.warnings);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("slice: ") + e.what());
  }
  c.mu_hat = c.slice.mu_hat;
  c.xp_star = from_vec(c.slice.xp_star);

  if (j.contains("quadrature")) {
    const json& q = j.at("quadrature");
    const std::string w = "quadrature.";
    check_keys(q, w,
               {"laguerre_extra", "doubling_tolerance", "truncation", "lambda_min", "lambda_max",
                "lambda_panel_order", "alpha_tail_tolerance", "gap_fit_nodes", "r_max", "r_nodes",
                "sphere_polar_nodes", "sphere_azimuth_nodes"});
    auto& Q = c.quad;
    Q.laguerre_extra = get<int>(q, w, "laguerre_extra", Q.laguerre_extra);
    Q.doubling_tolerance = get<double>(q, w, "doubling_tolerance", Q.doubling_tolerance);
    Q.truncation = get<int>(q, w, "truncation", Q.truncation);
    Q.lambda_min = get<double>(q, w, "lambda_min", Q.lambda_min);
    Q.lambda_max = get<double>(q, w, "lambda_max", Q.lambda_max);
    Q.lambda_panel_order = get<int>(q, w, "lambda_panel_order", Q.lambda_panel_order);
    Q.alpha_tail_tolerance = get<double>(q, w, "alpha_tail_tolerance", Q.alpha_tail_tolerance);
    Q.gap_fit_nodes = get<int>(q, w, "gap_fit_nodes", Q.gap_fit_nodes);
    Q.r_max = get<double>(q, w, "r_max", Q.r_max);
    Q.r_nodes = get<int>(q, w, "r_nodes", Q.r_nodes);
    Q.sphere.polar_nodes = get<int>(q, w, "sphere_polar_nodes", Q.sphere.polar_nodes);
    Q.sphere.azimuth_nodes = get<int>(q, w, "sphere_azimuth_nodes", Q.sphere.azimuth_nodes);
    if (Q.laguerre_extra < 0 || Q.lambda_panel_order < 4 || Q.r_nodes < 4 || Q.sphere.polar_nodes < 4 ||
        Q.sphere.azimuth_nodes < 4)
      throw ConfigError("quadrature orders must be >= 4 (laguerre_extra >= 0)");
    if (!(Q.lambda_min > 0) || !(Q.lambda_max > Q.lambda_min))
      throw ConfigError("quadrature: need 0 < lambda_min < lambda_max");
    if (Q.gap_fit_nodes < 4) throw ConfigError("quadrature.gap_fit_nodes must be >= 4");
  }

  if (j.contains("catalog")) {
    if (!j.at("catalog").is_array()) throw ConfigError("key 'catalog' must be an array of functions");
    for (std::size_t i = 0; i < j.at("catalog").size(); ++i)
      c.catalog.push_back(parse_function(j.at("catalog")[i], "catalog[" + std::to_string(i) + "]."));
  } else {
    c.catalog = default_catalog();
  }

  if (j.contains("points")) {
    if (!j.at("points").is_array()) throw ConfigError("key 'points' must be an array of {x, a}");
    for (std::size_t i = 0; i < j.at("points").size(); ++i) {
      const json& p = j.at("points")[i];
      const std::string w = "points[" + std::to_string(i) + "].";
      check_keys(p, w, {"x", "a"});
      const auto x = get<std::vector<double>>(p, w, "x", std::vector<double>(c.n, 0.0));
      const auto a = get<std::vector<double>>(p, w, "a", std::vector<double>(skew_dim(c.n), 0.0));
      if (int(x.size()) != c.n || int(a.size()) != skew_dim(c.n))
        throw ConfigError(w + "x must have length n and a length n(n-1)/2");
      c.points.emplace_back(to_vec(x), to_vec(a));
    }
  } else {
    c.points.push_back(GroupElement::identity(c.n));
  }

  if (j.contains("spectral_point")) {
    const json& p = j.at("spectral_point");
    const std::string w = "spectral_point.";
    check_keys(p, w, {"type", "r", "alpha", "lambda"});
    const int type = get<int>(p, w, "type", 1);
    const double r = get<double>(p, w, "r", 0.0);
    if (type == 1) {
      c.spectral_point = Type1{r, get<std::vector<int>>(p, w, "alpha", std::vector<int>(c.slice.p1(), 0)),
                               get<double>(p, w, "lambda", 1.0)};
    } else if (type == 2) {
      if (p.contains("alpha") || p.contains("lambda")) throw ConfigError(w + "type 2 points take only r");
      c.spectral_point = Type2{r};
    } else {
      throw ConfigError("key 'spectral_point.type' must be 1 or 2");
    }
  } else {
    c.spectral_point = Type1{0.0, std::vector<int>(c.slice.p1(), 0), 1.0};
  }
  try {
    validate_point(c.spectral_point, c.slice);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("spectral_point: ") + e.what());
  }

  if (j.contains("certificate")) {
    const json& p = j.at("certificate");
    const std::string w = "certificate.";
    check_keys(p, w, {"m_max", "n_max", "l_max", "truncation"});
    auto& C = c.certificate;
    C.m_max = get<int>(p, w, "m_max", C.m_max);
    C.n_max = get<int>(p, w, "n_max", C.n_max);
    C.l_max = get<int>(p, w, "l_max", C.l_max);
    C.truncation = get<int>(p, w, "truncation", C.truncation);
    if (C.m_max < 0 || C.n_max < 0 || C.l_max < 0 || C.m_max + C.l_max > kMaxJetOrder || C.truncation < 2)
      throw ConfigError("certificate: need nonnegative orders with m_max + l_max <= " +
                        std::to_string(kMaxJetOrder) + " and truncation >= 2");
  }

  c.skew_matrix = get<std::vector<std::vector<double>>>(j, "", "skew_matrix", {});

  if (j.contains("output")) {
    const json& o = j.at("output");
    check_keys(o, "output.", {"csv", "json"});
    c.csv_name = get<std::string>(o, "output.", "csv", c.csv_name);
    c.json_name = get<std::string>(o, "output.", "json", c.json_name);
  }
  return c;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not well-formed: " + e.what());
  }
  return config_from_json(j);
}

json config_to_json(const RunConfig& c) {
  json j;
  j["n"] = c.n;
  j["mu_hat"] = c.mu_hat;
  j["mult"] = c.mult;
  j["xp_star"] = c.xp_star;
  j["seed"] = c.seed;
  j["suite"] = c.suite;
  j["timing"] = c.timing;
  const auto& Q = c.quad;
  j["quadrature"] = {{"laguerre_extra", Q.laguerre_extra},
                     {"doubling_tolerance", Q.doubling_tolerance},
                     {"truncation", Q.truncation},
                     {"lambda_min", Q.lambda_min},
                     {"lambda_max", Q.lambda_max},
                     {"lambda_panel_order", Q.lambda_panel_order},
                     {"alpha_tail_tolerance", Q.alpha_tail_tolerance},
                     {"gap_fit_nodes", Q.gap_fit_nodes},
                     {"r_max", Q.r_max},
                     {"r_nodes", Q.r_nodes},
                     {"sphere_polar_nodes", Q.sphere.polar_nodes},
                     {"sphere_azimuth_nodes", Q.sphere.azimuth_nodes}};
  j["catalog"] = json::array();
  for (const auto& f : c.catalog) j["catalog"].push_back(function_to_json(f));
  j["points"] = json::array();
  for (const auto& p : c.points) j["points"].push_back({{"x", from_vec(p.x)}, {"a", from_vec(p.a)}});
  if (const auto* t1 = std::get_if<Type1>(&c.spectral_point))
    j["spectral_point"] = {{"type", 1}, {"r", t1->r}, {"alpha", t1->alpha}, {"lambda", t1->lambda}};
  else
    j["spectral_point"] = {{"type", 2}, {"r", std::get<Type2>(c.spectral_point).r}};
  j["certificate"] = {{"m_max", c.certificate.m_max},
                      {"n_max", c.certificate.n_max},
                      {"l_max", c.certificate.l_max},
                      {"truncation", c.certificate.truncation}};
  j["skew_matrix"] = c.skew_matrix;
  j["output"] = {{"csv", c.csv_name}, {"json", c.json_name}};
  return j;
}

std::string config_digest(const RunConfig& cfg) {
  const std::string text = config_to_json(cfg).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace nilspherical
