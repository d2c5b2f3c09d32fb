#include "nilspherical/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace nilspherical::quad {
namespace {

Rule build(const gsl_integration_fixed_type* type, int order, double alpha) {
  if (order < 1) throw std::invalid_argument("quadrature order must be positive");
  gsl_set_error_handler_off();
  const double a = (type == gsl_integration_fixed_legendre) ? -1.0 : 0.0;
  const double b = 1.0;
  gsl_integration_fixed_workspace* w =
      gsl_integration_fixed_alloc(type, static_cast<size_t>(order), a, b, alpha, 0.0);
  if (!w) throw std::runtime_error("gsl_integration_fixed_alloc failed");
  Rule r;
  const double* x = gsl_integration_fixed_nodes(w);
  const double* wt = gsl_integration_fixed_weights(w);
  r.nodes.assign(x, x + order);
  r.weights.assign(wt, wt + order);
  gsl_integration_fixed_free(w);
  return r;
}

using Key = std::tuple<int, int, double>;

const Rule& cached(int kind, const gsl_integration_fixed_type* type, int order, double alpha) {
  static std::mutex mu;
  static std::map<Key, std::unique_ptr<Rule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[Key{kind, order, alpha}];
  if (!slot) slot = std::make_unique<Rule>(build(type, order, alpha));
  return *slot;
}

}  // namespace

const Rule& gauss_laguerre(int order, double nu) {
  return cached(0, gsl_integration_fixed_laguerre, order, nu);
}

const Rule& gauss_legendre(int order) { return cached(2, gsl_integration_fixed_legendre, order, 0.0); }

Rule mapped(const Rule& legendre, double a, double b) {
  Rule r;
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  r.nodes.reserve(legendre.size());
  r.weights.reserve(legendre.size());
  for (std::size_t i = 0; i < legendre.size(); ++i) {
    r.nodes.push_back(mid + half * legendre.nodes[i]);
    r.weights.push_back(half * legendre.weights[i]);
  }
  return r;
}

}  // namespace nilspherical::quad
