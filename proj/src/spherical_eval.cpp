#include "nilspherical/parallel.hpp"
#include "nilspherical/quadrature.hpp"
#include "nilspherical/spectrum.hpp"

#include <cmath>

namespace nilspherical {
namespace {

// Axial vector w of the 3x3 skew matrix of a, so that A v = w x v.
Eigen::Vector3d axial(const Vec& a) { return {a[2], -a[1], a[0]}; }

struct SphereRule {
  std::vector<Eigen::Vector3d> u;
  std::vector<double> w;
};

SphereRule sphere_rule(const ClosedForm& cf) {
  const auto& gl = quad::gauss_legendre(cf.polar_nodes);
  SphereRule s;
  for (std::size_t i = 0; i < gl.size(); ++i) {
    const double c = gl.nodes[i], sn = std::sqrt(std::max(0.0, 1.0 - c * c));
    for (int j = 0; j < cf.azimuth_nodes; ++j) {
      const double ph = 2.0 * M_PI * j / cf.azimuth_nodes;
      s.u.emplace_back(sn * std::cos(ph), sn * std::sin(ph), c);
      s.w.push_back(gl.weights[i] / (2.0 * cf.azimuth_nodes));
    }
  }
  return s;
}

void require_single_block(const SpectrumSlice& slice) {
  if (slice.p1() != 1 || slice.a() != 1)
    throw DomainError("closed-form evaluation needs a single block with p0 = 1; use Monte Carlo");
}

template <class Each>
SphericalValue monte_carlo(const MonteCarlo& mc, int n, Each&& each) {
  constexpr int chunks = 64;
  std::vector<CompensatedSum<cplx>> sums(chunks);
  std::vector<CompensatedSum<double>> sq(chunks);
  parallel_for_chunks(chunks, [&](int c) {
    const std::int64_t begin = mc.samples * c / chunks, end = mc.samples * (c + 1) / chunks;
    Rng rng(split_seed(mc.seed, static_cast<std::uint64_t>(c)));
    for (std::int64_t s = begin; s < end; ++s) {
      const cplx v = each(haar_orthogonal(rng, n));
      sums[c].add(v);
      sq[c].add(std::norm(v));
    }
  });
  CompensatedSum<cplx> total;
  CompensatedSum<double> total_sq;
  for (int c = 0; c < chunks; ++c) {
    total.add(sums[c].value());
    total_sq.add(sq[c].value());
  }
  const double ns = static_cast<double>(mc.samples);
  SphericalValue v;
  v.value = total.value() / ns;
  v.std_error = std::sqrt(std::max(total_sq.value() / ns - std::norm(v.value), 0.0) / ns);
  return v;
}

}  // namespace

cplx type1_integrand(const Type1& p, const GroupElement& kg, const SpectrumSlice& slice) {
  const cplx phase = std::polar(1.0, p.r * rest_projection(kg, slice));
  return phase * omega_type1(p.alpha, p.lambda, slice.blocks, psi2_coords(kg, slice));
}

std::vector<cplx> type1_table(double r, double lambda, int truncation, const GroupElement& g,
                              const SpectrumSlice& slice, const ClosedForm& cf) {
  require_single_block(slice);
  if (lambda == 0.0) throw DomainError("type1_table: lambda must be nonzero");
  const double mu = slice.mu_hat[0];
  const double nu = slice.blocks.mult[0] - 1.0;
  const double al = std::abs(lambda);
  std::vector<double> psi(truncation + 1);
  std::vector<cplx> out(truncation + 1, 0.0);
  if (slice.n == 2) {
    const HeisenbergPoint h = psi2_coords(g, slice);
    laguerre_function_table(truncation, nu, 0.5 * al * h.z.squaredNorm(), psi.data());
    const double c = std::cos(lambda * h.t);
    for (int k = 0; k <= truncation; ++k) out[k] = c * psi[k];
    return out;
  }
  if (slice.n != 3) throw DomainError("type1_table: closed form available for n = 2, 3 only");
  const SphereRule rule = sphere_rule(cf);
  const Eigen::Vector3d x = g.x;
  const Eigen::Vector3d w = axial(g.a);
  const double x2 = x.squaredNorm();
  std::vector<CompensatedSum<double>> acc(truncation + 1);
  for (std::size_t q = 0; q < rule.u.size(); ++q) {
    const double ux = rule.u[q].dot(x);
    const double weight = rule.w[q] * std::cos(r * ux) * std::cos(lambda * mu * w.dot(rule.u[q]));
    laguerre_function_table(truncation, nu, 0.5 * al * mu * std::max(0.0, x2 - ux * ux), psi.data());
    for (int k = 0; k <= truncation; ++k) acc[k].add(weight * psi[k]);
  }
  for (int k = 0; k <= truncation; ++k) out[k] = acc[k].value();
  return out;
}

SphericalValue eval_spherical(const SphericalPoint& point, const GroupElement& g, const SpectrumSlice& slice,
                              const Averaging& avg) {
  validate_point(point, slice);
  if (g.n() != slice.n) throw DimensionError("eval_spherical: group element does not match slice");
  const int n = slice.n;
  if (const auto* t2 = std::get_if<Type2>(&point)) {
    if (const auto* mc = std::get_if<MonteCarlo>(&avg)) {
      const Vec e = Vec::Unit(n, n - 1);
      return monte_carlo(*mc, n, [&](const Mat& k) { return std::polar(1.0, t2->r * e.dot(k * g.x)); });
    }
    return {normalized_bessel(0.5 * n - 1.0, t2->r * g.x.norm()), 0.0};
  }
  const Type1& p = std::get<Type1>(point);
  if (const auto* mc = std::get_if<MonteCarlo>(&avg))
    return monte_carlo(*mc, n, [&](const Mat& k) { return type1_integrand(p, act_orthogonal(k, g), slice); });
  const auto& cf = std::get<ClosedForm>(avg);
  require_single_block(slice);
  const auto table = type1_table(p.r, p.lambda, p.alpha[0], g, slice, cf);
  return {table[p.alpha[0]], 0.0};
}

}  // namespace nilspherical
