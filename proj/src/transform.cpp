#include "nilspherical/transform.hpp"

#include "nilspherical/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nilspherical {

std::string to_string(Multiplier m) {
  switch (m) {
    case Multiplier::GammaHalfPlusIT: return "gamma/2+it";
    case Multiplier::GammaHalfMinusIT: return "gamma/2-it";
    case Multiplier::T: return "t";
    case Multiplier::Gamma: return "gamma";
  }
  return "?";
}

Multiplier multiplier_from_string(const std::string& s) {
  for (auto m : {Multiplier::GammaHalfPlusIT, Multiplier::GammaHalfMinusIT, Multiplier::T, Multiplier::Gamma})
    if (to_string(m) == s) return m;
  throw ValidationError("unknown multiplier '" + s + "' (expected gamma/2+it, gamma/2-it, t or gamma)");
}

InvariantTestFunction InvariantTestFunction::gaussian(double beta_v, double beta_z) {
  InvariantTestFunction f;
  f.family = "gaussian";
  f.beta_v = beta_v;
  f.beta_z = beta_z;
  return f;
}

InvariantTestFunction InvariantTestFunction::poly_gaussian(std::vector<std::vector<double>> poly, double beta_v,
                                                           double beta_z) {
  if (poly.empty()) throw ValidationError("poly_gaussian: empty coefficient table");
  InvariantTestFunction f;
  f.family = "poly_gaussian";
  f.poly = std::move(poly);
  f.beta_v = beta_v;
  f.beta_z = beta_z;
  return f;
}

InvariantTestFunction InvariantTestFunction::times(Multiplier m) const {
  InvariantTestFunction f = *this;
  f.family = "multiplied";
  f.multipliers.push_back(m);
  return f;
}

InvariantTestFunction InvariantTestFunction::scaled(double s) const {
  InvariantTestFunction f = *this;
  for (auto& row : f.poly)
    for (double& c : row) c *= s;
  return f;
}

bool InvariantTestFunction::is_zero() const {
  for (const auto& row : poly)
    for (double c : row)
      if (c != 0.0) return false;
  return true;
}

double InvariantTestFunction::base_value(const GroupElement& g) const {
  const double u = g.x.squaredNorm(), v = g.a.squaredNorm();
  double p = 0;
  for (std::size_t i = 0; i < poly.size(); ++i)
    for (std::size_t k = 0; k < poly[i].size(); ++k) p += poly[i][k] * std::pow(u, i) * std::pow(v, k);
  return p * std::exp(-beta_v * u - beta_z * v);
}

cplx InvariantTestFunction::value(const GroupElement& g, const SpectrumSlice& slice) const {
  cplx v = base_value(g);
  if (multipliers.empty()) return v;
  const HeisenbergPoint h = psi2_coords(g.inverse(), slice);
  const double gamma = 0.5 * h.z.squaredNorm();
  for (auto m : multipliers) {
    switch (m) {
      case Multiplier::GammaHalfPlusIT: v *= cplx(0.5 * gamma, h.t); break;
      case Multiplier::GammaHalfMinusIT: v *= cplx(0.5 * gamma, -h.t); break;
      case Multiplier::T: v *= h.t; break;
      case Multiplier::Gamma: v *= gamma; break;
    }
  }
  return v;
}

namespace {

// int_{R^d} |y|^{2e} exp(-beta |y|^2) dy
double radial_moment(int d, int e, double beta) {
  if (d == 0) return e == 0 ? 1.0 : 0.0;
  return std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d) * std::exp(std::lgamma(e + 0.5 * d)) /
         std::pow(beta, e + 0.5 * d);
}

}  // namespace

double InvariantTestFunction::l2_norm2(int n) const {
  if (!multipliers.empty()) throw DomainError("l2_norm2: defined for the invariant base function");
  const int dz = skew_dim(n);
  double total = 0;
  for (std::size_t i = 0; i < poly.size(); ++i)
    for (std::size_t k = 0; k < poly[i].size(); ++k)
      for (std::size_t i2 = 0; i2 < poly.size(); ++i2)
        for (std::size_t k2 = 0; k2 < poly[i2].size(); ++k2)
          total += poly[i][k] * poly[i2][k2] * radial_moment(n, int(i + i2), 2 * beta_v) *
                   radial_moment(dz, int(k + k2), 2 * beta_z);
  return total;
}

double InvariantTestFunction::l1_norm(int n, int radial_order) const {
  if (!multipliers.empty()) throw DomainError("l1_norm: defined for the invariant base function");
  const int dz = skew_dim(n);
  // Gauss-Laguerre in u = beta |X|^2 and v = beta_z |A|^2.
  const auto& ru = quad::gauss_laguerre(radial_order, 0.5 * n - 1.0);
  const auto& rv = quad::gauss_laguerre(radial_order, 0.5 * dz - 1.0);
  const double cu = std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n) / std::pow(beta_v, 0.5 * n);
  const double cv = std::pow(M_PI, 0.5 * dz) / std::tgamma(0.5 * dz) / std::pow(beta_z, 0.5 * dz);
  CompensatedSum<double> acc;
  for (std::size_t i = 0; i < ru.size(); ++i)
    for (std::size_t k = 0; k < rv.size(); ++k) {
      const double u = ru.nodes[i] / beta_v, v = rv.nodes[k] / beta_z;
      double p = 0;
      for (std::size_t a = 0; a < poly.size(); ++a)
        for (std::size_t b = 0; b < poly[a].size(); ++b) p += poly[a][b] * std::pow(u, a) * std::pow(v, b);
      acc.add(ru.weights[i] * rv.weights[k] * std::abs(p));
    }
  return cu * cv * acc.value();
}

InvariantTestFunction InvariantTestFunction::sub_laplacian(int n) const {
  if (n != 2) throw DomainError("sub_laplacian: closed form implemented on F(2)");
  if (!multipliers.empty()) throw DomainError("sub_laplacian: defined for the invariant base function");
  // On F(2), with F(u, v) = P(u, v) e^{-bu u - bv v}:
  // sum X_i^2 F = 4 F_u + 4 u F_uu + u F_v / 2 + u v F_vv.
  const std::size_t I = poly.size() + 2;
  std::size_t K = 0;
  for (const auto& row : poly) K = std::max(K, row.size());
  K += 2;
  auto coef = [&](std::size_t i, std::size_t k) {
    return (i < poly.size() && k < poly[i].size()) ? poly[i][k] : 0.0;
  };
  std::vector<std::vector<double>> out(I + 1, std::vector<double>(K + 1, 0.0));
  const double bu = beta_v, bv = beta_z;
  for (std::size_t i = 0; i < I; ++i)
    for (std::size_t k = 0; k < K; ++k) {
      const double c = coef(i, k);
      if (c == 0.0) continue;
      const double di = double(i), dk = double(k);
      // Monomial u^i v^k times the Gaussian; derivatives in closed form.
      // F_u   = (i u^{i-1} - bu u^i) v^k
      // F_uu  = (i(i-1) u^{i-2} - 2 bu i u^{i-1} + bu^2 u^i) v^k
      // F_v   = u^i (k v^{k-1} - bv v^k)
      // F_vv  = u^i (k(k-1) v^{k-2} - 2 bv k v^{k-1} + bv^2 v^k)
      auto add = [&](long ii, long kk, double val) {
        if (ii < 0 || kk < 0 || val == 0.0) return;
        out[ii][kk] -= val;  // L = -sum X_i^2
      };
      // 4 F_u
      add(long(i) - 1, k, 4 * c * di);
      add(i, k, -4 * c * bu);
      // 4 u F_uu
      add(long(i) - 1, k, 4 * c * di * (di - 1));
      add(i, k, -8 * c * bu * di);
      add(i + 1, k, 4 * c * bu * bu);
      // u F_v / 2
      add(i + 1, long(k) - 1, 0.5 * c * dk);
      add(i + 1, k, -0.5 * c * bv);
      // u v F_vv
      add(i + 1, long(k) - 1, c * dk * (dk - 1));
      add(i + 1, k, -2 * c * bv * dk);
      add(i + 1, k + 1, c * bv * bv);
    }
  InvariantTestFunction f = *this;
  f.family = "poly_gaussian";
  f.poly = out;
  return f;
}

namespace {

using Exps = std::vector<int>;
using Poly = std::map<Exps, cplx>;

struct Layout {
  int p1 = 0;
  bool type1 = true;
  bool has_s = false;
  int d_tau = 0;
  int d_sigma = 0;
  int vars() const { return p1 + 4; }
  int s() const { return p1; }
  int tau() const { return p1 + 1; }
  int t() const { return p1 + 2; }
  int sigma() const { return p1 + 3; }
};

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      Exps e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out[e] += ca * cb;
    }
  return out;
}

Poly monomial(const Layout& L, int var, int power, cplx c) {
  Exps e(L.vars(), 0);
  if (var >= 0) e[var] = power;
  return Poly{{e, c}};
}

Poly poly_add(Poly a, const Poly& b) {
  for (const auto& [e, c] : b) a[e] += c;
  return a;
}

Poly build_integrand(const InvariantTestFunction& f, const SpectrumSlice& slice, const Layout& L) {
  Poly u, v;
  for (int j = 0; j < L.p1; ++j) u = poly_add(u, monomial(L, j, 1, 1.0));
  if (L.has_s) u = poly_add(u, monomial(L, L.s(), 2, 1.0));
  if (L.d_tau > 0) u = poly_add(u, monomial(L, L.tau(), 1, 1.0));
  if (L.type1) v = poly_add(v, monomial(L, L.t(), 2, 1.0));
  if (L.d_sigma > 0) v = poly_add(v, monomial(L, L.sigma(), 1, 1.0));
  const Poly one = monomial(L, -1, 0, 1.0);

  Poly total;
  Poly ui = one;
  for (std::size_t i = 0; i < f.poly.size(); ++i) {
    Poly vk = one;
    for (std::size_t k = 0; k < f.poly[i].size(); ++k) {
      if (f.poly[i][k] != 0.0) {
        Poly term = poly_mul(ui, vk);
        for (auto& [e, c] : term) c *= f.poly[i][k];
        total = poly_add(total, term);
      }
      vk = poly_mul(vk, v);
    }
    ui = poly_mul(ui, u);
  }
  if (!f.multipliers.empty() && !L.type1) throw DomainError("multiplied functions have type 1 transforms only");
  // Multipliers at psi2(x^{-1}): gamma = sum mu_j rho_j / 2 and t -> -t.
  Poly gamma;
  for (int j = 0; j < L.p1; ++j) gamma = poly_add(gamma, monomial(L, j, 1, 0.5 * slice.mu_hat[j]));
  for (auto m : f.multipliers) {
    Poly factor;
    switch (m) {
      case Multiplier::GammaHalfPlusIT:
        factor = poly_mul(gamma, monomial(L, -1, 0, 0.5));
        factor = poly_add(factor, monomial(L, L.t(), 1, cplx(0, -1)));
        break;
      case Multiplier::GammaHalfMinusIT:
        factor = poly_mul(gamma, monomial(L, -1, 0, 0.5));
        factor = poly_add(factor, monomial(L, L.t(), 1, cplx(0, 1)));
        break;
      case Multiplier::T: factor = monomial(L, L.t(), 1, -1.0); break;
      case Multiplier::Gamma: factor = gamma; break;
    }
    total = poly_mul(total, factor);
  }
  for (auto it = total.begin(); it != total.end();)
    it = (it->second == cplx(0.0)) ? total.erase(it) : std::next(it);
  return total;
}

// int_0^inf rho^e e^{-beta rho} psi_k(|lambda| mu rho / 2) (pi^m / Gamma(m)) rho^{m-1} d rho,
// as jets in the lambda increment, for e = 0..e_max and k = 0..T.
std::vector<std::vector<Jet>> block_factor(int m, double mu, double beta, double lambda, int e_max, int T, int K,
                                           int order) {
  const double nu = m - 1.0;
  const double al = std::abs(lambda), sgn = lambda > 0 ? 1.0 : -1.0;
  const double c = beta + 0.25 * al * mu;
  const double pref = std::pow(M_PI / c, m) / std::tgamma(m);
  const auto& rule = quad::gauss_laguerre(order, nu);
  std::vector<std::vector<Jet>> out(e_max + 1, std::vector<Jet>(T + 1, Jet(K)));
  std::vector<Jet> psi(T + 1);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double w = rule.weights[i];
    if (!(w > 0) || !std::isfinite(w)) continue;
    const double rho = rule.nodes[i] / c;
    const double slope = 0.5 * sgn * mu * rho;
    const Jet x = Jet::linear(K, 0.5 * al * mu * rho, slope);
    psi[0] = Jet::exp_linear(K, std::log(w * pref), -0.5 * slope);
    if (T >= 1) psi[1] = (Jet(K, nu + 1.0) - x) * psi[0] * (1.0 / (nu + 1.0));
    for (int k = 1; k < T; ++k)
      psi[k + 1] = ((Jet(K, 2.0 * k + nu + 1.0) - x) * psi[k] - double(k) * psi[k - 1]) * (1.0 / (k + nu + 1.0));
    double rp = 1.0;
    for (int e = 0; e <= e_max; ++e, rp *= rho)
      for (int k = 0; k <= T; ++k) out[e][k] += rp * psi[k];
  }
  return out;
}

// int s^e exp(-beta s^2) exp(-i omega s) ds for e = 0..e_max with
// omega = omega0 + d as jets in d. Integration by parts gives
// I_{e+1} = (e I_{e-1} - i omega I_e) / (2 beta).
std::vector<Jet> fourier_gaussian_jet(double beta, double omega0, int e_max, int K) {
  Jet gauss(K);
  for (int k = 0, f = 1; 2 * k <= K; ++k, f *= k) gauss[2 * k] = std::pow(-0.25 / beta, k) / f;
  const Jet omega = Jet::linear(K, omega0, 1.0);
  std::vector<Jet> out(e_max + 1, Jet(K));
  out[0] = Jet::exp_linear(K, 0.5 * std::log(M_PI / beta) - omega0 * omega0 / (4 * beta), -omega0 / (2 * beta)) * gauss;
  for (int e = 0; e < e_max; ++e) {
    Jet next = omega * out[e] * cplx(0, -1);
    if (e > 0) next += double(e) * out[e - 1];
    out[e + 1] = next * (0.5 / beta);
  }
  return out;
}

std::vector<cplx> fourier_gaussian(double beta, double omega, int e_max) {
  std::vector<cplx> out;
  for (const auto& j : fourier_gaussian_jet(beta, omega, e_max, 0)) out.push_back(j.value());
  return out;
}

Layout layout_for(const SpectrumSlice& slice, bool type1) {
  Layout L;
  L.type1 = type1;
  if (type1) {
    L.p1 = slice.p1();
    L.has_s = slice.rest_dim() >= 1;
    L.d_tau = std::max(slice.rest_dim() - 1, 0);
    L.d_sigma = skew_dim(slice.n) - 1;
  } else {
    L.p1 = 0;
    L.has_s = true;
    L.d_tau = slice.n - 1;
    L.d_sigma = skew_dim(slice.n);
  }
  return L;
}

std::vector<Jet> assemble(const InvariantTestFunction& f, const SpectrumSlice& slice, const Layout& L,
                          const Poly& integrand, const MultiIndexSet& index, double r, double lambda, int T, int K,
                          int order_scale, const QuadratureSpec& quad) {
  std::vector<int> emax(L.vars(), 0);
  for (const auto& [e, c] : integrand)
    for (int v = 0; v < L.vars(); ++v) emax[v] = std::max(emax[v], e[v]);

  std::vector<std::vector<std::vector<Jet>>> blocks(L.p1);
  for (int j = 0; j < L.p1; ++j) {
    const int m = slice.blocks.mult[j];
    const int exact = (emax[j] + m + T + K) / 2 + 1;
    const int order = (exact + quad.laguerre_extra) * order_scale;
    blocks[j] = block_factor(m, slice.mu_hat[j], f.beta_v, lambda, emax[j], T, K, order);
  }
  std::vector<cplx> sfac{1.0};
  if (L.has_s) sfac = fourier_gaussian(f.beta_v, r, emax[L.s()]);
  std::vector<Jet> tfac{Jet(K, 1.0)};
  if (L.type1) tfac = fourier_gaussian_jet(f.beta_z, lambda, emax[L.t()], K);

  std::vector<Jet> out(index.size(), Jet(K));
  for (const auto& [e, coef] : integrand) {
    cplx scalar = coef * radial_moment(L.d_tau, e[L.tau()], f.beta_v) * radial_moment(L.d_sigma, e[L.sigma()], f.beta_z);
    if (L.has_s) scalar *= sfac[e[L.s()]];
    const Jet head = tfac[L.type1 ? e[L.t()] : 0] * scalar;
    for (std::size_t rk = 0; rk < index.size(); ++rk) {
      Jet term = head;
      for (int j = 0; j < L.p1; ++j) term *= blocks[j][e[j]][index[rk][j]];
      out[rk] += term;
    }
  }
  return out;
}

}  // namespace

TransformTable transform_table(const InvariantTestFunction& f, const SpectrumSlice& slice, double r,
                               double lambda, int truncation, int jet_order, const QuadratureSpec& quad) {
  if (slice.r_constrained() && r != 0.0) throw DomainError("transform: r must be 0 when 2 p0 = n");
  if (lambda == 0.0) throw DomainError("transform: type 1 needs lambda != 0");
  if (jet_order > kMaxJetOrder) throw DomainError("transform: jet order too large");
  if (quad.laguerre_extra < 0) throw ValidationError("transform: laguerre_extra must be >= 0");
  const Layout L = layout_for(slice, true);
  const MultiIndexSet index(slice.p1(), truncation);
  TransformTable tab;
  if (f.is_zero()) {
    tab.values.assign(index.size(), Jet(jet_order));
    return tab;
  }
  const Poly integrand = build_integrand(f, slice, L);
  const auto coarse = assemble(f, slice, L, integrand, index, r, lambda, truncation, jet_order, 1, quad);
  auto fine = assemble(f, slice, L, integrand, index, r, lambda, truncation, jet_order, 2, quad);
  for (int k = 0; k <= jet_order; ++k) {
    double diff = 0, mag = 0;
    for (std::size_t i = 0; i < fine.size(); ++i) {
      diff = std::max(diff, std::abs(fine[i][k] - coarse[i][k]));
      mag = std::max(mag, std::abs(fine[i][k]));
    }
    if (mag > 0) tab.doubling_change = std::max(tab.doubling_change, diff / mag);
  }
  tab.converged = tab.doubling_change <= quad.doubling_tolerance;
  tab.values = std::move(fine);
  return tab;
}

cplx forward_transform(const InvariantTestFunction& f, const SphericalPoint& point, const SpectrumSlice& slice,
                       const QuadratureSpec& quad) {
  validate_point(point, slice);
  if (const auto* t1 = std::get_if<Type1>(&point)) {
    const int T = degree(t1->alpha);
    const auto tab = transform_table(f, slice, t1->r, t1->lambda, T, 0, quad);
    const long rank = MultiIndexSet(slice.p1(), T).rank(t1->alpha);
    if (!tab.converged) {
      std::ostringstream os;
      os.precision(17);
      os << "forward_transform: doubling changed the result by " << tab.doubling_change
         << " (relative); value " << tab.values[rank].value();
      throw ConvergenceError(os.str());
    }
    return tab.values[rank].value();
  }
  const double r = std::get<Type2>(point).r;
  if (f.is_zero()) return 0.0;
  const Layout L = layout_for(slice, false);
  const Poly integrand = build_integrand(f, slice, L);
  const MultiIndexSet index(0, 0);
  const auto coarse = assemble(f, slice, L, integrand, index, r, 1.0, 0, 0, 1, quad)[0].value();
  const auto fine = assemble(f, slice, L, integrand, index, r, 1.0, 0, 0, 2, quad)[0].value();
  if (std::abs(fine - coarse) > quad.doubling_tolerance * std::abs(fine) && std::abs(fine - coarse) > 1e-300) {
    std::ostringstream os;
    os.precision(17);
    os << "forward_transform: type 2 doubling disagreement " << coarse << " vs " << fine;
    throw ConvergenceError(os.str());
  }
  return fine;
}

SpectrumEvaluator transform_evaluator(const InvariantTestFunction& f, const SpectrumSlice& slice,
                                      const QuadratureSpec& quad) {
  return [f, slice, quad](double r, double lambda, int truncation, int jet_order) {
    auto tab = transform_table(f, slice, r, lambda, truncation, jet_order, quad);
    if (!tab.converged) {
      std::ostringstream os;
      os << "transform at r=" << r << ", lambda=" << lambda << " did not converge under order doubling (change "
         << tab.doubling_change << ")";
      throw ConvergenceError(os.str());
    }
    return tab.values;
  };
}

cplx gaussian_transform_f2(double beta_v, double beta_z, int alpha, double lambda) {
  const double al = std::abs(lambda);
  const double central = std::sqrt(M_PI / beta_z) * std::exp(-lambda * lambda / (4 * beta_z));
  const double q = (4 * beta_v - al) / (4 * beta_v + al);
  return central * 4 * M_PI / (4 * beta_v + al) * std::pow(q, alpha);
}

}  // namespace nilspherical
