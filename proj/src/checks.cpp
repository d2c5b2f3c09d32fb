#include "nilspherical/checks.hpp"

#include "nilspherical/parallel.hpp"
#include "nilspherical/quadrature.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace nilspherical {
namespace {

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

CheckOutcome within(double defect, double tolerance, std::string detail) {
  return {defect, tolerance, defect <= tolerance, std::move(detail)};
}

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

std::vector<InvariantTestFunction> base_catalog(const RunConfig& cfg) {
  std::vector<InvariantTestFunction> out;
  for (const auto& f : cfg.catalog)
    if (f.multipliers.empty()) out.push_back(f);
  if (out.size() < 2) throw ValidationError("catalog needs at least two functions without multipliers");
  return out;
}

GroupElement random_element(Rng& rng, int n, double scale) {
  Vec x(n), a(skew_dim(n));
  for (int i = 0; i < n; ++i) x[i] = scale * rng.normal();
  for (int i = 0; i < skew_dim(n); ++i) a[i] = scale * rng.normal();
  return {x, a};
}

CVec random_z(Rng& rng, int a, double scale) {
  CVec z(a);
  for (int i = 0; i < a; ++i) z[i] = scale * cplx(rng.normal(), rng.normal());
  return z;
}

MultiIndex random_alpha(Rng& rng, int p1, int max_degree) {
  for (;;) {
    MultiIndex alpha(p1);
    for (int j = 0; j < p1; ++j) alpha[j] = static_cast<int>(rng.uniform() * (max_degree + 1));
    if (degree(alpha) <= max_degree) return alpha;
  }
}

// Sum of the two identities over neighbouring degrees, exactly.
CheckOutcome binomial_identities(const RunConfig&, std::uint64_t) {
  constexpr int T = 30;
  std::vector<std::vector<int>> structures;
  for (int p1 = 1; p1 <= 3; ++p1) {
    std::vector<int> m(p1, 1);
    for (;;) {
      structures.push_back(m);
      int j = 0;
      while (j < p1 && m[j] == 4) m[j++] = 1;
      if (j == p1) break;
      ++m[j];
    }
  }
  std::vector<long> failures(structures.size(), 0), tested(structures.size(), 0);
  parallel_for_chunks(static_cast<int>(structures.size()), [&](int s) {
    const BlockStructure b(structures[s]);
    const MultiIndexSet set(b.p1(), T);
    for (std::size_t r = 0; r < set.size(); ++r) {
      const MultiIndex& alpha = set[r];
      const int deg = degree(alpha);
      const BigInt d_alpha = dim_P(alpha, b);
      Rational lower(0), upper(0);
      for (int j = 0; j < b.p1(); ++j) {
        MultiIndex beta = alpha;
        if (alpha[j] > 0) {
          --beta[j];
          lower += gen_binomial(alpha, beta, b);
          ++beta[j];
        }
        ++beta[j];
        upper += Rational(dim_P(beta, b), d_alpha) * gen_binomial(beta, alpha, b);
      }
      if (deg >= 1 && lower != Rational(deg)) ++failures[s];
      if (upper != Rational(deg + b.a())) ++failures[s];
      ++tested[s];
    }
  });
  long fail = 0, total = 0;
  for (std::size_t s = 0; s < structures.size(); ++s) {
    fail += failures[s];
    total += tested[s];
  }
  return within(double(fail), 0.0,
                fmt("%zu block structures, %ld multi-indices, %ld identity failures", structures.size(), total, fail));
}

CheckOutcome summation_by_parts(const RunConfig&, std::uint64_t seed) {
  const std::vector<std::vector<int>> structures{{1}, {2}, {3}, {1, 1}, {2, 3}, {1, 2, 1}};
  Rng rng(seed);
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const BlockStructure b(structures[trial % structures.size()]);
    const MultiIndexSet set(b.p1(), 20);
    ExactLambdaFunction f(set), g(set);
    double scale = 0;
    for (std::size_t r = 0; r < set.size(); ++r) {
      if (degree(set[r]) <= 8)
        f.values[r] = Rational(static_cast<long>(rng.uniform() * 2001) - 1000, 1 + static_cast<long>(rng.uniform() * 50));
      g.values[r] = Rational(static_cast<long>(rng.uniform() * 2001) - 1000, 1000);
      scale += dim_P_value(set[r], b) * std::abs(to_double(f.values[r])) * std::abs(to_double(g.values[r]));
    }
    const auto d = summation_by_parts_check(f, g, b);
    const double s = std::max(scale, 1.0);
    worst = std::max({worst, std::abs(to_double(d.plus)) / s, std::abs(to_double(d.minus)) / s});
  }
  return within(worst, 1e-12, "100 random pairs at T = 20, support of F in |alpha| <= 8");
}

// <phi_alpha, phi_beta> over C^a, factorized per block and integrated with
// Gauss-Laguerre in x = |z_j|^2 / 2.
CheckOutcome orthogonality(const RunConfig&, std::uint64_t) {
  constexpr int M = 12;
  double worst = 0;
  for (const std::vector<int>& mult : {std::vector<int>{2}, std::vector<int>{1, 1}}) {
    const BlockStructure b(mult);
    const int a = b.a();
    std::vector<std::vector<std::vector<double>>> gram(b.p1());
    for (int j = 0; j < b.p1(); ++j) {
      const int m = b.mult[j];
      const double nu = m - 1.0;
      const auto& rule = quad::gauss_laguerre(40, nu);
      const double pref = std::pow(M_PI, m) / std::tgamma(m) * std::pow(2.0, m);
      gram[j].assign(M + 1, std::vector<double>(M + 1, 0.0));
      for (int k = 0; k <= M; ++k)
        for (int l = 0; l <= M; ++l) {
          CompensatedSum<double> s;
          const double bk = std::tgamma(k + m) / (std::tgamma(k + 1.0) * std::tgamma(m));
          const double bl = std::tgamma(l + m) / (std::tgamma(l + 1.0) * std::tgamma(m));
          for (std::size_t i = 0; i < rule.size(); ++i)
            s.add(rule.weights[i] * laguerre(k, nu, rule.nodes[i]) * laguerre(l, nu, rule.nodes[i]) / (bk * bl));
          gram[j][k][l] = pref * s.value();
        }
    }
    const MultiIndexSet set(b.p1(), M);
    for (std::size_t r = 0; r < set.size(); ++r)
      for (std::size_t q = 0; q < set.size(); ++q) {
        double v = 1.0;
        for (int j = 0; j < b.p1(); ++j) v *= gram[j][set[r][j]][set[q][j]];
        const double dr = dim_P_value(set[r], b), dq = dim_P_value(set[q], b);
        const double expected = r == q ? std::pow(2 * M_PI, a) / dr : 0.0;
        const double scale = std::pow(2 * M_PI, a) / std::sqrt(dr * dq);
        worst = std::max(worst, std::abs(v - expected) / scale);
      }
  }
  return within(worst, 1e-8, "blocks (2) and (1,1), |alpha|, |beta| <= 12, Gauss-Laguerre order 40");
}

CheckOutcome derivative_identities(const RunConfig&, std::uint64_t seed) {
  const std::vector<std::vector<int>> structures{{1}, {2}, {1, 1}, {2, 1}, {3}};
  Rng rng(seed);
  double worst = 0;
  std::string where;
  for (int s = 0; s < 50; ++s) {
    const BlockStructure b(structures[s % structures.size()]);
    const MultiIndex alpha = random_alpha(rng, b.p1(), 4);
    const double lambda = (rng.uniform() < 0.5 ? -1.0 : 1.0) * (0.3 + 2.7 * rng.uniform());
    const CVec z = random_z(rng, b.a(), 0.6);
    const double t = rng.normal();
    const double d = derivative_identity_check(alpha, lambda, b, z, t, 1e-4).max();
    if (d > worst) {
      worst = d;
      where = fmt("sample %d, lambda %.6g", s, lambda);
    }
  }
  return within(worst, 1e-6, "50 random points, |alpha| <= 4, h = 1e-4; worst at " + where);
}

CheckOutcome heisenberg_eigenvalue(const RunConfig&, std::uint64_t seed) {
  const std::vector<std::vector<int>> structures{{1}, {2}, {1, 1}, {2, 1}};
  Rng rng(seed);
  double worst = 0;
  int cases = 0;
  for (const auto& mult : structures) {
    const BlockStructure b(mult);
    const MultiIndexSet set(b.p1(), 4);
    for (double lambda : {0.7, -1.3})
      for (std::size_t r = 0; r < set.size(); ++r) {
        const MultiIndex& alpha = set[r];
        const double eig = -std::abs(lambda) * (2.0 * degree(alpha) + b.a());
        auto f = [&](const HeisenbergPoint& p) { return omega_type1(alpha, lambda, b, p); };
        double num = 0, den = 0;
        for (int k = 0; k < 6; ++k) {
          const HeisenbergPoint p{random_z(rng, b.a(), 0.8), rng.normal()};
          const cplx v = f(p);
          num = std::max(num, std::abs(heisenberg_sublaplacian_fd(f, p, 1e-3) - eig * v));
          den = std::max(den, std::abs(eig * v));
        }
        worst = std::max(worst, num / den);
        ++cases;
      }
  }
  return within(worst, 1e-5, fmt("%d (blocks, alpha, lambda) cases, 6 points each, h = 1e-3", cases));
}

CheckOutcome fn_eigenvalue(const RunConfig& cfg, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0;
  std::string where;
  for (int n : {2, 3}) {
    const SpectrumSlice slice = SpectrumSlice::standard(n);
    for (int i = 0; i < 10; ++i) {
      const double r = slice.r_constrained() ? 0.0 : 1.5 * rng.uniform();
      const MultiIndex alpha{static_cast<int>(rng.uniform() * 4)};
      const double lambda = (rng.uniform() < 0.5 ? -1.0 : 1.0) * (0.3 + 1.7 * rng.uniform());
      const Type1 point{r, alpha, lambda};
      const GroupElement g = random_element(rng, n, 0.5);
      auto phi = [&](const GroupElement& x) { return eval_spherical(point, x, slice, cfg.quad.sphere).value; };
      const cplx lv = li_laplacian_fd(phi, g, 1e-3);
      const cplx v = phi(g);
      const double k = kappa(point, slice);
      const double rel = std::abs(lv - k * v) / std::abs(k * v);
      if (rel > worst) {
        worst = rel;
        where = fmt("F(%d) r=%.4g alpha=%d lambda=%.4g", n, r, alpha[0], lambda);
      }
    }
  }
  return within(worst, 1e-4, "10 points on each of F(2), F(3); L summed over all n generators; worst " + where);
}

CheckOutcome functional_equation(const RunConfig& cfg, std::uint64_t seed) {
  constexpr std::int64_t samples = 200000;
  Rng rng(seed);
  std::ostringstream detail;
  detail.precision(3);
  double worst = 0;
  int task = 0;
  for (int n : {2, 3}) {
    const SpectrumSlice slice = SpectrumSlice::standard(n);
    const GroupElement x = random_element(rng, n, 0.6), y = random_element(rng, n, 0.6);
    auto act = [n](Rng& k_rng, const GroupElement& p) { return act_orthogonal(haar_orthogonal(k_rng, n), p); };
    const Type1 p1{n == 3 ? 0.7 : 0.0, {1}, n == 3 ? 0.9 : 0.8};
    const Type2 p2{n == 3 ? 1.1 : 1.3};
    auto phi1 = [&](const GroupElement& g) { return eval_spherical(p1, g, slice, cfg.quad.sphere).value; };
    auto phi2 = [&](const GroupElement& g) { return eval_spherical(p2, g, slice).value; };
    const auto r1 = gelfand_check(phi1, x, y, act, samples, split_seed(seed, task++));
    const auto r2 = gelfand_check(phi2, x, y, act, samples, split_seed(seed, task++));
    worst = std::max({worst, r1.defect, r2.defect});
    detail << "F(" << n << ") type1 " << r1.defect << " (se " << r1.std_error << "), type2 " << r2.defect
           << " (se " << r2.std_error << "); ";
  }
  // A function of |X| alone that is not spherical. The defect is
  // e^{-2 rho^2} (I_0(2 rho^2) - 1) for |X| = |Y| = rho, near its peak at rho = 1.2.
  const GroupElement x(Vec::Unit(2, 0) * 1.2, Vec::Constant(1, 0.3)), y(Vec::Unit(2, 1) * 1.2, Vec::Constant(1, -0.2));
  auto bad = [](const GroupElement& g) { return cplx(std::exp(-g.x.squaredNorm())); };
  auto act2 = [](Rng& k_rng, const GroupElement& p) { return act_orthogonal(haar_orthogonal(k_rng, 2), p); };
  const double control = gelfand_check(bad, x, y, act2, samples, split_seed(seed, task++)).defect;
  detail << "negative control " << control << " (must exceed 5e-2)";
  CheckOutcome out = within(worst, 5e-3, detail.str());
  out.pass = out.pass && control > 5e-2;
  return out;
}

CheckOutcome psi2_homomorphism(const RunConfig&, std::uint64_t seed) {
  const std::vector<SpectrumSlice> slices{SpectrumSlice::standard(2), SpectrumSlice::standard(3),
                                          SpectrumSlice::make(4, {2.0, 1.0}, {1, 1}),
                                          SpectrumSlice::make(5, {1.0}, {2})};
  Rng rng(seed);
  double worst = 0;
  for (const auto& slice : slices)
    for (int i = 0; i < 1000; ++i) {
      const GroupElement g = random_element(rng, slice.n, 1.0), h = random_element(rng, slice.n, 1.0);
      const HeisenbergPoint lhs = psi2_coords(group_mul(g, h), slice);
      const HeisenbergPoint rhs = h_mul(psi2_coords(g, slice), psi2_coords(h, slice));
      worst = std::max({worst, (lhs.z - rhs.z).cwiseAbs().maxCoeff(), std::abs(lhs.t - rhs.t)});
    }
  return within(worst, 1e-12, "1000 random pairs on each of F(2), F(3), F(4) blocks (1,1), F(5) block (2)");
}

std::vector<GroupElement> round_trip_points(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<GroupElement> pts{GroupElement::identity(2)};
  while (pts.size() < 10) pts.push_back(random_element(rng, 2, 0.7));
  return pts;
}

CheckOutcome inversion_round_trip(const RunConfig& cfg, std::uint64_t seed) {
  const SpectrumSlice slice = SpectrumSlice::standard(2);
  const auto catalog = base_catalog(cfg);
  const double c = calibrate_c(catalog[0], slice, cfg.quad);
  const auto pts = round_trip_points(seed);
  double worst = 0;
  std::ostringstream detail;
  detail.precision(6);
  detail << "c = " << c << "; ";
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    const auto res = inverse_transform_many(values_of(transform_evaluator(catalog[i], slice, cfg.quad)), pts, slice,
                                            cfg.quad, c);
    double w = 0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const double exact = catalog[i].base_value(pts[k]);
      w = std::max(w, std::abs(res[k].value - exact) / std::abs(exact));
    }
    detail << catalog[i].family << " " << w << "; ";
    worst = std::max(worst, w);
  }
  return within(worst, 1e-3, detail.str() + "pointwise relative error over 10 points");
}

CheckOutcome plancherel(const RunConfig& cfg, std::uint64_t) {
  const SpectrumSlice slice = SpectrumSlice::standard(2);
  const auto catalog = base_catalog(cfg);
  const double c0 = calibrate_c(catalog[0], slice, cfg.quad);
  const double c1 = calibrate_c(catalog[1], slice, cfg.quad);
  const double consistency = std::abs(c1 - c0) / std::abs(c0);
  double worst = consistency;
  std::ostringstream detail;
  detail.precision(6);
  detail << "c = " << c0 << " vs " << c1 << " (rel " << consistency << "); ";
  for (const auto& f : catalog) {
    const double d = plancherel_defect(f, slice, cfg.quad, c0);
    detail << f.family << " defect " << d << "; ";
    worst = std::max(worst, d);
  }
  return within(worst, 1e-3, detail.str());
}

CheckOutcome certificate(const RunConfig& cfg, std::uint64_t) {
  const SpectrumSlice slice = SpectrumSlice::standard(2);
  const auto grid = GridSpec::default_for(slice);
  // Orders fixed by the criterion: m <= 2, N <= 4, l + m <= 2.
  constexpr int m_max = 2, n_max = 4, l_max = 2;
  const int truncation = cfg.certificate.truncation;
  bool ok = true;
  double worst = 0;
  std::ostringstream detail;
  detail.precision(4);
  for (const auto& f : base_catalog(cfg)) {
    const auto G = tabulate_grid(slice, grid.r_nodes, grid.lambda_nodes, truncation + l_max, m_max + l_max,
                                 transform_evaluator(f, slice, cfg.quad));
    const auto rep = decrease_certificate(G, m_max, n_max, l_max);
    ok = ok && rep.pass();
    worst = std::max(worst, rep.worst_ratio());
    detail << f.family << (rep.pass() ? " pass" : " FAIL") << " (worst outer/inner " << rep.worst_ratio() << "); ";
    if (const auto* e = rep.first_failure())
      detail << "first failure l=" << e->l << " m=" << e->m << " d=" << e->deriv << " N=" << e->n << "; ";
  }
  const auto ones = tabulate_grid(slice, grid.r_nodes, grid.lambda_nodes, truncation, 0,
                                  [](double, double, int t, int k) {
                                    return std::vector<Jet>(MultiIndexSet(1, t).size(), Jet(k, 1.0));
                                  });
  const auto rep1 = decrease_certificate(ones, 0, 1, 0);
  bool one_fails_at_1 = false;
  for (const auto& e : rep1.entries)
    if (e.n == 1 && !e.pass) one_fails_at_1 = true;
  detail << "G = 1 " << (one_fails_at_1 ? "fails" : "passes") << " at N = 1";
  CheckOutcome out = within(worst, 1.05, detail.str());
  out.pass = ok && one_fails_at_1;
  return out;
}

CheckOutcome intertwining(const RunConfig& cfg, std::uint64_t) {
  const SpectrumSlice slice = SpectrumSlice::standard(2);
  const auto grid = GridSpec::default_for(slice);
  double worst = 0;
  std::ostringstream detail;
  detail.precision(3);
  for (const auto& f : base_catalog(cfg)) {
    const auto d = intertwining_defect(f, slice, cfg.quad, grid);
    const double gd = g_delta_check(f, slice, cfg.quad, grid);
    worst = std::max({worst, d.plus, d.minus, gd});
    detail << f.family << ": M+ " << d.plus << ", M- " << d.minus << ", G_Delta " << gd << ", symmetry "
           << d.symmetry << ", doubled T " << d.plus_doubled << "/" << d.minus_doubled << "; ";
  }
  return within(worst, 1e-2, detail.str());
}

CheckOutcome integrability(const RunConfig&, std::uint64_t) {
  double worst = 0;
  std::ostringstream detail;
  detail.precision(3);
  for (int n : {2, 3}) {
    const SpectrumSlice slice = SpectrumSlice::standard(n);
    auto g = [&](double r, const MultiIndex& alpha, double lambda) {
      return cplx(std::exp(-kappa(Type1{r, alpha, lambda}, slice)));
    };
    const auto rep = integrability_report(g, slice, slice.a() + 3, 1.0, 60);
    detail << "F(" << n << "):";
    for (const auto& reg : rep.regions) {
      const double gap = reg.finite ? std::abs(reg.cauchy_gap) : INFINITY;
      worst = std::max(worst, gap);
      detail << " " << reg.name << " total " << reg.total << " gap " << gap;
    }
    detail << "; ";
  }
  // d_m = binom(m + n - 1, m) <= (m + n - 1)^{n - 1}, and the degree-m shell
  // of a block structure never exceeds d_m.
  long violations = 0;
  for (int n = 2; n <= 6; ++n)
    for (int m = 0; m <= 200; ++m) {
      const BigInt dm = binomial(m + n - 1, m);
      if (dm > boost::multiprecision::pow(BigInt(m + n - 1), n - 1)) ++violations;
      const SpectrumSlice slice = SpectrumSlice::standard(n);
      const MultiIndexSet set(slice.p1(), m);
      BigInt shell = 0;
      for (std::size_t r = set.shell_begin(m); r < set.shell_end(m); ++r) shell += dim_P(set[r], slice.blocks);
      if (shell > dm) ++violations;
    }
  detail << "d_m bound violations for n <= 6, m <= 200: " << violations;
  CheckOutcome out = within(worst, 1e-10, detail.str());
  out.pass = out.pass && violations == 0;
  return out;
}

CheckOutcome laplacian_bounds_check(const RunConfig&, std::uint64_t) {
  const std::vector<SpectrumSlice> slices{SpectrumSlice::standard(2), SpectrumSlice::make(4, {2.0, 1.0}, {1, 1}),
                                          SpectrumSlice::make(7, {3.0, 2.0, 1.0}, {1, 1, 1})};
  double worst = 0;
  long tested = 0;
  for (const auto& slice : slices)
    for (double r : {0.0, 0.5, 2.0}) {
      if (slice.r_constrained() && r != 0.0) continue;
      const LaplacianBounds b = laplacian_bounds(slice, r);
      const MultiIndexSet set(slice.p1(), 200);
      for (std::size_t k = 0; k < set.size(); ++k) {
        const double ratio = (2.0 * degree(set[k]) + slice.a()) / kappa(Type1{r, set[k], 1.0}, slice);
        worst = std::max({worst, (b.m1 - ratio) / b.m2, (ratio - b.m2) / b.m2});
        ++tested;
      }
    }
  return within(std::max(worst, 0.0), 1e-14,
                fmt("%ld (slice, r, alpha) triples, |alpha| <= 200; defect is the largest relative violation", tested));
}

}  // namespace

const std::vector<CheckSpec>& check_registry() {
  static const std::vector<CheckSpec> registry{
      {"ac01_binomial_identities", "generalized binomial sum identities, exact", binomial_identities},
      {"ac02_summation_by_parts", "summation by parts, both forms", summation_by_parts},
      {"ac03_orthogonality", "orthogonality and norms of the Laguerre system", orthogonality},
      {"ac04_derivative_identities", "gamma recurrence and lambda-derivative identities", derivative_identities},
      {"ac05_heisenberg_eigenvalue", "sub-Laplacian eigenvalue on the Heisenberg group", heisenberg_eigenvalue},
      {"ac06_fn_eigenvalue", "sub-Laplacian eigenvalue kappa on F(2) and F(3)", fn_eigenvalue},
      {"ac07_functional_equation", "functional equation by Monte Carlo", functional_equation},
      {"ac08_psi2_homomorphism", "psi2 is a homomorphism", psi2_homomorphism},
      {"ac09_inversion_round_trip", "inversion round trip on F(2)", inversion_round_trip},
      {"ac10_plancherel", "Plancherel identity and c consistency", plancherel},
      {"ac11_decrease_certificate", "rapid-decrease certificate", certificate},
      {"ac12_intertwining_g_delta", "M+- intertwining and G_Delta", intertwining},
      {"ac13_integrability_regions", "integrability over the four regions", integrability},
      {"ac14_laplacian_bounds", "two-sided eigenvalue bounds", laplacian_bounds_check},
  };
  return registry;
}

namespace {

const std::vector<std::pair<std::string, std::vector<std::string>>>& suites() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> s{
      {"acceptance",
       {"ac01_binomial_identities", "ac02_summation_by_parts", "ac03_orthogonality", "ac04_derivative_identities",
        "ac05_heisenberg_eigenvalue", "ac06_fn_eigenvalue", "ac07_functional_equation", "ac08_psi2_homomorphism",
        "ac09_inversion_round_trip", "ac10_plancherel", "ac11_decrease_certificate", "ac12_intertwining_g_delta",
        "ac13_integrability_regions", "ac14_laplacian_bounds"}},
      {"combinatorics", {"ac01_binomial_identities", "ac02_summation_by_parts", "ac03_orthogonality"}},
      {"heisenberg", {"ac04_derivative_identities", "ac05_heisenberg_eigenvalue", "ac08_psi2_homomorphism"}},
      {"spectrum", {"ac06_fn_eigenvalue", "ac07_functional_equation", "ac14_laplacian_bounds"}},
      {"full-f2",
       {"ac09_inversion_round_trip", "ac10_plancherel", "ac11_decrease_certificate", "ac12_intertwining_g_delta"}},
      {"integrability", {"ac13_integrability_regions"}},
      {"none", {}},
  };
  return s;
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& [name, _] : suites()) out.push_back(name);
  return out;
}

std::vector<std::string> suite_members(const std::string& suite) {
  for (const auto& [name, members] : suites())
    if (name == suite) return members;
  if (suite.empty()) return {};
  std::set<std::string> wanted;
  std::stringstream ss(suite);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto& reg = check_registry();
    if (std::none_of(reg.begin(), reg.end(), [&](const CheckSpec& c) { return c.name == item; })) {
      std::string names;
      for (const auto& n : suite_names()) names += " " + n;
      throw ConfigError("unknown suite or check '" + item + "'; suites:" + names);
    }
    wanted.insert(item);
  }
  std::vector<std::string> out;
  for (const auto& c : check_registry())
    if (wanted.count(c.name)) out.push_back(c.name);
  return out;
}

CheckResult run_check(const CheckSpec& spec, const RunConfig& cfg) {
  const auto& reg = check_registry();
  const auto index = static_cast<std::uint64_t>(
      std::find_if(reg.begin(), reg.end(), [&](const CheckSpec& c) { return c.name == spec.name; }) - reg.begin());
  CheckResult res;
  res.name = spec.name;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const CheckOutcome o = spec.run(cfg, split_seed(cfg.seed, index));
    res.status = o.pass ? "pass" : "fail";
    res.defect = o.defect;
    res.tolerance = o.tolerance;
    res.detail = o.detail;
  } catch (const std::exception& e) {
    res.status = "fail";
    res.defect = INFINITY;
    res.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  res.seconds = cfg.timing ? secs : 0.0;
  return res;
}

SuiteReport run_suite(const RunConfig& cfg) {
  SuiteReport rep;
  rep.suite = cfg.suite;
  rep.seed = cfg.seed;
  rep.config_digest = config_digest(cfg);
  rep.warnings = cfg.warnings;
  for (const auto& name : suite_members(cfg.suite))
    for (const auto& spec : check_registry())
      if (spec.name == name) rep.checks.push_back(run_check(spec, cfg));
  return rep;
}

}  // namespace nilspherical
