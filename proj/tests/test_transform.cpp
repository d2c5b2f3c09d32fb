#include "doctest.h"
#include "nilspherical/errors.hpp"
#include "nilspherical/transform.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <cmath>

using namespace nilspherical;

namespace {

double laguerre_series(int m, double x) {
  double s = 0, term = 1;  // binom(m, k) (-x)^k / k!
  for (int k = 0; k <= m; ++k) {
    s += term;
    term *= -x * (m - k) / ((k + 1.0) * (k + 1.0));
  }
  return s;
}

double half_line(const std::function<double(double)>& f) {
  boost::math::quadrature::exp_sinh<double> q;
  return q.integrate(f, 0.0, INFINITY, 1e-14);
}

// Transform of P(|X|^2, |A|^2) e^{-bv |X|^2 - bz |A|^2} on F(2) at (alpha, lambda):
// the sphere average is cos(lambda t) L_alpha(|lambda| u / 2) e^{-|lambda| u / 4}, u = |X|^2,
// and d^2 X = pi du.
double f2_oracle(const InvariantTestFunction& f, int alpha, double lambda) {
  const double al = std::abs(lambda);
  double total = 0;
  for (std::size_t i = 0; i < f.poly.size(); ++i)
    for (std::size_t k = 0; k < f.poly[i].size(); ++k) {
      if (f.poly[i][k] == 0.0) continue;
      const double radial = M_PI * half_line([&](double u) {
        const double e = std::exp(-f.beta_v * u - al * u / 4);
        return e == 0.0 ? 0.0 : std::pow(u, double(i)) * e * laguerre_series(alpha, al * u / 2);
      });
      const double central = 2 * half_line([&](double t) {
        const double e = std::exp(-f.beta_z * t * t);  // cos(lambda t) is NaN at t = inf
        return e == 0.0 ? 0.0 : std::pow(t, 2.0 * k) * e * std::cos(lambda * t);
      });
      total += f.poly[i][k] * radial * central;
    }
  return total;
}

const InvariantTestFunction kGauss = InvariantTestFunction::gaussian(1.0, 1.0);
const InvariantTestFunction kPoly = InvariantTestFunction::poly_gaussian({{1.0, 0.5}, {1.0}}, 1.0, 0.7);

}  // namespace

TEST_CASE("forward transform: zero, constant spherical function, closed forms on F(2)") {
  const SpectrumSlice s2 = SpectrumSlice::standard(2);
  CHECK(forward_transform(kGauss.scaled(0.0), Type1{0.0, {1}, 0.5}, s2) == cplx(0.0));
  CHECK(std::abs(forward_transform(kGauss, Type2{0.0}, s2) - std::pow(M_PI, 1.5)) <= 1e-12 * std::pow(M_PI, 1.5));
  for (const auto& f : {kGauss, kPoly, InvariantTestFunction::poly_gaussian({{0.0, 0.0, 1.0}, {0.0, 2.0}}, 0.6, 1.4)})
    for (int alpha : {0, 1, 3, 7})
      for (double lambda : {0.05, -0.6, 1.9, 7.5}) {
        const double exact = f2_oracle(f, alpha, lambda);
        const cplx got = forward_transform(f, Type1{0.0, {alpha}, lambda}, s2);
        CHECK(std::abs(got - exact) <= 1e-8 * std::abs(exact) + 1e-14);
      }
  // The library closed form agrees with the oracle too.
  CHECK(std::abs(gaussian_transform_f2(0.8, 1.3, 2, 0.9) - f2_oracle(InvariantTestFunction::gaussian(0.8, 1.3), 2, 0.9)) <=
        1e-10);
}

TEST_CASE("forward transform: linearity and boundedness") {
  const auto combo = InvariantTestFunction::poly_gaussian({{2.0 + 3.0, 1.0}, {2.0}}, 1.0, 0.7);
  const auto g = InvariantTestFunction::gaussian(1.0, 0.7);
  for (const auto& slice : {SpectrumSlice::standard(2), SpectrumSlice::standard(3)}) {
    const std::vector<SphericalPoint> points{Type1{0.0, {0}, 0.3}, Type1{slice.r_constrained() ? 0.0 : 1.2, {4}, -2.0},
                                             Type2{0.7}};
    const double l1 = kPoly.l1_norm(slice.n);
    for (const auto& p : points) {
      const cplx a = forward_transform(kPoly, p, slice), b = forward_transform(g, p, slice);
      const cplx c = forward_transform(combo, p, slice);
      CHECK(std::abs(c - (2.0 * a + 3.0 * b)) <= 1e-12 * (std::abs(c) + 1));
      CHECK(std::abs(a) <= l1 * (1 + 1e-12));
    }
  }
}

TEST_CASE("eigenvalue transfer under the sub-Laplacian") {
  const SpectrumSlice s2 = SpectrumSlice::standard(2);
  for (const auto& f : {kGauss, kPoly}) {
    const auto lf = f.sub_laplacian(2), llf = lf.sub_laplacian(2);
    for (int alpha : {0, 2, 5})
      for (double lambda : {0.4, -1.5}) {
        const Type1 p{0.0, {alpha}, lambda};
        const double k = kappa(p, s2);
        const cplx base = forward_transform(f, p, s2);
        CHECK(std::abs(forward_transform(lf, p, s2) - k * base) <= 1e-4 * std::abs(k * base));
        CHECK(std::abs(forward_transform(llf, p, s2) - k * k * base) <= 1e-4 * std::abs(k * k * base));
      }
  }
  CHECK_THROWS_AS(kGauss.sub_laplacian(3), DomainError);
}

TEST_CASE("inversion and Plancherel on F(2)") {
  const SpectrumSlice s2 = SpectrumSlice::standard(2);
  const QuadratureSpec quad;
  const double c = calibrate_c(kGauss, s2, quad);
  // Radial inversion on H_1 carries (2 pi)^{-(a+1)}, which is c = 2 pi here.
  CHECK(std::abs(c / (2 * M_PI) - 1) <= 1e-3);
  CHECK(std::abs(calibrate_c(kPoly, s2, quad) / c - 1) <= 1e-3);
  QuadratureSpec wide = quad;
  wide.lambda_max *= 2;
  CHECK(std::abs(calibrate_c(kGauss, s2, wide) / c - 1) <= 1e-4);

  const GroupElement e = GroupElement::identity(2);
  const auto zero = [](double, double, int T) { return std::vector<cplx>(T + 1, 0.0); };
  CHECK(inverse_transform(zero, e, s2, quad, c).value == cplx(0.0));
  const GroupElement x(Vec::Map(std::vector<double>{0.5, -0.2}.data(), 2), Vec::Constant(1, 0.3));
  const auto r = inverse_transform_many(values_of(transform_evaluator(kPoly, s2, quad)), {e, x}, s2, quad, c);
  CHECK(std::abs(r[0].value - kPoly.base_value(e)) <= 1e-3 * kPoly.base_value(e));
  CHECK(std::abs(r[1].value - kPoly.base_value(x)) <= 1e-3 * kPoly.base_value(x));

  CHECK(plancherel_defect(kGauss.scaled(0.0), s2, quad, c) == 0.0);
  const double d1 = plancherel_defect(kGauss, s2, quad, c);
  CHECK(d1 <= 1e-3);
  CHECK(std::abs(plancherel_defect(kGauss.scaled(2.0), s2, quad, c) - d1) <= 1e-12);
}

TEST_CASE("Plancherel defect shrinks as the lambda rule is refined") {
  const SpectrumSlice s2 = SpectrumSlice::standard(2);
  QuadratureSpec coarse, fine;
  coarse.lambda_panel_order = 4;
  fine.lambda_panel_order = 8;
  const double c = 2 * M_PI;
  const double dc = plancherel_defect(kGauss, s2, coarse, c), df = plancherel_defect(kGauss, s2, fine, c);
  // Order^{-2} or better, unless already at the floor set by the other rules.
  CHECK((df <= dc / 4 || df <= 1e-7));
}

TEST_CASE("intertwining identities and G_Delta") {
  const SpectrumSlice s2 = SpectrumSlice::standard(2);
  const QuadratureSpec quad;
  const auto grid = GridSpec::default_for(s2);
  for (const auto& f : {kGauss, kPoly}) {
    const auto d = intertwining_defect(f, s2, quad, grid);
    CHECK(d.plus <= 1e-2);
    CHECK(d.minus <= 1e-2);
    CHECK(d.symmetry <= 1e-10);
    // Doubling the alpha truncation moves the defects by less than a tenth of the tolerance.
    CHECK(std::abs(d.plus_doubled - d.plus) <= 1e-3);
    CHECK(std::abs(d.minus_doubled - d.minus) <= 1e-3);
    CHECK(g_delta_check(f, s2, quad, grid) <= 1e-2);
  }
  CHECK(g_delta_check(kGauss.scaled(0.0), s2, quad, grid) == 0.0);

  const auto g = tabulate_grid(s2, grid.r_nodes, grid.lambda_nodes, 33, 2, transform_evaluator(kGauss, s2, quad));
  CHECK(decrease_certificate(g_delta_grid(g), 1, 2, 0).pass());
}

TEST_CASE("integrability regions") {
  const SpectrumSlice s3 = SpectrumSlice::standard(3);
  auto decaying = [&](double r, const MultiIndex& alpha, double lambda) {
    return cplx(std::exp(-kappa(Type1{r, alpha, lambda}, s3)));
  };
  const auto rep = integrability_report(decaying, s3, s3.a() + 3, 1.0, 16);
  CHECK(rep.hypothesis_ok);
  REQUIRE(rep.regions.size() == 4);
  for (const auto& reg : rep.regions) {
    CHECK(reg.finite);
    for (std::size_t m = 1; m < reg.shell.size(); ++m) CHECK(reg.shell[m] <= reg.shell[m - 1]);
  }
  auto flat = [](double, const MultiIndex&, double) { return cplx(1.0); };
  const auto bad = integrability_report(flat, s3, 1, 1.0, 4);
  CHECK_FALSE(bad.hypothesis_ok);
  CHECK_FALSE(bad.regions[1].finite);
  CHECK_FALSE(bad.regions[3].finite);
}
