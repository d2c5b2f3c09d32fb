#include "doctest.h"
#include "nilspherical/errors.hpp"
#include "nilspherical/random.hpp"
#include "nilspherical/spectrum.hpp"

#include <cmath>

using namespace nilspherical;

namespace {

GroupElement random_group(Rng& rng, int n, double scale) {
  Vec x(n), a(skew_dim(n));
  for (int i = 0; i < n; ++i) x[i] = scale * rng.normal();
  for (int i = 0; i < a.size(); ++i) a[i] = scale * rng.normal();
  return {x, a};
}

// Real 2a x 2a form of a block unitary acting on z_k = x_{2k} + i x_{2k+1}.
Mat realify(const Eigen::MatrixXcd& u) {
  const int a = static_cast<int>(u.rows());
  Mat k(2 * a, 2 * a);
  for (int r = 0; r < a; ++r)
    for (int c = 0; c < a; ++c) {
      const cplx w = u(r, c);
      k(2 * r, 2 * c) = w.real();
      k(2 * r, 2 * c + 1) = -w.imag();
      k(2 * r + 1, 2 * c) = w.imag();
      k(2 * r + 1, 2 * c + 1) = w.real();
    }
  return k;
}

Mat embed(const Mat& k1, int n) {
  Mat k = Mat::Identity(n, n);
  k.topLeftCorner(k1.rows(), k1.cols()) = k1;
  return k;
}

SpectrumEvaluator exp_minus_kappa(const SpectrumSlice& slice) {
  return [slice](double r, double lambda, int truncation, int order) {
    const MultiIndexSet set(slice.p1(), truncation);
    std::vector<Jet> out;
    for (std::size_t k = 0; k < set.size(); ++k) {
      double s = 0;
      for (int j = 0; j < slice.p1(); ++j) s += slice.mu_hat[j] * (2.0 * set[k][j] + slice.blocks.mult[j]);
      const double sg = lambda > 0 ? 1.0 : -1.0;
      out.push_back(Jet::exp_linear(order, -(std::abs(lambda) * s + r * r), -sg * s));
    }
    return out;
  };
}

std::vector<double> lambda_grid() {
  std::vector<double> l;
  for (int k = 0; k < 24; ++k) {
    const double v = 0.05 * std::pow(200.0, k / 23.0);
    l.push_back(v);
    l.push_back(-v);
  }
  return l;
}

}  // namespace

TEST_CASE("slices: normalization and point validation") {
  std::vector<std::string> warnings;
  const SpectrumSlice s = SpectrumSlice::make(5, {2.0, 1.0}, {1, 1}, {}, &warnings);
  CHECK(warnings.size() == 1);
  CHECK(std::abs(s.mu_hat[0] * s.mu_hat[0] + s.mu_hat[1] * s.mu_hat[1] - 1.0) <= 1e-14);
  CHECK(s.rest_dim() == 1);
  const SpectrumSlice f2 = SpectrumSlice::standard(2);
  CHECK(f2.r_constrained());
  CHECK_THROWS_AS(validate_point(Type1{0.5, {0}, 1.0}, f2), DomainError);
  CHECK_THROWS_AS(validate_point(Type1{0.0, {0}, 0.0}, f2), DomainError);
  CHECK_NOTHROW(validate_point(Type2{0.5}, f2));
}

TEST_CASE("reduction to the Heisenberg group") {
  const SpectrumSlice s = SpectrumSlice::standard(2);
  const GroupElement g(Vec::Map(std::vector<double>{0.3, -1.1}.data(), 2), Vec::Constant(1, 0.7));
  const HeisenbergPoint h = psi2_coords(g, s);
  CHECK(h.z[0] == cplx(0.3, -1.1));
  // The pairing with D2 has coordinate -mu on X_12, so the centre enters with a minus sign.
  CHECK(h.t == doctest::Approx(-0.7).epsilon(1e-15));

  const SpectrumSlice s5 = SpectrumSlice::make(5, {1.0}, {2});
  GroupElement c = GroupElement::identity(5);
  c.a[pair_index(0, 2, 5)] = 1.3;  // orthogonal to D2
  c.a[pair_index(3, 4, 5)] = -0.4;
  const HeisenbergPoint hc = psi2_coords(c, s5);
  CHECK(hc.z.norm() == 0.0);
  CHECK(hc.t == 0.0);

  Rng rng(31);
  for (const auto& slice : {SpectrumSlice::standard(3), SpectrumSlice::make(6, {3.0, 1.0}, {2, 1})}) {
    double worst = 0;
    for (int k = 0; k < 200; ++k) {
      const GroupElement x = random_group(rng, slice.n, 1.0), y = random_group(rng, slice.n, 1.0);
      const auto lhs = psi2_coords(group_mul(x, y), slice);
      const auto rhs = h_mul(psi2_coords(x, slice), psi2_coords(y, slice));
      worst = std::max({worst, (lhs.z - rhs.z).cwiseAbs().maxCoeff(), std::abs(lhs.t - rhs.t)});
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("complexification of the stability group") {
  const SpectrumSlice s = SpectrumSlice::make(6, {2.0, 1.0}, {2, 1});
  const auto id = psi1_complexify(Mat::Identity(6, 6), s);
  CHECK((block_diagonal(id) - Eigen::MatrixXcd::Identity(3, 3)).norm() == 0.0);

  const SpectrumSlice s2 = SpectrumSlice::standard(2);
  const double th = 0.7;
  Mat rot(2, 2);
  rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  const auto u = psi1_complexify(rot, s2);
  CHECK(std::abs(u[0](0, 0) - std::polar(1.0, th)) <= 1e-15);
  // Intertwining: psi2(k . g) = psi1(k) psi2(g).
  Rng rng(32);
  const GroupElement g = random_group(rng, 2, 1.0);
  const auto lhs = psi2_coords(act_orthogonal(rot, g), s2);
  const auto rhs = psi2_coords(g, s2);
  CHECK(std::abs(lhs.z[0] - u[0](0, 0) * rhs.z[0]) <= 1e-14);
  CHECK(std::abs(lhs.t - rhs.t) <= 1e-14);

  for (int k = 0; k < 50; ++k) {
    const Mat k1 = realify(haar_block_unitary(rng, s.blocks)), k2 = realify(haar_block_unitary(rng, s.blocks));
    const auto u1 = block_diagonal(psi1_complexify(k1, s)), u2 = block_diagonal(psi1_complexify(k2, s));
    CHECK((block_diagonal(psi1_complexify(k1 * k2, s)) - u1 * u2).cwiseAbs().maxCoeff() <= 1e-12);
    const GroupElement x = random_group(rng, 6, 1.0);
    const auto a = psi2_coords(act_orthogonal(embed(k1, 6), x), s);
    const auto b = psi2_coords(x, s);
    CHECK((a.z - u1 * b.z).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(std::abs(a.t - b.t) <= 1e-12);
  }
  CHECK_THROWS_AS(psi1_complexify(embed(rot, 6).topLeftCorner(6, 6) * 0.5, s), ValidationError);
}

TEST_CASE("spherical functions on F(n): normalization, bounds, invariance") {
  Rng rng(33);
  for (const auto& slice : {SpectrumSlice::standard(2), SpectrumSlice::standard(3)}) {
    const Type1 p{slice.r_constrained() ? 0.0 : 0.8, {2}, -1.3};
    CHECK(std::abs(eval_spherical(p, GroupElement::identity(slice.n), slice).value - 1.0) <= 1e-12);
    CHECK(std::abs(eval_spherical(Type2{1.1}, GroupElement::identity(slice.n), slice).value - 1.0) <= 1e-15);
    for (int k = 0; k < 10; ++k) {
      const GroupElement g = random_group(rng, slice.n, 0.8);
      const cplx v = eval_spherical(p, g, slice).value;
      CHECK(std::abs(v) <= 1.0 + 1e-12);
      const cplx w = eval_spherical(p, act_orthogonal(haar_orthogonal(rng, slice.n), g), slice).value;
      CHECK(std::abs(v - w) <= 1e-8);
    }
  }
}

TEST_CASE("spherical functions: closed forms against Monte Carlo averages") {
  const SpectrumSlice s3 = SpectrumSlice::standard(3);
  Rng rng(34);
  const GroupElement g = random_group(rng, 3, 0.7);
  const double r = 1.4, x = g.x.norm();
  CHECK(std::abs(eval_spherical(Type2{r}, g, s3).value - std::sin(r * x) / (r * x)) <= 1e-13);
  const auto mc2 = eval_spherical(Type2{r}, g, s3, MonteCarlo{100000, 5});
  CHECK(std::abs(mc2.value - std::sin(r * x) / (r * x)) <= 3 * mc2.std_error);
  const Type1 p{0.9, {1}, 0.7};
  const auto cf = eval_spherical(p, g, s3);
  const auto mc1 = eval_spherical(p, g, s3, MonteCarlo{100000, 6});
  CHECK(std::abs(mc1.value - cf.value) <= 3 * std::sqrt(2.0) * mc1.std_error);
}

TEST_CASE("eigenvalue kappa") {
  const SpectrumSlice s2 = SpectrumSlice::standard(2);
  CHECK(kappa(Type1{0.0, {2}, 1.0}, s2) == 5.0);
  const SpectrumSlice s = SpectrumSlice::make(7, {3.0, 1.0}, {1, 2});
  CHECK(kappa(Type1{0.0, {0, 0}, -2.0}, s) == doctest::Approx(2.0 * (s.mu_hat[0] + 2 * s.mu_hat[1])));
  const Type1 p{0.0, {2}, 1.0};
  auto phi = [&](const GroupElement& x) { return eval_spherical(p, x, s2).value; };
  Rng rng(35);
  const GroupElement g = random_group(rng, 2, 0.5);
  CHECK(std::abs(li_laplacian_fd(phi, g, 1e-2) - 5.0 * phi(g)) <= 1e-4 * std::abs(5.0 * phi(g)));
}

TEST_CASE("two-sided eigenvalue bounds") {
  const SpectrumSlice s2 = SpectrumSlice::standard(2);
  const auto b = laplacian_bounds(s2, 0.0);
  CHECK(b.m1 == doctest::Approx(1.0));
  CHECK(b.m2 == doctest::Approx(1.0));

  const SpectrumSlice s = SpectrumSlice::make(4, {2.0 / std::sqrt(5.0), 1.0 / std::sqrt(5.0)}, {1, 1});
  double lo = INFINITY, hi = 0;
  for (int i = 0; i <= 200; ++i)
    for (int j = 0; i + j <= 200; ++j) {
      const double q = (2.0 * (i + j) + 2) / kappa(Type1{0.0, {i, j}, 1.0}, s);
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
  const auto c = laplacian_bounds(s, 0.0);
  CHECK(c.m1 <= lo);
  CHECK(c.m2 >= hi);
  CHECK(c.m1 == doctest::Approx(std::sqrt(5.0) / 2));
  CHECK(c.m2 == doctest::Approx(std::sqrt(5.0)));
  CHECK(hi / c.m2 >= 0.99);
  CHECK(lo / c.m1 <= 1.01);

  const SpectrumSlice s7 = SpectrumSlice::make(7, {3.0, 2.0, 1.0}, {1, 1, 1});
  double prev1 = INFINITY, prev2 = INFINITY;
  for (double r : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    const auto bb = laplacian_bounds(s7, r);
    CHECK(bb.m1 <= prev1);
    CHECK(bb.m2 <= prev2);
    prev1 = bb.m1;
    prev2 = bb.m2;
  }
}

TEST_CASE("spectral operators on grids") {
  const SpectrumSlice s = SpectrumSlice::standard(2);
  // exp(-(l + d)^2) = exp(-l^2 - 2 l d) exp(-d^2), the same for every alpha.
  auto gauss = [](double, double lambda, int truncation, int order) {
    Jet quad(order, 1.0);
    for (int k = 1; 2 * k <= order; ++k) quad[2 * k] = quad[2 * k - 2] * (-1.0 / k);
    return std::vector<Jet>(truncation + 1, Jet::exp_linear(order, -lambda * lambda, -2 * lambda) * quad);
  };
  const auto g = tabulate_grid(s, {0.0}, {0.3, -0.8, 1.7}, 6, 3, gauss);
  for (auto mode : {DiffMode::Plus, DiffMode::Minus}) {
    const auto m = m_ops(g, mode);
    for (std::size_t il = 0; il < 3; ++il) {
      const double l = g.lambda_nodes[il];
      for (std::size_t r = 0; r < m.index.size(); ++r) {
        CHECK(std::abs(m.at(0, il, r).value() - (-2 * l * std::exp(-l * l))) <= 1e-14);
        CHECK(std::abs(m.at(0, il, r).derivative(1) - (4 * l * l - 2) * std::exp(-l * l)) <= 1e-13);
      }
    }
  }
  auto zero = [](double, double, int truncation, int order) { return std::vector<Jet>(truncation + 1, Jet(order)); };
  const auto z = m_ops(tabulate_grid(s, {0.0}, {0.5}, 4, 2, zero), DiffMode::Plus);
  for (const auto& j : z.values) CHECK(std::abs(j.value()) == 0.0);

  // M+ M- and M- M+ agree on e^{-kappa}.
  const auto e = tabulate_grid(s, {0.0}, {0.4, 1.1, -0.7}, 10, 3, exp_minus_kappa(s));
  const auto pm = m_ops(m_ops(e, DiffMode::Minus), DiffMode::Plus);
  const auto mp = m_ops(m_ops(e, DiffMode::Plus), DiffMode::Minus);
  double diff = 0, mag = 0;
  for (std::size_t il = 0; il < 3; ++il)
    for (std::size_t r = 0; r < std::min(pm.index.size(), mp.index.size()); ++r) {
      diff = std::max(diff, std::abs(pm.at(0, il, r).value() - mp.at(0, il, r).value()));
      mag = std::max(mag, std::abs(pm.at(0, il, r).value()));
    }
  CHECK(diff <= 1e-10 * mag);
}

TEST_CASE("decrease certificate on model spectra") {
  for (const auto& slice : {SpectrumSlice::standard(2), SpectrumSlice::standard(3)}) {
    const std::vector<double> rs = slice.r_constrained() ? std::vector<double>{0.0}
                                                         : std::vector<double>{0.0, 0.5, 1.0, 2.0, 4.0};
    const auto g = tabulate_grid(slice, rs, lambda_grid(), 34, 4, exp_minus_kappa(slice));
    const auto rep = decrease_certificate(g, 2, 4, 2);
    CHECK(rep.pass());
    auto one = [](double, double, int truncation, int order) {
      return std::vector<Jet>(MultiIndexSet(1, truncation).size(), Jet(order, 1.0));
    };
    const auto o = tabulate_grid(slice, rs, lambda_grid(), 34, 4, one);
    const auto bad = decrease_certificate(o, 0, 1, 0);
    REQUIRE(bad.first_failure() != nullptr);
    CHECK(bad.first_failure()->n == 1);
  }
}
