#include "doctest.h"
#include "nilspherical/errors.hpp"
#include "nilspherical/freegroup.hpp"
#include "nilspherical/random.hpp"
#include "nilspherical/spectrum.hpp"

#include <Eigen/Eigenvalues>

using namespace nilspherical;

namespace {

Vec random_vec(Rng& rng, int n) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

GroupElement random_group(Rng& rng, int n) { return {random_vec(rng, n), random_vec(rng, skew_dim(n))}; }

double dist(const GroupElement& g, const GroupElement& h) {
  return std::max((g.x - h.x).cwiseAbs().maxCoeff(), (g.a - h.a).cwiseAbs().maxCoeff());
}

Mat random_skew(Rng& rng, int n) {
  Mat m = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      m(i, j) = rng.normal();
      m(j, i) = -m(i, j);
    }
  return m;
}

}  // namespace

TEST_CASE("bracket of basis vectors") {
  const Vec e1 = Vec::Unit(2, 0), e2 = Vec::Unit(2, 1);
  CHECK(bracket(e1, e2)[0] == 1.0);
  CHECK(bracket(e1, e1).norm() == 0.0);
  Rng rng(1);
  const Vec x = random_vec(rng, 5);
  CHECK(bracket(x, x).norm() == 0.0);
}

TEST_CASE("bracket in three dimensions, entrywise") {
  Vec x = 2.0 * Vec::Unit(3, 0) + Vec::Unit(3, 2);
  const Vec b = bracket(x, Vec::Unit(3, 1));
  REQUIRE(b.size() == 3);
  CHECK(b[0] == 2.0);
  CHECK(b[1] == 0.0);
  CHECK(b[2] == -1.0);
}

TEST_CASE("bracket acts on vectors as <X,V>Y - <Y,V>X") {
  Rng rng(2);
  for (int n = 2; n <= 6; ++n)
    for (int k = 0; k < 20; ++k) {
      const Vec x = random_vec(rng, n), y = random_vec(rng, n), v = random_vec(rng, n);
      const Vec lhs = skew_matrix(bracket(x, y), n) * v;
      const Vec rhs = x.dot(v) * y - y.dot(v) * x;
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-13 * (1 + rhs.norm()));
    }
}

TEST_CASE("group law: BCH example, identity, associativity") {
  const GroupElement g1(Vec::Unit(2, 0), Vec::Zero(1)), g2(Vec::Unit(2, 1), Vec::Zero(1));
  const GroupElement p = group_mul(g1, g2);
  CHECK(p.x[0] == 1.0);
  CHECK(p.x[1] == 1.0);
  CHECK(p.a[0] == 0.5);

  Rng rng(3);
  double worst = 0;
  for (int k = 0; k < 100; ++k) {
    const int n = 2 + k % 5;
    const GroupElement a = random_group(rng, n), b = random_group(rng, n), c = random_group(rng, n);
    CHECK(dist(group_mul(a, GroupElement::identity(n)), a) == 0.0);
    worst = std::max(worst, dist(group_mul(group_mul(a, b), c), group_mul(a, group_mul(b, c))));
    // Two-step: inverse is negation in exponential coordinates.
    CHECK(dist(group_mul(a, a.inverse()), GroupElement::identity(n)) <= 1e-15);
  }
  CHECK(worst <= 1e-13);
}

TEST_CASE("orthogonal action: identity, automorphism, isometry, bracket equivariance") {
  Rng rng(4);
  for (int k = 0; k < 50; ++k) {
    const int n = 2 + k % 5;
    const GroupElement g = random_group(rng, n), h = random_group(rng, n);
    CHECK(dist(act_orthogonal(Mat::Identity(n, n), g), g) == 0.0);
    const Mat q = haar_orthogonal(rng, n);
    const GroupElement lhs = act_orthogonal(q, group_mul(g, h));
    const GroupElement rhs = group_mul(act_orthogonal(q, g), act_orthogonal(q, h));
    CHECK(dist(lhs, rhs) <= 1e-12);
    const GroupElement kg = act_orthogonal(q, g), kh = act_orthogonal(q, h);
    CHECK(std::abs(kg.x.norm() - g.x.norm()) <= 1e-12);
    CHECK(std::abs(z_inner(kg.a, kh.a) - z_inner(g.a, h.a)) <= 1e-12 * (1 + std::abs(z_inner(g.a, h.a))));
    const Vec lb = bracket(q * g.x, q * h.x);
    const Vec rb = act_orthogonal(q, GroupElement(Vec::Zero(n), bracket(g.x, h.x))).a;
    CHECK((lb - rb).cwiseAbs().maxCoeff() <= 1e-12);
  }
  Mat bad = Mat::Identity(3, 3);
  bad(0, 0) = 1.01;
  CHECK_THROWS_AS(act_orthogonal(bad, GroupElement::identity(3)), ValidationError);
  CHECK_THROWS_AS(act_orthogonal(Mat::Identity(2, 2), GroupElement::identity(3)), DimensionError);
}

TEST_CASE("inner product on the centre") {
  const Vec x12 = Vec::Unit(3, 0), x13 = Vec::Unit(3, 1);
  CHECK(z_inner(x12, x12) == 1.0);
  CHECK(z_inner(x12, x13) == 0.0);
  Rng rng(5);
  for (int k = 0; k < 50; ++k) {
    const int n = 2 + k % 5;
    const Vec a = random_vec(rng, skew_dim(n)), x = random_vec(rng, n), y = random_vec(rng, n);
    const double lhs = z_inner(a, bracket(x, y));
    const double rhs = (skew_matrix(a, n) * x).dot(y);
    CHECK(std::abs(lhs - rhs) <= 1e-13 * (1 + std::abs(lhs)));
  }
}

TEST_CASE("canonical form of skew matrices") {
  Mat a(2, 2);
  a << 0, 2, -2, 0;
  const SkewCanonicalForm f = canonicalize_skew(a);
  CHECK(f.deltas == std::vector<double>{2.0});
  CHECK(f.p0 == 1);
  CHECK(f.p1 == 1);
  CHECK(f.mu == std::vector<double>{2.0});
  CHECK(f.mult == std::vector<int>{1});

  const SkewCanonicalForm z = canonicalize_skew(Mat::Zero(5, 5));
  CHECK(z.p0 == 0);
  CHECK(z.p1 == 0);
  for (double d : z.deltas) CHECK(d == 0.0);

  Rng rng(6);
  for (int k = 0; k < 20; ++k) {
    const Mat m = random_skew(rng, 6);
    const SkewCanonicalForm c = canonicalize_skew(m);
    CHECK((c.reconstruct() - m).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((c.rotation.transpose() * c.rotation - Mat::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-12);
    // Singular values of a skew matrix come in equal pairs.
    const Vec sv = Eigen::JacobiSVD<Mat>(m).singularValues();
    for (int j = 0; j < 3; ++j) {
      CHECK(std::abs(sv[2 * j] - c.deltas[j]) <= 1e-12);
      CHECK(std::abs(sv[2 * j + 1] - c.deltas[j]) <= 1e-12);
    }
    // Idempotence on k D k^T.
    const Mat q = haar_orthogonal(rng, 6);
    const SkewCanonicalForm again = canonicalize_skew(q * d2_matrix(c.deltas, 6) * q.transpose());
    for (int j = 0; j < 3; ++j) CHECK(std::abs(again.deltas[j] - c.deltas[j]) <= 1e-10);
  }

  // Repeated frequencies are clustered into one block.
  const Mat q = haar_orthogonal(rng, 5);
  const SkewCanonicalForm rep = canonicalize_skew(q * d2_matrix({1.5, 1.5}, 5) * q.transpose());
  CHECK(rep.p0 == 2);
  CHECK(rep.p1 == 1);
  CHECK(rep.mult == std::vector<int>{2});
}

TEST_CASE("Haar orthogonal stream") {
  HaarOrthogonalStream s1(4, 99), s2(4, 99);
  double mean = 0;
  constexpr int count = 100000;
  for (int k = 0; k < count; ++k) {
    const Mat q = s1.next();
    if (k < 100) {
      CHECK((q.transpose() * q - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK((q - s2.next()).norm() == 0.0);
    }
    mean += q(0, 0);
  }
  CHECK(std::abs(mean / count) <= 3e-2);
}

TEST_CASE("finite-difference sub-Laplacian on simple functions") {
  Rng rng(7);
  const GroupElement g = random_group(rng, 2);
  auto one = [](const GroupElement&) { return cplx(1.0); };
  CHECK(std::abs(li_laplacian_fd(one, g, 1e-3)) == 0.0);
  // f = |X|^2 + 3 a: every X_i^2 gives 2 and the central part is linear along the flow.
  auto quad1 = [](const GroupElement& p) { return cplx(p.x.squaredNorm() + 3.0 * p.a[0]); };
  CHECK(std::abs(li_laplacian_fd(quad1, g, 1e-3) - (-4.0)) <= 1e-8);
  // f = a^2: along X_1 the centre moves by -x_2 s / 2, along X_2 by x_1 s / 2.
  auto quad2 = [](const GroupElement& p) { return cplx(p.a[0] * p.a[0]); };
  CHECK(std::abs(li_laplacian_fd(quad2, g, 1e-3) - (-0.5 * g.x.squaredNorm())) <= 1e-8);
}

TEST_CASE("sub-Laplacian eigenvalue of a spherical function on F(3)") {
  const SpectrumSlice slice = SpectrumSlice::standard(3);
  const Type1 p{0.6, {1}, -0.9};
  auto phi = [&](const GroupElement& x) { return eval_spherical(p, x, slice).value; };
  Rng rng(8);
  const GroupElement g(random_vec(rng, 3) * 0.5, random_vec(rng, 3) * 0.5);
  const cplx v = phi(g);
  const cplx lv = li_laplacian_fd(phi, g, 1e-2);
  CHECK(std::abs(lv - kappa(p, slice) * v) <= 1e-4 * std::abs(kappa(p, slice) * v));
}
