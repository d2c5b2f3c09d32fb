#pragma once

#include "nilspherical/errors.hpp"
#include "nilspherical/numeric.hpp"

#include <Eigen/Dense>

#include <vector>

namespace nilspherical {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline int skew_dim(int n) { return n * (n - 1) / 2; }

// Position of the generator X_ij (i < j, zero based) in lexicographic order.
int pair_index(int i, int j, int n);

// Exponential coordinates (x, a) on the free two-step nilpotent group F(n).
// The same pair represents Lie algebra elements.
struct GroupElement {
  Vec x;
  Vec a;

  GroupElement() = default;
  GroupElement(Vec x_, Vec a_);
  static GroupElement identity(int n);
  int n() const { return static_cast<int>(x.size()); }
  GroupElement inverse() const { return {-x, -a}; }
};

using AlgebraElement = GroupElement;

// Coordinate vector of [X, Y]: component ij is X_i Y_j - X_j Y_i.
Vec bracket(const Vec& x, const Vec& y);
GroupElement group_mul(const GroupElement& g, const GroupElement& h);

// Skew matrix whose (j, i) entry is a_ij for i < j.
Mat skew_matrix(const Vec& a, int n);
Vec skew_coordinates(const Mat& m);

// k . (x, a) = (k x, k A k^T) for k in O(n).
GroupElement act_orthogonal(const Mat& k, const GroupElement& g);

// Inner product on the centre, with the generators X_ij orthonormal.
double z_inner(const Vec& a, const Vec& b);

// Skew matrix built from 2x2 blocks delta_j J, J = [[0, 1], [-1, 0]].
Mat d2_matrix(const std::vector<double>& deltas, int n);

struct SkewCanonicalForm {
  std::vector<double> deltas;  // non-increasing, length floor(n/2)
  Mat rotation;                // k in O(n) with A = k D k^T
  int p0 = 0;                  // number of nonzero deltas
  int p1 = 0;                  // number of distinct nonzero deltas
  std::vector<double> mu;      // distinct nonzero deltas, decreasing
  std::vector<int> mult;       // multiplicity of each mu
  Mat reconstruct() const;
};

SkewCanonicalForm canonicalize_skew(const Mat& a, double cluster_tol = 1e-9);

// Sum of generator directions scaled by s, used by the finite-difference
// Laplacians below.
GroupElement scaled(const GroupElement& direction, double s);

// The n generator directions X_1..X_n.
std::vector<GroupElement> generator_directions(int n);

// Left-invariant second derivative along the directions, with Richardson
// extrapolation. Returns sum_i d^2/ds^2 f(g exp(s X_i)) at s = 0.
template <class F, class Point>
cplx second_derivative_sum(F&& f, const Point& g, const std::vector<Point>& directions, double h) {
  auto second = [&](const Point& dir, double step) {
    const cplx fp = f(group_mul(g, scaled(dir, step)));
    const cplx fm = f(group_mul(g, scaled(dir, -step)));
    return (fp - 2.0 * f(g) + fm) / (step * step);
  };
  cplx total = 0.0;
  for (const auto& dir : directions) {
    const cplx coarse = second(dir, h), fine = second(dir, h / 2);
    total += (4.0 * fine - coarse) / 3.0;
  }
  return total;
}

// Positive left-invariant sub-Laplacian L = -sum X_i^2, by finite differences.
template <class F>
cplx li_laplacian_fd(F&& f, const GroupElement& g, double h) {
  return -second_derivative_sum(f, g, generator_directions(g.n()), h);
}

}  // namespace nilspherical
