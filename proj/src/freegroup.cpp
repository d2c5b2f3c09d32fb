#include "nilspherical/freegroup.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nilspherical {

int pair_index(int i, int j, int n) {
  if (i < 0 || j <= i || j >= n) throw DimensionError("pair_index: need 0 <= i < j < n");
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

GroupElement::GroupElement(Vec x_, Vec a_) : x(std::move(x_)), a(std::move(a_)) {
  if (a.size() != skew_dim(static_cast<int>(x.size())))
    throw DimensionError("central coordinate has length " + std::to_string(a.size()) + ", expected " +
                         std::to_string(skew_dim(static_cast<int>(x.size()))));
}

GroupElement GroupElement::identity(int n) { return {Vec::Zero(n), Vec::Zero(skew_dim(n))}; }

Vec bracket(const Vec& x, const Vec& y) {
  const int n = static_cast<int>(x.size());
  if (y.size() != n) throw DimensionError("bracket: operands differ in dimension");
  Vec out(skew_dim(n));
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out[k++] = x[i] * y[j] - x[j] * y[i];
  return out;
}

GroupElement group_mul(const GroupElement& g, const GroupElement& h) {
  if (g.n() != h.n()) throw DimensionError("group_mul: operands differ in dimension");
  return {g.x + h.x, g.a + h.a + 0.5 * bracket(g.x, h.x)};
}

Mat skew_matrix(const Vec& a, int n) {
  if (a.size() != skew_dim(n)) throw DimensionError("skew_matrix: wrong coordinate length");
  Mat m = Mat::Zero(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      m(j, i) = a[k];
      m(i, j) = -a[k];
      ++k;
    }
  return m;
}

Vec skew_coordinates(const Mat& m) {
  const int n = static_cast<int>(m.rows());
  if (m.cols() != n) throw DimensionError("skew_coordinates: matrix is not square");
  Vec a(skew_dim(n));
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) a[k++] = 0.5 * (m(j, i) - m(i, j));
  return a;
}

GroupElement act_orthogonal(const Mat& k, const GroupElement& g) {
  const int n = g.n();
  if (k.rows() != n || k.cols() != n) throw DimensionError("act_orthogonal: matrix size mismatch");
  if ((k.transpose() * k - Mat::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-12)
    throw ValidationError("act_orthogonal: matrix is not orthogonal");
  const Mat a = skew_matrix(g.a, n);
  return {k * g.x, skew_coordinates(k * a * k.transpose())};
}

double z_inner(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw DimensionError("z_inner: dimension mismatch");
  return a.dot(b);
}

Mat d2_matrix(const std::vector<double>& deltas, int n) {
  if (2 * static_cast<int>(deltas.size()) > n) throw DimensionError("d2_matrix: too many blocks");
  Mat m = Mat::Zero(n, n);
  for (std::size_t j = 0; j < deltas.size(); ++j) {
    m(2 * j, 2 * j + 1) = deltas[j];
    m(2 * j + 1, 2 * j) = -deltas[j];
  }
  return m;
}

Mat SkewCanonicalForm::reconstruct() const {
  const int n = static_cast<int>(rotation.rows());
  return rotation * d2_matrix(deltas, n) * rotation.transpose();
}

SkewCanonicalForm canonicalize_skew(const Mat& a, double cluster_tol) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n) throw DimensionError("canonicalize_skew: matrix is not square");
  const double scale = a.norm();
  if ((a + a.transpose()).norm() > 1e-12 * std::max(1.0, scale))
    throw ValidationError("canonicalize_skew: matrix is not skew-symmetric");

  Eigen::SelfAdjointEigenSolver<Mat> eig(a.transpose() * a);
  const Vec& ev = eig.eigenvalues();
  const Mat& vecs = eig.eigenvectors();
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int l, int r) { return ev[l] > ev[r]; });

  const double zero_tol = 1e-12 * std::max(scale, 1e-300);
  const int half = n / 2;
  Mat k = Mat::Zero(n, n);
  std::vector<double> deltas;
  int filled = 0;

  auto project_out = [&](Vec v) {
    for (int pass = 0; pass < 2; ++pass)
      for (int c = 0; c < filled; ++c) v -= k.col(c).dot(v) * k.col(c);
    return v;
  };

  // Each nonzero delta^2 appears twice among the eigenvalues of A^T A; every
  // accepted eigenvector v yields the invariant plane (v, -A v / delta).
  for (int idx : order) {
    if (static_cast<int>(deltas.size()) == half) break;
    const double d2 = std::max(ev[idx], 0.0);
    if (std::sqrt(d2) <= zero_tol) break;
    Vec v = project_out(vecs.col(idx));
    const double nv = v.norm();
    if (nv < 0.5) continue;
    v /= nv;
    Vec w = project_out(-(a * v));
    w -= v.dot(w) * v;
    const double nw = w.norm();
    if (nw <= zero_tol) continue;
    w /= nw;
    k.col(filled++) = v;
    k.col(filled++) = w;
    deltas.push_back(v.dot(a * w));
  }

  // Remaining columns span the kernel; complete to an orthonormal basis.
  for (int idx = n - 1; idx >= 0 && filled < n; --idx) {
    Vec v = project_out(vecs.col(order[idx]));
    const double nv = v.norm();
    if (nv < 0.5) continue;
    k.col(filled++) = v / nv;
  }
  for (int e = 0; e < n && filled < n; ++e) {
    Vec v = project_out(Vec::Unit(n, e));
    const double nv = v.norm();
    if (nv < 1e-6) continue;
    k.col(filled++) = v / nv;
  }

  SkewCanonicalForm out;
  out.p0 = static_cast<int>(deltas.size());
  while (static_cast<int>(deltas.size()) < half) deltas.push_back(0.0);
  out.deltas = deltas;
  out.rotation = k;
  for (int j = 0; j < out.p0; ++j) {
    const double d = out.deltas[j];
    if (!out.mu.empty() && std::abs(out.mu.back() - d) <= cluster_tol * std::max(1.0, out.mu.front())) {
      ++out.mult.back();
    } else {
      out.mu.push_back(d);
      out.mult.push_back(1);
    }
  }
  out.p1 = static_cast<int>(out.mu.size());
  return out;
}

GroupElement scaled(const GroupElement& direction, double s) { return {s * direction.x, s * direction.a}; }

std::vector<GroupElement> generator_directions(int n) {
  std::vector<GroupElement> dirs;
  for (int i = 0; i < n; ++i) dirs.push_back({Vec::Unit(n, i), Vec::Zero(skew_dim(n))});
  return dirs;
}

}  // namespace nilspherical
