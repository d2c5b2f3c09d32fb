#include "nilspherical/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nilspherical {

SpectrumSlice SpectrumSlice::make(int n, std::vector<double> mu_hat, std::vector<int> mult, Vec xp_star,
                                  std::vector<std::string>* warnings) {
  if (n < 2) throw DimensionError("slice: n must be at least 2");
  if (mu_hat.empty() || mu_hat.size() != mult.size())
    throw ValidationError("slice: mu_hat and mult must be nonempty and of equal length");
  SpectrumSlice s;
  s.n = n;
  s.blocks = BlockStructure(mult);
  if (2 * s.blocks.a() > n) throw DimensionError("slice: 2 * sum(mult) exceeds n");
  for (std::size_t j = 0; j < mu_hat.size(); ++j) {
    if (!(mu_hat[j] > 0)) throw ValidationError("slice: mu_hat entries must be positive");
    if (j > 0 && !(mu_hat[j] < mu_hat[j - 1])) throw ValidationError("slice: mu_hat must be strictly decreasing");
  }
  double norm2 = 0;
  for (std::size_t j = 0; j < mu_hat.size(); ++j) norm2 += mult[j] * mu_hat[j] * mu_hat[j];
  if (std::abs(norm2 - 1.0) > 1e-14) {
    const double scale = 1.0 / std::sqrt(norm2);
    for (double& m : mu_hat) m *= scale;
    if (warnings) {
      std::ostringstream os;
      os << "mu_hat rescaled by " << scale << " so that sum m_j mu_j^2 = 1 (was " << norm2 << ")";
      warnings->push_back(os.str());
    }
  }
  s.mu_hat = std::move(mu_hat);
  const int rest = n - 2 * s.blocks.a();
  if (rest == 0) {
    if (xp_star.size() != 0) throw DimensionError("slice: xp_star must be empty when 2 p0 = n");
  } else {
    if (xp_star.size() == 0) xp_star = Vec::Unit(rest, 0);
    if (xp_star.size() != rest) throw DimensionError("slice: xp_star must have length n - 2 p0");
    const double nn = xp_star.norm();
    if (!(nn > 0)) throw ValidationError("slice: xp_star must be nonzero");
    if (std::abs(nn - 1.0) > 1e-14) {
      xp_star /= nn;
      if (warnings) warnings->push_back("xp_star normalized to unit length");
    }
  }
  s.xp_star = std::move(xp_star);
  return s;
}

SpectrumSlice SpectrumSlice::standard(int n) {
  if (n <= 3) return make(n, {1.0}, {1});
  const int p0 = n / 2;
  return make(n, {1.0 / std::sqrt(double(p0))}, {p0});
}

double SpectrumSlice::mu_of_pair(int k) const {
  for (int j = 0, o = 0; j < blocks.p1(); o += blocks.mult[j], ++j)
    if (k < o + blocks.mult[j]) return mu_hat[j];
  throw DimensionError("mu_of_pair: index outside the slice");
}

std::vector<double> SpectrumSlice::pair_deltas() const {
  std::vector<double> d;
  for (int j = 0; j < blocks.p1(); ++j)
    for (int i = 0; i < blocks.mult[j]; ++i) d.push_back(mu_hat[j]);
  return d;
}

Mat SpectrumSlice::d2() const { return d2_matrix(pair_deltas(), n); }

void validate_point(const SphericalPoint& point, const SpectrumSlice& slice) {
  const double r = std::visit([](const auto& p) { return p.r; }, point);
  if (!(r >= 0)) throw DomainError("spherical point: r must be non-negative");
  if (const auto* t1 = std::get_if<Type1>(&point)) {
    // Type 2 points are characters of V and keep r free on every slice.
    if (slice.r_constrained() && r != 0.0) throw DomainError("spherical point: r must be 0 when 2 p0 = n");
    if (t1->lambda == 0.0) throw DomainError("spherical point: type 1 needs lambda != 0");
    slice.blocks.check(t1->alpha);
  }
}

HeisenbergPoint psi2_coords(const GroupElement& g, const SpectrumSlice& slice) {
  const int n = g.n();
  if (n != slice.n) throw DimensionError("psi2_coords: group element does not match slice");
  const int a = slice.a();
  HeisenbergPoint h;
  h.z.resize(a);
  double t = 0;
  for (int k = 0; k < a; ++k) {
    const double mu = slice.mu_of_pair(k);
    h.z[k] = std::sqrt(mu) * cplx(g.x[2 * k], g.x[2 * k + 1]);
    // D2 has entry +mu at (2k, 2k+1), i.e. coordinate -mu on X_{2k,2k+1}.
    t -= mu * g.a[pair_index(2 * k, 2 * k + 1, n)];
  }
  h.t = t;
  return h;
}

double rest_projection(const GroupElement& g, const SpectrumSlice& slice) {
  const int rest = slice.rest_dim();
  if (rest == 0) return 0.0;
  return slice.xp_star.dot(g.x.tail(rest));
}

double kappa(const Type1& p, const SpectrumSlice& slice) {
  slice.blocks.check(p.alpha);
  double s = 0;
  for (int j = 0; j < slice.p1(); ++j) s += slice.mu_hat[j] * (2.0 * p.alpha[j] + slice.blocks.mult[j]);
  return std::abs(p.lambda) * s + p.r * p.r;
}

double kappa(const SphericalPoint& point, const SpectrumSlice& slice) {
  if (const auto* t1 = std::get_if<Type1>(&point)) return kappa(*t1, slice);
  throw DomainError("kappa: type 2 point, use r^2");
}

LaplacianBounds laplacian_bounds(const SpectrumSlice& slice, double r) {
  double k0 = r * r;
  for (int j = 0; j < slice.p1(); ++j) k0 += slice.mu_hat[j] * slice.blocks.mult[j];
  const double at_origin = slice.a() / k0;
  // Along alpha = s e_j the ratio tends to 1 / mu_j; mu_hat is decreasing.
  const double lo_ray = 1.0 / slice.mu_hat.front();
  const double hi_ray = 1.0 / slice.mu_hat.back();
  return {std::min(at_origin, lo_ray), std::max(at_origin, hi_ray)};
}

std::vector<Eigen::MatrixXcd> psi1_complexify(const Mat& k1, const SpectrumSlice& slice) {
  const int a = slice.a();
  if (k1.rows() != 2 * a || k1.cols() != 2 * a) throw DimensionError("psi1_complexify: need a 2p0 x 2p0 matrix");
  if ((k1.transpose() * k1 - Mat::Identity(2 * a, 2 * a)).norm() > 1e-10)
    throw ValidationError("psi1_complexify: matrix is not orthogonal");
  const Mat d = d2_matrix(slice.pair_deltas(), 2 * a);
  if ((k1 * d - d * k1).norm() > 1e-10) throw ValidationError("psi1_complexify: matrix does not commute with D2");
  std::vector<Eigen::MatrixXcd> out;
  for (int j = 0, o = 0; j < slice.p1(); o += slice.blocks.mult[j], ++j) {
    const int m = slice.blocks.mult[j];
    Eigen::MatrixXcd u(m, m);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) {
        // Commuting 2x2 blocks have the form [[p, q], [-q, p]] and act as p - i q.
        const double p = 0.5 * (k1(2 * (o + r), 2 * (o + c)) + k1(2 * (o + r) + 1, 2 * (o + c) + 1));
        const double q = 0.5 * (k1(2 * (o + r), 2 * (o + c) + 1) - k1(2 * (o + r) + 1, 2 * (o + c)));
        u(r, c) = cplx(p, -q);
      }
    out.push_back(u);
  }
  return out;
}

Eigen::MatrixXcd block_diagonal(const std::vector<Eigen::MatrixXcd>& blocks) {
  int size = 0;
  for (const auto& b : blocks) size += static_cast<int>(b.rows());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(size, size);
  int o = 0;
  for (const auto& b : blocks) {
    out.block(o, o, b.rows(), b.cols()) = b;
    o += static_cast<int>(b.rows());
  }
  return out;
}

}  // namespace nilspherical
