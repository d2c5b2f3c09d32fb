#include "nilspherical/heisenberg.hpp"

#include <cmath>
#include <string>

namespace nilspherical {

BlockStructure::BlockStructure(std::vector<int> m) : mult(std::move(m)) {
  for (int v : mult)
    if (v < 1) throw ValidationError("block multiplicities must be positive");
}

int BlockStructure::offset(int j) const {
  int o = 0;
  for (int i = 0; i < j; ++i) o += mult[i];
  return o;
}

void BlockStructure::check(const MultiIndex& alpha) const {
  if (static_cast<int>(alpha.size()) != p1())
    throw DomainError("multi-index has " + std::to_string(alpha.size()) + " entries, block structure has " +
                      std::to_string(p1()));
  for (int v : alpha)
    if (v < 0) throw DomainError("multi-index entries must be non-negative");
}

HeisenbergPoint h_mul(const HeisenbergPoint& p, const HeisenbergPoint& q) {
  if (p.dim() != q.dim()) throw DimensionError("h_mul: dimension mismatch");
  const double symp = (p.z.array() * q.z.array().conjugate()).sum().imag();
  return {p.z + q.z, p.t + q.t + 0.5 * symp};
}

HeisenbergPoint h_inverse(const HeisenbergPoint& p) { return {-p.z, -p.t}; }

HeisenbergPoint scaled(const HeisenbergPoint& direction, double s) { return {s * direction.z, s * direction.t}; }

std::vector<HeisenbergPoint> heisenberg_directions(int a) {
  std::vector<HeisenbergPoint> dirs;
  for (int j = 0; j < a; ++j) {
    CVec e = CVec::Zero(a);
    e[j] = 1.0;
    dirs.push_back({e, 0.0});
    e[j] = cplx(0.0, 1.0);
    dirs.push_back({e, 0.0});
  }
  return dirs;
}

double laguerre(int m, double nu, double x) {
  if (m < 0) throw DomainError("laguerre: negative degree");
  if (m == 0) return 1.0;
  double prev = 1.0, cur = 1.0 + nu - x;
  for (int k = 1; k < m; ++k) {
    const double next = ((2.0 * k + 1.0 + nu - x) * cur - (k + nu) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

void laguerre_function_table(int max_degree, double nu, double x, double* out) {
  // (k + nu + 1) psi_{k+1} = (2k + nu + 1 - x) psi_k - k psi_{k-1}
  out[0] = std::exp(-0.5 * x);
  if (max_degree == 0) return;
  out[1] = (nu + 1.0 - x) * out[0] / (nu + 1.0);
  for (int k = 1; k < max_degree; ++k)
    out[k + 1] = ((2.0 * k + nu + 1.0 - x) * out[k] - k * out[k - 1]) / (k + nu + 1.0);
}

std::vector<double> block_norms2(const CVec& z, const BlockStructure& blocks) {
  if (z.size() != blocks.a()) throw DimensionError("point dimension does not match block structure");
  std::vector<double> out(blocks.p1(), 0.0);
  for (int j = 0, o = 0; j < blocks.p1(); o += blocks.mult[j], ++j)
    out[j] = z.segment(o, blocks.mult[j]).squaredNorm();
  return out;
}

double block_radial(const MultiIndex& alpha, double abs_lambda, const BlockStructure& blocks,
                    const std::vector<double>& block_norm2) {
  double v = 1.0;
  std::vector<double> table;
  for (int j = 0; j < blocks.p1(); ++j) {
    table.resize(alpha[j] + 1);
    laguerre_function_table(alpha[j], blocks.mult[j] - 1.0, 0.5 * abs_lambda * block_norm2[j], table.data());
    v *= table[alpha[j]];
  }
  return v;
}

cplx omega_type1(const MultiIndex& alpha, double lambda, const BlockStructure& blocks, const HeisenbergPoint& p) {
  blocks.check(alpha);
  if (lambda == 0.0) throw DomainError("omega_type1: lambda must be nonzero");
  const double radial = block_radial(alpha, std::abs(lambda), blocks, block_norms2(p.z, blocks));
  return std::polar(radial, lambda * p.t);
}

double normalized_bessel(double nu, double s) {
  if (std::abs(s) < 1e-8) return 1.0 - s * s / (4.0 * (nu + 1.0));
  return std::tgamma(nu + 1.0) * std::pow(2.0 / s, nu) * std::cyl_bessel_j(nu, s);
}

cplx eta_type2(const std::vector<double>& omega, const BlockStructure& blocks, const HeisenbergPoint& p) {
  if (static_cast<int>(omega.size()) != blocks.p1()) throw DomainError("eta_type2: one frequency per block");
  const auto n2 = block_norms2(p.z, blocks);
  double v = 1.0;
  for (int j = 0; j < blocks.p1(); ++j)
    v *= normalized_bessel(blocks.mult[j] - 1.0, std::abs(omega[j]) * std::sqrt(n2[j]));
  return v;
}

Eigen::MatrixXcd haar_block_unitary(Rng& rng, const BlockStructure& blocks) {
  const int a = blocks.a();
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(a, a);
  for (int j = 0, o = 0; j < blocks.p1(); o += blocks.mult[j], ++j)
    u.block(o, o, blocks.mult[j], blocks.mult[j]) = haar_unitary(rng, blocks.mult[j]);
  return u;
}

HeisenbergPoint act_block_unitary(const Eigen::MatrixXcd& u, const HeisenbergPoint& p) { return {u * p.z, p.t}; }

}  // namespace nilspherical
