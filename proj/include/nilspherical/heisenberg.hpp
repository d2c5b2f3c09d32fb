#pragma once

#include "nilspherical/multi_index.hpp"
#include "nilspherical/numeric.hpp"
#include "nilspherical/parallel.hpp"
#include "nilspherical/random.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace nilspherical {

using CVec = Eigen::VectorXcd;

struct HeisenbergPoint {
  CVec z;
  double t = 0.0;
  int dim() const { return static_cast<int>(z.size()); }
};

// (z, t)(z', t') = (z + z', t + t' + Im(z . conj(z')) / 2)
HeisenbergPoint h_mul(const HeisenbergPoint& p, const HeisenbergPoint& q);
HeisenbergPoint h_inverse(const HeisenbergPoint& p);
inline HeisenbergPoint group_mul(const HeisenbergPoint& p, const HeisenbergPoint& q) { return h_mul(p, q); }
HeisenbergPoint scaled(const HeisenbergPoint& direction, double s);
// The 2a real directions d/dx_j, d/dy_j.
std::vector<HeisenbergPoint> heisenberg_directions(int a);

// Generalized Laguerre polynomial L_m^{(nu)}(x) by three-term recurrence.
double laguerre(int m, double nu, double x);

// psi_k(x) = L_k^{(nu)}(x) / binom(k + nu, k) * exp(-x / 2), k = 0..max_degree.
void laguerre_function_table(int max_degree, double nu, double x, double* out);

// Block radial factor prod_j psi_{alpha_j}^{(m_j - 1)}(|lambda| |z_j|^2 / 2).
double block_radial(const MultiIndex& alpha, double abs_lambda, const BlockStructure& blocks,
                    const std::vector<double>& block_norm2);
std::vector<double> block_norms2(const CVec& z, const BlockStructure& blocks);

// Bounded spherical function of Laguerre type on H_a.
cplx omega_type1(const MultiIndex& alpha, double lambda, const BlockStructure& blocks, const HeisenbergPoint& p);

// Gamma(nu + 1) (2 / s)^nu J_nu(s), equal to 1 at s = 0.
double normalized_bessel(double nu, double s);

// Bounded spherical function of Bessel type: product over blocks of the
// normalized Bessel function of order m_j - 1 at |w_j| |z_j|.
cplx eta_type2(const std::vector<double>& omega, const BlockStructure& blocks, const HeisenbergPoint& p);

// Right-hand side uses U = sum (X_j^2 + Y_j^2) with
// X_j = d/dx_j + (y_j / 2) d/dt, Y_j = d/dy_j - (x_j / 2) d/dt.
template <class F>
cplx heisenberg_sublaplacian_fd(F&& f, const HeisenbergPoint& p, double h) {
  cplx total = 0.0;
  for (const auto& dir : heisenberg_directions(p.dim())) {
    auto second = [&](double s) {
      return (f(h_mul(p, scaled(dir, s))) - 2.0 * f(p) + f(h_mul(p, scaled(dir, -s)))) / (s * s);
    };
    total += (4.0 * second(h / 2) - second(h)) / 3.0;
  }
  return total;
}

// Element of K(m) = U(m_1) x ... x U(m_p1), stored block diagonally.
Eigen::MatrixXcd haar_block_unitary(Rng& rng, const BlockStructure& blocks);

struct GelfandResult {
  double defect = 0.0;
  double std_error = 0.0;
  cplx average = 0.0;
  cplx product = 0.0;
  std::int64_t samples = 0;
};

// Monte Carlo estimate of |E_k phi(x (k . y)) - phi(x) phi(y)|. `act(rng, y)`
// draws k from Haar measure and returns k . y.
template <class Point, class Phi, class Act>
GelfandResult gelfand_check(Phi&& phi, const Point& x, const Point& y, Act&& act, std::int64_t samples,
                            std::uint64_t seed) {
  constexpr int chunks = 64;
  struct Partial {
    CompensatedSum<cplx> sum;
    CompensatedSum<double> sq;
  };
  std::vector<Partial> parts(chunks);
  parallel_for_chunks(chunks, [&](int c) {
    const std::int64_t begin = samples * c / chunks, end = samples * (c + 1) / chunks;
    Rng rng(split_seed(seed, static_cast<std::uint64_t>(c)));
    for (std::int64_t s = begin; s < end; ++s) {
      const cplx v = phi(group_mul(x, act(rng, y)));
      parts[c].sum.add(v);
      parts[c].sq.add(std::norm(v));
    }
  });
  CompensatedSum<cplx> sum;
  CompensatedSum<double> sq;
  for (auto& p : parts) {
    sum.add(p.sum.value());
    sq.add(p.sq.value());
  }
  GelfandResult r;
  r.samples = samples;
  r.average = sum.value() / double(samples);
  r.product = phi(x) * phi(y);
  r.defect = std::abs(r.average - r.product);
  const double var = std::max(sq.value() / double(samples) - std::norm(r.average), 0.0);
  r.std_error = std::sqrt(var / double(samples));
  return r;
}

HeisenbergPoint act_block_unitary(const Eigen::MatrixXcd& u, const HeisenbergPoint& p);

}  // namespace nilspherical
