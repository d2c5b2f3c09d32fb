#pragma once

#include "nilspherical/combinatorics.hpp"
#include "nilspherical/freegroup.hpp"
#include "nilspherical/heisenberg.hpp"
#include "nilspherical/jet.hpp"

#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace nilspherical {

// Normalized orbit slice: D2(Lambda-hat) with block values mu_hat (decreasing,
// multiplicities mult, sum m_j mu_j^2 = 1) and the unit vector xp_star in the
// last n - 2 p0 coordinates.
struct SpectrumSlice {
  int n = 0;
  BlockStructure blocks;
  std::vector<double> mu_hat;
  Vec xp_star;

  // Validates and normalizes; a rescaling of mu_hat is reported in `warnings`.
  static SpectrumSlice make(int n, std::vector<double> mu_hat, std::vector<int> mult, Vec xp_star = {},
                            std::vector<std::string>* warnings = nullptr);
  static SpectrumSlice standard(int n);

  int a() const { return blocks.a(); }
  int p0() const { return blocks.a(); }
  int p1() const { return blocks.p1(); }
  int rest_dim() const { return n - 2 * a(); }
  bool r_constrained() const { return rest_dim() == 0; }
  // mu_hat of the block containing the k-th complex coordinate.
  double mu_of_pair(int k) const;
  std::vector<double> pair_deltas() const;
  Mat d2() const;
};

struct Type1 {
  double r = 0.0;
  MultiIndex alpha;
  double lambda = 1.0;
};
struct Type2 {
  double r = 0.0;
};
using SphericalPoint = std::variant<Type1, Type2>;

void validate_point(const SphericalPoint& point, const SpectrumSlice& slice);

// Coordinates of the image of g in H_a: z_j = sqrt(mu) (x_{2j-1} + i x_{2j}),
// t = <A, D2(Lambda-hat)>.
HeisenbergPoint psi2_coords(const GroupElement& g, const SpectrumSlice& slice);

// <X_p*, X_rest>
double rest_projection(const GroupElement& g, const SpectrumSlice& slice);

struct ClosedForm {
  int polar_nodes = 24;    // Gauss-Legendre nodes in cos(theta) on the sphere
  int azimuth_nodes = 48;  // trapezoid nodes in the azimuth
};
struct MonteCarlo {
  std::int64_t samples = 100000;
  std::uint64_t seed = 0;
};
using Averaging = std::variant<ClosedForm, MonteCarlo>;

struct SphericalValue {
  cplx value = 0.0;
  double std_error = 0.0;
};

// The integrand of the O(n) average: e^{i r <X_p*, (kX)_rest>} times the
// Heisenberg spherical function at psi2(k . g); here k is already applied.
cplx type1_integrand(const Type1& p, const GroupElement& kg, const SpectrumSlice& slice);

SphericalValue eval_spherical(const SphericalPoint& point, const GroupElement& g, const SpectrumSlice& slice,
                              const Averaging& avg = ClosedForm{});

// All alpha with |alpha| <= truncation at once (ranks of MultiIndexSet).
std::vector<cplx> type1_table(double r, double lambda, int truncation, const GroupElement& g,
                              const SpectrumSlice& slice, const ClosedForm& cf = {});

double kappa(const Type1& point, const SpectrumSlice& slice);
double kappa(const SphericalPoint& point, const SpectrumSlice& slice);

struct LaplacianBounds {
  double m1 = 0.0;
  double m2 = 0.0;
};
// Extremes of (2|alpha| + a) / kappa over alpha at lambda = 1.
LaplacianBounds laplacian_bounds(const SpectrumSlice& slice, double r);

// One unitary per block for k1 in O(2 p0) commuting with D2(Lambda-hat).
std::vector<Eigen::MatrixXcd> psi1_complexify(const Mat& k1, const SpectrumSlice& slice);
Eigen::MatrixXcd block_diagonal(const std::vector<Eigen::MatrixXcd>& blocks);

// Values of a spectrum function at one (r, lambda), as lambda-jets for every
// alpha in MultiIndexSet(p1, truncation) order.
using SpectrumEvaluator =
    std::function<std::vector<Jet>(double r, double lambda, int truncation, int jet_order)>;

struct SpectrumGrid {
  SpectrumSlice slice;
  std::vector<double> r_nodes;
  std::vector<double> lambda_nodes;
  MultiIndexSet index;
  int jet_order = 0;
  std::vector<Jet> values;

  std::size_t offset(std::size_t ir, std::size_t il) const {
    return (ir * lambda_nodes.size() + il) * index.size();
  }
  const Jet& at(std::size_t ir, std::size_t il, std::size_t rank) const { return values[offset(ir, il) + rank]; }
  Jet& at(std::size_t ir, std::size_t il, std::size_t rank) { return values[offset(ir, il) + rank]; }
  int truncation() const { return index.truncation(); }
};

SpectrumGrid tabulate_grid(const SpectrumSlice& slice, std::vector<double> r_nodes,
                           std::vector<double> lambda_nodes, int truncation, int jet_order,
                           const SpectrumEvaluator& g);

// Jets of order <= 2 from central differences of plain values with step h.
using SpectrumValues = std::function<std::vector<cplx>(double r, double lambda, int truncation)>;
SpectrumGrid tabulate_grid_fd(const SpectrumSlice& slice, std::vector<double> r_nodes,
                              std::vector<double> lambda_nodes, int truncation, double h, const SpectrumValues& g);

// M+ G = (d/dlambda - D+/lambda) G for lambda > 0 and (d/dlambda - D-/lambda) G
// for lambda < 0; M- swaps D+ and D-. Loses one jet order and one degree.
SpectrumGrid m_ops(const SpectrumGrid& g, DiffMode mode);

struct CertificateEntry {
  int l = 0;      // applications of M+
  int m = 0;      // applications of M-
  int deriv = 0;  // lambda-derivative order
  int n = 0;      // power of kappa
  double c = 0.0;
  double inner = 0.0;  // sup over kappa <= kappa_max / 2
  double outer = 0.0;  // sup over kappa > kappa_max / 2
  bool pass = false;
};

struct CertificateReport {
  std::vector<CertificateEntry> entries;
  bool pass() const;
  const CertificateEntry* first_failure() const;
  // Largest outer / inner ratio over all entries.
  double worst_ratio() const;
};

CertificateReport decrease_certificate(const SpectrumGrid& g, int m_max, int n_max, int l_max,
                                       double growth = 1.05);

}  // namespace nilspherical
