#pragma once

#include "nilspherical/spectrum.hpp"

#include <map>
#include <string>
#include <vector>

namespace nilspherical {

// Multipliers are evaluated at psi2(x^{-1}) = (-z, -t).
enum class Multiplier { GammaHalfPlusIT, GammaHalfMinusIT, T, Gamma };

std::string to_string(Multiplier m);
Multiplier multiplier_from_string(const std::string& s);

// f(x) = P(|X|^2, |A|^2) exp(-beta_v |X|^2 - beta_z |A|^2), optionally times
// multipliers. poly[i][k] is the coefficient of |X|^{2i} |A|^{2k}.
struct InvariantTestFunction {
  std::string family = "gaussian";
  std::vector<std::vector<double>> poly{{1.0}};
  double beta_v = 1.0;
  double beta_z = 1.0;
  std::vector<Multiplier> multipliers;

  static InvariantTestFunction gaussian(double beta_v = 1.0, double beta_z = 1.0);
  static InvariantTestFunction poly_gaussian(std::vector<std::vector<double>> poly, double beta_v = 1.0,
                                             double beta_z = 1.0);
  InvariantTestFunction times(Multiplier m) const;
  InvariantTestFunction scaled(double s) const;

  bool is_zero() const;
  double base_value(const GroupElement& g) const;
  cplx value(const GroupElement& g, const SpectrumSlice& slice) const;
  // Exact integrals of |f|^2 and |f| for the invariant base function.
  double l2_norm2(int n) const;
  double l1_norm(int n, int radial_order = 200) const;
  // L = -sum X_i^2 applied in closed form; available on F(2).
  InvariantTestFunction sub_laplacian(int n) const;
};

struct QuadratureSpec {
  int laguerre_extra = 8;
  double doubling_tolerance = 1e-8;
  int truncation = 300;
  double lambda_min = 1e-3;
  double lambda_max = 14.0;
  int lambda_panel_order = 20;
  double alpha_tail_tolerance = 1e-10;
  int gap_fit_nodes = 12;
  double r_max = 10.0;
  int r_nodes = 32;
  ClosedForm sphere{};
};

// Transform values f-hat(r, alpha, lambda0 + d) as jets in d for every alpha
// with |alpha| <= truncation, plus the change under doubling of every
// quadrature order (relative to the table maximum).
struct TransformTable {
  std::vector<Jet> values;
  double doubling_change = 0.0;
  bool converged = true;
};

TransformTable transform_table(const InvariantTestFunction& f, const SpectrumSlice& slice, double r,
                               double lambda, int truncation, int jet_order, const QuadratureSpec& quad);

cplx forward_transform(const InvariantTestFunction& f, const SphericalPoint& point, const SpectrumSlice& slice,
                       const QuadratureSpec& quad = {});

SpectrumEvaluator transform_evaluator(const InvariantTestFunction& f, const SpectrumSlice& slice,
                                      const QuadratureSpec& quad);

// Closed forms on F(2) used as independent references: the Gaussian with
// general widths.
cplx gaussian_transform_f2(double beta_v, double beta_z, int alpha, double lambda);

struct InversionResult {
  cplx value = 0.0;
  cplx gap = 0.0;      // extrapolated contribution of 0 < |lambda| < lambda_c
  double gap_error = 0.0;
  double lambda_c = 0.0;
  double alpha_tail = 0.0;   // worst |D_T - D_{3T/4}| above lambda_c
  double lambda_tail = 0.0;  // |integrand| at lambda_max
};

// Plancherel exponent: |lambda|^{a + dim Z - 1} dlambda.
double plancherel_exponent(const SpectrumSlice& slice);

// c / (2 pi)^{a+2} int dr int dlambda sum_alpha d_alpha h(r, alpha, lambda) |lambda|^p for several
// integrands h at once; h is supplied per (r, lambda) as one table over alpha
// per output. The range 0 < |lambda| < lambda_c, where the alpha sum is not
// yet converged at the truncation, is filled by polynomial extrapolation.
using AlphaIntegrand = std::function<std::vector<std::vector<cplx>>(double r, double lambda, int truncation)>;
std::vector<InversionResult> spectral_integral(const AlphaIntegrand& integrand, std::size_t outputs,
                                               const SpectrumSlice& slice, const QuadratureSpec& quad, double c);

InversionResult inverse_transform(const SpectrumValues& g, const GroupElement& x, const SpectrumSlice& slice,
                                  const QuadratureSpec& quad, double c);
std::vector<InversionResult> inverse_transform_many(const SpectrumValues& g, const std::vector<GroupElement>& xs,
                                                    const SpectrumSlice& slice, const QuadratureSpec& quad,
                                                    double c);

SpectrumValues values_of(const SpectrumEvaluator& g);

double calibrate_c(const InvariantTestFunction& f_ref, const SpectrumSlice& slice, const QuadratureSpec& quad);

double plancherel_defect(const InvariantTestFunction& f, const SpectrumSlice& slice, const QuadratureSpec& quad,
                         double c);

struct GridSpec {
  std::vector<double> r_nodes{0.0};
  std::vector<double> lambda_nodes;
  int truncation = 30;
  static GridSpec default_for(const SpectrumSlice& slice);
};

struct IntertwiningDefects {
  double plus = 0.0;
  double minus = 0.0;
  double symmetry = 0.0;
  double plus_doubled = 0.0;   // same with doubled truncation
  double minus_doubled = 0.0;
};

IntertwiningDefects intertwining_defect(const InvariantTestFunction& f, const SpectrumSlice& slice,
                                        const QuadratureSpec& quad, const GridSpec& grid);

// G_Delta = -(|lambda|/2)(D+ - D-) G - |lambda|(2|alpha| + a) G, tabulated as jets.
SpectrumGrid g_delta_grid(const SpectrumGrid& g);
double g_delta_check(const InvariantTestFunction& f, const SpectrumSlice& slice, const QuadratureSpec& quad,
                     const GridSpec& grid);

struct RegionReport {
  std::string name;
  std::vector<double> shell;      // contribution of |alpha| = m
  std::vector<double> partial;    // running sums
  std::vector<double> comparison; // d_m (2m + a)^{-(a+1)}
  double total = 0.0;
  double cauchy_gap = 0.0;        // partial(T) - partial(T/2)
  bool finite = true;
  bool convergent = false;
};

struct IntegrabilityReport {
  std::vector<RegionReport> regions;  // A1..A4
  bool hypothesis_ok = true;          // N >= a + 3
  double c0 = 0.0;                    // sup |G| kappa^N on the sample grid
  std::vector<std::string> warnings;
};

using PointwiseSpectrum = std::function<cplx(double r, const MultiIndex& alpha, double lambda)>;

IntegrabilityReport integrability_report(const PointwiseSpectrum& g, const SpectrumSlice& slice, int n_exp,
                                         double k_split, int truncation, double cauchy_tolerance = 1e-10,
                                         double c = 1.0);

}  // namespace nilspherical
