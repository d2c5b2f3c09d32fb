#pragma once

#include "nilspherical/heisenberg.hpp"
#include "nilspherical/multi_index.hpp"
#include "nilspherical/numeric.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include <functional>
#include <vector>

namespace nilspherical {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::rational<BigInt>;

BigInt binomial(long top, long bottom);

// d_alpha = prod_j binom(alpha_j + m_j - 1, alpha_j)
BigInt dim_P(const MultiIndex& alpha, const BlockStructure& blocks);
double dim_P_value(const MultiIndex& alpha, const BlockStructure& blocks);

// [alpha; beta] for neighbouring degrees: alpha_j when beta = alpha - e_j and
// zero otherwise, in particular whenever |beta| = |alpha| + 1.
Rational gen_binomial(const MultiIndex& alpha, const MultiIndex& beta, const BlockStructure& blocks);

// Function of the multi-index on |alpha| <= truncation.
template <class T>
struct IndexFunction {
  MultiIndexSet index;
  std::vector<T> values;

  IndexFunction() = default;
  explicit IndexFunction(MultiIndexSet set) : index(std::move(set)), values(index.size(), T(0)) {}
  T at(const MultiIndex& alpha) const {
    const long r = index.rank(alpha);
    return r < 0 ? T(0) : values[r];
  }
};

using LambdaFunction = IndexFunction<cplx>;
using ExactLambdaFunction = IndexFunction<Rational>;

LambdaFunction tabulate(const BlockStructure& blocks, int truncation, const std::function<cplx(const MultiIndex&)>& g);

enum class DiffMode { Plus, Minus };

// D+ g(alpha) = sum_j (alpha_j + m_j) (g(alpha + e_j) - g(alpha)), defined for |alpha| < T.
// D- g(alpha) = sum_j alpha_j (g(alpha) - g(alpha - e_j)).
// The result of D+ has truncation T - 1.
LambdaFunction difference_op(const LambdaFunction& g, DiffMode mode, const BlockStructure& blocks);
ExactLambdaFunction difference_op(const ExactLambdaFunction& g, DiffMode mode, const BlockStructure& blocks);

struct SummationByPartsDefect {
  Rational plus;   // sum d F (D+ G) + sum d ((D- + a) F) G
  Rational minus;  // sum d F (D- G) + sum d ((D+ + a) F) G
};

// Exact check on finitely supported F, G; F must vanish on the two top
// degrees of the tables.
SummationByPartsDefect summation_by_parts_check(const ExactLambdaFunction& f, const ExactLambdaFunction& g,
                                                const BlockStructure& blocks);

struct RapidDecreaseReport {
  std::vector<double> c_n;        // per N: max of |g| (2|alpha| + a)^N
  std::vector<double> inner_sup;  // same over shells 1..T/2
  std::vector<double> outer_sup;  // same over shells T/2..T
  std::vector<bool> pass;         // outer < growth * inner
};

// Index 0 of the vectors corresponds to N = 1.
RapidDecreaseReport rapid_decrease_lambda(const LambdaFunction& g, const BlockStructure& blocks, int n_max,
                                          double growth = 1.05);

// Radial profile f(|z_1|^2, ..., |z_p1|^2) on H_a. `decay` is a rate beta such
// that f(rho) exp(beta |rho|) is polynomially bounded.
struct RadialProfile {
  std::function<double(const std::vector<double>&)> value;
  double decay = 1.0;
};

struct VCoefficientOptions {
  int initial_order = 32;
  int max_order = 512;
  double tolerance = 1e-10;
};

// v(alpha) = d_alpha / (2 pi)^a * integral of f(z) omega_{alpha,1}(z, 0) over C^a,
// so that f = sum_alpha v(alpha) phi_alpha and v(phi_beta) is the indicator of beta.
LambdaFunction v_coefficients(const RadialProfile& f, const BlockStructure& blocks, int alpha_max,
                              const VCoefficientOptions& opts = {});

struct DerivativeIdentityDefects {
  double gamma_circ = 0;      // gamma phi-circ  vs  -(D+ - D-) phi-circ
  double gamma_lambda = 0;    // |lambda| gamma phi  vs  -(D+ - D-) phi
  double dlambda_minus = 0;   // d/dlambda phi  vs  D- form
  double dlambda_plus = 0;    // d/dlambda phi  vs  D+ form
  double multiplier_plus = 0;   // (gamma/2 + i t) phi  vs  (d/dlambda - D+/lambda) phi
  double multiplier_minus = 0;  // (gamma/2 - i t) phi  vs  -(d/dlambda - D-/lambda) phi
  double max() const;
};

// Pointwise check of the lambda-derivative identities for
// phi = omega_{alpha,lambda} at (z, t), with central differences of step h.
DerivativeIdentityDefects derivative_identity_check(const MultiIndex& alpha, double lambda,
                                                    const BlockStructure& blocks, const CVec& z, double t,
                                                    double h);

}  // namespace nilspherical
