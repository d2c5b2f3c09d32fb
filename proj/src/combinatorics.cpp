#include "nilspherical/combinatorics.hpp"

#include "nilspherical/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nilspherical {

MultiIndexSet::MultiIndexSet(int p1, int truncation) : p1_(p1), truncation_(truncation) {
  if (p1 < 0) throw DomainError("MultiIndexSet: negative block count");
  if (truncation < 0) throw TruncationError("MultiIndexSet: negative truncation");
  shell_start_.push_back(0);
  MultiIndex cur(p1, 0);
  for (int d = 0; d <= truncation; ++d) {
    if (p1 == 0) {
      if (d == 0) items_.push_back({});
      shell_start_.push_back(items_.size());
      continue;
    }
    // Lexicographic enumeration of compositions of d into p1 parts.
    std::fill(cur.begin(), cur.end(), 0);
    cur[0] = d;
    while (true) {
      items_.push_back(cur);
      int i = p1 - 2;
      while (i >= 0 && cur[i] == 0) --i;
      if (i < 0) break;
      --cur[i];
      const int rest = cur[p1 - 1] + 1;
      cur[p1 - 1] = 0;
      cur[i + 1] = rest;
      if (i + 1 != p1 - 1) cur[p1 - 1] = 0;
    }
    shell_start_.push_back(items_.size());
  }
  for (std::size_t r = 0; r < items_.size(); ++r) lookup_[key(items_[r])] = static_cast<long>(r);
  up_.assign(items_.size() * p1_, -1);
  down_.assign(items_.size() * p1_, -1);
  for (std::size_t r = 0; r < items_.size(); ++r)
    for (int j = 0; j < p1_; ++j) {
      MultiIndex b = items_[r];
      ++b[j];
      up_[r * p1_ + j] = rank(b);
      b[j] -= 2;
      if (b[j] >= 0) down_[r * p1_ + j] = rank(b);
    }
}

std::uint64_t MultiIndexSet::key(const MultiIndex& alpha) {
  std::uint64_t k = 1469598103934665603ULL;
  for (int v : alpha) {
    k ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL;
    k *= 1099511628211ULL;
  }
  return k;
}

long MultiIndexSet::rank(const MultiIndex& alpha) const {
  if (static_cast<int>(alpha.size()) != p1_) return -1;
  int d = 0;
  for (int v : alpha) {
    if (v < 0) return -1;
    d += v;
  }
  if (d > truncation_) return -1;
  auto it = lookup_.find(key(alpha));
  if (it == lookup_.end() || items_[it->second] != alpha) return -1;
  return it->second;
}

BigInt binomial(long top, long bottom) {
  if (bottom < 0 || top < 0 || bottom > top) return 0;
  bottom = std::min(bottom, top - bottom);
  BigInt r = 1;
  for (long i = 1; i <= bottom; ++i) r = r * (top - bottom + i) / i;
  return r;
}

BigInt dim_P(const MultiIndex& alpha, const BlockStructure& blocks) {
  blocks.check(alpha);
  BigInt d = 1;
  for (int j = 0; j < blocks.p1(); ++j) d *= binomial(alpha[j] + blocks.mult[j] - 1, alpha[j]);
  return d;
}

double dim_P_value(const MultiIndex& alpha, const BlockStructure& blocks) {
  blocks.check(alpha);
  double d = 1.0;
  for (int j = 0; j < blocks.p1(); ++j) {
    const int m = blocks.mult[j];
    double b = 1.0;
    for (int i = 1; i < m; ++i) b = b * (alpha[j] + i) / i;
    d *= b;
  }
  return d;
}

Rational gen_binomial(const MultiIndex& alpha, const MultiIndex& beta, const BlockStructure& blocks) {
  blocks.check(alpha);
  blocks.check(beta);
  const int gap = degree(alpha) - degree(beta);
  if (std::abs(gap) != 1) throw DomainError("gen_binomial: degrees must differ by one");
  if (gap == -1) return Rational(0);
  int j_diff = -1;
  for (int j = 0; j < blocks.p1(); ++j) {
    const int d = alpha[j] - beta[j];
    if (d == 0) continue;
    if (d != 1 || j_diff >= 0) return Rational(0);
    j_diff = j;
  }
  return Rational(BigInt(alpha[j_diff]));
}

LambdaFunction tabulate(const BlockStructure& blocks, int truncation,
                        const std::function<cplx(const MultiIndex&)>& g) {
  LambdaFunction out(MultiIndexSet(blocks.p1(), truncation));
  for (std::size_t r = 0; r < out.index.size(); ++r) out.values[r] = g(out.index[r]);
  return out;
}

namespace {

template <class T>
IndexFunction<T> difference_impl(const IndexFunction<T>& g, DiffMode mode, const BlockStructure& blocks) {
  const int p1 = blocks.p1();
  if (g.index.p1() != p1) throw DomainError("difference_op: table does not match block structure");
  const int t_in = g.index.truncation();
  const int t_out = mode == DiffMode::Plus ? t_in - 1 : t_in;
  if (t_out < 0)
    throw TruncationError("difference_op: plus mode needs truncation >= 1, got " + std::to_string(t_in));
  IndexFunction<T> out(t_out == t_in ? g.index : MultiIndexSet(p1, t_out));
  for (std::size_t r = 0; r < out.index.size(); ++r) {
    const MultiIndex& alpha = out.index[r];
    const long src = static_cast<long>(r);  // graded order: prefixes coincide
    T acc(0);
    for (int j = 0; j < p1; ++j) {
      if (mode == DiffMode::Plus) {
        const long up = g.index.up(src, j);
        acc += T(alpha[j] + blocks.mult[j]) * (g.values[up] - g.values[src]);
      } else if (alpha[j] > 0) {
        const long down = g.index.down(src, j);
        acc += T(alpha[j]) * (g.values[src] - g.values[down]);
      }
    }
    out.values[r] = acc;
  }
  return out;
}

}  // namespace

LambdaFunction difference_op(const LambdaFunction& g, DiffMode mode, const BlockStructure& blocks) {
  return difference_impl(g, mode, blocks);
}

ExactLambdaFunction difference_op(const ExactLambdaFunction& g, DiffMode mode, const BlockStructure& blocks) {
  return difference_impl(g, mode, blocks);
}

SummationByPartsDefect summation_by_parts_check(const ExactLambdaFunction& f, const ExactLambdaFunction& g,
                                                const BlockStructure& blocks) {
  const int t = f.index.truncation();
  if (g.index.truncation() != t) throw DomainError("summation_by_parts_check: truncations differ");
  // F must vanish on degrees t - 1 and t so that (D- F) G has no degree-t term.
  if (t < 2) throw TruncationError("summation_by_parts_check: truncation must be at least 2");
  for (std::size_t r = f.index.shell_begin(t - 1); r < f.index.size(); ++r)
    if (f.values[r] != Rational(0))
      throw DomainError("summation_by_parts_check: support of F touches the truncation boundary");
  const Rational a(blocks.a());
  const auto dpf = difference_op(f, DiffMode::Plus, blocks);
  const auto dmf = difference_op(f, DiffMode::Minus, blocks);
  const auto dpg = difference_op(g, DiffMode::Plus, blocks);
  const auto dmg = difference_op(g, DiffMode::Minus, blocks);
  SummationByPartsDefect out{Rational(0), Rational(0)};
  // Rows of degree t are skipped: F vanishes there and D+ is not defined.
  for (std::size_t r = 0; r < f.index.shell_begin(t); ++r) {
    const Rational d(dim_P(f.index[r], blocks));
    out.plus += d * (f.values[r] * dpg.values[r] + (dmf.values[r] + a * f.values[r]) * g.values[r]);
    out.minus += d * (f.values[r] * dmg.values[r] + (dpf.values[r] + a * f.values[r]) * g.values[r]);
  }
  return out;
}

RapidDecreaseReport rapid_decrease_lambda(const LambdaFunction& g, const BlockStructure& blocks, int n_max,
                                          double growth) {
  const int t = g.index.truncation();
  const int half = t / 2;
  const double a = blocks.a();
  RapidDecreaseReport rep;
  for (int n = 1; n <= n_max; ++n) {
    double all = 0, inner = 0, outer = 0;
    for (int d = 0; d <= t; ++d) {
      const double w = std::pow(2.0 * d + a, n);
      double shell = 0;
      for (std::size_t r = g.index.shell_begin(d); r < g.index.shell_end(d); ++r)
        shell = std::max(shell, std::abs(g.values[r]) * w);
      all = std::max(all, shell);
      if (d >= 1 && d <= half) inner = std::max(inner, shell);
      if (d >= half) outer = std::max(outer, shell);
    }
    rep.c_n.push_back(all);
    rep.inner_sup.push_back(inner);
    rep.outer_sup.push_back(outer);
    rep.pass.push_back(outer < growth * inner || (outer == 0.0 && inner == 0.0));
  }
  return rep;
}

namespace {

LambdaFunction v_coefficients_at_order(const RadialProfile& f, const BlockStructure& blocks, int alpha_max,
                                       int order) {
  const int p1 = blocks.p1();
  const double c = f.decay + 0.25;
  std::vector<const quad::Rule*> rules;
  for (int j = 0; j < p1; ++j) rules.push_back(&quad::gauss_laguerre(order, blocks.mult[j] - 1.0));

  // psi tables per block and node, and log of the rescaled weights.
  std::vector<std::vector<std::vector<double>>> psi(p1);
  std::vector<std::vector<double>> logw(p1), rho(p1);
  for (int j = 0; j < p1; ++j) {
    const auto& rule = *rules[j];
    psi[j].resize(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double y = rule.nodes[i];
      rho[j].push_back(y / c);
      logw[j].push_back(rule.weights[i] > 0 ? std::log(rule.weights[i]) + y : -INFINITY);
      psi[j][i].resize(alpha_max + 1);
      laguerre_function_table(alpha_max, blocks.mult[j] - 1.0, 0.5 * y / c, psi[j][i].data());
    }
  }

  LambdaFunction out(MultiIndexSet(p1, alpha_max));
  std::vector<CompensatedSum<double>> acc(out.index.size());
  std::vector<int> node(p1, 0);
  std::vector<double> pt(p1);
  const std::size_t total = [&] {
    std::size_t s = 1;
    for (int j = 0; j < p1; ++j) s *= rules[j]->size();
    return s;
  }();
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    double lw = 0;
    for (int j = 0; j < p1; ++j) {
      node[j] = static_cast<int>(rem % rules[j]->size());
      rem /= rules[j]->size();
      lw += logw[j][node[j]];
      pt[j] = rho[j][node[j]];
    }
    if (!std::isfinite(lw)) continue;
    const double fv = f.value(pt);
    if (fv == 0.0) continue;
    const double w = std::exp(lw) * fv;
    if (w == 0.0 || !std::isfinite(w)) continue;
    for (std::size_t r = 0; r < out.index.size(); ++r) {
      double term = w;
      for (int j = 0; j < p1; ++j) term *= psi[j][node[j]][out.index[r][j]];
      acc[r].add(term);
    }
  }
  double scale = 1.0 / std::pow(2.0 * M_PI, blocks.a());
  for (int j = 0; j < p1; ++j) scale *= std::pow(M_PI / c, blocks.mult[j]) / std::tgamma(blocks.mult[j]);
  for (std::size_t r = 0; r < out.index.size(); ++r)
    out.values[r] = scale * dim_P_value(out.index[r], blocks) * acc[r].value();
  return out;
}

}  // namespace

LambdaFunction v_coefficients(const RadialProfile& f, const BlockStructure& blocks, int alpha_max,
                              const VCoefficientOptions& opts) {
  int order = std::max(opts.initial_order, alpha_max / 2 + 8);
  LambdaFunction prev = v_coefficients_at_order(f, blocks, alpha_max, order);
  while (true) {
    const int next_order = 2 * order;
    if (next_order > opts.max_order)
      throw ConvergenceError("v_coefficients: no agreement up to order " + std::to_string(order));
    LambdaFunction next = v_coefficients_at_order(f, blocks, alpha_max, next_order);
    double diff = 0, mag = 0;
    for (std::size_t r = 0; r < next.values.size(); ++r) {
      diff = std::max(diff, std::abs(next.values[r] - prev.values[r]));
      mag = std::max(mag, std::abs(next.values[r]));
    }
    if (diff <= opts.tolerance * std::max(mag, 1e-300) || mag == 0.0) return next;
    prev = std::move(next);
    order = next_order;
  }
}

double DerivativeIdentityDefects::max() const {
  return std::max({gamma_circ, gamma_lambda, dlambda_minus, dlambda_plus, multiplier_plus, multiplier_minus});
}

DerivativeIdentityDefects derivative_identity_check(const MultiIndex& alpha, double lambda,
                                                    const BlockStructure& blocks, const CVec& z, double t,
                                                    double h) {
  blocks.check(alpha);
  if (lambda == 0.0) throw DomainError("derivative_identity_check: lambda must be nonzero");
  if (std::abs(lambda) < 10 * h) throw DomainError("derivative_identity_check: step too large for lambda");
  const int p1 = blocks.p1();
  const HeisenbergPoint p{z, t};
  const HeisenbergPoint p0{z, 0.0};
  const double gamma = 0.5 * z.squaredNorm();
  const double sgn = lambda > 0 ? 1.0 : -1.0;
  const cplx it(0.0, t);

  auto phi = [&](const MultiIndex& b, double lam, const HeisenbergPoint& q) { return omega_type1(b, lam, blocks, q); };
  auto d_plus = [&](double lam, const HeisenbergPoint& q) {
    cplx acc = 0;
    const cplx base = phi(alpha, lam, q);
    for (int j = 0; j < p1; ++j) {
      MultiIndex b = alpha;
      ++b[j];
      acc += double(alpha[j] + blocks.mult[j]) * (phi(b, lam, q) - base);
    }
    return acc;
  };
  auto d_minus = [&](double lam, const HeisenbergPoint& q) {
    cplx acc = 0;
    const cplx base = phi(alpha, lam, q);
    for (int j = 0; j < p1; ++j) {
      if (alpha[j] == 0) continue;
      MultiIndex b = alpha;
      --b[j];
      acc += double(alpha[j]) * (base - phi(b, lam, q));
    }
    return acc;
  };

  DerivativeIdentityDefects out;
  const cplx circ = phi(alpha, 1.0, p0);
  out.gamma_circ = std::abs(gamma * circ + (d_plus(1.0, p0) - d_minus(1.0, p0)));
  const cplx f = phi(alpha, lambda, p);
  const cplx dp = d_plus(lambda, p), dm = d_minus(lambda, p);
  out.gamma_lambda = std::abs(std::abs(lambda) * gamma * f + (dp - dm));
  const cplx dl = (phi(alpha, lambda + h, p) - phi(alpha, lambda - h, p)) / (2.0 * h);
  out.dlambda_minus = std::abs(dl - (dm / lambda - sgn * 0.5 * gamma * f + it * f));
  out.dlambda_plus = std::abs(dl - (dp / lambda + sgn * 0.5 * gamma * f + it * f));
  const cplx d_for_plus = lambda > 0 ? dp : dm;
  const cplx d_for_minus = lambda > 0 ? dm : dp;
  out.multiplier_plus = std::abs((0.5 * gamma + it) * f - (dl - d_for_plus / lambda));
  out.multiplier_minus = std::abs((0.5 * gamma - it) * f + (dl - d_for_minus / lambda));
  return out;
}

}  // namespace nilspherical
