#include "nilspherical/parallel.hpp"
#include "nilspherical/quadrature.hpp"
#include "nilspherical/transform.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>

namespace nilspherical {

double plancherel_exponent(const SpectrumSlice& slice) {
  const int n = slice.n;
  if (n != 2 && n != 3)
    throw DomainError("spectral integration is implemented on the F(2) and F(3) slices only");
  return slice.a() + skew_dim(n) - 1.0;
}

namespace {

struct Sampled {
  std::vector<cplx> full;     // per output, alpha sum up to T
  std::vector<cplx> partial;  // per output, alpha sum up to 3T/4
};

Sampled sample(const AlphaIntegrand& h, std::size_t outputs, const SpectrumSlice& slice, const MultiIndexSet& index,
               const std::vector<double>& dims, double p, double r, double lambda) {
  const int T = index.truncation();
  const int t_partial = (3 * T) / 4;
  const auto tables = h(r, lambda, T);
  if (tables.size() != outputs) throw DomainError("spectral_integral: integrand returned a wrong number of outputs");
  const double w = std::pow(std::abs(lambda), p);
  Sampled s{std::vector<cplx>(outputs), std::vector<cplx>(outputs)};
  for (std::size_t o = 0; o < outputs; ++o) {
    CompensatedSum<cplx> full, part;
    const auto& tab = tables[o];
    for (std::size_t rk = 0; rk < index.size(); ++rk) {
      const cplx v = dims[rk] * tab[rk];
      full.add(v);
      if (rk < index.shell_end(t_partial)) part.add(v);
    }
    s.full[o] = w * full.value();
    s.partial[o] = w * part.value();
  }
  (void)slice;
  return s;
}

}  // namespace

std::vector<InversionResult> spectral_integral(const AlphaIntegrand& h, std::size_t outputs,
                                               const SpectrumSlice& slice, const QuadratureSpec& quad, double c) {
  const double p = plancherel_exponent(slice);
  const int T = quad.truncation;
  if (T < 8) throw TruncationError("spectral_integral: truncation must be at least 8");
  if (!(quad.lambda_min > 0) || !(quad.lambda_max > quad.lambda_min))
    throw ValidationError("spectral_integral: need 0 < lambda_min < lambda_max");
  const MultiIndexSet index(slice.p1(), T);
  std::vector<double> dims(index.size());
  for (std::size_t rk = 0; rk < index.size(); ++rk) dims[rk] = dim_P_value(index[rk], slice.blocks);

  quad::Rule r_rule;
  if (slice.r_constrained()) {
    r_rule.nodes = {0.0};
    r_rule.weights = {1.0};
  } else {
    r_rule = quad::mapped(quad::gauss_legendre(quad.r_nodes), 0.0, quad.r_max);
  }

  std::vector<InversionResult> res(outputs);
  std::vector<CompensatedSum<cplx>> total(outputs), gap_total(outputs);
  const double pref = c / std::pow(2.0 * M_PI, slice.a() + 2);

  for (std::size_t ir = 0; ir < r_rule.size(); ++ir) {
    const double r = r_rule.nodes[ir], wr = r_rule.weights[ir];
    for (double sgn : {1.0, -1.0}) {
      auto at = [&](double lam) { return sample(h, outputs, slice, index, dims, p, r, sgn * lam); };
      // Samples are independent; evaluate in parallel, reduce in node order.
      auto at_many = [&](const std::vector<double>& lams) {
        std::vector<Sampled> out(lams.size());
        parallel_for_chunks(static_cast<int>(lams.size()), [&](int i) { out[i] = at(lams[i]); });
        return out;
      };

      // Locate lambda_c: above it the alpha sum has converged at the truncation.
      constexpr int scan = 48;
      std::vector<double> lam(scan);
      for (int k = 0; k < scan; ++k)
        lam[k] = quad.lambda_min * std::pow(quad.lambda_max / quad.lambda_min, double(k) / (scan - 1));
      const std::vector<Sampled> vals = at_many(lam);
      double scale = 0;
      for (int k = 0; k < scan; ++k)
        for (std::size_t o = 0; o < outputs; ++o) scale = std::max(scale, std::abs(vals[k].full[o]));
      if (scale == 0.0) continue;
      int first = scan;
      for (int k = scan - 1; k >= 0; --k) {
        bool ok = true;
        for (std::size_t o = 0; o < outputs; ++o)
          ok = ok && std::abs(vals[k].full[o] - vals[k].partial[o]) <= quad.alpha_tail_tolerance * scale;
        if (!ok) break;
        first = k;
      }
      if (first >= scan - 2)
        throw TruncationError("spectral_integral: alpha sum not converged on the lambda range; raise truncation");
      const double lambda_c = lam[first];

      // Composite Gauss-Legendre on [lambda_c, lambda_max].
      std::vector<double> edges{lambda_c};
      while (edges.back() < quad.lambda_max) {
        const double b = edges.back();
        edges.push_back(std::min(quad.lambda_max, b < 1.0 ? 2.0 * b : b + 1.0));
      }
      const auto& gl = quad::gauss_legendre(quad.lambda_panel_order);
      quad::Rule panels;
      for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
        const auto rule = quad::mapped(gl, edges[e], edges[e + 1]);
        panels.nodes.insert(panels.nodes.end(), rule.nodes.begin(), rule.nodes.end());
        panels.weights.insert(panels.weights.end(), rule.weights.begin(), rule.weights.end());
      }
      const std::vector<Sampled> panel_vals = at_many(panels.nodes);
      for (std::size_t q = 0; q < panels.size(); ++q) {
        const Sampled& s = panel_vals[q];
        for (std::size_t o = 0; o < outputs; ++o) {
          total[o].add(wr * panels.weights[q] * s.full[o]);
          res[o].alpha_tail = std::max(res[o].alpha_tail, std::abs(s.full[o] - s.partial[o]) / scale);
        }
      }
      const Sampled tail = at(quad.lambda_max);
      for (std::size_t o = 0; o < outputs; ++o)
        res[o].lambda_tail = std::max(res[o].lambda_tail, std::abs(tail.full[o]) / scale);

      // Gap (0, lambda_c): Chebyshev interpolation on [lambda_c, 3 lambda_c],
      // integrated over [0, lambda_c]; two node counts give the error estimate.
      auto gap_integral = [&](int m) {
        std::vector<std::vector<cplx>> coef(outputs, std::vector<cplx>(m, 0.0));
        std::vector<double> fit_nodes(m);
        for (int k = 0; k < m; ++k) fit_nodes[k] = lambda_c * (2.0 + std::cos(M_PI * (k + 0.5) / m));
        const std::vector<Sampled> fit_vals = at_many(fit_nodes);
        for (int k = 0; k < m; ++k) {
          const double xi = std::cos(M_PI * (k + 0.5) / m);
          const Sampled& s = fit_vals[k];
          double t_prev = 1.0, t_cur = xi;
          for (int j = 0; j < m; ++j) {
            const double tv = j == 0 ? 1.0 : t_cur;
            if (j >= 1) {
              const double t_next = 2 * xi * t_cur - t_prev;
              t_prev = t_cur;
              t_cur = t_next;
            }
            for (std::size_t o = 0; o < outputs; ++o) coef[o][j] += (2.0 / m) * s.full[o] * tv;
          }
        }
        for (std::size_t o = 0; o < outputs; ++o) coef[o][0] *= 0.5;
        // Integrate sum c_j T_j(xi) over xi in [-2, -1] (lambda in [0, lambda_c]).
        const auto rule = quad::mapped(quad::gauss_legendre(m + 2), -2.0, -1.0);
        std::vector<cplx> out(outputs, 0.0);
        for (std::size_t q = 0; q < rule.size(); ++q) {
          const double xi = rule.nodes[q];
          std::vector<double> t(m);
          t[0] = 1.0;
          if (m > 1) t[1] = xi;
          for (int j = 2; j < m; ++j) t[j] = 2 * xi * t[j - 1] - t[j - 2];
          for (std::size_t o = 0; o < outputs; ++o) {
            cplx v = 0;
            for (int j = 0; j < m; ++j) v += coef[o][j] * t[j];
            out[o] += rule.weights[q] * lambda_c * v;
          }
        }
        return out;
      };
      const auto g_hi = gap_integral(quad.gap_fit_nodes);
      const auto g_lo = gap_integral(quad.gap_fit_nodes - 2);
      for (std::size_t o = 0; o < outputs; ++o) {
        gap_total[o].add(wr * g_hi[o]);
        res[o].gap_error += std::abs(wr) * std::abs(g_hi[o] - g_lo[o]);
      }
      for (auto& rr : res) rr.lambda_c = std::max(rr.lambda_c, lambda_c);
    }
  }
  for (std::size_t o = 0; o < outputs; ++o) {
    res[o].gap = pref * gap_total[o].value();
    res[o].gap_error *= pref;
    res[o].value = pref * total[o].value() + res[o].gap;
  }
  return res;
}

SpectrumValues values_of(const SpectrumEvaluator& g) {
  return [g](double r, double lambda, int truncation) {
    const auto jets = g(r, lambda, truncation, 0);
    std::vector<cplx> out(jets.size());
    for (std::size_t i = 0; i < jets.size(); ++i) out[i] = jets[i].value();
    return out;
  };
}

std::vector<InversionResult> inverse_transform_many(const SpectrumValues& g, const std::vector<GroupElement>& xs,
                                                    const SpectrumSlice& slice, const QuadratureSpec& quad,
                                                    double c) {
  if (slice.p1() != 1) throw DomainError("inverse_transform: closed-form spherical tables need a single block");
  AlphaIntegrand h = [&](double r, double lambda, int T) {
    const auto gv = g(r, lambda, T);
    std::vector<std::vector<cplx>> out;
    for (const auto& x : xs) {
      auto phi = type1_table(r, lambda, T, x, slice, quad.sphere);
      for (std::size_t k = 0; k < phi.size(); ++k) phi[k] *= gv[k];
      out.push_back(std::move(phi));
    }
    return out;
  };
  return spectral_integral(h, xs.size(), slice, quad, c);
}

InversionResult inverse_transform(const SpectrumValues& g, const GroupElement& x, const SpectrumSlice& slice,
                                  const QuadratureSpec& quad, double c) {
  return inverse_transform_many(g, {x}, slice, quad, c).front();
}

double calibrate_c(const InvariantTestFunction& f_ref, const SpectrumSlice& slice, const QuadratureSpec& quad) {
  const GroupElement e = GroupElement::identity(slice.n);
  const double target = f_ref.base_value(e);
  if (!f_ref.multipliers.empty()) throw DomainError("calibrate_c: reference must be an invariant catalog function");
  if (std::abs(target) < 1e-12) throw DomainError("calibrate_c: reference function vanishes at the identity");
  const auto raw = inverse_transform(values_of(transform_evaluator(f_ref, slice, quad)), e, slice, quad, 1.0);
  if (std::abs(raw.value) < 1e-300) throw DomainError("calibrate_c: spectral integral vanishes");
  return target / raw.value.real();
}

double plancherel_defect(const InvariantTestFunction& f, const SpectrumSlice& slice, const QuadratureSpec& quad,
                         double c) {
  if (f.is_zero()) return 0.0;
  const double lhs = f.l2_norm2(slice.n);
  const auto g = values_of(transform_evaluator(f, slice, quad));
  AlphaIntegrand h = [&](double r, double lambda, int T) {
    auto v = g(r, lambda, T);
    for (auto& x : v) x = std::norm(x);
    return std::vector<std::vector<cplx>>{v};
  };
  const auto rhs = spectral_integral(h, 1, slice, quad, c).front().value.real();
  return std::abs(lhs - rhs) / lhs;
}

GridSpec GridSpec::default_for(const SpectrumSlice& slice) {
  GridSpec g;
  if (!slice.r_constrained()) g.r_nodes = {0.0, 0.5, 1.0, 2.0, 3.0};
  constexpr int count = 24;
  const double lo = 0.05, hi = 8.0;
  for (int k = 0; k < count; ++k) {
    const double l = lo * std::pow(hi / lo, double(k) / (count - 1));
    g.lambda_nodes.push_back(-l);
    g.lambda_nodes.push_back(l);
  }
  std::sort(g.lambda_nodes.begin(), g.lambda_nodes.end());
  g.truncation = 30;
  return g;
}

namespace {

double sup_value(const SpectrumGrid& g) {
  double s = 0;
  for (const auto& j : g.values) s = std::max(s, std::abs(j.value()));
  return s;
}

IntertwiningDefects intertwining_at(const InvariantTestFunction& f, const SpectrumSlice& slice,
                                    const QuadratureSpec& quad, const GridSpec& grid, int T) {
  const auto G = tabulate_grid(slice, grid.r_nodes, grid.lambda_nodes, T + 1, 1, transform_evaluator(f, slice, quad));
  const auto Hp = tabulate_grid(slice, grid.r_nodes, grid.lambda_nodes, T, 0,
                                transform_evaluator(f.times(Multiplier::GammaHalfPlusIT), slice, quad));
  const auto Hm = tabulate_grid(slice, grid.r_nodes, grid.lambda_nodes, T, 0,
                                transform_evaluator(f.times(Multiplier::GammaHalfMinusIT), slice, quad));
  const auto Mp = m_ops(G, DiffMode::Plus);
  const auto Mm = m_ops(G, DiffMode::Minus);
  const double norm = sup_value(G);
  IntertwiningDefects d;
  if (norm == 0.0) return d;
  for (std::size_t i = 0; i < Mp.values.size(); ++i) {
    d.plus = std::max(d.plus, std::abs(Mp.values[i].value() - Hp.values[i].value()) / norm);
    d.minus = std::max(d.minus, std::abs(Mm.values[i].value() + Hm.values[i].value()) / norm);
  }
  for (std::size_t ir = 0; ir < grid.r_nodes.size(); ++ir)
    for (std::size_t il = 0; il < grid.lambda_nodes.size(); ++il) {
      const double l = grid.lambda_nodes[il];
      auto it = std::find(grid.lambda_nodes.begin(), grid.lambda_nodes.end(), -l);
      if (it == grid.lambda_nodes.end()) continue;
      const std::size_t jl = static_cast<std::size_t>(it - grid.lambda_nodes.begin());
      for (std::size_t rk = 0; rk < Hp.index.size(); ++rk)
        d.symmetry = std::max(d.symmetry,
                              std::abs(Hp.at(ir, il, rk).value() - std::conj(Hm.at(ir, jl, rk).value())) / norm);
    }
  return d;
}

}  // namespace

IntertwiningDefects intertwining_defect(const InvariantTestFunction& f, const SpectrumSlice& slice,
                                        const QuadratureSpec& quad, const GridSpec& grid) {
  for (double l : grid.lambda_nodes)
    if (l == 0.0) throw DomainError("intertwining_defect: grid must avoid lambda = 0");
  IntertwiningDefects d = intertwining_at(f, slice, quad, grid, grid.truncation);
  const IntertwiningDefects d2 = intertwining_at(f, slice, quad, grid, 2 * grid.truncation);
  d.plus_doubled = d2.plus;
  d.minus_doubled = d2.minus;
  return d;
}

SpectrumGrid g_delta_grid(const SpectrumGrid& g) {
  if (g.truncation() < 1) throw TruncationError("g_delta_grid: needs truncation >= 1");
  const BlockStructure& blocks = g.slice.blocks;
  SpectrumGrid out;
  out.slice = g.slice;
  out.r_nodes = g.r_nodes;
  out.lambda_nodes = g.lambda_nodes;
  out.index = MultiIndexSet(blocks.p1(), g.truncation() - 1);
  out.jet_order = g.jet_order;
  out.values.resize(out.r_nodes.size() * out.lambda_nodes.size() * out.index.size());
  const double a = blocks.a();
  for (std::size_t ir = 0; ir < g.r_nodes.size(); ++ir)
    for (std::size_t il = 0; il < g.lambda_nodes.size(); ++il) {
      const double l = g.lambda_nodes[il];
      const Jet abs_l = Jet::linear(g.jet_order, std::abs(l), l > 0 ? 1.0 : -1.0);
      for (std::size_t r = 0; r < out.index.size(); ++r) {
        const MultiIndex& alpha = out.index[r];
        const Jet& base = g.at(ir, il, r);
        Jet diff(g.jet_order);
        for (int j = 0; j < blocks.p1(); ++j) {
          diff += double(alpha[j] + blocks.mult[j]) * (g.at(ir, il, g.index.up(r, j)) - base);
          if (alpha[j] > 0) diff -= double(alpha[j]) * (base - g.at(ir, il, g.index.down(r, j)));
        }
        out.at(ir, il, r) = abs_l * (diff * (-0.5) - (2.0 * degree(alpha) + a) * base);
      }
    }
  return out;
}

double g_delta_check(const InvariantTestFunction& f, const SpectrumSlice& slice, const QuadratureSpec& quad,
                     const GridSpec& grid) {
  if (f.is_zero()) return 0.0;
  const int T = grid.truncation;
  const auto G = tabulate_grid(slice, grid.r_nodes, grid.lambda_nodes, T + 1, 0, transform_evaluator(f, slice, quad));
  const auto Hg = tabulate_grid(slice, grid.r_nodes, grid.lambda_nodes, T, 0,
                                transform_evaluator(f.times(Multiplier::Gamma), slice, quad));
  const auto Gd = g_delta_grid(G);
  // 4 (Delta f)^ = -|lambda| (2|alpha| + a) f^ + (lambda^2 / 2) (gamma f)^
  double diff = 0, norm = 0;
  for (std::size_t ir = 0; ir < grid.r_nodes.size(); ++ir)
    for (std::size_t il = 0; il < grid.lambda_nodes.size(); ++il) {
      const double l = grid.lambda_nodes[il];
      for (std::size_t r = 0; r < Gd.index.size(); ++r) {
        const double e = std::abs(l) * (2.0 * degree(Gd.index[r]) + slice.a());
        const cplx other = -e * G.at(ir, il, r).value() + 0.5 * l * l * Hg.at(ir, il, r).value();
        const cplx mine = Gd.at(ir, il, r).value();
        diff = std::max(diff, std::abs(mine - other));
        norm = std::max(norm, std::abs(mine));
      }
    }
  return norm > 0 ? diff / norm : diff;
}

namespace {

// int over (lo, hi) with hi possibly infinite; returns +inf when the adaptive
// rule cannot produce a finite, self-consistent value.
template <class F>
double integrate(F&& f, double lo, double hi) {
  try {
    double err = 0, l1 = 0, v = 0;
    if (std::isinf(hi)) {
      boost::math::quadrature::exp_sinh<double> q;
      v = q.integrate([&](double x) { return f(lo + x); }, 0.0, INFINITY, 1e-12, &err, &l1);
    } else {
      if (!(hi > lo)) return 0.0;
      boost::math::quadrature::tanh_sinh<double> q;
      v = q.integrate(f, lo, hi, 1e-12, &err, &l1);
    }
    if (!std::isfinite(v) || err > 1e-6 * std::max(std::abs(v), 1e-300) + 1e-300) return INFINITY;
    return v;
  } catch (const std::exception&) {
    return INFINITY;
  }
}

}  // namespace

IntegrabilityReport integrability_report(const PointwiseSpectrum& g, const SpectrumSlice& slice, int n_exp,
                                         double k_split, int truncation, double cauchy_tolerance, double c) {
  IntegrabilityReport rep;
  const int a = slice.a();
  if (n_exp < a + 3) {
    rep.hypothesis_ok = false;
    rep.warnings.push_back("decay exponent N = " + std::to_string(n_exp) + " is below a + 3 = " +
                           std::to_string(a + 3));
  }
  const double p = plancherel_exponent(slice);
  const double pref = c / std::pow(2.0 * M_PI, a + 2);
  const MultiIndexSet index(slice.p1(), truncation);
  const char* names[4] = {"A1", "A2", "A3", "A4"};
  for (int reg = 0; reg < 4; ++reg) {
    RegionReport rr;
    rr.name = names[reg];
    const bool outer_r = reg >= 2;
    const bool high_lambda = reg % 2 == 1;
    for (int m = 0; m <= truncation; ++m) {
      double shell = 0;
      const double bound = 1.0 / (2.0 * m + a);
      for (std::size_t rk = index.shell_begin(m); rk < index.shell_end(m); ++rk) {
        const MultiIndex& alpha = index[rk];
        auto lambda_integral = [&](double r) {
          double s = 0;
          for (double sgn : {1.0, -1.0}) {
            auto fl = [&](double l) {
              const double v = std::abs(g(r, alpha, sgn * l));
              return v == 0.0 ? 0.0 : v * std::pow(l, p);
            };
            s += high_lambda ? integrate(fl, bound, INFINITY) : integrate(fl, 0.0, bound);
          }
          return s;
        };
        double v;
        if (slice.r_constrained())
          v = outer_r ? 0.0 : lambda_integral(0.0);
        else
          v = outer_r ? integrate(lambda_integral, k_split, INFINITY) : integrate(lambda_integral, 0.0, k_split);
        shell += pref * dim_P_value(alpha, slice.blocks) * v;
      }
      rr.shell.push_back(shell);
      rr.partial.push_back((rr.partial.empty() ? 0.0 : rr.partial.back()) + shell);
      const double dm = std::exp(std::lgamma(m + a) - std::lgamma(m + 1.0) - std::lgamma(double(a)));
      rr.comparison.push_back(dm * std::pow(bound, a + 1));
      rr.finite = rr.finite && std::isfinite(shell);
    }
    rr.total = rr.partial.back();
    rr.cauchy_gap = rr.finite ? rr.partial.back() - rr.partial[truncation / 2] : INFINITY;
    rr.convergent = rr.finite && rr.cauchy_gap <= cauchy_tolerance;
    rep.regions.push_back(rr);
  }
  // Hypothesis constant on a sample grid.
  for (double r : {0.0, 0.5, 1.0, 2.0, 4.0}) {
    if (slice.r_constrained() && r != 0.0) continue;
    for (std::size_t rk = 0; rk < index.size(); ++rk)
      for (int k = 0; k < 40; ++k) {
        const double l = 1e-3 * std::pow(1e5, k / 39.0);
        for (double sgn : {1.0, -1.0}) {
          const double kap = kappa(Type1{r, index[rk], sgn * l}, slice);
          rep.c0 = std::max(rep.c0, std::abs(g(r, index[rk], sgn * l)) * std::pow(kap, n_exp));
        }
      }
  }
  return rep;
}

}  // namespace nilspherical
