#include "nilspherical/parallel.hpp"
#include "nilspherical/spectrum.hpp"

#include <algorithm>
#include <cmath>

namespace nilspherical {

SpectrumGrid tabulate_grid(const SpectrumSlice& slice, std::vector<double> r_nodes,
                           std::vector<double> lambda_nodes, int truncation, int jet_order,
                           const SpectrumEvaluator& g) {
  if (jet_order > kMaxJetOrder) throw DomainError("tabulate_grid: jet order too large");
  for (double l : lambda_nodes)
    if (l == 0.0) throw DomainError("tabulate_grid: lambda nodes must be nonzero");
  SpectrumGrid grid;
  grid.slice = slice;
  grid.r_nodes = std::move(r_nodes);
  grid.lambda_nodes = std::move(lambda_nodes);
  grid.index = MultiIndexSet(slice.p1(), truncation);
  grid.jet_order = jet_order;
  grid.values.resize(grid.r_nodes.size() * grid.lambda_nodes.size() * grid.index.size());
  const int nl = static_cast<int>(grid.lambda_nodes.size());
  const int cells = static_cast<int>(grid.r_nodes.size()) * nl;
  parallel_for_chunks(cells, [&](int cell) {
    const int ir = cell / nl, il = cell % nl;
    auto vals = g(grid.r_nodes[ir], grid.lambda_nodes[il], truncation, jet_order);
    if (vals.size() != grid.index.size()) throw DomainError("tabulate_grid: evaluator returned a wrong-sized table");
    std::copy(vals.begin(), vals.end(), grid.values.begin() + grid.offset(ir, il));
  });
  return grid;
}

SpectrumGrid tabulate_grid_fd(const SpectrumSlice& slice, std::vector<double> r_nodes,
                              std::vector<double> lambda_nodes, int truncation, double h, const SpectrumValues& g) {
  for (double l : lambda_nodes)
    if (std::abs(l) < 10 * h) throw DomainError("tabulate_grid_fd: lambda node closer than 10 h to zero");
  auto eval = [&](double r, double lambda, int t, int) {
    const auto fm = g(r, lambda - h, t), f0 = g(r, lambda, t), fp = g(r, lambda + h, t);
    std::vector<Jet> out(f0.size());
    for (std::size_t i = 0; i < f0.size(); ++i) {
      Jet j(2, f0[i]);
      j[1] = (fp[i] - fm[i]) / (2 * h);
      j[2] = (fp[i] - 2.0 * f0[i] + fm[i]) / (2 * h * h);
      out[i] = j;
    }
    return out;
  };
  return tabulate_grid(slice, std::move(r_nodes), std::move(lambda_nodes), truncation, 2, eval);
}

SpectrumGrid m_ops(const SpectrumGrid& g, DiffMode mode) {
  if (g.jet_order < 1) throw TruncationError("m_ops: needs jets of order >= 1");
  if (g.truncation() < 1) throw TruncationError("m_ops: needs truncation >= 1");
  const BlockStructure& blocks = g.slice.blocks;
  const int p1 = blocks.p1();
  SpectrumGrid out;
  out.slice = g.slice;
  out.r_nodes = g.r_nodes;
  out.lambda_nodes = g.lambda_nodes;
  out.index = MultiIndexSet(p1, g.truncation() - 1);
  out.jet_order = g.jet_order - 1;
  out.values.resize(out.r_nodes.size() * out.lambda_nodes.size() * out.index.size());
  for (std::size_t ir = 0; ir < g.r_nodes.size(); ++ir)
    for (std::size_t il = 0; il < g.lambda_nodes.size(); ++il) {
      const double lambda = g.lambda_nodes[il];
      // M+ uses D+ on lambda > 0 and D- on lambda < 0; M- the other way round.
      const bool use_plus = (mode == DiffMode::Plus) == (lambda > 0);
      const Jet inv = Jet::reciprocal(g.jet_order, lambda);
      for (std::size_t r = 0; r < out.index.size(); ++r) {
        const MultiIndex& alpha = out.index[r];
        const Jet& base = g.at(ir, il, r);
        Jet d(g.jet_order);
        for (int j = 0; j < p1; ++j) {
          if (use_plus) {
            d += double(alpha[j] + blocks.mult[j]) * (g.at(ir, il, g.index.up(r, j)) - base);
          } else if (alpha[j] > 0) {
            d += double(alpha[j]) * (base - g.at(ir, il, g.index.down(r, j)));
          }
        }
        out.at(ir, il, r) = (base.differentiated() - inv * d).truncated(out.jet_order);
      }
    }
  return out;
}

bool CertificateReport::pass() const {
  return std::all_of(entries.begin(), entries.end(), [](const CertificateEntry& e) { return e.pass; });
}

const CertificateEntry* CertificateReport::first_failure() const {
  for (const auto& e : entries)
    if (!e.pass) return &e;
  return nullptr;
}

double CertificateReport::worst_ratio() const {
  double w = 0;
  for (const auto& e : entries) {
    if (e.inner > 0)
      w = std::max(w, e.outer / e.inner);
    else if (e.outer > 0)
      w = INFINITY;
  }
  return w;
}

namespace {

void certify_one(const SpectrumGrid& g, int l, int m, int m_max, int n_max, double growth,
                 std::vector<CertificateEntry>& out) {
  const std::size_t cells = g.r_nodes.size() * g.lambda_nodes.size() * g.index.size();
  std::vector<double> kap(cells);
  double kmax = 0;
  for (std::size_t ir = 0; ir < g.r_nodes.size(); ++ir)
    for (std::size_t il = 0; il < g.lambda_nodes.size(); ++il)
      for (std::size_t r = 0; r < g.index.size(); ++r) {
        const double k = kappa(Type1{g.r_nodes[ir], g.index[r], g.lambda_nodes[il]}, g.slice);
        kap[g.offset(ir, il) + r] = k;
        kmax = std::max(kmax, k);
      }
  const double split = 0.5 * kmax;
  for (int d = 0; d <= std::min(m_max, g.jet_order); ++d)
    for (int n = 0; n <= n_max; ++n) {
      CertificateEntry e{l, m, d, n};
      for (std::size_t ir = 0; ir < g.r_nodes.size(); ++ir)
        for (std::size_t il = 0; il < g.lambda_nodes.size(); ++il) {
          const double lw = std::pow(std::abs(g.lambda_nodes[il]), d);
          for (std::size_t r = 0; r < g.index.size(); ++r) {
            const std::size_t c = g.offset(ir, il) + r;
            const double v = std::abs(g.values[c].derivative(d)) * lw * std::pow(kap[c], n);
            e.c = std::max(e.c, v);
            if (kap[c] <= split)
              e.inner = std::max(e.inner, v);
            else
              e.outer = std::max(e.outer, v);
          }
        }
      e.pass = std::isfinite(e.c) && (e.outer < growth * e.inner || (e.outer == 0.0 && e.inner == 0.0));
      out.push_back(e);
    }
  if (m_max > g.jet_order)
    for (int d = g.jet_order + 1; d <= m_max; ++d)
      for (int n = 0; n <= n_max; ++n) out.push_back(CertificateEntry{l, m, d, n, INFINITY, 0, 0, false});
}

}  // namespace

CertificateReport decrease_certificate(const SpectrumGrid& g, int m_max, int n_max, int l_max, double growth) {
  CertificateReport rep;
  // (M+)^l (M-)^m G for l + m <= l_max.
  std::vector<SpectrumGrid> minus_chain{g};
  for (int m = 1; m <= l_max; ++m) minus_chain.push_back(m_ops(minus_chain.back(), DiffMode::Minus));
  for (int m = 0; m <= l_max; ++m) {
    SpectrumGrid cur = minus_chain[m];
    for (int l = 0; l + m <= l_max; ++l) {
      if (l > 0) cur = m_ops(cur, DiffMode::Plus);
      certify_one(cur, l, m, m_max, n_max, growth, rep.entries);
    }
  }
  return rep;
}

}  // namespace nilspherical
