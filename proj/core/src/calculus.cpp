#include "anosov/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace anosov {

GridSummaries grid_summaries(const ParamGrid& grid, const WeightFunctional& fn, int max_len,
                             std::uint64_t budget, int threads) {
  if (fn.dim() != grid.dim) throw ConfigError("grid summaries: functional dimension mismatch");
  const ClassList classes = ClassList::enumerate(grid.rank, max_len, true, budget);
  GridSummaries out;
  out.geo = grid.geo;
  out.family_name = grid.family_name;
  out.functional = fn.name();
  out.classes_used = classes.size();
  out.nodes.resize(grid.nodes.size());

  const RepPoint& center = grid.node(0, 0);
  const std::vector<double> f_raw = period_column(classes, center, fn, threads);
  const double f_horizon = completeness_horizon(classes, f_raw);
  // entropies come from the dirichlet exponent: the count ladder needs a much
  // deeper table once a deformation breaks the near-arithmetic spacing of the
  // period spectrum, while the layer-sum exponent is stable against the
  // enumeration depth at every node
  const Estimate hf = exponent_dirichlet(center, fn, max_len);

  // one node column at a time; each is paired against the center column on
  // the rows where both are finite, sorted by the center period
  std::vector<std::uint32_t> order_buf;
  std::vector<double> f_pair, g_pair;
  for (int it = -grid.geo.nt; it <= grid.geo.nt; ++it) {
    for (int is = -grid.geo.ns; is <= grid.geo.ns; ++is) {
      const RepPoint& node = grid.node(is, it);
      const std::vector<double> g_raw = period_column(classes, node, fn, threads);
      order_buf.clear();
      for (std::uint32_t i = 0; i < static_cast<std::uint32_t>(classes.size()); ++i)
        if (std::isfinite(f_raw[i]) && std::isfinite(g_raw[i])) order_buf.push_back(i);
      out.dropped += classes.size() - order_buf.size();
      std::stable_sort(order_buf.begin(), order_buf.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (f_raw[a] != f_raw[b]) return f_raw[a] < f_raw[b];
        return a < b;
      });
      f_pair.resize(order_buf.size());
      g_pair.resize(order_buf.size());
      for (std::size_t r = 0; r < order_buf.size(); ++r) {
        f_pair[r] = f_raw[order_buf[r]];
        g_pair[r] = g_raw[order_buf[r]];
      }
      NodeSummary ns;
      const Estimate i_est = intersection(f_pair, g_pair, f_horizon, hf.value);
      const Estimate hg = (is == 0 && it == 0) ? hf : exponent_dirichlet(node, fn, max_len);
      ns.h = hg.value;
      ns.i = i_est.value;
      ns.j = (hg.value / hf.value) * i_est.value;
      out.nodes[grid.index(is, it)] = ns;
    }
  }
  return out;
}

ScalarField field_of(const GridSummaries& s, SummaryKind kind) {
  ScalarField f;
  f.geo = s.geo;
  f.v.resize(s.nodes.size());
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    switch (kind) {
      case SummaryKind::Entropy: f.v[i] = s.nodes[i].h; break;
      case SummaryKind::Intersection: f.v[i] = s.nodes[i].i; break;
      case SummaryKind::Renormalized: f.v[i] = s.nodes[i].j; break;
    }
  }
  return f;
}

Stencil stencil(const ScalarField& f) {
  if (f.geo.ns < 2 || f.geo.nt < 2)
    throw ConfigError("fourth-order stencils need ns >= 2 and nt >= 2");
  const double hs = f.geo.ds, ht = f.geo.dt;
  Stencil st;
  st.value = f.at(0, 0);
  st.d_s = (f.at(-2, 0) - 8.0 * f.at(-1, 0) + 8.0 * f.at(1, 0) - f.at(2, 0)) / (12.0 * hs);
  st.d_t = (f.at(0, -2) - 8.0 * f.at(0, -1) + 8.0 * f.at(0, 1) - f.at(0, 2)) / (12.0 * ht);
  st.d_ss = (-f.at(-2, 0) + 16.0 * f.at(-1, 0) - 30.0 * f.at(0, 0) + 16.0 * f.at(1, 0) -
             f.at(2, 0)) /
            (12.0 * hs * hs);
  st.d_tt = (-f.at(0, -2) + 16.0 * f.at(0, -1) - 30.0 * f.at(0, 0) + 16.0 * f.at(0, 1) -
             f.at(0, 2)) /
            (12.0 * ht * ht);
  const double d11 = (f.at(1, 1) - f.at(1, -1) - f.at(-1, 1) + f.at(-1, -1)) / (4.0 * hs * ht);
  const double d22 =
      (f.at(2, 2) - f.at(2, -2) - f.at(-2, 2) + f.at(-2, -2)) / (16.0 * hs * ht);
  st.d_st = (16.0 * d11 - d22) / 15.0;
  return st;
}

PressureForm pressure_form(const ScalarField& j_field) {
  const Stencil st = stencil(j_field);
  PressureForm p;
  p.ss = st.d_ss;
  p.st = st.d_st;
  p.tt = st.d_tt;
  return p;
}

double pluriharmonicity_residual(const ScalarField& i_field) {
  const Stencil st = stencil(i_field);
  return std::fabs(st.d_ss + st.d_tt) / (std::fabs(st.d_ss) + std::fabs(st.d_tt) + 1e-6);
}

MasterIdentity master_identity_check(const ScalarField& h_field, const ScalarField& i_field,
                                     const ScalarField& j_field, double floor) {
  const Stencil h = stencil(h_field);
  const Stencil i = stencil(i_field);
  const Stencil j = stencil(j_field);
  MasterIdentity m;
  m.h0 = h.value;
  m.h_s = h.d_s;
  m.h_ss = h.d_ss;
  m.h_tt = h.d_tt;
  m.j_ss = j.d_ss;
  m.i_ss = i.d_ss;
  m.i_tt = i.d_tt;
  if (!(m.h0 > 0.0)) throw NumericError("master identity needs positive entropy at the center");
  m.lhs = m.h_tt;
  m.rhs = m.h0 * m.j_ss - m.h_ss + 2.0 * m.h_s * m.h_s / m.h0;
  const double scale = std::max({std::fabs(m.lhs), std::fabs(m.h0 * m.j_ss), std::fabs(m.h_ss),
                                 floor});
  m.residual = std::fabs(m.lhs - m.rhs) / scale;
  m.sign_match = (m.lhs >= 0.0) == (m.rhs >= 0.0);
  m.trusted = std::max(std::fabs(m.lhs), std::fabs(m.rhs)) >= floor;
  return m;
}

DegenerateDirectionReport degenerate_direction_check(const ParamGrid& grid,
                                                     const GridSummaries& sums,
                                                     const WeightFunctional& fn,
                                                     int sample_len) {
  const GridGeometry& geo = grid.geo;
  if (geo.ns < 1 || geo.nt < 1)
    throw ConfigError("degenerate direction check needs interior nodes on both axes");
  const ClassList classes = ClassList::enumerate(grid.rank, sample_len, true, 1ull << 22);

  const auto column = [&](int is, int it) { return period_column(classes, grid.node(is, it), fn, 0); };
  const std::vector<double> tp = column(0, 1), tm = column(0, -1);
  const std::vector<double> sp = column(1, 0), sm = column(-1, 0);
  const double h_tp = sums.at(0, 1).h, h_tm = sums.at(0, -1).h;
  const double h_sp = sums.at(1, 0).h, h_sm = sums.at(-1, 0).h;

  DegenerateDirectionReport rep;
  rep.classes = static_cast<int>(classes.size());
  for (std::size_t i = 0; i < classes.size(); ++i) {
    rep.max_t = std::max(rep.max_t, std::fabs((h_tp * tp[i] - h_tm * tm[i]) / (2.0 * geo.dt)));
    rep.max_s = std::max(rep.max_s, std::fabs((h_sp * sp[i] - h_sm * sm[i]) / (2.0 * geo.ds)));
  }
  return rep;
}

}  // namespace anosov
