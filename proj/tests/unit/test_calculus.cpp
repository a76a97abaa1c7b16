// grid calculus: stencils against polynomial fields with known derivatives,
// the derived pressure/pluriharmonicity/master-identity reductions on
// manufactured data, and the node summaries on a small real grid.

#include <doctest.h>

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "anosov/calculus.hpp"
#include "anosov/fixtures.hpp"
#include "anosov/spectrum.hpp"

using namespace anosov;

namespace {

ScalarField field_from(const GridGeometry& geo, const std::function<double(double, double)>& f) {
  ScalarField out;
  out.geo = geo;
  for (int it = -geo.nt; it <= geo.nt; ++it)
    for (int is = -geo.ns; is <= geo.ns; ++is)
      out.v.push_back(f(geo.s0 + is * geo.ds, geo.t0 + it * geo.dt));
  return out;
}

GridGeometry probe_geo() {
  GridGeometry g;
  g.s0 = 0.3;
  g.t0 = -0.1;
  g.ds = 0.05;
  g.dt = 0.04;
  g.ns = g.nt = 2;
  return g;
}

}  // namespace

TEST_CASE("stencil reproduces quadratics to rounding") {
  const GridGeometry geo = probe_geo();
  const double c0 = 1.7, cs = 0.8, ct = -0.6, css = 1.1, cst = 0.9, ctt = -1.3;
  const ScalarField f = field_from(geo, [&](double s, double t) {
    const double x = s - geo.s0, y = t - geo.t0;
    return c0 + cs * x + ct * y + 0.5 * css * x * x + cst * x * y + 0.5 * ctt * y * y;
  });
  const Stencil st = stencil(f);
  CHECK(st.value == doctest::Approx(c0).epsilon(1e-12));
  CHECK(st.d_s == doctest::Approx(cs).epsilon(1e-10));
  CHECK(st.d_t == doctest::Approx(ct).epsilon(1e-10));
  CHECK(std::fabs(st.d_ss - css) <= 1e-8);
  CHECK(std::fabs(st.d_st - cst) <= 1e-8);
  CHECK(std::fabs(st.d_tt - ctt) <= 1e-8);
}

TEST_CASE("stencil stays exact through degree five") {
  const GridGeometry geo = probe_geo();
  const ScalarField f = field_from(geo, [&](double s, double t) {
    const double x = s - geo.s0, y = t - geo.t0;
    return x * x * x * x * x + 2.0 * y * y * y * y - 3.0 * x * x * x * y;
  });
  const Stencil st = stencil(f);
  // all first and second derivatives of these monomials vanish at the center
  CHECK(std::fabs(st.d_s) <= 1e-9);
  CHECK(std::fabs(st.d_t) <= 1e-9);
  CHECK(std::fabs(st.d_ss) <= 1e-7);
  CHECK(std::fabs(st.d_st) <= 1e-7);
  CHECK(std::fabs(st.d_tt) <= 1e-7);
}

TEST_CASE("pressure form reads the hessian of the renormalized field") {
  const GridGeometry geo = probe_geo();
  const double ss = 0.84, st = -0.35, tt = 0.02;
  const ScalarField j = field_from(geo, [&](double s, double t) {
    const double x = s - geo.s0, y = t - geo.t0;
    return 1.0 + 0.5 * ss * x * x + st * x * y + 0.5 * tt * y * y;
  });
  const PressureForm p = pressure_form(j);
  CHECK(std::fabs(p.ss - ss) <= 1e-8);
  CHECK(std::fabs(p.st - st) <= 1e-8);
  CHECK(std::fabs(p.tt - tt) <= 1e-8);
}

TEST_CASE("pluriharmonicity residual separates harmonic from generic fields") {
  const GridGeometry geo = probe_geo();
  const ScalarField harmonic = field_from(geo, [&](double s, double t) {
    const double x = s - geo.s0, y = t - geo.t0;
    return 1.0 + 0.4 * (x * x - y * y) + 0.2 * x;  // real part of a holomorphic map
  });
  CHECK(pluriharmonicity_residual(harmonic) <= 1e-7);

  const ScalarField generic = field_from(geo, [&](double s, double t) {
    const double x = s - geo.s0, y = t - geo.t0;
    return 1.0 + 0.4 * (x * x + y * y);
  });
  CHECK(pluriharmonicity_residual(generic) >= 0.9);
}

TEST_CASE("master identity accepts consistent fields and flags broken ones") {
  const GridGeometry geo = probe_geo();
  const double h0 = 0.25, h_s = 0.10, h_ss = -0.05, h_tt = -0.07;
  const double j_ss = (h_tt + h_ss - 2.0 * h_s * h_s / h0) / h0;
  const auto make_fields = [&](double jss) {
    const ScalarField h = field_from(geo, [&](double s, double t) {
      const double x = s - geo.s0, y = t - geo.t0;
      return h0 + h_s * x + 0.5 * h_ss * x * x + 0.5 * h_tt * y * y;
    });
    const ScalarField i = field_from(geo, [&](double s, double t) {
      const double x = s - geo.s0, y = t - geo.t0;
      return 1.0 + 0.3 * (x * x - y * y);
    });
    const ScalarField j = field_from(geo, [&](double s, double t) {
      const double x = s - geo.s0;
      return 1.0 + 0.5 * jss * x * x;
    });
    return std::tuple<ScalarField, ScalarField, ScalarField>{h, i, j};
  };

  const auto [h, i, j] = make_fields(j_ss);
  const MasterIdentity ok = master_identity_check(h, i, j);
  CHECK(ok.residual <= 1e-6);
  CHECK(ok.sign_match);
  CHECK(ok.trusted);
  CHECK(ok.h0 == doctest::Approx(h0).epsilon(1e-10));
  CHECK(std::fabs(ok.h_tt - h_tt) <= 1e-8);

  const auto [h2, i2, j2] = make_fields(2.5 * j_ss);
  const MasterIdentity broken = master_identity_check(h2, i2, j2);
  CHECK(broken.residual > 0.2);
}

TEST_CASE("master identity reports untrusted when signals sit under the floor") {
  const GridGeometry geo = probe_geo();
  const ScalarField h = field_from(geo, [&](double, double) { return 0.25; });
  const ScalarField flat = field_from(geo, [&](double, double) { return 1.0; });
  const MasterIdentity m = master_identity_check(h, flat, flat);
  CHECK_FALSE(m.trusted);
}

TEST_CASE("summaries on a real bending grid: exact center, mirror symmetry") {
  const Family fam = fixture_family("bend-basic");
  GridGeometry geo = fixture_geometry("bend-basic");
  geo.ns = geo.nt = 2;
  const ParamGrid grid = build_grid(fam, geo);
  const WeightFunctional a1 = WeightFunctional::simple_root(2, 1);
  const int len = 8;
  const GridSummaries sums = grid_summaries(grid, a1, len);

  CHECK(sums.at(0, 0).i == 1.0);
  CHECK(sums.at(0, 0).j == 1.0);
  CHECK(sums.at(0, 0).h ==
        exponent_dirichlet(grid.node(0, 0), a1, len).value);  // same estimator, same bits
  CHECK(sums.classes_used > 500);

  for (int is = -2; is <= 2; ++is)
    for (int it = 1; it <= 2; ++it) {
      // conjugate nodes carry identical spectra, so summaries mirror exactly
      CHECK(sums.at(is, it).h == sums.at(is, -it).h);
      CHECK(sums.at(is, it).i == sums.at(is, -it).i);
    }

  const ScalarField h_field = field_of(sums, SummaryKind::Entropy);
  const ScalarField i_field = field_of(sums, SummaryKind::Intersection);
  const ScalarField j_field = field_of(sums, SummaryKind::Renormalized);
  CHECK(h_field.at(0, 0) == sums.at(0, 0).h);
  CHECK(i_field.at(1, -1) == sums.at(1, -1).i);
  for (std::size_t n = 0; n < j_field.v.size(); ++n)
    CHECK(j_field.v[n] >= 1.0 - 5e-3);  // renormalized intersection bounded below

  const DegenerateDirectionReport degen = degenerate_direction_check(grid, sums, a1);
  CHECK(degen.max_t == 0.0);  // mirror symmetry kills the imaginary direction
  CHECK(degen.max_s > 1e-3);
  CHECK(degen.classes > 10);
}
