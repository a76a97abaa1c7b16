// period tables and the growth estimators: completeness horizons, the exact
// scaling laws of the fitted rates, intersection identities, and the
// dirichlet exponent's determinism properties.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "anosov/errors.hpp"
#include "anosov/fixtures.hpp"
#include "anosov/io.hpp"
#include "anosov/spectrum.hpp"

using namespace anosov;

namespace {

struct Table {
  ClassList classes;
  std::vector<double> col;     // a1 periods in class order
  std::vector<double> sorted;  // the same, ascending
  double horizon = 0.0;
};

Table make_table(const std::string& fixture, int max_len) {
  Table t{ClassList::enumerate(2, max_len, true, 1ull << 26), {}, {}, 0.0};
  const RepPoint rep = fixture_rep(fixture);
  t.col = period_column(t.classes, rep, WeightFunctional::simple_root(2, 1));
  t.sorted = t.col;
  std::sort(t.sorted.begin(), t.sorted.end());
  t.horizon = completeness_horizon(t.classes, t.col);
  return t;
}

}  // namespace

TEST_CASE("completeness horizon equals the per-letter floor times the depth") {
  const Table t = make_table("schottky-basic", 9);
  double rate = 1e300;
  for (std::size_t i = 0; i < t.classes.size(); ++i)
    rate = std::min(rate, t.col[i] / static_cast<double>(t.classes.core(i).size()));
  CHECK(t.horizon == doctest::Approx(rate * (t.classes.max_len() + 1)).epsilon(1e-12));
  CHECK(t.horizon > 0.0);
}

TEST_CASE("entropy fit halves exactly when every period doubles") {
  const Table t = make_table("schottky-basic", 11);
  const Estimate base = entropy_growth(t.sorted, t.horizon);
  CHECK(base.value > 0.0);
  REQUIRE(base.window_values.size() >= 3);
  CHECK(std::is_sorted(base.window_anchors.begin(), base.window_anchors.end()));

  std::vector<double> doubled = t.sorted;
  for (double& p : doubled) p *= 2.0;
  const Estimate half = entropy_growth(doubled, 2.0 * t.horizon);
  CHECK(half.value == 0.5 * base.value);  // scaling is exact, bit for bit
}

TEST_CASE("entropy fit requires a populated table") {
  std::vector<double> tiny(100, 1.0);
  CHECK_THROWS_AS((void)entropy_growth(tiny, 10.0), NumericError);
}

TEST_CASE("orbit pressure at zero potential reproduces the entropy fit") {
  const Table t = make_table("schottky-basic", 11);
  const std::vector<double> zero(t.sorted.size(), 0.0);
  const Estimate h = entropy_growth(t.sorted, t.horizon);
  const Estimate p0 = pressure_orbit(t.sorted, zero, t.horizon);
  CHECK(p0.value == h.value);
}

TEST_CASE("orbit pressure vanishes at the fitted exponent") {
  const Table t = make_table("schottky-basic", 12);
  const Estimate h = entropy_growth(t.sorted, t.horizon);
  std::vector<double> pot(t.sorted.size());
  for (std::size_t i = 0; i < pot.size(); ++i) pot[i] = -h.value * t.sorted[i];
  const Estimate p = pressure_orbit(t.sorted, pot, t.horizon);
  CHECK(std::fabs(p.value) <= 5e-2);
  // moving the coefficient off the root leaves a pressure of the same sign
  for (double& x : pot) x *= 1.3;
  CHECK(pressure_orbit(t.sorted, pot, t.horizon).value < -1e-2);
}

TEST_CASE("gibbs ratio of a column with itself is one") {
  const Table t = make_table("schottky-basic", 9);
  CHECK(gibbs_average(t.sorted, t.sorted, 0.2584) == 1.0);
}

TEST_CASE("self intersection is exactly one, scaling is exact") {
  const Table t = make_table("schottky-basic", 11);
  const Estimate h = entropy_growth(t.sorted, t.horizon);
  const Estimate self = intersection(t.sorted, t.sorted, t.horizon, h.value);
  CHECK(self.value == 1.0);
  CHECK(self.spread == 0.0);

  std::vector<double> scaled = t.sorted;
  for (double& x : scaled) x *= 1.7;
  const Estimate s = intersection(t.sorted, scaled, t.horizon, h.value);
  CHECK(s.value == doctest::Approx(1.7).epsilon(1e-12));
}

TEST_CASE("renormalized intersection of a fixture pair stays above one") {
  const int len = 12;
  const ClassList classes = ClassList::enumerate(2, len, true, 1ull << 26);
  const RepPoint rf = fixture_rep("schottky-basic");
  const RepPoint rg = fixture_rep("schottky-thin");
  const WeightFunctional a1 = WeightFunctional::simple_root(2, 1);
  const std::vector<double> cf = period_column(classes, rf, a1);
  const std::vector<double> cg = period_column(classes, rg, a1);

  std::vector<std::size_t> order(cf.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return cf[a] < cf[b]; });
  std::vector<double> fs(cf.size()), gs(cf.size());
  for (std::size_t i = 0; i < order.size(); ++i) fs[i] = cf[order[i]], gs[i] = cg[order[i]];

  const Estimate hf = exponent_dirichlet(rf, a1, len);
  const Estimate hg = exponent_dirichlet(rg, a1, len);
  const double horizon = completeness_horizon(classes, cf);
  const Estimate i_fg = intersection(fs, gs, horizon, hf.value);
  const double j = (hg.value / hf.value) * i_fg.value;
  CHECK(j >= 1.0 - 1e-3);
  CHECK(i_fg.value > 1.0);  // the thin spectrum runs ahead of the basic one

  const double r = gibbs_average(fs, gs, hf.value);
  const double var = variance_quadratic(fs, gs, horizon, hf.value, r);
  CHECK(var >= -1e-3);
}

TEST_CASE("dirichlet exponent scales inversely with the functional") {
  const RepPoint rep = fixture_rep("schottky-basic");
  const WeightFunctional a1 = WeightFunctional::simple_root(2, 1);
  const Estimate base = exponent_dirichlet(rep, a1, 11);
  const Estimate dbl = exponent_dirichlet(rep, WeightFunctional::scaled(a1, 2.0), 11);
  CHECK(base.value > 0.2);
  CHECK(dbl.value == doctest::Approx(0.5 * base.value).epsilon(1e-8));
}

TEST_CASE("dirichlet exponent rejects sign-indefinite functionals") {
  const RepPoint rep = fixture_rep("schottky-basic");
  const WeightFunctional neg =
      WeightFunctional::scaled(WeightFunctional::simple_root(2, 1), -1.0);
  CHECK_THROWS_AS((void)exponent_dirichlet(rep, neg, 9), NumericError);
}

TEST_CASE("rank-one groups have zero exponent") {
  const Estimate e =
      exponent_dirichlet(fixture_rep("cyclic"), WeightFunctional::simple_root(2, 1), 10);
  CHECK(e.value == 0.0);
}

TEST_CASE("conjugate data gives bitwise equal exponents") {
  SchottkyData mirror = fixture_schottky("schottky-complex");
  for (auto& d : mirror.disks) d.center = std::conj(d.center);
  for (double& tw : mirror.twists) tw = -tw;
  const RepPoint a = fixture_rep("schottky-complex");
  const RepPoint b = schottky_rep(mirror, "mirror");
  const WeightFunctional a1 = WeightFunctional::simple_root(2, 1);
  const Estimate ea = exponent_dirichlet(a, a1, 10);
  const Estimate eb = exponent_dirichlet(b, a1, 10);
  CHECK(ea.value == eb.value);
}

TEST_CASE("spectrum tables sort, align, and round-trip through csv") {
  const ClassList classes = ClassList::enumerate(2, 9, true, 1ull << 24);
  const std::vector<RepPoint> reps{fixture_rep("schottky-basic")};
  const std::vector<WeightFunctional> fns{WeightFunctional::simple_root(2, 1),
                                          WeightFunctional::fundamental_weight(2, 1)};
  const SpectrumTable table = build_spectrum(classes, reps, fns, 0);
  REQUIRE(table.columns.size() == 2);
  REQUIRE(table.rows() > 500);
  CHECK(table.skipped == 0);
  CHECK(std::is_sorted(table.columns[0].begin(), table.columns[0].end()));
  for (std::size_t r = 0; r < table.rows(); ++r) {
    CHECK(table.class_of_row[r] < classes.size());
    // on the mean-zero flat of dimension two the weight is half the root
    CHECK(table.columns[1][r] == 0.5 * table.columns[0][r]);
  }

  const std::string path =
      (std::filesystem::temp_directory_path() / "anosovlab-test-spectrum.csv").string();
  write_spectrum_csv(table, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header.rfind("class,core_length,", 0) == 0);
  std::string line;
  std::size_t data_lines = 0;
  std::string first_row;
  while (std::getline(in, line))
    if (!line.empty()) {
      if (data_lines == 0) first_row = line;
      ++data_lines;
    }
  CHECK(data_lines == table.rows());
  // the printed doubles parse back to the exact stored values
  const std::size_t last_comma = first_row.rfind(',');
  REQUIRE(last_comma != std::string::npos);
  const double parsed = std::strtod(first_row.c_str() + last_comma + 1, nullptr);
  CHECK(parsed == table.columns[1][0]);
  std::filesystem::remove(path);
}
