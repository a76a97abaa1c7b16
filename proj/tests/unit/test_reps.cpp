// representation points, weight functionals, period evaluation through the
// exterior ladders, certificates, and the holomorphic family / grid plumbing.

#include <doctest.h>

#include <cmath>
#include <complex>
#include <filesystem>
#include <string>
#include <vector>

#include "anosov/errors.hpp"
#include "anosov/fixtures.hpp"
#include "anosov/linalg.hpp"
#include "anosov/reps.hpp"
#include "anosov/words.hpp"

using namespace anosov;

namespace {

Word w(const std::string& s, int rank = 2) { return Word::from_string(s, rank); }

double partial_sum(const CartanVector& v, int k) {
  double s = 0.0;
  for (int i = 0; i < k; ++i) s += v[i];
  return s;
}

}  // namespace

TEST_CASE("weight functionals: coefficients, steps, partial-sum form") {
  const WeightFunctional a1 = WeightFunctional::simple_root(2, 1);
  const WeightFunctional w1 = WeightFunctional::fundamental_weight(2, 1);
  const CartanVector v2 = CartanVector::of({1.5, -1.5});
  CHECK(a1(v2) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(w1(v2) == doctest::Approx(1.5).epsilon(1e-15));
  REQUIRE(a1.steps().size() == 1);
  CHECK(a1.steps()[0] == 2.0);  // x1 - x2 = 2 S1 on the mean-zero flat
  CHECK(w1.steps()[0] == 1.0);

  const WeightFunctional a2 = WeightFunctional::simple_root(4, 2);
  const double s_sums[3] = {1.0, 3.0, 4.0};
  CHECK(a2.eval_partials({s_sums, 3}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(a2.needed_partials() == std::vector<int>{1, 2, 3});
  CHECK(WeightFunctional::fundamental_weight(4, 2).needed_partials() == std::vector<int>{2});

  const CartanVector v4 = CartanVector::of({2.0, 0.5, -0.5, -2.0});
  const double sums[3] = {partial_sum(v4, 1), partial_sum(v4, 2), partial_sum(v4, 3)};
  CHECK(a2(v4) == doctest::Approx(a2.eval_partials({sums, 3})).epsilon(1e-14));

  // custom coefficients are centered, which cannot change mean-zero values
  const WeightFunctional f = WeightFunctional::from_coeffs({2.0, 1.0, 1.0}, "probe");
  double mean = 0.0;
  for (double c : f.coeffs()) mean += c;
  CHECK(std::fabs(mean) <= 1e-15);
  const CartanVector v3 = CartanVector::of({1.0, 0.2, -1.2});
  CHECK(f(v3) == doctest::Approx(2.0 * v3[0] + v3[1] + v3[2]).epsilon(1e-13));
  CHECK(WeightFunctional::scaled(f, -0.5)(v3) == doctest::Approx(-0.5 * f(v3)).epsilon(1e-13));
}

TEST_CASE("generator images cache exact inverses") {
  const RepPoint rep = fixture_rep("schottky-basic");
  REQUIRE(rep.rank() == 2);
  for (Letter a : {Letter(0), Letter(2)}) {
    const CMat prod = (rep.image(a) * rep.image(inverse_letter(a))).mat();
    CHECK(std::abs(prod.at(0, 1)) <= 1e-12);
    CHECK(std::abs(prod.at(1, 0)) <= 1e-12);
    CHECK(std::abs(prod.at(0, 0) - prod.at(1, 1)) <= 1e-12);
  }
}

TEST_CASE("word products stay normalized over long words") {
  const RepPoint rep = fixture_rep("schottky-basic");
  std::string long_word;
  for (int i = 0; i < 24; ++i) long_word += (i % 2 ? "ab" : "aB");
  const ProjMatrix g = evaluate(rep, w(long_word));
  CHECK(std::fabs(log_det(g.mat()).log_abs) <= 1e-9);
}

TEST_CASE("periods: translation lengths, powers, conjugation") {
  const RepPoint rep = fixture_rep("schottky-basic");
  const WeightFunctional a1 = WeightFunctional::simple_root(2, 1);
  // the fixture is built from translation lengths 3.0 and 3.2
  CHECK(period(rep, a1, w("a")) == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(period(rep, a1, w("b")) == doctest::Approx(3.2).epsilon(1e-9));

  const double p1 = period(rep, a1, w("ab"));
  CHECK(period(rep, a1, w("abab")) == doctest::Approx(2.0 * p1).epsilon(1e-10));
  for (const char* outer : {"b", "aB", "bba"}) {
    const Word u = w(outer);
    const Word conj = reduce(concat(concat(u, w("ab")), inverse_word(u)));
    CHECK(period(rep, a1, conj) == doctest::Approx(p1).epsilon(1e-10));
  }
  // the jordan projection of an inverse is the reversal: a1 is symmetric
  CHECK(period(rep, a1, inverse_word(w("ab"))) == doctest::Approx(p1).epsilon(1e-10));
}

TEST_CASE("period engine matches the dense solvers on short words") {
  const RepPoint rep = fixture_rep("schottky-complex");
  PeriodEngine engine(rep, {1});
  for (const char* s : {"ab", "aB", "abab", "aabb"}) {
    const Word word = w(s);
    double s1_jordan = 0.0, s1_cartan = 0.0;
    engine.jordan_partials(word.letters, &s1_jordan);
    engine.cartan_partials(word.letters, &s1_cartan);
    const ProjMatrix g = evaluate(rep, word);
    CHECK(s1_jordan == doctest::Approx(jordan(g)[0]).epsilon(1e-9));
    CHECK(s1_cartan == doctest::Approx(cartan(g)[0]).epsilon(1e-9));
    const std::vector<double> jv = engine.jordan_vector(word.letters);
    REQUIRE(jv.size() == 2);
    CHECK(jv[0] == doctest::Approx(jordan(g)[0]).epsilon(1e-9));
  }
}

TEST_CASE("symmetric lift preserves the first root and doubles the weight") {
  const Family base = fixture_family("bend-basic");
  const Family lift3 = fixture_family("bend-sym3");
  const RepPoint r2 = base.at(cx(0.0, 0.0));
  const RepPoint r3 = lift3.at(cx(0.0, 0.0));
  REQUIRE(r3.dim() == 3);
  const WeightFunctional a1_2 = WeightFunctional::simple_root(2, 1);
  const WeightFunctional a1_3 = WeightFunctional::simple_root(3, 1);
  const WeightFunctional w1_2 = WeightFunctional::fundamental_weight(2, 1);
  const WeightFunctional w1_3 = WeightFunctional::fundamental_weight(3, 1);
  for (const char* s : {"a", "b", "ab", "aB", "abb"}) {
    CHECK(period(r3, a1_3, w(s)) == doctest::Approx(period(r2, a1_2, w(s))).epsilon(1e-9));
    CHECK(period(r3, w1_3, w(s)) == doctest::Approx(2.0 * period(r2, w1_2, w(s))).epsilon(1e-9));
  }
}

TEST_CASE("exterior lift trades the first root for the second") {
  const Family lift3 = fixture_family("bend-sym3");
  const Family wl = wedge_lift_family(lift3, 2);
  const RepPoint r3 = lift3.at(cx(0.0, 0.0));
  const RepPoint rw = wl.at(cx(0.0, 0.0));
  REQUIRE(rw.dim() == 3);
  const WeightFunctional a1 = WeightFunctional::simple_root(3, 1);
  const WeightFunctional a2 = WeightFunctional::simple_root(3, 2);
  for (const char* s : {"ab", "aab", "abB"}) {
    CHECK(period(rw, a1, w(s)) == doctest::Approx(period(r3, a2, w(s))).epsilon(1e-9));
  }
}

TEST_CASE("schottky validation rejects broken data") {
  SchottkyData s = schottky_line_data(3.0, 3.2, 5.0);
  CHECK_NOTHROW(validate_schottky(s));
  SchottkyData overlap = s;
  overlap.disks[0].radius = 10.0;
  CHECK_THROWS_AS(validate_schottky(overlap), ConfigError);
  SchottkyData bad_twists = s;
  bad_twists.twists = {0.4};
  CHECK_THROWS_AS(validate_schottky(bad_twists), ConfigError);
  CHECK_THROWS_AS((void)schottky_line_data(-1.0, 3.2, 5.0), ConfigError);
}

TEST_CASE("linear growth certificate passes the fixtures, fails the control") {
  const AnosovCertificate good = anosov_certificate(fixture_rep("schottky-basic"), 1, 9);
  CHECK(good.pass);
  CHECK(good.mu_hat > 0.5);
  CHECK(good.min_by_length.size() == 9);
  // minimum singular gaps must grow essentially linearly along the window
  CHECK(good.min_by_length.back() >
        good.min_by_length.front() + 0.5 * good.mu_hat * (9 - 1));

  const AnosovCertificate bad = anosov_certificate(fixture_rep("counter-elliptic"), 1, 9);
  CHECK_FALSE(bad.pass);
}

TEST_CASE("hyperconvexity certificate on the dimension-3 lift") {
  const HyperconvexityReport rep = hyperconvexity_certificate(fixture_rep("bend-sym3"), 128);
  CHECK(rep.pass);
  CHECK(rep.min_gap > 1e-6);
  CHECK(rep.lines >= 3);
  CHECK(rep.triples == 128);
  CHECK_FALSE(rep.witness.empty());
}

TEST_CASE("fixed lines are genuinely fixed and proximal") {
  const RepPoint rep = fixture_rep("bend-sym3");
  for (const char* s : {"a", "ab", "aBB"}) {
    const FixedFlagData flag = fixed_line(rep, w(s));
    REQUIRE(flag.line.size() == 3);
    CHECK(flag.log_gap_line > 0.0);
    const CMat m = evaluate(rep, cyclic_reduce(w(s))).mat();
    // image of the line stays parallel to it: normalized cross terms vanish
    std::vector<cx> img(3, cx(0.0, 0.0));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) img[static_cast<size_t>(i)] += m.at(i, j) * flag.line[static_cast<size_t>(j)];
    cx lead(0.0, 0.0);
    double best = -1.0;
    for (int i = 0; i < 3; ++i)
      if (std::abs(flag.line[static_cast<size_t>(i)]) > best) {
        best = std::abs(flag.line[static_cast<size_t>(i)]);
        lead = img[static_cast<size_t>(i)] / flag.line[static_cast<size_t>(i)];
      }
    for (int i = 0; i < 3; ++i)
      CHECK(std::abs(img[static_cast<size_t>(i)] - lead * flag.line[static_cast<size_t>(i)]) <=
            1e-8 * std::abs(lead));
  }
}

TEST_CASE("limit cone samples are unit mean-zero directions with positive roots") {
  const RepPoint rep = fixture_rep("schottky-basic");
  const WeightFunctional a1 = WeightFunctional::simple_root(2, 1);
  const LimitConeSample cone = limit_cone(rep, {a1}, 8);
  REQUIRE_FALSE(cone.directions.empty());
  REQUIRE(cone.min_values.size() == 1);
  CHECK(cone.min_values[0] > 0.0);
  for (const auto& dir : cone.directions) {
    REQUIRE(dir.size() == 2);
    double nrm = 0.0, mean = 0.0;
    for (double x : dir) nrm += x * x, mean += x;
    CHECK(std::sqrt(nrm) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::fabs(mean) <= 1e-12);
    CHECK(dir[0] >= dir[1]);
  }
}

TEST_CASE("bending grids: flags, mirror symmetry, and file round trip") {
  const Family fam = fixture_family("bend-basic");
  CHECK(fam.holomorphic);
  CHECK(fam.conj_symmetric);
  GridGeometry geo = fixture_geometry("bend-basic");
  geo.ns = geo.nt = 2;
  const ParamGrid grid = build_grid(fam, geo);
  CHECK(grid.cols() == 5);
  CHECK(grid.rows() == 5);

  // the mirror nodes carry exactly conjugated generators
  const CMat top = grid.node(1, 1).gens[1].mat();
  const CMat bot = grid.node(1, -1).gens[1].mat();
  CHECK((bot - top.conjugate()).max_abs() == 0.0);
  // the center equals the family evaluated at the center parameter
  CHECK((grid.node(0, 0).gens[0].mat() - fam.at(grid.z(0, 0)).gens[0].mat()).max_abs() == 0.0);

  const std::string path =
      (std::filesystem::temp_directory_path() / "anosovlab-test-grid.json").string();
  save_grid(grid, path);
  const ParamGrid loaded = load_grid(path);
  CHECK(loaded.family_name == grid.family_name);
  CHECK(loaded.holomorphic == grid.holomorphic);
  CHECK(loaded.conj_symmetric == grid.conj_symmetric);
  CHECK(loaded.geo.ds == grid.geo.ds);
  REQUIRE(loaded.nodes.size() == grid.nodes.size());
  double max_diff = 0.0;
  for (size_t n = 0; n < grid.nodes.size(); ++n)
    for (int g = 0; g < grid.rank; ++g)
      max_diff = std::max(
          max_diff, (loaded.nodes[n].gens[static_cast<size_t>(g)].mat() -
                     grid.nodes[n].gens[static_cast<size_t>(g)].mat()).max_abs());
  CHECK(max_diff == 0.0);  // grids reload bit for bit
  std::filesystem::remove(path);
}

TEST_CASE("the holomorphy probe rejects a false declaration") {
  Family control = fixture_family("control-antiholo");
  CHECK_FALSE(control.holomorphic);
  GridGeometry geo = fixture_geometry("bend-basic");
  geo.ns = geo.nt = 1;
  CHECK_NOTHROW((void)build_grid(control, geo));  // honest flags pass
  control.holomorphic = true;
  CHECK_THROWS_AS((void)build_grid(control, geo), NumericError);
}
