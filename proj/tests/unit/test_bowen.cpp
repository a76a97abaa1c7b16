// transfer-operator dimension, limit clouds, and box counting: structural
// checks on the discretization, the monotonicity laws of the spectral radius,
// calibration on synthetic clouds, and equivariance of the sampled set.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "anosov/bowen.hpp"
#include "anosov/errors.hpp"
#include "anosov/fixtures.hpp"
#include "anosov/reps.hpp"

using namespace anosov;

namespace {

// moebius action of a projective 2x2 matrix on the plane chart
cx act(const CMat& m, cx z) {
  return (m.at(0, 0) * z + m.at(0, 1)) / (m.at(1, 0) * z + m.at(1, 1));
}

LimitCloud segment_cloud(int n) {
  LimitCloud c;
  for (int i = 0; i < n; ++i) {
    c.x.push_back(static_cast<double>(i) / (n - 1));
    c.y.push_back(0.25);
    c.chart.push_back(0);
  }
  return c;
}

}  // namespace

TEST_CASE("transfer discretization has full admissible structure") {
  const SchottkyData s = fixture_schottky("schottky-basic");
  const TransferDiscretization d = discretize_schottky(s, 64);
  REQUIRE(d.nodes > 0);
  CHECK(d.samples_per_circle >= 64);
  CHECK(d.nodes == 4 * d.samples_per_circle);
  REQUIRE(d.row_ptr.size() == static_cast<size_t>(d.nodes) + 1);
  for (int row = 0; row < d.nodes; ++row) {
    CHECK(d.row_ptr[row + 1] - d.row_ptr[row] == 3);  // 2k - 1 admissible branches
    for (int e = d.row_ptr[row]; e < d.row_ptr[row + 1]; ++e) {
      CHECK(d.cols[static_cast<size_t>(e)] >= 0);
      CHECK(d.cols[static_cast<size_t>(e)] < d.nodes);
      CHECK(d.deriv[static_cast<size_t>(e)] > 0.0);
    }
  }
}

TEST_CASE("spectral radius at zero counts the branches") {
  const TransferDiscretization d = discretize_schottky(fixture_schottky("schottky-basic"), 64);
  CHECK(transfer_radius(d, 0.0) == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("spectral radius decreases strictly in the exponent") {
  const TransferDiscretization d = discretize_schottky(fixture_schottky("schottky-basic"), 64);
  const double r1 = transfer_radius(d, 0.10);
  const double r2 = transfer_radius(d, 0.30);
  const double r3 = transfer_radius(d, 0.60);
  CHECK(r1 > r2);
  CHECK(r2 > r3);
}

TEST_CASE("dimension is stable under resolution doubling") {
  const SchottkyData s = fixture_schottky("schottky-basic");
  const BowenResult a = bowen_dimension(s, 64);
  const BowenResult b = bowen_dimension(s, 128);
  CHECK(std::fabs(a.dimension - b.dimension) < 1e-4);
  CHECK(b.samples_per_circle > a.samples_per_circle);
}

TEST_CASE("shrinking every disk shrinks the dimension") {
  const SchottkyData s = fixture_schottky("schottky-basic");
  SchottkyData thin = s;
  for (auto& d : thin.disks) d.radius *= 0.8;
  const double full = bowen_dimension(s, 96).dimension;
  const double small = bowen_dimension(thin, 96).dimension;
  CHECK(small < full);
}

TEST_CASE("fuchsian dimensions land in the expected ranges") {
  const BowenResult real = bowen_dimension(fixture_schottky("schottky-basic"), 96);
  CHECK(real.dimension > 0.0);
  CHECK(real.dimension < 1.0);  // real schottky data lives on a circle
  const BowenResult twisted = bowen_dimension(fixture_schottky("schottky-complex"), 96);
  CHECK(twisted.dimension > 0.0);
  CHECK(twisted.dimension < 2.0);
  CHECK(real.rho_at_zero == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("similarity transport leaves the dimension unchanged") {
  const SchottkyData s = fixture_schottky("schottky-basic");
  SchottkyData moved = s;
  const cx a(0.6, 0.45);  // rotate, scale, translate the whole configuration
  for (auto& d : moved.disks) {
    d.center = a * d.center + cx(0.3, -0.7);
    d.radius *= std::abs(a);
  }
  const double base = bowen_dimension(s, 96).dimension;
  const double transported = bowen_dimension(moved, 96).dimension;
  CHECK(std::fabs(base - transported) <= 1e-3);
}

TEST_CASE("rank-one data degenerates to dimension zero") {
  const BowenResult r = bowen_dimension(fixture_schottky("cyclic"), 64);
  CHECK(r.dimension == 0.0);
}

TEST_CASE("limit cloud lies inside the disks and is equivariant") {
  const RepPoint rep = fixture_rep("schottky-basic");
  const SchottkyData s = fixture_schottky("schottky-basic");
  const LimitCloud cloud = sample_limit_set(rep, 10);
  REQUIRE(cloud.size() > 500);

  for (std::size_t i = 0; i < cloud.size(); ++i) {
    REQUIRE(cloud.chart[i] == 0);       // the fixture set is bounded
    CHECK(std::fabs(cloud.y[i]) <= 1e-9);  // and real
    const cx z(cloud.x[i], cloud.y[i]);
    double inside = 1e300;
    for (const auto& d : s.disks) inside = std::min(inside, std::abs(z - d.center) - d.radius);
    CHECK(inside <= 1e-9);
  }

  // generators permute the limit set: images of sampled points have close
  // neighbors in the sampled set
  const CMat g = rep.image(0).mat();
  double worst = 0.0;
  for (std::size_t i = 0; i < cloud.size(); i += cloud.size() / 40) {
    const cx image = act(g, cx(cloud.x[i], cloud.y[i]));
    double best = 1e300;
    for (std::size_t j = 0; j < cloud.size(); ++j)
      best = std::min(best, std::abs(image - cx(cloud.x[j], cloud.y[j])));
    worst = std::max(worst, best);
  }
  CHECK(worst <= 1e-4);
}

TEST_CASE("cloud census saturates as the table deepens") {
  const RepPoint rep = fixture_rep("schottky-basic");
  const std::size_t n12 = sample_limit_set(rep, 12).size();
  const std::size_t n13 = sample_limit_set(rep, 13).size();
  // at the dedup resolution the census stabilizes within a few percent
  CHECK(std::fabs(static_cast<double>(n13) - static_cast<double>(n12)) <=
        0.05 * static_cast<double>(n13));
}

TEST_CASE("box dimension calibrates on a segment") {
  const BoxDimension b = box_dimension(segment_cloud(10000));
  CHECK(std::fabs(b.value - 1.0) <= 0.05);
  REQUIRE(b.log_inv_eps.size() >= 4);
  CHECK(b.log_inv_eps.size() == b.log_count.size());
  CHECK(std::is_sorted(b.log_inv_eps.begin(), b.log_inv_eps.end()));
}

TEST_CASE("box dimension rejects starved clouds") {
  CHECK_THROWS_AS((void)box_dimension(segment_cloud(200)), NumericError);
}

TEST_CASE("box dimension tracks the transfer dimension on a fixture") {
  const RepPoint rep = fixture_rep("schottky-basic");
  const BoxDimension box = box_dimension(sample_limit_set(rep, 13));
  const double spectral = bowen_dimension(fixture_schottky("schottky-basic"), 96).dimension;
  CHECK(std::fabs(box.value - spectral) <= 5e-2);
}

TEST_CASE("cloud csv and pgm renderings are written") {
  const RepPoint rep = fixture_rep("schottky-basic");
  const LimitCloud cloud = sample_limit_set(rep, 9);
  const auto dir = std::filesystem::temp_directory_path();
  const std::string csv = (dir / "anosovlab-test-cloud.csv").string();
  const std::string pgm = (dir / "anosovlab-test-cloud.pgm").string();

  write_cloud_csv(cloud, csv);
  std::ifstream in(csv);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header == "x,y,chart");
  std::size_t rows = 0;
  std::string line;
  while (std::getline(in, line)) rows += !line.empty();
  CHECK(rows == cloud.size());

  render_cloud_pgm(cloud, 64, 48, pgm);
  std::ifstream img(pgm, std::ios::binary);
  REQUIRE(img.good());
  std::string magic;
  img >> magic;
  CHECK(magic == "P5");
  int w = 0, h = 0, depth = 0;
  img >> w >> h >> depth;
  CHECK(w == 64);
  CHECK(h == 48);
  CHECK(depth == 255);
  std::filesystem::remove(csv);
  std::filesystem::remove(pgm);
}
