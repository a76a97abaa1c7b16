#pragma once

// hausdorff dimension of schottky limit sets two independent ways: the
// spectral (transfer operator) route discretizing the expanding boundary map
// of the disk system, and direct box counting on a sampled limit cloud.
//
// the expanding map sends disk 2i by generator i and disk 2i+1 by its
// inverse, so inverse branches pull any point of the common exterior into
// every disk except the partner of the branch. the operator is collocated on
// cylinder points, the images of disk centers under admissible branch words:
// the limit set lies strictly inside the disks, so nodes refined by the
// dynamics track it with an error that shrinks with the cylinder diameter.
// the dimension is the unique s in [0, 2] where the perron root of the
// weighted transition operator crosses 1.

#include <cstdint>
#include <string>
#include <vector>

#include "anosov/reps.hpp"

namespace anosov {

// fixed sparse skeleton of the discretized transfer operator: one row per
// cylinder node, one entry per admissible inverse branch. the branch targets
// and base derivatives are independent of the dimension parameter, so a
// bisection only re-weights entries by pow(deriv, s).
struct TransferDiscretization {
  int nodes = 0;                 // 2k disks x samples_per_circle
  int samples_per_circle = 0;    // cylinder nodes per disk, (2k-1)^(depth-1)
  std::vector<int> cols;         // flattened (row, branch) -> source node
  std::vector<double> deriv;     // spherical |B'(x)| per entry, positive
  std::vector<int> row_ptr;      // row r entries in [row_ptr[r], row_ptr[r+1])
};

// samples_per_circle is a resolution budget: the cylinder depth is the
// smallest giving at least that many nodes per disk (capped near 2^20 total)
TransferDiscretization discretize_schottky(const SchottkyData& s, int samples_per_circle = 192);

// perron root by power iteration in the sup norm; throws NumericError if the
// iteration fails to settle within max_iter
double transfer_radius(const TransferDiscretization& d, double s, double tol = 1e-12,
                       int max_iter = 3000);

struct BowenResult {
  double dimension = 0.0;
  double rho_at_zero = 0.0;  // perron root at s = 0, equals 2k - 1 for rank k
  int samples_per_circle = 0;
};

// bisects transfer_radius(s) = 1 on [0, 2]; a radius already <= 1 at s = 0
// (rank-one data, finite limit set) gives dimension 0
BowenResult bowen_dimension(const SchottkyData& s, int samples_per_circle = 192,
                            int bisect_iters = 48);

// attracting fixed points of every cyclic rotation of the primitive
// conjugacy classes of core length <= max_len (the periodic points of the
// boundary map), in affine charts of the projective line: chart 0 carries
// z = v0/v1 with |z| <= 8, chart 1 carries 1/z for the far points. points
// closer than 1e-12 collapse to the earliest survivor, so deep tables
// saturate at the census of 1e-12-separated points of the limit set.
struct LimitCloud {
  std::vector<double> x, y;
  std::vector<int> chart;
  std::size_t size() const { return x.size(); }
};

LimitCloud sample_limit_set(const RepPoint& rep, int max_len, std::uint64_t budget = 1ull << 24);

// header "x,y,chart", 17 significant digits
void write_cloud_csv(const LimitCloud& cloud, const std::string& path);

struct BoxDimension {
  double value = 0.0;
  double spread = 0.0;                       // max adjacent-scale slope deviation
  std::vector<double> log_inv_eps, log_count;  // the usable scales entering the fit
};

// dyadic box counting over the chart-0 points; scales are usable while the
// occupied count sits in [8, points/4]. throws NumericError with fewer than
// min_scales usable scales.
BoxDimension box_dimension(const LimitCloud& cloud, int min_scales = 4);

// accumulates chart-0 points on a width x height canvas (5% margin) and
// writes 8-bit grayscale, brightness 64 per hit saturating at 255
void render_cloud_pgm(const LimitCloud& cloud, int width, int height, const std::string& path);

}  // namespace anosov
