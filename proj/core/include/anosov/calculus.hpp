#pragma once

// second-order calculus on parameter grids: per-node growth summaries
// (entropy, intersection with the center, renormalized intersection), scalar
// fields over the grid, fourth-order finite-difference hessians, and the
// identity checks built from them (pressure form positivity, vanishing along
// imaginary directions, pluriharmonicity, and the entropy-pressure master
// identity).

#include <cstdint>
#include <string>
#include <vector>

#include "anosov/reps.hpp"
#include "anosov/spectrum.hpp"

namespace anosov {

struct NodeSummary {
  double h = 0.0;  // entropy of the node's own marked spectrum
  double i = 0.0;  // intersection i(center, node)
  double j = 0.0;  // renormalized (h_node / h_center) * i
};

struct GridSummaries {
  GridGeometry geo;
  std::string family_name, functional;
  std::vector<NodeSummary> nodes;  // row-major, it slow, same layout as the grid
  std::size_t classes_used = 0;
  std::size_t dropped = 0;

  int cols() const { return 2 * geo.ns + 1; }
  int rows() const { return 2 * geo.nt + 1; }
  const NodeSummary& at(int is, int it) const {
    return nodes[static_cast<size_t>(it + geo.nt) * static_cast<size_t>(cols()) +
                 static_cast<size_t>(is + geo.ns)];
  }
};

// evaluates one period column per node over a shared class table and reduces
// each against the center column. the center node summary is exact by
// construction: i = j = 1.
GridSummaries grid_summaries(const ParamGrid& grid, const WeightFunctional& fn, int max_len,
                             std::uint64_t budget = 1ull << 27, int threads = 0);

struct ScalarField {
  GridGeometry geo;
  std::vector<double> v;  // row-major, it slow

  double at(int is, int it) const {
    return v[static_cast<size_t>(it + geo.nt) * static_cast<size_t>(2 * geo.ns + 1) +
             static_cast<size_t>(is + geo.ns)];
  }
};

enum class SummaryKind { Entropy, Intersection, Renormalized };
ScalarField field_of(const GridSummaries& s, SummaryKind kind);

// derivatives at the center node from fourth-order stencils; needs ns, nt >= 2
struct Stencil {
  double value = 0.0;
  double d_s = 0.0, d_t = 0.0;
  double d_ss = 0.0, d_tt = 0.0, d_st = 0.0;
};
Stencil stencil(const ScalarField& f);

// hessian of the renormalized intersection at its minimum: the pressure
// quadratic form restricted to the two grid directions
struct PressureForm {
  double ss = 0.0, st = 0.0, tt = 0.0;
};
PressureForm pressure_form(const ScalarField& j_field);

// |i_ss + i_tt| / (|i_ss| + |i_tt| + 1e-6) at the center
double pluriharmonicity_residual(const ScalarField& i_field);

struct MasterIdentity {
  double lhs = 0.0;       // h_tt measured directly
  double rhs = 0.0;       // h0 * j_ss - h_ss + 2 h_s^2 / h0
  double residual = 0.0;  // |lhs - rhs| / max(|lhs|, |h0 j_ss|, |h_ss|, floor)
  bool sign_match = false;
  bool trusted = false;   // both sides rise above the estimator noise floor
  double h0 = 0.0, h_s = 0.0, h_ss = 0.0, h_tt = 0.0;
  double j_ss = 0.0, i_ss = 0.0, i_tt = 0.0;
};
// cross-checks the entropy hessian along the imaginary axis against the
// pressure form measured independently from the renormalized intersection.
// at a real center of a conjugation-symmetric holomorphic family, three
// facts combine: j is critical along the real axis (i_s = -h_s/h0), the
// intersection is pluriharmonic (i_tt = -i_ss), and the pressure form
// vanishes on the imaginary axis (j_tt = 0). eliminating i from
// j_ss = h_ss/h0 - 2 h_s^2/h0^2 + i_ss and j_tt = h_tt/h0 - i_ss gives
//   h_tt = h0 * j_ss - h_ss + 2 h_s^2 / h0,
// which collapses to h_tt = j_ss when h is constant along the real locus.
MasterIdentity master_identity_check(const ScalarField& h_field, const ScalarField& i_field,
                                     const ScalarField& j_field, double floor = 1e-3);

struct DegenerateDirectionReport {
  double max_t = 0.0;  // max over sampled classes of |d/dt (h * period)| at the center
  double max_s = 0.0;  // the same along the real axis, for contrast
  int classes = 0;
};
// first differences of h(node) * period(node, class) along both axes over all
// primitive classes of core length <= sample_len; on a conj-symmetric grid the
// t-axis value is exactly zero because mirrored nodes carry equal periods
DegenerateDirectionReport degenerate_direction_check(const ParamGrid& grid,
                                                     const GridSummaries& sums,
                                                     const WeightFunctional& fn,
                                                     int sample_len = 5);

}  // namespace anosov
