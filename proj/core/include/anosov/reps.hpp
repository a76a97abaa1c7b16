#pragma once

// marked representations of F_k into PGL_d(C): weight functionals on the model
// flat, generator tuples, holomorphic families, parameter grids, and the
// certificates (linear singular value growth, hyperconvexity transversality).
//
// long word products lose their small singular values to rounding, so all
// period/certificate evaluation goes through exterior-power ladders: the top
// log eigenvalue (or singular value) of Lambda^k applied to pre-lifted
// generators gives the partial sums S_k = log|lambda_1 ... lambda_k| with
// relative accuracy independent of the spectral spread.

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "anosov/linalg.hpp"
#include "anosov/words.hpp"

namespace anosov {

// linear functional on the mean-zero model flat of gl_d, evaluated on
// non-increasing log vectors; coefficients are canonicalized to mean zero
class WeightFunctional {
 public:
  static WeightFunctional simple_root(int d, int i);        // a_i = x_i - x_{i+1}, 1-based i
  static WeightFunctional fundamental_weight(int d, int k);  // w_k = x_1 + ... + x_k
  static WeightFunctional from_coeffs(std::vector<double> c, std::string name = "");
  static WeightFunctional scaled(const WeightFunctional& f, double s);

  int dim() const { return static_cast<int>(coeffs_.size()); }
  const std::string& name() const { return name_; }
  std::span<const double> coeffs() const { return coeffs_; }
  // value as sum over partial sums: sum_k steps[k-1] * S_k, k = 1..d-1
  std::span<const double> steps() const { return steps_; }
  std::vector<int> needed_partials() const;  // k with steps[k-1] != 0

  double operator()(const CartanVector& v) const;
  double eval_partials(std::span<const double> s_sums) const;  // aligned with 1..d-1

 private:
  std::string name_;
  std::vector<double> coeffs_;  // mean zero
  std::vector<double> steps_;   // size d-1
};

// marked representation: one projective matrix per generator, inverses cached
struct RepPoint {
  std::string id;
  std::vector<ProjMatrix> gens;
  std::vector<ProjMatrix> invs;

  static RepPoint of(std::string id, std::vector<ProjMatrix> generators);
  int rank() const { return static_cast<int>(gens.size()); }
  int dim() const { return gens.empty() ? 0 : gens[0].dim(); }
  const ProjMatrix& image(Letter a) const { return (a & 1) ? invs[static_cast<size_t>(a >> 1)] : gens[static_cast<size_t>(a >> 1)]; }
};

// product over the word, renormalized every 8 multiplications
ProjMatrix evaluate(const RepPoint& rep, std::span<const Letter> word);
ProjMatrix evaluate(const RepPoint& rep, const Word& word);

// jordan/cartan partial-sum evaluation through exterior lifts
class PeriodEngine {
 public:
  PeriodEngine(const RepPoint& rep, std::vector<int> needed_k);

  int dim() const { return dim_; }
  std::span<const int> needed() const { return needed_; }

  // partial sums S_k for the registered k, word assumed freely reduced
  void jordan_partials(std::span<const Letter> w, double* out);
  void cartan_partials(std::span<const Letter> w, double* out);
  // full mean-zero jordan vector (requires all k = 1..d-1 registered)
  std::vector<double> jordan_vector(std::span<const Letter> w);

 private:
  struct Lift {
    int k = 0, n = 0;                  // exterior degree, lifted dimension
    std::vector<std::vector<cx>> img;  // one matrix per letter code
  };
  int dim_ = 0, rank_ = 0;
  std::vector<int> needed_;
  std::vector<Lift> lifts_;
  EigenWorkspace ws_;
  std::vector<cx> prod_, tmp_;
  double product_top_log(const Lift& lift, std::span<const Letter> w, bool singular);
};

// period of the conjugacy class of w: phi(jordan of the cyclically reduced core)
double period(const RepPoint& rep, const WeightFunctional& phi, const Word& w);

// ------------------------------------------------------------ certificates

struct AnosovCertificate {
  int root = 1;          // simple root index a_i
  int max_len = 0;
  double mu_hat = 0.0;   // fitted growth rate of min_by_length over the top window
  double c_hat = 0.0;    // smallest additive constant with m(n) >= mu_hat n - c_hat
  double mu_min = 0.0;
  bool pass = false;
  std::vector<double> min_by_length;
};

AnosovCertificate anosov_certificate(const RepPoint& rep, int root_index, int max_len,
                                     double mu_min = 0.05, std::uint64_t budget = 1ull << 27);

struct HyperconvexityReport {
  double min_gap = 0.0;  // smallest normalized transversality gap over sampled triples
  int triples = 0;
  int lines = 0;
  bool pass = false;
  std::string witness;   // classes realizing the minimum
};

// samples triples of distinct attracting flags from short primitive classes and
// measures the (1,1,d-2) transversality gap: |det[line_x | line_y | block_z]|
// divided by the product of the pairwise sine distances, which removes the
// unavoidable first-order collapse when two sampled boundary points are close
// (for d = 3 the normalized quantity is exactly the Vandermonde-free residual,
// constant on the model curve, so a positive lower bound is meaningful)
HyperconvexityReport hyperconvexity_certificate(const RepPoint& rep, int triples = 256,
                                                std::uint64_t seed = 20240901, int core_len_cap = 7,
                                                double gap_min = 1e-6);

struct FixedFlagData {
  std::vector<cx> line;                     // unit attracting eigenvector
  std::vector<std::vector<cx>> top_block;   // orthonormal basis of the attracting (d-2)-subspace
  double log_gap_line = 0.0;                // log |lambda_1 / lambda_2|
  double log_gap_block = 0.0;               // log |lambda_{d-2} / lambda_{d-1}|
};
// throws NumericError("non-proximal ...") when the needed eigenvalue gaps vanish
FixedFlagData fixed_line(const RepPoint& rep, const Word& cls);

struct LimitConeSample {
  std::vector<std::vector<double>> directions;  // unit mean-zero jordan vectors, deduplicated
  std::vector<double> min_values;               // per functional: min over directions
};
LimitConeSample limit_cone(const RepPoint& rep, const std::vector<WeightFunctional>& fns,
                           int max_len, std::uint64_t budget = 1ull << 24);

// ------------------------------------------------------------ families

struct SchottkyDisk {
  cx center;
  double radius = 0.0;
};

// generator i maps the exterior of disks[2i] onto the interior of disks[2i+1];
// twists rotate the pairing inside PSL_2(C) while keeping the same disks
struct SchottkyData {
  std::vector<SchottkyDisk> disks;
  std::vector<double> twists;
  int rank() const { return static_cast<int>(disks.size()) / 2; }
};

// throws ConfigError unless the 2k disks are pairwise disjoint with margin
void validate_schottky(const SchottkyData& s);
RepPoint schottky_rep(const SchottkyData& s, std::string id);

// rank-2 data on the real line: generator i has translation length l_i, disk
// pairs centered at -sep/2 -+ 1 and +sep/2 -+ 1
SchottkyData schottky_line_data(double l1, double l2, double separation);

struct Family {
  std::string name;
  int rank = 0, dim = 0;
  bool holomorphic = false;
  bool conj_symmetric = false;
  std::function<RepPoint(cx)> at;
};

Family constant_family(const RepPoint& rep, std::string name);
// z -> rep with the last generator conjugated by exp(z X); holomorphic always,
// conj-symmetric when the base and X are real
Family bending_family(const RepPoint& base, const CMat& X, std::string name);
// nodewise symmetric power on the unitary-compatible basis (the plain monomial
// lift conjugated by diag(sqrt(binomial))), so lifted rotations stay isometric
Family sym_lift_family(const Family& base, int d);
Family wedge_lift_family(const Family& base, int k);
// control family evaluating at conj(z): smooth but not holomorphic
Family antiholomorphic_control(const Family& base);

struct GridGeometry {
  double s0 = 0.0, t0 = 0.0;
  double ds = 0.0, dt = 0.0;
  int ns = 0, nt = 0;  // nodes run is in [-ns, ns], it in [-nt, nt]
};

class ParamGrid {
 public:
  GridGeometry geo;
  std::string family_name;
  int rank = 0, dim = 0;
  bool holomorphic = false, conj_symmetric = false;
  std::vector<RepPoint> nodes;  // row-major, it slow index

  int cols() const { return 2 * geo.ns + 1; }
  int rows() const { return 2 * geo.nt + 1; }
  std::size_t index(int is, int it) const {
    return static_cast<std::size_t>(it + geo.nt) * static_cast<std::size_t>(cols()) +
           static_cast<std::size_t>(is + geo.ns);
  }
  const RepPoint& node(int is, int it) const { return nodes[index(is, it)]; }
  cx z(int is, int it) const { return {geo.s0 + is * geo.ds, geo.t0 + it * geo.dt}; }
};

// builds all nodes, then verifies the declared flags: a Cauchy-Riemann probe
// for holomorphic, exact mirror conjugation for conj_symmetric
ParamGrid build_grid(const Family& fam, const GridGeometry& geo);

void save_grid(const ParamGrid& grid, const std::string& path);
ParamGrid load_grid(const std::string& path);

}  // namespace anosov
