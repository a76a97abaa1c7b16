#pragma once

// period spectra over conjugacy-class tables and the growth statistics built
// on them: entropy, orbit pressure, gibbs ratios, intersection numbers and
// their renormalized form, and dirichlet-series critical exponents.
//
// every estimator works on fixed rank ladders (order statistics at ranks that
// depend only on the table size), so estimates vary continuously with the
// representation and scale exactly: doubling every period halves the fitted
// entropy bit for bit.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "anosov/reps.hpp"
#include "anosov/words.hpp"

namespace anosov {

// one period column per (representation, functional) pair, class order
// matching the ClassList; entries are lambda-periods phi(lambda(rho(gamma)))
struct SpectrumTable {
  ClassList classes;
  std::vector<std::string> column_names;          // "<rep id>:<functional>"
  std::vector<std::vector<double>> columns;       // column-major over rows
  std::vector<std::uint32_t> class_of_row;        // row -> class index
  std::size_t skipped = 0;                        // classes dropped (all columns)

  std::size_t rows() const { return class_of_row.size(); }
  std::span<const double> column(std::size_t c) const { return columns[c]; }
};

// evaluates one period column in class order; classes whose eigensolve fails
// are recorded as quiet NaN. throws NumericError when more than 0.1% fail.
std::vector<double> period_column(const ClassList& classes, const RepPoint& rep,
                                  const WeightFunctional& fn, int threads = 0,
                                  std::size_t* skipped = nullptr);

// builds the full table for every (rep, functional) pair, drops rows with a
// failed entry, and sorts rows by the base column ascending (ties by class
// index, so the order is deterministic)
SpectrumTable build_spectrum(ClassList classes, std::span<const RepPoint> reps,
                             std::span<const WeightFunctional> fns, std::size_t base_column = 0,
                             int threads = 0);

// header "class,core_length,<columns...>", one row per class in table order,
// 17 significant digits; commas inside labels are replaced by '_'
void write_spectrum_csv(const SpectrumTable& table, const std::string& path);

// a fitted growth value with its per-window diagnostics
struct Estimate {
  double value = 0.0;
  double spread = 0.0;                 // max window deviation from the value
  std::vector<double> window_values;   // one fitted slope (or root) per window
  std::vector<double> window_anchors;  // window centers used for extrapolation
  std::string method;
};

// largest period T such that the table provably lists every class with
// period <= T: a class of core length m has period >= rate * m where rate is
// the per-letter floor min_i period_i / core_len_i, so nothing with period
// below rate * (max_len + 1) can be missing. the column is in class order;
// non-finite rows are skipped.
double completeness_horizon(const ClassList& classes, std::span<const double> periods);

// exponential growth rate of the count N(T) of classes with period <= T,
// fitted as log(count) against the period on four staggered windows of the
// period axis and extrapolated in 1/period. the windows stay below the
// completeness horizon, so the fitted counts carry no truncation bias. needs
// >= 500 positive finite periods sorted ascending.
Estimate entropy_growth(std::span<const double> sorted_periods, double horizon);

// growth rate of the prefix log-sum-exp of the potential along the same
// windows: P(0) reproduces entropy_growth exactly, P(-h f) vanishes at the
// critical exponent. potential is aligned with the sorted periods.
Estimate pressure_orbit(std::span<const double> sorted_periods,
                        std::span<const double> potential, double horizon);

// gibbs-weighted ratio  sum e^{-h f_i} g_i / sum e^{-h f_i} f_i
double gibbs_average(std::span<const double> f, std::span<const double> g, double h);

// intersection i(f, g): prefix means of g_i/f_i in f-sorted order over windows
// f <= T, with T staggered below the f-horizon and the top of each window
// feathered so the estimate moves continuously under deformation. a prefix
// mean over an exponentially growing population forgets its head like
// e^{-growth T}, so the window means are extrapolated linearly in that
// variable, with growth the fitted rate of the f-spectrum. equals 1.0 exactly
// when g and f are the same column.
Estimate intersection(std::span<const double> f_sorted, std::span<const double> g_aligned,
                      double f_horizon, double growth);

// gibbs variance of the centered potential g - r f from the second central
// difference of t -> pressure_orbit(f, -h f + t (g - r f)) at step delta
double variance_quadratic(std::span<const double> f_sorted, std::span<const double> g_aligned,
                          double f_horizon, double h, double r, double delta = 0.05);

// critical exponent of the dirichlet series sum_gamma e^{-s phi(sigma(gamma))}
// over group elements: bisects the fitted growth slope of the layer sums
// Z_n(s) to its zero. throws NumericError unless phi(sigma) stays positive.
// subexponential layers (rank-1 groups) give exponent 0.
Estimate exponent_dirichlet(const RepPoint& rep, const WeightFunctional& phi, int max_len,
                            std::uint64_t budget = 1ull << 25);

}  // namespace anosov
