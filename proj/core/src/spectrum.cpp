#include "anosov/spectrum.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "anosov/io.hpp"
#include "anosov/parallel.hpp"

namespace anosov {

namespace {

// staggered upper ends of the fitting windows, as fractions of the
// completeness threshold; each window spans [kWindowSpan * end, end]
constexpr double kWindowEnds[] = {0.7, 0.8, 0.9, 1.0};
constexpr double kWindowSpan = 0.55;
constexpr double kCompletenessSafety = 0.95;
constexpr double kHalfPi = 1.5707963267948966;
constexpr std::size_t kMinRank = 32;
constexpr std::size_t kMinWindowPoints = 8;
constexpr std::size_t kMinTable = 500;

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LineFit ls_fit(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    sxx += dx * dx;
    sxy += dx * (y[i] - my);
  }
  if (sxx == 0.0) throw NumericError("growth fit: abscissa window is flat");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

void require_sorted_positive(std::span<const double> f) {
  if (f.size() < kMinTable)
    throw NumericError("growth estimate needs at least " + std::to_string(kMinTable) +
                       " periods, got " + std::to_string(f.size()));
  if (!(f.front() > 0.0) || !std::isfinite(f.front()) || !std::isfinite(f.back()))
    throw NumericError("growth estimate needs positive finite periods");
  for (std::size_t i = 1; i < f.size(); ++i)
    if (f[i] < f[i - 1]) throw NumericError("growth estimate needs periods sorted ascending");
}

// shared core of entropy_growth / pressure_orbit. psi empty means the zero
// potential, in which case the prefix log-sum-exp is exactly log(rank), which
// is what makes pressure_orbit(f, 0) reproduce entropy_growth bit for bit.
//
// counts are exact below the completeness horizon and saturate above it, so
// all fitting windows sit below the horizon (with a small safety margin).
// scaling the column and the horizon by a power of two scales every window
// bound with it, so the fitted value scales exactly too.
Estimate ladder_growth(std::span<const double> f, std::span<const double> psi, double horizon,
                       const char* method) {
  require_sorted_positive(f);
  if (!psi.empty() && psi.size() != f.size())
    throw ConfigError("potential must align with the period column");
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw ConfigError("growth estimate needs a positive completeness horizon");
  const double t_cap = kCompletenessSafety * horizon;
  const std::size_t top =
      static_cast<std::size_t>(std::upper_bound(f.begin(), f.end(), t_cap) - f.begin());
  if (top < kMinRank + kMinWindowPoints)
    throw NumericError("only " + std::to_string(top) + " periods fall below the completeness "
                       "threshold " + std::to_string(t_cap) + "; enumerate longer classes");

  // one streaming pass recording the prefix log-sum-exp at every usable rank
  std::vector<double> ylog(top);
  {
    double m = -std::numeric_limits<double>::infinity();
    double s = 0.0;
    for (std::size_t i = 0; i < top; ++i) {
      const double p = psi.empty() ? 0.0 : psi[i];
      if (!std::isfinite(p)) throw NumericError("potential has a non-finite entry");
      if (p <= m) {
        s += std::exp(p - m);
      } else {
        s = s * std::exp(m - p) + 1.0;
        m = p;
      }
      ylog[i] = m + std::log(s);
    }
  }

  // every table point in a window enters the fit, weighted by a cosine-squared
  // bump that vanishes smoothly at the window edges: the fitted slope then
  // moves continuously when the spectrum deforms, instead of jumping each time
  // a period crosses a quantized count target
  Estimate est;
  est.method = method;
  for (double end : kWindowEnds) {
    const double tb = end * t_cap;
    const double ta = kWindowSpan * tb;
    const double mid = 0.5 * (ta + tb);
    const double halfw = 0.5 * (tb - ta);
    const std::size_t lo =
        static_cast<std::size_t>(std::lower_bound(f.begin(), f.begin() + top, ta) - f.begin());
    double sw = 0.0, swx = 0.0, swy = 0.0;
    std::size_t points = 0;
    for (std::size_t i = std::max(lo, kMinRank - 1); i < top && f[i] <= tb; ++i) {
      const double c = std::cos(kHalfPi * ((f[i] - mid) / halfw));
      const double w = c * c;
      sw += w;
      swx += w * f[i];
      swy += w * ylog[i];
      ++points;
    }
    if (points < kMinWindowPoints || !(sw > 0.0))
      throw NumericError("growth window below " + std::to_string(tb) + " holds only " +
                         std::to_string(points) + " periods; the table is too short for a fit");
    const double xbar = swx / sw;
    const double ybar = swy / sw;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = std::max(lo, kMinRank - 1); i < top && f[i] <= tb; ++i) {
      const double c = std::cos(kHalfPi * ((f[i] - mid) / halfw));
      const double w = c * c;
      const double dx = f[i] - xbar;
      sxx += w * dx * dx;
      sxy += w * dx * (ylog[i] - ybar);
    }
    if (!(sxx > 0.0)) throw NumericError("growth fit: window periods are all equal");
    est.window_values.push_back(sxy / sxx);
    est.window_anchors.push_back(xbar);
  }

  // extrapolate the window slopes linearly in 1 / anchor to the deep-word limit
  std::vector<double> u(est.window_anchors.size());
  for (std::size_t w = 0; w < u.size(); ++w) u[w] = 1.0 / est.window_anchors[w];
  const LineFit tail = ls_fit(u, est.window_values);
  est.value = tail.intercept;
  double spread = 0.0;
  for (double hw : est.window_values) spread = std::max(spread, std::fabs(hw - est.value));
  est.spread = spread;
  return est;
}

}  // namespace

// ------------------------------------------------------------ tables

std::vector<double> period_column(const ClassList& classes, const RepPoint& rep,
                                  const WeightFunctional& fn, int threads,
                                  std::size_t* skipped) {
  if (fn.dim() != rep.dim()) throw ConfigError("period column: functional dimension mismatch");
  const std::size_t n = classes.size();
  std::vector<double> out(n, 0.0);
  const std::vector<int> needed = fn.needed_partials();
  if (needed.empty()) {
    if (skipped) *skipped = 0;
    return out;  // the zero functional
  }
  std::atomic<std::size_t> fail{0};
  struct Scratch {
    PeriodEngine engine;
    std::vector<double> partial_got;
    std::vector<double> partial_all;
  };
  const int nthreads = resolve_threads(threads);
  parallel_chunks<Scratch>(
      static_cast<std::int64_t>(n), nthreads,
      [&]() {
        Scratch s{PeriodEngine(rep, needed), std::vector<double>(needed.size()),
                  std::vector<double>(static_cast<size_t>(rep.dim() - 1), 0.0)};
        return s;
      },
      [&](Scratch& s, int, std::int64_t b, std::int64_t e) {
        for (std::int64_t i = b; i < e; ++i) {
          try {
            s.engine.jordan_partials(classes.core(static_cast<size_t>(i)), s.partial_got.data());
            std::fill(s.partial_all.begin(), s.partial_all.end(), 0.0);
            for (std::size_t k = 0; k < needed.size(); ++k)
              s.partial_all[static_cast<size_t>(needed[k] - 1)] = s.partial_got[k];
            out[static_cast<size_t>(i)] = fn.eval_partials(s.partial_all);
          } catch (const NumericError&) {
            out[static_cast<size_t>(i)] = std::numeric_limits<double>::quiet_NaN();
            fail.fetch_add(1, std::memory_order_relaxed);
          }
        }
      });
  const std::size_t failed = fail.load();
  if (skipped) *skipped = failed;
  if (failed * 1000 > n)
    throw NumericError("period column for " + rep.id + ":" + fn.name() + " lost " +
                       std::to_string(failed) + " of " + std::to_string(n) + " classes");
  return out;
}

double completeness_horizon(const ClassList& classes, std::span<const double> periods) {
  if (periods.size() != classes.size())
    throw ConfigError("completeness horizon: column does not match the class list");
  double rate = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < periods.size(); ++i) {
    if (!std::isfinite(periods[i])) continue;
    if (!(periods[i] > 0.0))
      throw NumericError("completeness horizon: class " + classes.name(i) +
                         " has a non-positive period");
    rate = std::min(rate, periods[i] / static_cast<double>(classes.core(i).size()));
  }
  if (!std::isfinite(rate)) throw NumericError("completeness horizon: no finite periods");
  return rate * static_cast<double>(classes.max_len() + 1);
}

SpectrumTable build_spectrum(ClassList classes, std::span<const RepPoint> reps,
                             std::span<const WeightFunctional> fns, std::size_t base_column,
                             int threads) {
  if (reps.empty() || fns.empty()) throw ConfigError("spectrum needs representations and functionals");
  const std::size_t ncols = reps.size() * fns.size();
  if (base_column >= ncols) throw ConfigError("spectrum base column out of range");
  SpectrumTable t;
  std::vector<std::vector<double>> raw;
  raw.reserve(ncols);
  std::size_t skipped_total = 0;
  for (const RepPoint& r : reps) {
    for (const WeightFunctional& f : fns) {
      std::size_t sk = 0;
      raw.push_back(period_column(classes, r, f, threads, &sk));
      skipped_total += sk;
      t.column_names.push_back(r.id + ":" + f.name());
    }
  }
  const std::size_t n = classes.size();
  std::vector<std::uint32_t> keep;
  keep.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    bool ok = true;
    for (const auto& col : raw)
      if (!std::isfinite(col[i])) ok = false;
    if (ok) keep.push_back(static_cast<std::uint32_t>(i));
  }
  std::stable_sort(keep.begin(), keep.end(), [&](std::uint32_t a, std::uint32_t b) {
    const double fa = raw[base_column][a], fb = raw[base_column][b];
    if (fa != fb) return fa < fb;
    return a < b;
  });
  t.columns.assign(ncols, std::vector<double>(keep.size()));
  for (std::size_t c = 0; c < ncols; ++c)
    for (std::size_t r = 0; r < keep.size(); ++r) t.columns[c][r] = raw[c][keep[r]];
  t.class_of_row = std::move(keep);
  t.skipped = skipped_total;
  t.classes = std::move(classes);
  return t;
}

void write_spectrum_csv(const SpectrumTable& table, const std::string& path) {
  std::string out = "class,core_length";
  for (const std::string& name : table.column_names) {
    std::string clean = name;
    std::replace(clean.begin(), clean.end(), ',', '_');
    out += ",";
    out += clean;
  }
  out += "\n";
  for (std::size_t r = 0; r < table.rows(); ++r) {
    const std::size_t ci = table.class_of_row[r];
    out += table.classes.name(ci);
    out += ",";
    out += std::to_string(table.classes.core(ci).size());
    for (const auto& col : table.columns) {
      out += ",";
      out += fmt_g17(col[r]);
    }
    out += "\n";
  }
  write_file(path, out);
}

// ------------------------------------------------------------ growth fits

Estimate entropy_growth(std::span<const double> sorted_periods, double horizon) {
  return ladder_growth(sorted_periods, {}, horizon, "count-ladder growth");
}

Estimate pressure_orbit(std::span<const double> sorted_periods,
                        std::span<const double> potential, double horizon) {
  return ladder_growth(sorted_periods, potential, horizon, "count-ladder pressure");
}

double gibbs_average(std::span<const double> f, std::span<const double> g, double h) {
  if (f.size() != g.size() || f.empty()) throw ConfigError("gibbs average needs aligned columns");
  double fmin = f[0];
  for (double v : f) fmin = std::min(fmin, v);
  double sf = 0.0, sg = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double w = std::exp(-h * (f[i] - fmin));
    sf += w * f[i];
    sg += w * g[i];
  }
  if (!(sf > 0.0)) throw NumericError("gibbs average: degenerate weights");
  return sg / sf;
}

Estimate intersection(std::span<const double> f_sorted, std::span<const double> g_aligned,
                      double f_horizon, double growth) {
  if (f_sorted.size() != g_aligned.size())
    throw ConfigError("intersection needs aligned columns");
  require_sorted_positive(f_sorted);
  if (!(f_horizon > 0.0) || !std::isfinite(f_horizon))
    throw ConfigError("intersection needs a positive completeness horizon");
  if (!(growth > 0.0) || !std::isfinite(growth))
    throw ConfigError("intersection needs the positive growth rate of the base spectrum");
  const std::size_t n = f_sorted.size();
  // prefix means must run over every class with f <= T, so T stays below the
  // completeness horizon of the table exactly as in the growth fits; the top
  // of each mean is feathered so the estimate moves continuously when the
  // spectrum deforms
  const double t_cap = kCompletenessSafety * f_horizon;
  static constexpr double kEnds[] = {0.6, 0.7, 0.8, 0.9, 1.0};
  static constexpr double kRamp = 0.25;  // top fraction of each window feathered to zero
  Estimate est;
  est.method = "capped prefix-ratio extrapolation";
  for (double end : kEnds) {
    const double te = end * t_cap;
    const double ramp_lo = (1.0 - kRamp) * te;
    double sw = 0.0, swr = 0.0, swf = 0.0;
    std::size_t points = 0;
    for (std::size_t i = 0; i < n && f_sorted[i] <= te; ++i) {
      if (!std::isfinite(g_aligned[i])) throw NumericError("intersection: non-finite period");
      double w = 1.0;
      if (f_sorted[i] > ramp_lo) {
        const double c = std::cos(kHalfPi * ((f_sorted[i] - ramp_lo) / (te - ramp_lo)));
        w = c * c;
      }
      sw += w;
      swr += w * (g_aligned[i] / f_sorted[i]);
      swf += w * f_sorted[i];
      ++points;
    }
    if (points < kMinRank || !(sw > 0.0))
      throw NumericError("intersection window below " + std::to_string(te) + " holds only " +
                         std::to_string(points) + " periods; the table is too short");
    // the mean up to depth T remembers its head with weight N(T0)/N(T), which
    // decays exponentially at the growth rate; extrapolating linearly in
    // e^{-growth T} sends that memory to zero
    est.window_values.push_back(swr / sw);
    est.window_anchors.push_back(std::exp(-growth * (swf / sw)));
  }
  const LineFit tail = ls_fit(est.window_anchors, est.window_values);
  est.value = tail.intercept;
  double spread = 0.0;
  for (double v : est.window_values) spread = std::max(spread, std::fabs(v - est.value));
  est.spread = spread;
  return est;
}

double variance_quadratic(std::span<const double> f_sorted, std::span<const double> g_aligned,
                          double f_horizon, double h, double r, double delta) {
  if (f_sorted.size() != g_aligned.size())
    throw ConfigError("variance needs aligned columns");
  if (!(delta > 0.0)) throw ConfigError("variance needs a positive step");
  const std::size_t n = f_sorted.size();
  std::vector<double> psi(n);
  auto pressure_at = [&](double t) {
    for (std::size_t i = 0; i < n; ++i)
      psi[i] = -h * f_sorted[i] + t * (g_aligned[i] - r * f_sorted[i]);
    return pressure_orbit(f_sorted, psi, f_horizon).value;
  };
  const double pm = pressure_at(-delta);
  const double p0 = pressure_at(0.0);
  const double pp = pressure_at(delta);
  return (pp - 2.0 * p0 + pm) / (delta * delta);
}

// ------------------------------------------------------------ dirichlet

Estimate exponent_dirichlet(const RepPoint& rep, const WeightFunctional& phi, int max_len,
                            std::uint64_t budget) {
  if (phi.dim() != rep.dim()) throw ConfigError("dirichlet exponent: functional dimension mismatch");
  if (max_len < 8) throw ConfigError("dirichlet exponent needs max_len >= 8");
  const std::vector<int> ks = phi.needed_partials();
  if (ks.empty()) throw ConfigError("dirichlet exponent needs a nonzero functional");
  const int kept_layers = 6;  // only lengths max_len-5 .. max_len enter the fit
  const int first_kept = max_len - kept_layers + 1;
  {
    std::uint64_t store = 0;
    for (int n = first_kept; n <= max_len; ++n) store += count_elements(rep.rank(), n) -
                                                         (n > 1 ? count_elements(rep.rank(), n - 1) : 0);
    if (store > 150'000'000ull)
      throw BudgetError("dirichlet scan would store " + std::to_string(store) + " periods");
  }

  // lifted product stacks along the dfs path, one per exterior degree
  struct Stack {
    int n = 0;
    std::vector<std::vector<cx>> img;  // per letter code
    std::vector<cx> mats;              // (max_len + 1) square slabs
    std::vector<double> scales;
  };
  std::vector<Stack> stacks;
  int maxn = 0;
  for (int k : ks) {
    Stack st;
    st.img.resize(static_cast<size_t>(2 * rep.rank()));
    for (int g = 0; g < rep.rank(); ++g) {
      const CMat lg = k == 1 ? rep.gens[static_cast<size_t>(g)].mat()
                             : wedge_mat(rep.gens[static_cast<size_t>(g)].mat(), k);
      const CMat li = k == 1 ? rep.invs[static_cast<size_t>(g)].mat()
                             : wedge_mat(rep.invs[static_cast<size_t>(g)].mat(), k);
      st.n = lg.dim();
      st.img[static_cast<size_t>(2 * g)].assign(lg.flat().begin(), lg.flat().end());
      st.img[static_cast<size_t>(2 * g + 1)].assign(li.flat().begin(), li.flat().end());
    }
    maxn = std::max(maxn, st.n);
    st.mats.resize(static_cast<size_t>(max_len + 1) * st.n * st.n);
    st.scales.assign(static_cast<size_t>(max_len + 1), 0.0);
    cx* base = st.mats.data();
    std::fill(base, base + static_cast<size_t>(st.n) * st.n, cx{0.0, 0.0});
    for (int i = 0; i < st.n; ++i) base[static_cast<size_t>(i) * st.n + i] = 1.0;
    stacks.push_back(std::move(st));
  }
  EigenWorkspace ws(maxn);
  std::vector<std::vector<double>> phi_by_len(static_cast<size_t>(max_len));
  for (int n = first_kept; n <= max_len; ++n) {
    const std::uint64_t layer = count_elements(rep.rank(), n) -
                                (n > 1 ? count_elements(rep.rank(), n - 1) : 0);
    phi_by_len[static_cast<size_t>(n - 1)].reserve(static_cast<size_t>(layer));
  }
  std::vector<double> s_sums(ks.size());
  const auto steps = phi.steps();
  ElementVisitor vis;
  vis.push = [&](Letter a, int len) {
    for (std::size_t li = 0; li < stacks.size(); ++li) {
      Stack& st = stacks[li];
      const std::size_t sz = static_cast<size_t>(st.n) * st.n;
      cx* prev = st.mats.data() + static_cast<size_t>(len - 1) * sz;
      cx* cur = st.mats.data() + static_cast<size_t>(len) * sz;
      mul_into(st.n, prev, st.img[static_cast<size_t>(a)].data(), cur);
      st.scales[static_cast<size_t>(len)] = st.scales[static_cast<size_t>(len - 1)];
      if (len % 8 == 0) st.scales[static_cast<size_t>(len)] += renormalize(st.n, cur);
      s_sums[li] = ws.top_sv_log(st.n, cur) + st.scales[static_cast<size_t>(len)];
    }
    double val = 0.0;
    for (std::size_t li = 0; li < ks.size(); ++li)
      val += steps[static_cast<size_t>(ks[li] - 1)] * s_sums[li];
    if (!(val > 0.0))
      throw NumericError("dirichlet exponent needs a functional positive along the orbit; "
                         "found " + std::to_string(val) + " at word length " + std::to_string(len));
    if (len >= first_kept) phi_by_len[static_cast<size_t>(len - 1)].push_back(val);
  };
  vis.pop = []() {};
  scan_elements(rep.rank(), max_len, budget, vis);

  // layer log-sums and the fitted slope of n -> log Z_n(s)
  auto layer_lse = [&](int n, double s) {
    const auto& v = phi_by_len[static_cast<size_t>(n - 1)];
    double m = -std::numeric_limits<double>::infinity();
    for (double p : v) m = std::max(m, -s * p);
    double acc = 0.0;
    for (double p : v) acc += std::exp(-s * p - m);
    return m + std::log(acc);
  };
  struct Window {
    int lo, hi;
  };
  const std::vector<Window> windows = {{max_len - 5, max_len - 2},
                                       {max_len - 4, max_len - 1},
                                       {max_len - 3, max_len}};
  auto window_slope = [&](const Window& w, double s) {
    std::vector<double> xs, ys;
    for (int n = w.lo; n <= w.hi; ++n) {
      xs.push_back(static_cast<double>(n));
      ys.push_back(layer_lse(n, s));
    }
    return ls_fit(xs, ys).slope;
  };
  auto mean_slope = [&](double s) {
    double acc = 0.0;
    for (const Window& w : windows) acc += window_slope(w, s);
    return acc / static_cast<double>(windows.size());
  };

  Estimate est;
  est.method = "dirichlet-layer bisection";
  for (const Window& w : windows)
    est.window_anchors.push_back(0.5 * static_cast<double>(w.lo + w.hi));
  if (mean_slope(0.0) <= 1e-9) {
    est.value = 0.0;
    est.window_values.assign(windows.size(), 0.0);
    est.spread = 0.0;
    return est;
  }
  auto bisect_root = [&](const std::function<double(double)>& slope) {
    double lo = 0.0, hi = 1.0;
    int guard = 0;
    while (slope(hi) > 0.0) {
      hi *= 2.0;
      if (++guard > 12) throw NumericError("dirichlet slope stays positive out to s = 4096");
    }
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (slope(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  est.value = bisect_root(mean_slope);
  for (const Window& w : windows)
    est.window_values.push_back(bisect_root([&](double s) { return window_slope(w, s); }));
  double spread = 0.0;
  for (double v : est.window_values) spread = std::max(spread, std::fabs(v - est.value));
  est.spread = spread;
  return est;
}

}  // namespace anosov
