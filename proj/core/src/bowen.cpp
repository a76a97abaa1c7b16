#include "anosov/bowen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "anosov/io.hpp"

namespace anosov {

namespace {

struct Mobius {
  cx a, b, c, d;
  cx apply(cx z) const { return (a * z + b) / (c * z + d); }
  // euclidean |M'(z)| for |det| = 1 is 1 / |cz + d|^2
  double deriv_abs(cx z) const {
    const double q = std::norm(c * z + d);
    return 1.0 / q;
  }
};

Mobius mobius_of(const ProjMatrix& m) {
  return Mobius{m.mat().at(0, 0), m.mat().at(0, 1), m.mat().at(1, 0), m.mat().at(1, 1)};
}

double spherical_factor(cx z, cx w) {
  return (1.0 + std::norm(z)) / (1.0 + std::norm(w));
}

}  // namespace

TransferDiscretization discretize_schottky(const SchottkyData& s, int samples_per_circle) {
  validate_schottky(s);
  if (samples_per_circle < 8) throw ConfigError("transfer discretization needs >= 8 samples");
  const int k = s.rank();
  const int circles = 2 * k;
  const std::uint64_t beta = static_cast<std::uint64_t>(2 * k - 1);
  const RepPoint rep = schottky_rep(s, "transfer");

  // the map carrying the common exterior into disk c is the image of the
  // inverse letter code c ^ 1
  std::vector<Mobius> branch(static_cast<size_t>(circles));
  for (int c = 0; c < circles; ++c)
    branch[static_cast<size_t>(c)] = mobius_of(rep.image(static_cast<Letter>(c ^ 1)));

  // collocation nodes are depth-q cylinder points: one per admissible word
  // c_1..c_q, placed at branch[c_1](...branch[c_q](center of disk c_q)...).
  // snapping the operator to these nodes is exact up to the cylinder diameter,
  // which shrinks geometrically in q, whereas nodes pinned to the bounding
  // circles miss the limit set (pullbacks land strictly inside the disks).
  int depth = 2;
  std::uint64_t per = beta;  // admissible words per leading letter: beta^(depth-1)
  while (beta > 1 && per < static_cast<std::uint64_t>(samples_per_circle) &&
         per * beta * static_cast<std::uint64_t>(circles) <= (1u << 20))
    per *= beta, ++depth;
  const std::uint64_t n = static_cast<std::uint64_t>(circles) * per;

  // word ids: id = c_1 * beta^(q-1) + sum_j rank(c_j | c_{j-1}) * beta^(q-j),
  // where rank lists the letters distinct from the predecessor's inverse in
  // increasing order; appending a letter multiplies the tail part by beta
  const auto rank_after = [](int letter, int prev) {
    return static_cast<std::uint64_t>(letter - (letter > (prev ^ 1) ? 1 : 0));
  };
  std::vector<cx> pts(static_cast<size_t>(circles));
  for (int c = 0; c < circles; ++c) pts[static_cast<size_t>(c)] = s.disks[static_cast<size_t>(c)].center;
  std::uint64_t sub = 1;  // beta^(level-2): id range of the tail being extended
  for (int level = 2; level <= depth; ++level) {
    std::vector<cx> next(static_cast<size_t>(circles) * sub * beta);
    for (int c = 0; c < circles; ++c)
      for (std::uint64_t w = 0; w < pts.size(); ++w) {
        const int w1 = static_cast<int>(w / sub);
        if (w1 == (c ^ 1)) continue;
        const std::uint64_t nid = static_cast<std::uint64_t>(c) * sub * beta +
                                  rank_after(w1, c) * sub + (w % sub);
        next[static_cast<size_t>(nid)] = branch[static_cast<size_t>(c)].apply(pts[static_cast<size_t>(w)]);
      }
    pts = std::move(next);
    sub *= beta;
  }

  TransferDiscretization d;
  d.samples_per_circle = static_cast<int>(per);
  d.nodes = static_cast<int>(n);
  d.row_ptr.assign(static_cast<size_t>(n) + 1, 0);
  for (std::uint64_t row = 0; row < n; ++row) {
    const int v1 = static_cast<int>(row / per);       // leading letter of the row word
    const std::uint64_t tail = (row % per) / beta;    // row word minus leading and last letters
    const cx x = pts[static_cast<size_t>(row)];
    for (int c = 0; c < circles; ++c) {
      if (c == (v1 ^ 1)) continue;  // prepending c must keep the word reduced
      const Mobius& B = branch[static_cast<size_t>(c)];
      const cx y = B.apply(x);
      const std::uint64_t col = static_cast<std::uint64_t>(c) * per +
                                rank_after(v1, c) * (per / beta) + tail;
      d.cols.push_back(static_cast<int>(col));
      d.deriv.push_back(B.deriv_abs(x) * spherical_factor(x, y));
    }
    d.row_ptr[static_cast<size_t>(row) + 1] = static_cast<int>(d.cols.size());
  }
  return d;
}

double transfer_radius(const TransferDiscretization& d, double s, double tol, int max_iter) {
  const int n = d.nodes;
  if (n <= 0) throw ConfigError("empty transfer discretization");
  std::vector<double> w(d.deriv.size());
  for (std::size_t e = 0; e < w.size(); ++e) w[e] = std::pow(d.deriv[e], s);
  std::vector<double> v(static_cast<size_t>(n), 1.0), nv(static_cast<size_t>(n));
  double theta = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    double mx = 0.0;
    for (int r = 0; r < n; ++r) {
      double acc = 0.0;
      for (int e = d.row_ptr[static_cast<size_t>(r)]; e < d.row_ptr[static_cast<size_t>(r) + 1]; ++e)
        acc += w[static_cast<size_t>(e)] * v[static_cast<size_t>(d.cols[static_cast<size_t>(e)])];
      nv[static_cast<size_t>(r)] = acc;
      mx = std::max(mx, acc);
    }
    if (!(mx > 0.0)) return 0.0;  // nilpotent row pattern; cannot happen for valid data
    for (double& x : nv) x /= mx;
    std::swap(v, nv);
    if (it > 0 && std::fabs(mx - theta) <= tol * std::max(1.0, mx)) return mx;
    theta = mx;
  }
  throw NumericError("transfer power iteration did not settle in " + std::to_string(max_iter) +
                     " steps");
}

BowenResult bowen_dimension(const SchottkyData& s, int samples_per_circle, int bisect_iters) {
  const TransferDiscretization d = discretize_schottky(s, samples_per_circle);
  BowenResult out;
  out.samples_per_circle = samples_per_circle;
  out.rho_at_zero = transfer_radius(d, 0.0);
  if (out.rho_at_zero <= 1.0 + 1e-9) {
    out.dimension = 0.0;  // a single branch pair has a finite limit set
    return out;
  }
  double lo = 0.0, hi = 2.0;
  if (transfer_radius(d, hi) > 1.0)
    throw NumericError("transfer radius exceeds 1 at s = 2; disks too close for this sampling");
  for (int it = 0; it < bisect_iters; ++it) {
    const double mid = 0.5 * (lo + hi);
    (transfer_radius(d, mid) > 1.0 ? lo : hi) = mid;
  }
  out.dimension = 0.5 * (lo + hi);
  return out;
}

// ------------------------------------------------------------ limit clouds

LimitCloud sample_limit_set(const RepPoint& rep, int max_len, std::uint64_t budget) {
  if (rep.dim() != 2) throw ConfigError("limit set sampling is planar: needs dim 2");
  if (max_len < 1) throw ConfigError("limit set sampling needs max_len >= 1");
  const ClassList classes = ClassList::enumerate(rep.rank(), max_len, true, budget);

  LimitCloud raw;
  const auto push_fixed_point = [&raw](const cx* prod) {
    // attracting eigenvector of [[a, b], [c, d]] by the stable quadratic
    const cx ma = prod[0], mb = prod[1], mc = prod[2], md = prod[3];
    const cx tr = ma + md;
    const cx det = ma * md - mb * mc;
    const cx disc = csqrt(tr * tr - 4.0 * det);
    const cx l1 =
        std::abs(tr + disc) >= std::abs(tr - disc) ? 0.5 * (tr + disc) : 0.5 * (tr - disc);
    // candidate eigenvectors (b, l1 - a) and (l1 - d, c); take the larger
    const cx v0a = mb, v1a = l1 - ma;
    const cx v0b = l1 - md, v1b = mc;
    const double na = std::norm(v0a) + std::norm(v1a);
    const double nb = std::norm(v0b) + std::norm(v1b);
    if (na == 0.0 && nb == 0.0) return;  // scalar matrix: every line is fixed
    const cx v0 = na >= nb ? v0a : v0b;
    const cx v1 = na >= nb ? v1a : v1b;
    if (std::abs(v0) <= 8.0 * std::abs(v1)) {
      const cx z = v0 / v1;
      raw.x.push_back(z.real());
      raw.y.push_back(z.imag());
      raw.chart.push_back(0);
    } else {
      const cx z = v1 / v0;
      raw.x.push_back(z.real());
      raw.y.push_back(z.imag());
      raw.chart.push_back(1);
    }
  };
  // one representative per class samples the limit set with the bias of the
  // canonical rotation's leading letter; the fixed points of all cyclic
  // rotations fill every cylinder and make the cloud generator-equivariant.
  // each rotation product is suffix * prefix from two precomputed stacks,
  // avoiding the unstable alternative of dragging one fixed point around the
  // orbit with expanding inverse letters.
  const std::size_t stack_len = static_cast<std::size_t>(classes.max_len()) + 1;
  std::vector<std::array<cx, 4>> prefix(stack_len), suffix(stack_len);
  cx prod[4];
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const std::span<const Letter> core = classes.core(c);
    const std::size_t n = core.size();
    prefix[0] = {1.0, 0.0, 0.0, 1.0};
    suffix[n] = {1.0, 0.0, 0.0, 1.0};
    for (std::size_t i = 0; i < n; ++i) {
      mul_into(2, prefix[i].data(), rep.image(core[i]).mat().data(), prefix[i + 1].data());
      renormalize(2, prefix[i + 1].data());  // direction only, scale is free
      const std::size_t j = n - 1 - i;
      mul_into(2, rep.image(core[j]).mat().data(), suffix[j + 1].data(), suffix[j].data());
      renormalize(2, suffix[j].data());
    }
    for (std::size_t j = 0; j < n; ++j) {
      mul_into(2, suffix[j].data(), prefix[j].data(), prod);
      push_fixed_point(prod);
    }
  }

  // collapse points within 1e-12 (sup norm, same chart), keeping the earliest
  // class of each cluster and the original class order
  const std::size_t n = raw.size();
  std::vector<std::uint32_t> order(n);
  for (std::uint32_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (raw.chart[a] != raw.chart[b]) return raw.chart[a] < raw.chart[b];
    if (raw.x[a] != raw.x[b]) return raw.x[a] < raw.x[b];
    if (raw.y[a] != raw.y[b]) return raw.y[a] < raw.y[b];
    return a < b;
  });
  constexpr double kDedup = 1e-12;
  std::vector<std::uint32_t> cluster(n, 0);
  std::uint32_t nclusters = 0;
  for (std::size_t s = 0; s < n; ++s) {
    const std::uint32_t i = order[s];
    const bool fresh = s == 0 || raw.chart[i] != raw.chart[order[s - 1]] ||
                       raw.x[i] - raw.x[order[s - 1]] > kDedup ||
                       std::fabs(raw.y[i] - raw.y[order[s - 1]]) > kDedup;
    if (fresh) ++nclusters;
    cluster[i] = nclusters - 1;
  }
  std::vector<std::uint32_t> keeper(nclusters, std::numeric_limits<std::uint32_t>::max());
  for (std::uint32_t i = 0; i < n; ++i) keeper[cluster[i]] = std::min(keeper[cluster[i]], i);
  LimitCloud cloud;
  for (std::uint32_t i = 0; i < n; ++i)
    if (keeper[cluster[i]] == i) {
      cloud.x.push_back(raw.x[i]);
      cloud.y.push_back(raw.y[i]);
      cloud.chart.push_back(raw.chart[i]);
    }
  return cloud;
}

void write_cloud_csv(const LimitCloud& cloud, const std::string& path) {
  std::string out = "x,y,chart\n";
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    out += fmt_g17(cloud.x[i]);
    out += ",";
    out += fmt_g17(cloud.y[i]);
    out += ",";
    out += std::to_string(cloud.chart[i]);
    out += "\n";
  }
  write_file(path, out);
}

BoxDimension box_dimension(const LimitCloud& cloud, int min_scales) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < cloud.size(); ++i)
    if (cloud.chart[i] == 0) {
      xs.push_back(cloud.x[i]);
      ys.push_back(cloud.y[i]);
    }
  const std::size_t n = xs.size();
  if (n < 500) throw NumericError("box dimension needs >= 500 chart-0 points, got " +
                                  std::to_string(n));
  double x0 = xs[0], x1 = xs[0], y0 = ys[0], y1 = ys[0];
  for (std::size_t i = 0; i < n; ++i) {
    x0 = std::min(x0, xs[i]);
    x1 = std::max(x1, xs[i]);
    y0 = std::min(y0, ys[i]);
    y1 = std::max(y1, ys[i]);
  }
  const double size = std::max(x1 - x0, y1 - y0);
  if (!(size > 0.0)) throw NumericError("box dimension: cloud is a single point");
  BoxDimension out;
  std::unordered_set<std::uint64_t> occ;
  for (int level = 0; level <= 30; ++level) {
    const double cell = size / static_cast<double>(1u << level);
    occ.clear();
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t ix = static_cast<std::uint64_t>((xs[i] - x0) / cell);
      const std::uint64_t iy = static_cast<std::uint64_t>((ys[i] - y0) / cell);
      occ.insert((ix << 32) | (iy & 0xffffffffull));
    }
    const std::size_t cnt = occ.size();
    if (cnt > n / 4) break;  // occupancy never drops as the cells shrink
    if (cnt >= 8) {
      out.log_inv_eps.push_back(std::log(1.0 / cell));
      out.log_count.push_back(std::log(static_cast<double>(cnt)));
    }
  }
  if (static_cast<int>(out.log_inv_eps.size()) < min_scales)
    throw NumericError("box dimension found only " + std::to_string(out.log_inv_eps.size()) +
                       " usable scales; need " + std::to_string(min_scales));
  // least squares slope of log N against log 1/eps
  const std::size_t m = out.log_inv_eps.size();
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sx += out.log_inv_eps[i];
    sy += out.log_count[i];
  }
  const double mx = sx / static_cast<double>(m), my = sy / static_cast<double>(m);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dx = out.log_inv_eps[i] - mx;
    sxx += dx * dx;
    sxy += dx * (out.log_count[i] - my);
  }
  out.value = sxy / sxx;
  double spread = 0.0;
  for (std::size_t i = 1; i < m; ++i) {
    const double pair = (out.log_count[i] - out.log_count[i - 1]) /
                        (out.log_inv_eps[i] - out.log_inv_eps[i - 1]);
    spread = std::max(spread, std::fabs(pair - out.value));
  }
  out.spread = spread;
  return out;
}

void render_cloud_pgm(const LimitCloud& cloud, int width, int height, const std::string& path) {
  if (width < 8 || height < 8) throw ConfigError("render needs at least 8 x 8 pixels");
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  bool first = true;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (cloud.chart[i] != 0) continue;
    if (first) {
      x0 = x1 = cloud.x[i];
      y0 = y1 = cloud.y[i];
      first = false;
    }
    x0 = std::min(x0, cloud.x[i]);
    x1 = std::max(x1, cloud.x[i]);
    y0 = std::min(y0, cloud.y[i]);
    y1 = std::max(y1, cloud.y[i]);
  }
  if (first) throw NumericError("render: no chart-0 points");
  const double mx = 0.05 * std::max(x1 - x0, 1e-12), my = 0.05 * std::max(y1 - y0, 1e-12);
  x0 -= mx;
  x1 += mx;
  y0 -= my;
  y1 += my;
  std::vector<int> hits(static_cast<size_t>(width) * static_cast<size_t>(height), 0);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (cloud.chart[i] != 0) continue;
    int px = static_cast<int>((cloud.x[i] - x0) / (x1 - x0) * width);
    int py = static_cast<int>((y1 - cloud.y[i]) / (y1 - y0) * height);
    px = std::clamp(px, 0, width - 1);
    py = std::clamp(py, 0, height - 1);
    ++hits[static_cast<size_t>(py) * static_cast<size_t>(width) + static_cast<size_t>(px)];
  }
  std::vector<std::uint8_t> pix(hits.size());
  for (std::size_t i = 0; i < hits.size(); ++i)
    pix[i] = static_cast<std::uint8_t>(std::min(255, 64 * hits[i]));
  write_pgm(path, width, height, pix);
}

}  // namespace anosov
