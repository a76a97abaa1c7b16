#include "anosov/reps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <nlohmann/json.hpp>

#include "anosov/io.hpp"

namespace anosov {

using json = nlohmann::json;

// ------------------------------------------------------------ functionals

WeightFunctional WeightFunctional::from_coeffs(std::vector<double> c, std::string name) {
  const int d = static_cast<int>(c.size());
  if (d < 2) throw ConfigError("functional needs dim >= 2");
  double mean = 0.0;
  for (double v : c) mean += v;
  mean /= d;
  for (double& v : c) v -= mean;
  WeightFunctional f;
  f.name_ = name.empty() ? "phi" : std::move(name);
  f.coeffs_ = std::move(c);
  f.steps_.resize(static_cast<size_t>(d - 1));
  for (int k = 1; k < d; ++k)
    f.steps_[static_cast<size_t>(k - 1)] = f.coeffs_[static_cast<size_t>(k - 1)] - f.coeffs_[static_cast<size_t>(k)];
  return f;
}

WeightFunctional WeightFunctional::simple_root(int d, int i) {
  if (i < 1 || i >= d) throw ConfigError("simple root index out of range");
  std::vector<double> c(static_cast<size_t>(d), 0.0);
  c[static_cast<size_t>(i - 1)] = 1.0;
  c[static_cast<size_t>(i)] = -1.0;
  return from_coeffs(std::move(c), "a" + std::to_string(i));
}

WeightFunctional WeightFunctional::fundamental_weight(int d, int k) {
  if (k < 1 || k >= d) throw ConfigError("fundamental weight index out of range");
  std::vector<double> c(static_cast<size_t>(d), 0.0);
  for (int i = 0; i < k; ++i) c[static_cast<size_t>(i)] = 1.0;
  return from_coeffs(std::move(c), "w" + std::to_string(k));
}

WeightFunctional WeightFunctional::scaled(const WeightFunctional& f, double s) {
  std::vector<double> c(f.coeffs_.begin(), f.coeffs_.end());
  for (double& v : c) v *= s;
  return from_coeffs(std::move(c), f.name_ + "-scaled");
}

std::vector<int> WeightFunctional::needed_partials() const {
  std::vector<int> ks;
  for (int k = 1; k <= static_cast<int>(steps_.size()); ++k)
    if (steps_[static_cast<size_t>(k - 1)] != 0.0) ks.push_back(k);
  return ks;
}

double WeightFunctional::operator()(const CartanVector& v) const {
  if (v.dim() != dim()) throw ConfigError("functional/vector dimension mismatch");
  double s = 0.0;
  for (int i = 0; i < dim(); ++i) s += coeffs_[static_cast<size_t>(i)] * v[i];
  return s;
}

double WeightFunctional::eval_partials(std::span<const double> s_sums) const {
  double s = 0.0;
  for (size_t k = 0; k < steps_.size(); ++k) s += steps_[k] * s_sums[k];
  return s;
}

// ------------------------------------------------------------ rep points

RepPoint RepPoint::of(std::string id, std::vector<ProjMatrix> generators) {
  if (generators.empty()) throw ConfigError("representation needs at least one generator");
  const int d = generators[0].dim();
  for (const auto& g : generators)
    if (g.dim() != d) throw ConfigError("generators must share one dimension");
  RepPoint r;
  r.id = std::move(id);
  r.gens = std::move(generators);
  r.invs.reserve(r.gens.size());
  for (const auto& g : r.gens) r.invs.push_back(g.inverse());
  return r;
}

ProjMatrix evaluate(const RepPoint& rep, std::span<const Letter> word) {
  if (word.empty()) return ProjMatrix::from(CMat::identity(rep.dim()));
  const int n = rep.dim();
  CMat prod = rep.image(word[0]).mat();
  CMat tmp(n);
  for (size_t i = 1; i < word.size(); ++i) {
    mul_into(n, prod.data(), rep.image(word[i]).mat().data(), tmp.data());
    std::swap(prod, tmp);
    if ((i + 1) % 8 == 0) renormalize(n, prod.data());
  }
  return ProjMatrix::from(prod);
}

ProjMatrix evaluate(const RepPoint& rep, const Word& word) {
  return evaluate(rep, std::span<const Letter>(word.letters));
}

// ------------------------------------------------------------ period engine

PeriodEngine::PeriodEngine(const RepPoint& rep, std::vector<int> needed_k)
    : dim_(rep.dim()), rank_(rep.rank()), needed_(std::move(needed_k)), ws_(1) {
  std::sort(needed_.begin(), needed_.end());
  needed_.erase(std::unique(needed_.begin(), needed_.end()), needed_.end());
  if (needed_.empty()) throw ConfigError("period engine needs at least one exterior degree");
  for (int k : needed_)
    if (k < 1 || k >= dim_) throw ConfigError("exterior degree out of range");
  int maxn = 0;
  for (int k : needed_) {
    Lift lift;
    lift.k = k;
    lift.img.resize(static_cast<size_t>(2 * rank_));
    for (int g = 0; g < rank_; ++g) {
      const CMat lg = k == 1 ? rep.gens[static_cast<size_t>(g)].mat()
                             : wedge_mat(rep.gens[static_cast<size_t>(g)].mat(), k);
      const CMat li = k == 1 ? rep.invs[static_cast<size_t>(g)].mat()
                             : wedge_mat(rep.invs[static_cast<size_t>(g)].mat(), k);
      lift.n = lg.dim();
      lift.img[static_cast<size_t>(2 * g)].assign(lg.flat().begin(), lg.flat().end());
      lift.img[static_cast<size_t>(2 * g + 1)].assign(li.flat().begin(), li.flat().end());
    }
    maxn = std::max(maxn, lift.n);
    lifts_.push_back(std::move(lift));
  }
  ws_ = EigenWorkspace(maxn);
  prod_.resize(static_cast<size_t>(maxn) * maxn);
  tmp_.resize(static_cast<size_t>(maxn) * maxn);
}

double PeriodEngine::product_top_log(const Lift& lift, std::span<const Letter> w, bool singular) {
  const int n = lift.n;
  const cx* first = lift.img[static_cast<size_t>(w[0])].data();
  std::copy(first, first + static_cast<size_t>(n) * n, prod_.begin());
  double scale = 0.0;
  for (size_t i = 1; i < w.size(); ++i) {
    mul_into(n, prod_.data(), lift.img[static_cast<size_t>(w[i])].data(), tmp_.data());
    std::swap(prod_, tmp_);
    if ((i + 1) % 8 == 0) scale += renormalize(n, prod_.data());
  }
  scale += renormalize(n, prod_.data());
  const double top = singular ? ws_.top_sv_log(n, prod_.data()) : ws_.top_eig_log(n, prod_.data());
  return top + scale;
}

void PeriodEngine::jordan_partials(std::span<const Letter> w, double* out) {
  for (size_t i = 0; i < lifts_.size(); ++i) out[i] = product_top_log(lifts_[i], w, false);
}

void PeriodEngine::cartan_partials(std::span<const Letter> w, double* out) {
  for (size_t i = 0; i < lifts_.size(); ++i) out[i] = product_top_log(lifts_[i], w, true);
}

std::vector<double> PeriodEngine::jordan_vector(std::span<const Letter> w) {
  if (static_cast<int>(needed_.size()) != dim_ - 1)
    throw ConfigError("jordan_vector needs every exterior degree registered");
  std::vector<double> t(needed_.size());
  jordan_partials(w, t.data());
  std::vector<double> logs(static_cast<size_t>(dim_));
  double prev = 0.0;
  for (int k = 1; k < dim_; ++k) {
    logs[static_cast<size_t>(k - 1)] = t[static_cast<size_t>(k - 1)] - prev;
    prev = t[static_cast<size_t>(k - 1)];
  }
  logs[static_cast<size_t>(dim_ - 1)] = -prev;  // |det| = 1
  const CartanVector cv = CartanVector::of(std::move(logs));
  return std::vector<double>(cv.coords().begin(), cv.coords().end());
}

double period(const RepPoint& rep, const WeightFunctional& phi, const Word& w) {
  if (phi.dim() != rep.dim()) throw ConfigError("functional/representation dimension mismatch");
  const Word core = ConjClass::of(w).core;
  if (core.length() == 0) return 0.0;
  const std::vector<int> ks = phi.needed_partials();
  PeriodEngine eng(rep, ks);
  std::vector<double> partial_all(static_cast<size_t>(rep.dim() - 1), 0.0);
  std::vector<double> got(ks.size());
  eng.jordan_partials(core.letters, got.data());
  for (size_t i = 0; i < ks.size(); ++i) partial_all[static_cast<size_t>(ks[i] - 1)] = got[i];
  return phi.eval_partials(partial_all);
}

// ------------------------------------------------------------ certificates

AnosovCertificate anosov_certificate(const RepPoint& rep, int root_index, int max_len,
                                     double mu_min, std::uint64_t budget) {
  const int d = rep.dim();
  if (root_index < 1 || root_index >= d) throw ConfigError("certificate root index out of range");
  if (max_len < 4) throw ConfigError("certificate needs max_len >= 4");
  std::vector<int> ks;
  for (int k : {root_index - 1, root_index, root_index + 1})
    if (k >= 1 && k <= d - 1) ks.push_back(k);
  // stacks of lifted products along the dfs path
  struct Stack {
    int n = 0;
    std::vector<cx> mats;        // (max_len+1) matrices
    std::vector<double> scales;  // logs divided out
  };
  std::vector<Stack> stacks;
  int maxn = 0;
  for (int k : ks) {
    Stack st;
    const CMat probe_mat = k == 1 ? rep.gens[0].mat() : wedge_mat(rep.gens[0].mat(), k);
    st.n = probe_mat.dim();
    maxn = std::max(maxn, st.n);
    st.mats.resize(static_cast<size_t>(max_len + 1) * st.n * st.n);
    st.scales.assign(static_cast<size_t>(max_len + 1), 0.0);
    stacks.push_back(std::move(st));
  }
  std::vector<std::vector<std::vector<cx>>> imgs(ks.size());
  for (size_t li = 0; li < ks.size(); ++li) {
    const int k = ks[li];
    imgs[li].resize(static_cast<size_t>(2 * rep.rank()));
    for (int g = 0; g < rep.rank(); ++g) {
      const CMat lg = k == 1 ? rep.gens[static_cast<size_t>(g)].mat() : wedge_mat(rep.gens[static_cast<size_t>(g)].mat(), k);
      const CMat li_m = k == 1 ? rep.invs[static_cast<size_t>(g)].mat() : wedge_mat(rep.invs[static_cast<size_t>(g)].mat(), k);
      imgs[li][static_cast<size_t>(2 * g)].assign(lg.flat().begin(), lg.flat().end());
      imgs[li][static_cast<size_t>(2 * g + 1)].assign(li_m.flat().begin(), li_m.flat().end());
    }
    // identity at depth 0
    cx* base = stacks[li].mats.data();
    std::fill(base, base + static_cast<size_t>(stacks[li].n) * stacks[li].n, cx{0.0, 0.0});
    for (int i = 0; i < stacks[li].n; ++i) base[static_cast<size_t>(i) * stacks[li].n + i] = 1.0;
  }
  EigenWorkspace ws(maxn);
  AnosovCertificate cert;
  cert.root = root_index;
  cert.max_len = max_len;
  cert.mu_min = mu_min;
  cert.min_by_length.assign(static_cast<size_t>(max_len), std::numeric_limits<double>::infinity());
  std::vector<double> s_sums(ks.size());
  ElementVisitor vis;
  vis.push = [&](Letter a, int len) {
    for (size_t li = 0; li < ks.size(); ++li) {
      Stack& st = stacks[li];
      const size_t mat_sz = static_cast<size_t>(st.n) * st.n;
      cx* prev = st.mats.data() + static_cast<size_t>(len - 1) * mat_sz;
      cx* cur = st.mats.data() + static_cast<size_t>(len) * mat_sz;
      mul_into(st.n, prev, imgs[li][static_cast<size_t>(a)].data(), cur);
      st.scales[static_cast<size_t>(len)] = st.scales[static_cast<size_t>(len - 1)];
      if (len % 8 == 0) st.scales[static_cast<size_t>(len)] += renormalize(st.n, cur);
      s_sums[li] = ws.top_sv_log(st.n, cur) + st.scales[static_cast<size_t>(len)];
    }
    auto sum_at = [&](int k) -> double {
      if (k == 0 || k == d) return 0.0;
      for (size_t li = 0; li < ks.size(); ++li)
        if (ks[li] == k) return s_sums[li];
      return 0.0;
    };
    const double a_val = 2.0 * sum_at(root_index) - sum_at(root_index - 1) - sum_at(root_index + 1);
    double& slot = cert.min_by_length[static_cast<size_t>(len - 1)];
    if (a_val < slot) slot = a_val;
  };
  vis.pop = []() {};
  scan_elements(rep.rank(), max_len, budget, vis);
  // least squares fit over the top window
  const int lo = (max_len + 1) / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (int n = lo; n <= max_len; ++n) {
    const double y = cert.min_by_length[static_cast<size_t>(n - 1)];
    sx += n;
    sy += y;
    sxx += static_cast<double>(n) * n;
    sxy += n * y;
    ++cnt;
  }
  const double denom = cnt * sxx - sx * sx;
  cert.mu_hat = denom != 0.0 ? (cnt * sxy - sx * sy) / denom : 0.0;
  double c_hat = 0.0;
  for (int n = 1; n <= max_len; ++n)
    c_hat = std::max(c_hat, cert.mu_hat * n - cert.min_by_length[static_cast<size_t>(n - 1)]);
  cert.c_hat = c_hat;
  cert.pass = std::isfinite(cert.mu_hat) && cert.mu_hat >= mu_min;
  return cert;
}

FixedFlagData fixed_line(const RepPoint& rep, const Word& cls) {
  const Word core = ConjClass::of(cls).core;
  if (core.length() == 0) throw ConfigError("fixed_line needs a nontrivial class");
  const int d = rep.dim();
  const ProjMatrix m = evaluate(rep, core);
  EigenPairs ep = eigen_decomposition(m.mat());
  const double m1 = std::abs(ep.values[0]);
  const double m2 = std::abs(ep.values[1]);
  FixedFlagData out;
  if (!(m1 > 0.0) || !(m2 > 0.0)) throw NumericError("non-proximal class: vanishing eigenvalue");
  out.log_gap_line = std::log(m1) - std::log(m2);
  if (out.log_gap_line < 1e-10)
    throw NumericError("non-proximal class " + core.str() + ": top eigenvalue gap vanishes");
  out.line.resize(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) out.line[static_cast<size_t>(i)] = ep.vectors.at(i, 0);
  if (d >= 3) {
    const double ma = std::abs(ep.values[static_cast<size_t>(d - 3)]);
    const double mb = std::abs(ep.values[static_cast<size_t>(d - 2)]);
    out.log_gap_block = std::log(ma) - std::log(mb);
    if (out.log_gap_block < 1e-10)
      throw NumericError("non-proximal class " + core.str() + ": (d-2) eigenvalue gap vanishes");
    // modified gram-schmidt on the top d-2 eigenvector columns
    for (int c = 0; c + 2 < d; ++c) {
      std::vector<cx> v(static_cast<size_t>(d));
      for (int i = 0; i < d; ++i) v[static_cast<size_t>(i)] = ep.vectors.at(i, c);
      for (const auto& u : out.top_block) {
        cx dot = 0.0;
        for (int i = 0; i < d; ++i) dot += std::conj(u[static_cast<size_t>(i)]) * v[static_cast<size_t>(i)];
        for (int i = 0; i < d; ++i) v[static_cast<size_t>(i)] -= dot * u[static_cast<size_t>(i)];
      }
      double nrm = 0.0;
      for (const cx& z : v) nrm += std::norm(z);
      nrm = std::sqrt(nrm);
      if (nrm < 1e-12) throw NumericError("attracting subspace basis degenerated");
      for (cx& z : v) z /= nrm;
      out.top_block.push_back(std::move(v));
    }
  }
  return out;
}

HyperconvexityReport hyperconvexity_certificate(const RepPoint& rep, int triples, std::uint64_t seed,
                                                int core_len_cap, double gap_min) {
  const int d = rep.dim();
  if (d < 3) throw ConfigError("hyperconvexity needs dim >= 3");
  struct Flag {
    std::string name;
    FixedFlagData data;
  };
  std::vector<Flag> flags;
  enumerate_conjugacy_classes(rep.rank(), core_len_cap, true, 1ull << 22,
                              [&](std::span<const Letter> w, bool) {
                                if (flags.size() >= 400) return false;
                                Word word;
                                word.letters.assign(w.begin(), w.end());
                                try {
                                  flags.push_back({word.str(), fixed_line(rep, word)});
                                } catch (const NumericError&) {
                                  // skip a non-proximal class; the gap statistics ignore it
                                }
                                return true;
                              });
  if (flags.size() < 3) throw NumericError("hyperconvexity: fewer than 3 proximal classes found");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<size_t> pick(0, flags.size() - 1);
  HyperconvexityReport rep_out;
  rep_out.lines = static_cast<int>(flags.size());
  rep_out.min_gap = std::numeric_limits<double>::infinity();
  // sine of the projective angle between two unit lines
  auto sin_line = [](const std::vector<cx>& u, const std::vector<cx>& v) {
    cx dot = 0.0;
    for (size_t i = 0; i < u.size(); ++i) dot += std::conj(u[i]) * v[i];
    return std::sqrt(std::max(0.0, 1.0 - std::norm(dot)));
  };
  // sine distance from a unit line to the span of an orthonormal block
  auto sin_block = [](const std::vector<cx>& u, const std::vector<std::vector<cx>>& block) {
    double c2 = 0.0;
    for (const auto& b : block) {
      cx dot = 0.0;
      for (size_t i = 0; i < u.size(); ++i) dot += std::conj(b[i]) * u[i];
      c2 += std::norm(dot);
    }
    return std::sqrt(std::max(0.0, 1.0 - c2));
  };
  int done = 0, attempts = 0;
  while (done < triples && attempts < 50 * triples) {
    ++attempts;
    const size_t x = pick(rng), y = pick(rng), z = pick(rng);
    if (x == y || y == z || x == z) continue;
    const Flag& fx = flags[x];
    const Flag& fy = flags[y];
    const Flag& fz = flags[z];
    // reject triples whose sampled boundary points effectively coincide:
    // distinctness is part of the statement being certified
    const double sxy = sin_line(fx.data.line, fy.data.line);
    const double sxz = sin_line(fx.data.line, fz.data.line);
    const double syz = sin_line(fy.data.line, fz.data.line);
    if (sxy < 1e-8 || sxz < 1e-8 || syz < 1e-8) continue;
    CMat m(d);
    for (int i = 0; i < d; ++i) {
      m.at(i, 0) = fx.data.line[static_cast<size_t>(i)];
      m.at(i, 1) = fy.data.line[static_cast<size_t>(i)];
      for (int c = 0; c + 2 < d; ++c) m.at(i, c + 2) = fz.data.top_block[static_cast<size_t>(c)][static_cast<size_t>(i)];
    }
    // |det| in log space over the singular values, then strip the first-order
    // coincidence factors: the two line-to-block sines and the line-line sine
    const std::vector<double> sv = singular_values(m);
    double log_gap = 0.0;
    for (double s : sv) {
      if (!(s > 0.0)) { log_gap = -std::numeric_limits<double>::infinity(); break; }
      log_gap += std::log(s);
    }
    const double bxz = sin_block(fx.data.line, fz.data.top_block);
    const double byz = sin_block(fy.data.line, fz.data.top_block);
    log_gap -= std::log(sxy) + std::log(std::max(bxz, 1e-300)) + std::log(std::max(byz, 1e-300));
    const double gap = std::exp(log_gap);
    if (gap < rep_out.min_gap) {
      rep_out.min_gap = gap;
      rep_out.witness = fx.name + "," + fy.name + "," + fz.name;
    }
    ++done;
  }
  rep_out.triples = done;
  if (done < triples) throw NumericError("hyperconvexity: could not sample enough distinct triples");
  rep_out.pass = rep_out.min_gap >= gap_min;
  return rep_out;
}

LimitConeSample limit_cone(const RepPoint& rep, const std::vector<WeightFunctional>& fns,
                           int max_len, std::uint64_t budget) {
  const int d = rep.dim();
  for (const auto& f : fns)
    if (f.dim() != d) throw ConfigError("limit cone: functional dimension mismatch");
  std::vector<int> all_k(static_cast<size_t>(d - 1));
  for (int k = 1; k < d; ++k) all_k[static_cast<size_t>(k - 1)] = k;
  PeriodEngine eng(rep, all_k);
  std::vector<std::vector<double>> dirs;
  enumerate_conjugacy_classes(rep.rank(), max_len, true, budget,
                              [&](std::span<const Letter> w, bool) {
                                std::vector<double> v = eng.jordan_vector(w);
                                double nrm = 0.0;
                                for (double x : v) nrm += x * x;
                                nrm = std::sqrt(nrm);
                                if (nrm > 1e-12) {
                                  for (double& x : v) x /= nrm;
                                  dirs.push_back(std::move(v));
                                }
                                return true;
                              });
  std::sort(dirs.begin(), dirs.end());
  // collapse directions within 1e-9 in sup distance (sorted order makes this stable)
  std::vector<std::vector<double>> dedup;
  for (auto& v : dirs) {
    if (!dedup.empty()) {
      double dist = 0.0;
      for (size_t i = 0; i < v.size(); ++i) dist = std::max(dist, std::fabs(v[i] - dedup.back()[i]));
      if (dist < 1e-9) continue;
    }
    dedup.push_back(std::move(v));
  }
  LimitConeSample out;
  out.directions = std::move(dedup);
  out.min_values.assign(fns.size(), std::numeric_limits<double>::infinity());
  for (const auto& v : out.directions) {
    for (size_t fi = 0; fi < fns.size(); ++fi) {
      double s = 0.0;
      const auto c = fns[fi].coeffs();
      for (size_t i = 0; i < v.size(); ++i) s += c[i] * v[i];
      out.min_values[fi] = std::min(out.min_values[fi], s);
    }
  }
  return out;
}

// ------------------------------------------------------------ schottky

void validate_schottky(const SchottkyData& s) {
  const size_t n = s.disks.size();
  if (n < 2 || n % 2 != 0) throw ConfigError("schottky data needs 2k disks");
  if (!s.twists.empty() && s.twists.size() != n / 2)
    throw ConfigError("schottky data: one twist per generator");
  double rmax = 0.0;
  for (const auto& dsk : s.disks) {
    if (!(dsk.radius > 0.0)) throw ConfigError("schottky disk radius must be positive");
    rmax = std::max(rmax, dsk.radius);
  }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      const double gap = std::abs(s.disks[i].center - s.disks[j].center) -
                         (s.disks[i].radius + s.disks[j].radius);
      if (gap <= 1e-6 * rmax)
        throw ConfigError("schottky disks " + std::to_string(i) + " and " + std::to_string(j) +
                          " are not disjoint");
    }
}

RepPoint schottky_rep(const SchottkyData& s, std::string id) {
  validate_schottky(s);
  const int k = s.rank();
  std::vector<ProjMatrix> gens;
  gens.reserve(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) {
    const cx c1 = s.disks[static_cast<size_t>(2 * i)].center;
    const double r1 = s.disks[static_cast<size_t>(2 * i)].radius;
    const cx c2 = s.disks[static_cast<size_t>(2 * i + 1)].center;
    const double r2 = s.disks[static_cast<size_t>(2 * i + 1)].radius;
    const double theta = s.twists.empty() ? 0.0 : s.twists[static_cast<size_t>(i)];
    const cx tw{std::cos(theta), std::sin(theta)};
    // z -> c2 + tw r1 r2 / (c1 - z) maps the exterior of disk 2i into disk 2i+1
    CMat m(2);
    m.at(0, 0) = -c2;
    m.at(0, 1) = c1 * c2 + tw * (r1 * r2);
    m.at(1, 0) = -1.0;
    m.at(1, 1) = c1;
    gens.push_back(ProjMatrix::from(m));
  }
  return RepPoint::of(std::move(id), std::move(gens));
}

SchottkyData schottky_line_data(double l1, double l2, double separation) {
  if (!(l1 > 0.0) || !(l2 > 0.0)) throw ConfigError("translation lengths must be positive");
  const double r1 = 1.0 / std::cosh(0.5 * l1);
  const double r2 = 1.0 / std::cosh(0.5 * l2);
  SchottkyData s;
  s.disks = {{cx{-0.5 * separation - 1.0, 0.0}, r1},
             {cx{-0.5 * separation + 1.0, 0.0}, r1},
             {cx{0.5 * separation - 1.0, 0.0}, r2},
             {cx{0.5 * separation + 1.0, 0.0}, r2}};
  s.twists = {0.0, 0.0};
  validate_schottky(s);
  return s;
}

// ------------------------------------------------------------ families

namespace {

bool is_real_mat(const CMat& m) {
  for (const cx& z : m.flat())
    if (z.imag() != 0.0) return false;
  return true;
}

bool is_real_rep(const RepPoint& r) {
  for (const auto& g : r.gens)
    if (!is_real_mat(g.mat())) return false;
  return true;
}

std::string z_tag(cx z) {
  return "(" + std::to_string(z.real()) + "," + std::to_string(z.imag()) + ")";
}

}  // namespace

Family constant_family(const RepPoint& rep, std::string name) {
  Family f;
  f.name = std::move(name);
  f.rank = rep.rank();
  f.dim = rep.dim();
  f.holomorphic = true;
  f.conj_symmetric = is_real_rep(rep);
  f.at = [rep](cx) { return rep; };
  return f;
}

Family bending_family(const RepPoint& base, const CMat& X, std::string name) {
  if (X.dim() != base.dim()) throw ConfigError("bending direction dimension mismatch");
  Family f;
  f.name = name;
  f.rank = base.rank();
  f.dim = base.dim();
  f.holomorphic = true;
  f.conj_symmetric = is_real_rep(base) && is_real_mat(X);
  f.at = [base, X, name](cx z) {
    std::vector<ProjMatrix> gens = base.gens;
    const CMat e = matrix_exp(X.scaled(z));
    const CMat einv = matrix_exp(X.scaled(-z));
    const CMat last = e * gens.back().mat() * einv;
    gens.back() = ProjMatrix::from(last);
    return RepPoint::of(name + z_tag(z), std::move(gens));
  };
  return f;
}

Family sym_lift_family(const Family& base, int d) {
  if (base.dim != 2) throw ConfigError("symmetric lift starts from dim 2");
  if (d < 2) throw ConfigError("symmetric lift needs d >= 2");
  Family f;
  f.name = base.name + "-sym" + std::to_string(d);
  f.rank = base.rank;
  f.dim = d;
  f.holomorphic = base.holomorphic;
  f.conj_symmetric = base.conj_symmetric;
  const int n = d - 1;
  std::vector<double> w(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) w[static_cast<size_t>(i)] = std::sqrt(binomial(n, i));
  auto inner = base.at;
  const std::string nm = f.name;
  f.at = [inner, d, w, nm](cx z) {
    const RepPoint b = inner(z);
    std::vector<ProjMatrix> gens;
    gens.reserve(b.gens.size());
    for (const auto& g : b.gens) {
      CMat s = sym_power_mat(g.mat(), d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) s.at(i, j) *= w[static_cast<size_t>(i)] / w[static_cast<size_t>(j)];
      gens.push_back(ProjMatrix::from(s));
    }
    return RepPoint::of(nm + "/" + b.id, std::move(gens));
  };
  return f;
}

Family wedge_lift_family(const Family& base, int k) {
  Family f;
  f.name = base.name + "-ext" + std::to_string(k);
  f.rank = base.rank;
  f.dim = static_cast<int>(binomial(base.dim, k));
  f.holomorphic = base.holomorphic;
  f.conj_symmetric = base.conj_symmetric;
  auto inner = base.at;
  const std::string nm = f.name;
  f.at = [inner, k, nm](cx z) {
    const RepPoint b = inner(z);
    std::vector<ProjMatrix> gens;
    gens.reserve(b.gens.size());
    for (const auto& g : b.gens) gens.push_back(wedge(g, k));
    return RepPoint::of(nm + "/" + b.id, std::move(gens));
  };
  return f;
}

Family antiholomorphic_control(const Family& base) {
  Family f = base;
  f.name = base.name + "-bar";
  f.holomorphic = false;
  auto inner = base.at;
  f.at = [inner](cx z) { return inner(std::conj(z)); };
  return f;
}

// ------------------------------------------------------------ grids

namespace {

void verify_conj_symmetry(const ParamGrid& g) {
  for (int it = 1; it <= g.geo.nt; ++it) {
    for (int is = -g.geo.ns; is <= g.geo.ns; ++is) {
      const RepPoint& up = g.node(is, it);
      const RepPoint& dn = g.node(is, -it);
      for (size_t gi = 0; gi < up.gens.size(); ++gi) {
        const auto ua = up.gens[gi].mat().flat();
        const auto da = dn.gens[gi].mat().flat();
        for (size_t e = 0; e < ua.size(); ++e) {
          if (ua[e].real() != da[e].real() || ua[e].imag() != -da[e].imag())
            throw NumericError("grid declared conj-symmetric but node entries are not exact mirrors");
        }
      }
    }
  }
}

void verify_cauchy_riemann(const Family& fam, const GridGeometry& geo) {
  const cx z0{geo.s0, geo.t0};
  const double hs = geo.ds, ht = geo.dt;
  const RepPoint ps = fam.at(z0 + cx{hs, 0.0});
  const RepPoint ms = fam.at(z0 - cx{hs, 0.0});
  const RepPoint pt = fam.at(z0 + cx{0.0, ht});
  const RepPoint mt = fam.at(z0 - cx{0.0, ht});
  double worst = 0.0, scale = 0.0;
  for (size_t gi = 0; gi < ps.gens.size(); ++gi) {
    const auto a = ps.gens[gi].mat().flat();
    const auto b = ms.gens[gi].mat().flat();
    const auto c = pt.gens[gi].mat().flat();
    const auto d = mt.gens[gi].mat().flat();
    for (size_t e = 0; e < a.size(); ++e) {
      const cx fs = (a[e] - b[e]) / (2.0 * hs);
      const cx ft = (c[e] - d[e]) / (2.0 * ht);
      worst = std::max(worst, std::abs(fs + cx{0.0, 1.0} * ft));
      scale = std::max(scale, std::abs(fs) + std::abs(ft));
    }
  }
  if (scale > 1e-10 && worst > 0.05 * scale)
    throw NumericError("family declared holomorphic fails the Cauchy-Riemann probe");
}

}  // namespace

ParamGrid build_grid(const Family& fam, const GridGeometry& geo) {
  if (geo.ns < 0 || geo.nt < 0) throw ConfigError("grid needs ns, nt >= 0");
  if ((geo.ns > 0 && !(geo.ds > 0.0)) || (geo.nt > 0 && !(geo.dt > 0.0)))
    throw ConfigError("grid spacing must be positive");
  ParamGrid g;
  g.geo = geo;
  g.family_name = fam.name;
  g.rank = fam.rank;
  g.dim = fam.dim;
  g.nodes.reserve(static_cast<size_t>(g.rows()) * static_cast<size_t>(g.cols()));
  for (int it = -geo.nt; it <= geo.nt; ++it) {
    for (int is = -geo.ns; is <= geo.ns; ++is) {
      RepPoint p = fam.at(g.z(is, it));
      p.id = fam.name + "@" + std::to_string(is) + "," + std::to_string(it);
      g.nodes.push_back(std::move(p));
    }
  }
  g.holomorphic = fam.holomorphic;
  if (fam.holomorphic && geo.ns > 0 && geo.nt > 0) verify_cauchy_riemann(fam, geo);
  g.conj_symmetric = fam.conj_symmetric && geo.t0 == 0.0;
  if (g.conj_symmetric && geo.nt > 0) verify_conj_symmetry(g);
  return g;
}

void save_grid(const ParamGrid& grid, const std::string& path) {
  json j;
  j["rank"] = grid.rank;
  j["dim"] = grid.dim;
  j["family"] = grid.family_name;
  j["grid"] = {{"s0", grid.geo.s0}, {"t0", grid.geo.t0}, {"ds", grid.geo.ds},
               {"dt", grid.geo.dt}, {"ns", grid.geo.ns}, {"nt", grid.geo.nt}};
  j["flags"] = {{"holomorphic", grid.holomorphic}, {"conj_symmetric", grid.conj_symmetric}};
  json nodes = json::array();
  for (int it = -grid.geo.nt; it <= grid.geo.nt; ++it) {
    for (int is = -grid.geo.ns; is <= grid.geo.ns; ++is) {
      const RepPoint& p = grid.node(is, it);
      json gens = json::array();
      for (const auto& g : p.gens) {
        json m = json::array();
        for (const cx& e : g.mat().flat()) m.push_back(json::array({e.real(), e.imag()}));
        gens.push_back(std::move(m));
      }
      nodes.push_back({{"is", is}, {"it", it}, {"generators", std::move(gens)}});
    }
  }
  j["nodes"] = std::move(nodes);
  std::string text = j.dump(1);
  text.push_back('\n');
  write_file(path, text);
}

ParamGrid load_grid(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError("grid file " + path + ": " + e.what());
  }
  for (const char* key : {"rank", "dim", "grid", "flags", "nodes"})
    if (!j.contains(key)) throw ConfigError("grid file missing key: " + std::string(key));
  ParamGrid g;
  g.rank = j["rank"].get<int>();
  g.dim = j["dim"].get<int>();
  g.family_name = j.value("family", std::string("grid"));
  const json& gg = j["grid"];
  for (const char* key : {"s0", "t0", "ds", "dt", "ns", "nt"})
    if (!gg.contains(key)) throw ConfigError("grid geometry missing key: " + std::string(key));
  g.geo.s0 = gg["s0"].get<double>();
  g.geo.t0 = gg["t0"].get<double>();
  g.geo.ds = gg["ds"].get<double>();
  g.geo.dt = gg["dt"].get<double>();
  g.geo.ns = gg["ns"].get<int>();
  g.geo.nt = gg["nt"].get<int>();
  g.holomorphic = j["flags"].value("holomorphic", false);
  g.conj_symmetric = j["flags"].value("conj_symmetric", false);
  const size_t expect = static_cast<size_t>(g.rows()) * static_cast<size_t>(g.cols());
  if (j["nodes"].size() != expect) throw ConfigError("grid file node count mismatch");
  g.nodes.resize(expect);
  std::vector<bool> seen(expect, false);
  for (const json& nd : j["nodes"]) {
    for (const char* key : {"is", "it", "generators"})
      if (!nd.contains(key)) throw ConfigError("grid node missing key: " + std::string(key));
    const int is = nd["is"].get<int>(), it = nd["it"].get<int>();
    if (is < -g.geo.ns || is > g.geo.ns || it < -g.geo.nt || it > g.geo.nt)
      throw ConfigError("grid node index out of range");
    const json& gens = nd["generators"];
    if (static_cast<int>(gens.size()) != g.rank) throw ConfigError("grid node generator count mismatch");
    std::vector<ProjMatrix> mats;
    mats.reserve(gens.size());
    for (const json& gm : gens) {
      if (static_cast<int>(gm.size()) != g.dim * g.dim)
        throw ConfigError("grid node matrix size mismatch");
      CMat m(g.dim);
      for (int e = 0; e < g.dim * g.dim; ++e) {
        const json& pair = gm[static_cast<size_t>(e)];
        if (pair.size() != 2) throw ConfigError("grid matrix entries are [re, im] pairs");
        m.data()[e] = cx{pair[0].get<double>(), pair[1].get<double>()};
      }
      mats.push_back(ProjMatrix::prenormalized(m));
    }
    const size_t idx = g.index(is, it);
    if (seen[idx]) throw ConfigError("grid file repeats a node");
    seen[idx] = true;
    RepPoint p = RepPoint::of(g.family_name + "@" + std::to_string(is) + "," + std::to_string(it),
                              std::move(mats));
    g.nodes[idx] = std::move(p);
  }
  return g;
}

}  // namespace anosov
