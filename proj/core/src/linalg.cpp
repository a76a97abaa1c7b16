#include "anosov/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace anosov {

namespace {

constexpr double kEps = 2.220446049250313e-16;

std::string dim_msg(const char* what, int n) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%s (dim %d)", what, n);
  return buf;
}

}  // namespace

cx csqrt(cx z) {
  const double re = z.real(), im = z.imag();
  if (re == 0.0 && im == 0.0) return {0.0, 0.0};
  const double m = std::hypot(re, im);
  // sqrt((m + |re|)/2) is the larger of the result's |components|
  const double u = std::sqrt(0.5 * (m + std::fabs(re)));
  if (re >= 0.0) return {u, im / (2.0 * u)};
  // negative real part: imaginary component dominates, sign follows im
  return {std::fabs(im) / (2.0 * u), std::copysign(u, im)};
}

CMat CMat::identity(int n) {
  CMat m(n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

void mul_into(int n, const cx* a, const cx* b, cx* out) {
  // hand-rolled complex arithmetic: keeps the kernel free of the libgcc
  // NaN-fixup path and makes the exact op sequence explicit
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double sr = 0.0, si = 0.0;
      const cx* arow = a + static_cast<size_t>(i) * n;
      for (int k = 0; k < n; ++k) {
        const double ar = arow[k].real(), ai = arow[k].imag();
        const double br = b[static_cast<size_t>(k) * n + j].real();
        const double bi = b[static_cast<size_t>(k) * n + j].imag();
        sr += ar * br - ai * bi;
        si += ar * bi + ai * br;
      }
      out[static_cast<size_t>(i) * n + j] = {sr, si};
    }
  }
}

double renormalize(int n, cx* a) {
  double m = 0.0;
  const size_t nn = static_cast<size_t>(n) * n;
  for (size_t i = 0; i < nn; ++i) m = std::max(m, std::abs(a[i]));
  if (m == 0.0) throw NumericError("renormalize: zero matrix");
  for (size_t i = 0; i < nn; ++i) a[i] /= m;
  return std::log(m);
}

CMat CMat::operator*(const CMat& o) const {
  CMat r(n_);
  mul_into(n_, data(), o.data(), r.data());
  return r;
}

CMat CMat::operator+(const CMat& o) const {
  CMat r(n_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
  return r;
}

CMat CMat::operator-(const CMat& o) const {
  CMat r(n_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
  return r;
}

CMat CMat::scaled(cx s) const {
  CMat r(n_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * s;
  return r;
}

CMat CMat::adjoint() const {
  CMat r(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r.at(i, j) = std::conj(at(j, i));
  return r;
}

CMat CMat::transpose() const {
  CMat r(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r.at(i, j) = at(j, i);
  return r;
}

CMat CMat::conjugate() const {
  CMat r(n_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = std::conj(a_[i]);
  return r;
}

double CMat::max_abs() const {
  double m = 0.0;
  for (const cx& z : a_) m = std::max(m, std::abs(z));
  return m;
}

double CMat::frobenius() const {
  double s = 0.0;
  for (const cx& z : a_) s += std::norm(z);
  return std::sqrt(s);
}

// ---------------------------------------------------------------- LU

namespace {

// in-place LU with partial pivoting; returns permutation sign, fills piv
// throws on an exactly singular matrix
double lu_factor(int n, cx* a, int* piv) {
  double sign = 1.0;
  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::abs(a[static_cast<size_t>(k) * n + k]);
    for (int i = k + 1; i < n; ++i) {
      const double v = std::abs(a[static_cast<size_t>(i) * n + k]);
      if (v > best) {
        best = v;
        p = i;
      }
    }
    piv[k] = p;
    if (best == 0.0) throw NumericError(dim_msg("degenerate matrix: singular in LU", n));
    if (p != k) {
      for (int j = 0; j < n; ++j)
        std::swap(a[static_cast<size_t>(k) * n + j], a[static_cast<size_t>(p) * n + j]);
      sign = -sign;
    }
    const cx pivot = a[static_cast<size_t>(k) * n + k];
    for (int i = k + 1; i < n; ++i) {
      const cx m = a[static_cast<size_t>(i) * n + k] / pivot;
      a[static_cast<size_t>(i) * n + k] = m;
      for (int j = k + 1; j < n; ++j)
        a[static_cast<size_t>(i) * n + j] -= m * a[static_cast<size_t>(k) * n + j];
    }
  }
  return sign;
}

}  // namespace

LogDet log_det(const CMat& a) {
  const int n = a.dim();
  std::vector<cx> lu(a.flat().begin(), a.flat().end());
  std::vector<int> piv(n);
  const double sign = lu_factor(n, lu.data(), piv.data());
  double la = 0.0;
  cx phase = {sign, 0.0};
  for (int k = 0; k < n; ++k) {
    const cx d = lu[static_cast<size_t>(k) * n + k];
    const double m = std::abs(d);
    la += std::log(m);
    phase *= d / m;
  }
  return {la, phase};
}

CMat inverse(const CMat& a) {
  const int n = a.dim();
  std::vector<cx> lu(a.flat().begin(), a.flat().end());
  std::vector<int> piv(n);
  lu_factor(n, lu.data(), piv.data());
  CMat inv = CMat::identity(n);
  // solve column by column: forward then back substitution on permuted rhs
  for (int c = 0; c < n; ++c) {
    std::vector<cx> x(n);
    for (int i = 0; i < n; ++i) x[i] = inv.at(i, c);
    for (int k = 0; k < n; ++k)
      if (piv[k] != k) std::swap(x[k], x[piv[k]]);
    for (int i = 1; i < n; ++i)
      for (int j = 0; j < i; ++j) x[i] -= lu[static_cast<size_t>(i) * n + j] * x[j];
    for (int i = n - 1; i >= 0; --i) {
      for (int j = i + 1; j < n; ++j) x[i] -= lu[static_cast<size_t>(i) * n + j] * x[j];
      x[i] /= lu[static_cast<size_t>(i) * n + i];
    }
    for (int i = 0; i < n; ++i) inv.at(i, c) = x[i];
  }
  return inv;
}

// ---------------------------------------------------------------- SVD

namespace {

// one-sided Jacobi on columns; b is column-major n x n, overwritten
// returns singular values unsorted (column norms)
std::vector<double> jacobi_sv(int n, std::vector<cx>& b) {
  const int max_sweeps = 60;
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    // freeze columns at rounding-noise size relative to the largest column:
    // for rank-deficient input the dead column's direction is noise and the
    // relative-angle test below would keep rotating it forever
    double scale2 = 0.0;
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += std::norm(b[static_cast<size_t>(j) * n + k]);
      scale2 = std::max(scale2, s);
    }
    const double floor2 = scale2 * 1e-30;
    bool changed = false;
    for (int i = 0; i < n - 1; ++i) {
      for (int j = i + 1; j < n; ++j) {
        cx* u = b.data() + static_cast<size_t>(i) * n;
        cx* v = b.data() + static_cast<size_t>(j) * n;
        double alpha = 0.0, beta = 0.0;
        cx gamma = 0.0;
        for (int k = 0; k < n; ++k) {
          alpha += std::norm(u[k]);
          beta += std::norm(v[k]);
          gamma += std::conj(u[k]) * v[k];
        }
        if (alpha <= floor2 || beta <= floor2) continue;
        const double m = std::abs(gamma);
        if (m <= 1e-15 * std::sqrt(alpha * beta) || m == 0.0) continue;
        changed = true;
        const cx pc = std::conj(gamma) / m;  // strips the phase off <u,v>
        const double zeta = (beta - alpha) / (2.0 * m);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (int k = 0; k < n; ++k) {
          const cx uk = u[k], vk = pc * v[k];
          u[k] = c * uk - s * vk;
          v[k] = s * uk + c * vk;
        }
      }
    }
    if (!changed) break;
  }
  if (sweep == max_sweeps)
    throw NumericError(dim_msg("jacobi svd did not converge after 60 sweeps", n));
  std::vector<double> sv(n);
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += std::norm(b[static_cast<size_t>(j) * n + k]);
    sv[j] = std::sqrt(s);
  }
  return sv;
}

}  // namespace

std::vector<double> singular_values(const CMat& a) {
  const int n = a.dim();
  std::vector<cx> b(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b[static_cast<size_t>(j) * n + i] = a.at(i, j);
  std::vector<double> sv = jacobi_sv(n, b);
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

// ---------------------------------------------------------------- eigenvalues

namespace {

struct Reflector {
  int k;                // column being cleared, acts on rows k+1..n-1
  std::vector<cx> v;    // householder vector, length n-k-1
  double tau;
};

// reduce to upper Hessenberg in place; optionally record reflectors
void to_hessenberg(int n, cx* a, std::vector<Reflector>* refl) {
  std::vector<cx> v(n);
  for (int k = 0; k + 2 < n; ++k) {
    double xnorm2 = 0.0;
    for (int i = k + 1; i < n; ++i) xnorm2 += std::norm(a[static_cast<size_t>(i) * n + k]);
    const double xnorm = std::sqrt(xnorm2);
    if (xnorm == 0.0) continue;
    const cx x0 = a[static_cast<size_t>(k + 1) * n + k];
    const double x0a = std::abs(x0);
    const cx phase = x0a == 0.0 ? cx{1.0, 0.0} : x0 / x0a;
    for (int i = k + 1; i < n; ++i) v[i] = a[static_cast<size_t>(i) * n + k];
    v[k + 1] += phase * xnorm;
    double vv = 0.0;
    for (int i = k + 1; i < n; ++i) vv += std::norm(v[i]);
    if (vv == 0.0) continue;
    const double tau = 2.0 / vv;
    // left: rows k+1..n-1, cols k..n-1
    for (int j = k; j < n; ++j) {
      cx w = 0.0;
      for (int i = k + 1; i < n; ++i) w += std::conj(v[i]) * a[static_cast<size_t>(i) * n + j];
      w *= tau;
      for (int i = k + 1; i < n; ++i) a[static_cast<size_t>(i) * n + j] -= w * v[i];
    }
    // right: all rows, cols k+1..n-1
    for (int i = 0; i < n; ++i) {
      cx w = 0.0;
      for (int j = k + 1; j < n; ++j) w += a[static_cast<size_t>(i) * n + j] * v[j];
      w *= tau;
      for (int j = k + 1; j < n; ++j) a[static_cast<size_t>(i) * n + j] -= w * std::conj(v[j]);
    }
    // exact zeros below the subdiagonal
    for (int i = k + 2; i < n; ++i) a[static_cast<size_t>(i) * n + k] = 0.0;
    if (refl) refl->push_back({k, std::vector<cx>(v.begin() + k + 1, v.begin() + n), tau});
  }
}

struct GivensRot {
  double c;
  cx s;
};

// unitary [[c, s], [-conj(s), c]] sending (a, b) to (r, 0)
GivensRot make_givens(cx a, cx b, cx* r) {
  if (b == cx{0.0, 0.0}) {
    *r = a;
    return {1.0, {0.0, 0.0}};
  }
  const double aa = std::abs(a);
  if (aa == 0.0) {
    const double ba = std::abs(b);
    *r = ba;
    return {0.0, std::conj(b) / ba};
  }
  const double t = std::hypot(aa, std::abs(b));
  const cx u = a / aa;
  *r = u * t;
  return {aa / t, u * std::conj(b) / t};
}

// single-shift explicit QR on an upper Hessenberg matrix, in place.
// q, when non-null, accumulates the similarity (a = Q T Q^H on exit given
// q holds the Hessenberg similarity on entry). returns false on stall.
bool qr_triangularize(int n, cx* h, cx* q) {
  if (n == 0) return true;
  auto H = [&](int i, int j) -> cx& { return h[static_cast<size_t>(i) * n + j]; };
  std::vector<GivensRot> rots(static_cast<size_t>(std::max(1, n)));
  int hi = n - 1;
  int iter = 0;
  long total = 0;
  const long max_total = 120L * n + 400;
  while (hi >= 0) {
    if (++total > max_total)
      throw NumericError(dim_msg("eigenvalue iteration did not converge", n));
    // deflation scan: find the start of the active block ending at hi
    int lo = hi;
    while (lo > 0) {
      const double sd = std::abs(H(lo, lo - 1));
      double tol = kEps * (std::abs(H(lo - 1, lo - 1)) + std::abs(H(lo, lo)));
      if (tol == 0.0) tol = kEps;
      if (sd <= tol) {
        H(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi) {
      --hi;
      iter = 0;
      continue;
    }
    ++iter;
    if (iter > 600) throw NumericError(dim_msg("eigenvalue iteration stalled", n));
    cx mu;
    if (iter % 24 == 0) {
      // exceptional shift to break symmetry-induced cycles
      mu = H(hi, hi) + cx{0.75 * std::abs(H(hi, hi - 1)), 0.0};
    } else {
      // wilkinson: eigenvalue of the trailing 2x2 closest to H(hi,hi)
      const cx a = H(hi - 1, hi - 1), b = H(hi - 1, hi), c = H(hi, hi - 1), d = H(hi, hi);
      const cx tr2 = 0.5 * (a - d);
      const cx disc = csqrt(tr2 * tr2 + b * c);
      mu = (std::abs(tr2 - disc) <= std::abs(tr2 + disc)) ? d + tr2 - disc : d + tr2 + disc;
    }
    for (int k = lo; k <= hi; ++k) H(k, k) -= mu;
    const int colend = q ? n - 1 : hi;
    const int rowstart = q ? 0 : lo;
    for (int k = lo; k < hi; ++k) {
      cx r;
      rots[static_cast<size_t>(k)] = make_givens(H(k, k), H(k + 1, k), &r);
      const GivensRot& g = rots[static_cast<size_t>(k)];
      H(k, k) = r;
      H(k + 1, k) = 0.0;
      for (int j = k + 1; j <= colend; ++j) {
        const cx x = H(k, j), y = H(k + 1, j);
        H(k, j) = g.c * x + g.s * y;
        H(k + 1, j) = -std::conj(g.s) * x + g.c * y;
      }
    }
    for (int k = lo; k < hi; ++k) {
      const GivensRot& g = rots[static_cast<size_t>(k)];
      const int rend = std::min(k + 1, hi);
      for (int i = rowstart; i <= rend; ++i) {
        const cx x = H(i, k), y = H(i, k + 1);
        H(i, k) = g.c * x + std::conj(g.s) * y;
        H(i, k + 1) = -g.s * x + g.c * y;
      }
      if (q) {
        for (int i = 0; i < n; ++i) {
          const cx x = q[static_cast<size_t>(i) * n + k], y = q[static_cast<size_t>(i) * n + k + 1];
          q[static_cast<size_t>(i) * n + k] = g.c * x + std::conj(g.s) * y;
          q[static_cast<size_t>(i) * n + k + 1] = -g.s * x + g.c * y;
        }
      }
    }
    for (int k = lo; k <= hi; ++k) H(k, k) += mu;
  }
  return true;
}

bool modulus_greater(const cx& a, const cx& b) {
  const double ma = std::abs(a), mb = std::abs(b);
  if (ma != mb) return ma > mb;
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() > b.imag();
}

}  // namespace

std::vector<cx> eigenvalues(const CMat& a) {
  const int n = a.dim();
  std::vector<cx> h(a.flat().begin(), a.flat().end());
  to_hessenberg(n, h.data(), nullptr);
  qr_triangularize(n, h.data(), nullptr);
  std::vector<cx> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = h[static_cast<size_t>(i) * n + i];
  std::sort(ev.begin(), ev.end(), modulus_greater);
  return ev;
}

EigenPairs eigen_decomposition(const CMat& a) {
  const int n = a.dim();
  std::vector<cx> t(a.flat().begin(), a.flat().end());
  std::vector<Reflector> refl;
  to_hessenberg(n, t.data(), &refl);
  // build the orthogonal similarity from the recorded reflectors
  CMat q = CMat::identity(n);
  for (auto it = refl.rbegin(); it != refl.rend(); ++it) {
    const int k = it->k;
    for (int j = 0; j < n; ++j) {
      cx w = 0.0;
      for (int i = k + 1; i < n; ++i) w += std::conj(it->v[static_cast<size_t>(i - k - 1)]) * q.at(i, j);
      w *= it->tau;
      for (int i = k + 1; i < n; ++i) q.at(i, j) -= w * it->v[static_cast<size_t>(i - k - 1)];
    }
  }
  qr_triangularize(n, t.data(), q.data());
  auto T = [&](int i, int j) -> cx { return t[static_cast<size_t>(i) * n + j]; };
  double tnorm = 0.0;
  for (const cx& z : t) tnorm = std::max(tnorm, std::abs(z));
  if (tnorm == 0.0) tnorm = 1.0;
  // back-substitute each eigenvector of the triangular factor, map through q
  EigenPairs out;
  out.values.resize(n);
  out.vectors = CMat(n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return modulus_greater(T(i, i), T(j, j)); });
  std::vector<cx> y(n), v(n);
  for (int col = 0; col < n; ++col) {
    const int i = order[static_cast<size_t>(col)];
    const cx lam = T(i, i);
    std::fill(y.begin(), y.end(), cx{0.0, 0.0});
    y[i] = 1.0;
    for (int j = i - 1; j >= 0; --j) {
      cx acc = 0.0;
      for (int k = j + 1; k <= i; ++k) acc += T(j, k) * y[k];
      cx den = T(j, j) - lam;
      if (std::abs(den) < kEps * tnorm) den = cx{kEps * tnorm, 0.0};
      y[j] = -acc / den;
      const double ym = std::abs(y[j]);
      if (ym > 1e120) {
        for (int k = j; k <= i; ++k) y[k] /= ym;
      }
    }
    for (int r = 0; r < n; ++r) {
      cx acc = 0.0;
      for (int k = 0; k <= i; ++k) acc += q.at(r, k) * y[k];
      v[r] = acc;
    }
    double nrm = 0.0;
    for (int r = 0; r < n; ++r) nrm += std::norm(v[r]);
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) throw NumericError(dim_msg("eigenvector reconstruction failed", n));
    // pin the phase: largest entry becomes real positive
    int imax = 0;
    double best = -1.0;
    for (int r = 0; r < n; ++r) {
      const double m = std::abs(v[r]);
      if (m > best) {
        best = m;
        imax = r;
      }
    }
    const cx ph = std::conj(v[imax]) / std::abs(v[imax]);
    for (int r = 0; r < n; ++r) out.vectors.at(r, col) = v[r] * ph / nrm;
    out.values[static_cast<size_t>(col)] = lam;
  }
  return out;
}

CMat matrix_exp(const CMat& a) {
  const int n = a.dim();
  int squarings = 0;
  double m = a.max_abs();
  while (m > 0.25 && squarings < 60) {
    m *= 0.5;
    ++squarings;
  }
  const double scale = std::ldexp(1.0, -squarings);
  CMat x = a.scaled(scale);
  CMat acc = CMat::identity(n);
  CMat term = CMat::identity(n);
  for (int k = 1; k <= 24; ++k) {
    term = term * x;
    term = term.scaled(1.0 / k);
    acc = acc + term;
    if (term.max_abs() < 1e-18 * std::max(1.0, acc.max_abs())) break;
  }
  for (int s = 0; s < squarings; ++s) acc = acc * acc;
  return acc;
}

// ---------------------------------------------------------------- projective

ProjMatrix ProjMatrix::from(const CMat& m) {
  const int n = m.dim();
  if (n < 2) throw NumericError("projective matrix needs dim >= 2");
  LogDet ld = log_det(m);  // throws when singular
  if (!std::isfinite(ld.log_abs)) throw NumericError(dim_msg("degenerate matrix: |det| overflow", n));
  const double s = std::exp(-ld.log_abs / n);
  if (s == 0.0 || !std::isfinite(s))
    throw NumericError(dim_msg("degenerate matrix: cannot normalize |det| to 1", n));
  return ProjMatrix(m.scaled(cx{s, 0.0}));
}

ProjMatrix ProjMatrix::prenormalized(const CMat& m) {
  const LogDet ld = log_det(m);
  if (std::fabs(ld.log_abs) > 1e-6)
    throw NumericError("prenormalized: matrix determinant modulus is not 1");
  return ProjMatrix(m);
}

ProjMatrix ProjMatrix::inverse() const { return from(anosov::inverse(m_)); }

ProjMatrix ProjMatrix::operator*(const ProjMatrix& o) const { return from(m_ * o.m_); }

CartanVector CartanVector::of(std::vector<double> logs) {
  std::sort(logs.begin(), logs.end(), std::greater<>());
  double mean = 0.0;
  for (double v : logs) mean += v;
  mean /= static_cast<double>(logs.size());
  for (double& v : logs) v -= mean;
  CartanVector c;
  c.v_ = std::move(logs);
  return c;
}

CartanVector cartan(const ProjMatrix& g) {
  std::vector<double> sv = singular_values(g.mat());
  const int n = g.dim();
  if (sv[static_cast<size_t>(n - 1)] <= sv[0] * 1e-13)
    throw NumericError(dim_msg("degenerate matrix: condition number exceeds 1e13 in cartan", n));
  std::vector<double> logs(sv.size());
  for (size_t i = 0; i < sv.size(); ++i) logs[i] = std::log(sv[i]);
  return CartanVector::of(std::move(logs));
}

CartanVector jordan(const ProjMatrix& g) {
  std::vector<cx> ev = eigenvalues(g.mat());
  std::vector<double> logs(ev.size());
  for (size_t i = 0; i < ev.size(); ++i) {
    const double m = std::abs(ev[i]);
    if (m == 0.0) throw NumericError("jordan: zero eigenvalue on an invertible matrix");
    logs[i] = std::log(m);
  }
  return CartanVector::of(std::move(logs));
}

// ---------------------------------------------------------------- lifts

namespace {

std::vector<std::vector<int>> k_subsets(int d, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) cur[static_cast<size_t>(i)] = i;
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[static_cast<size_t>(i)] == d - k + i) --i;
    if (i < 0) break;
    ++cur[static_cast<size_t>(i)];
    for (int j = i + 1; j < k; ++j) cur[static_cast<size_t>(j)] = cur[static_cast<size_t>(j - 1)] + 1;
  }
  return out;
}

cx minor_det(const CMat& g, const std::vector<int>& rows, const std::vector<int>& cols) {
  const int k = static_cast<int>(rows.size());
  if (k == 1) return g.at(rows[0], cols[0]);
  if (k == 2)
    return g.at(rows[0], cols[0]) * g.at(rows[1], cols[1]) -
           g.at(rows[0], cols[1]) * g.at(rows[1], cols[0]);
  std::vector<cx> m(static_cast<size_t>(k) * k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      m[static_cast<size_t>(i) * k + j] = g.at(rows[static_cast<size_t>(i)], cols[static_cast<size_t>(j)]);
  // LU determinant on the k x k scratch
  cx det = 1.0;
  for (int c = 0; c < k; ++c) {
    int p = c;
    double best = std::abs(m[static_cast<size_t>(c) * k + c]);
    for (int i = c + 1; i < k; ++i) {
      const double v = std::abs(m[static_cast<size_t>(i) * k + c]);
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best == 0.0) return 0.0;
    if (p != c) {
      for (int j = 0; j < k; ++j) std::swap(m[static_cast<size_t>(c) * k + j], m[static_cast<size_t>(p) * k + j]);
      det = -det;
    }
    const cx piv = m[static_cast<size_t>(c) * k + c];
    det *= piv;
    for (int i = c + 1; i < k; ++i) {
      const cx f = m[static_cast<size_t>(i) * k + c] / piv;
      for (int j = c + 1; j < k; ++j) m[static_cast<size_t>(i) * k + j] -= f * m[static_cast<size_t>(c) * k + j];
    }
  }
  return det;
}

}  // namespace

CMat wedge_mat(const CMat& g, int k) {
  const int d = g.dim();
  if (k < 1 || k >= d) throw ConfigError("wedge: need 1 <= k < dim");
  const double sz = binomial(d, k);
  if (sz > 4000.0) throw BudgetError("wedge: lifted dimension exceeds 4000");
  const auto subs = k_subsets(d, k);
  const int m = static_cast<int>(subs.size());
  CMat out(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) out.at(i, j) = minor_det(g, subs[static_cast<size_t>(i)], subs[static_cast<size_t>(j)]);
  return out;
}

ProjMatrix wedge(const ProjMatrix& g, int k) { return ProjMatrix::from(wedge_mat(g.mat(), k)); }

CMat sym_power_mat(const CMat& g, int d) {
  if (g.dim() != 2) throw ConfigError("sym_power: input must be 2 x 2");
  if (d < 2) throw ConfigError("sym_power: need d >= 2");
  const int n = d - 1;
  const cx a = g.at(0, 0), b = g.at(0, 1), c = g.at(1, 0), e = g.at(1, 1);
  // powers up to n of each entry
  auto powers = [n](cx z) {
    std::vector<cx> p(static_cast<size_t>(n + 1));
    p[0] = 1.0;
    for (int i = 1; i <= n; ++i) p[static_cast<size_t>(i)] = p[static_cast<size_t>(i - 1)] * z;
    return p;
  };
  const auto pa = powers(a), pb = powers(b), pc = powers(c), pe = powers(e);
  CMat out(d);
  // basis e1^{n-j} e2^j maps to (a e1 + c e2)^{n-j} (b e1 + d e2)^j
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      cx acc = 0.0;
      for (int t = 0; t <= j; ++t) {
        const int r = n - i - t;  // e1-power drawn from the first factor
        if (r < 0 || r > n - j) continue;
        const int cexp = (n - j) - r;
        acc += binomial(n - j, r) * binomial(j, t) * pa[static_cast<size_t>(r)] * pc[static_cast<size_t>(cexp)] *
               pb[static_cast<size_t>(t)] * pe[static_cast<size_t>(j - t)];
      }
      out.at(i, j) = acc;
    }
  }
  return out;
}

ProjMatrix sym_power(const ProjMatrix& g, int d) { return ProjMatrix::from(sym_power_mat(g.mat(), d)); }

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(r);
}

// ---------------------------------------------------------------- workspace

EigenWorkspace::EigenWorkspace(int max_dim)
    : cap_(max_dim),
      h_(static_cast<size_t>(max_dim) * max_dim),
      w_(static_cast<size_t>(max_dim) * 2),
      r_(static_cast<size_t>(max_dim)) {}

namespace {

// moduli of the two eigenvalues of [[a, b], [c, d]], largest first.
// stable: larger root by the sign-matched quadratic formula, smaller via det
void eig2_moduli(cx a, cx b, cx c, cx d, double* m1, double* m2) {
  const cx tr = a + d;
  const cx det = a * d - b * c;
  const cx disc = csqrt(0.25 * tr * tr - det);
  const cx h = 0.5 * tr;
  const cx r1 = (std::abs(h + disc) >= std::abs(h - disc)) ? h + disc : h - disc;
  const double am1 = std::abs(r1);
  if (am1 == 0.0) {
    *m1 = 0.0;
    *m2 = 0.0;
    return;
  }
  *m1 = am1;
  *m2 = std::abs(det) / am1;
}

cx cbrt_branch(cx z) {
  const double m = std::abs(z);
  if (m == 0.0) return {0.0, 0.0};
  const double r = std::cbrt(m);
  const double th = std::atan2(z.imag(), z.real()) / 3.0;
  return {r * std::cos(th), r * std::sin(th)};
}

}  // namespace

double EigenWorkspace::top_eig_log(int n, const cx* a) {
  if (n == 1) {
    const double m = std::abs(a[0]);
    return std::log(std::max(m, 1e-300));
  }
  if (n == 2) {
    double m1, m2;
    eig2_moduli(a[0], a[1], a[2], a[3], &m1, &m2);
    return std::log(std::max(m1, 1e-300));
  }
  if (n == 3) {
    // characteristic polynomial x^3 - c2 x^2 + c1 x - c0
    const cx c2 = a[0] + a[4] + a[8];
    const cx c1 = a[0] * a[4] - a[1] * a[3] + a[0] * a[8] - a[2] * a[6] + a[4] * a[8] - a[5] * a[7];
    const cx c0 = a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
                  a[2] * (a[3] * a[7] - a[4] * a[6]);
    const cx p = c1 - c2 * c2 / 3.0;
    const cx q = (-2.0 / 27.0) * c2 * c2 * c2 + c2 * c1 / 3.0 - c0;
    // x^3 + px + q = 0 after the shift x = lambda - c2/3;
    // cardano: x = u + v, u^3 = -q/2 +- sqrt(q^2/4 + p^3/27), v = -p/(3u)
    const cx D = csqrt(0.25 * q * q + p * p * p / 27.0);
    cx u3 = -0.5 * q + D;
    if (std::abs(-0.5 * q - D) > std::abs(u3)) u3 = -0.5 * q - D;
    const cx u = cbrt_branch(u3);
    cx best = 0.0;
    double bm = -1.0;
    const cx omega{-0.5, 0.8660254037844386};
    cx uk = u;
    for (int k = 0; k < 3; ++k) {
      const cx v = (std::abs(uk) == 0.0) ? cx{0.0, 0.0} : -p / (3.0 * uk);
      const cx lam = uk + v + c2 / 3.0;
      const double m = std::abs(lam);
      if (m > bm) {
        bm = m;
        best = lam;
      }
      uk *= omega;
    }
    // newton polish on the original characteristic polynomial
    bool ok = true;
    cx lam = best;
    for (int it = 0; it < 3; ++it) {
      const cx f = ((lam - c2) * lam + c1) * lam - c0;
      const cx fp = (3.0 * lam - 2.0 * c2) * lam + c1;
      if (std::abs(fp) == 0.0) {
        ok = false;
        break;
      }
      lam -= f / fp;
    }
    if (ok) {
      const double residual = std::abs(((lam - c2) * lam + c1) * lam - c0);
      const double scale = std::abs(lam * lam * lam) + std::abs(c2 * lam * lam) + std::abs(c1 * lam) + std::abs(c0);
      if (residual <= 1e-9 * std::max(scale, 1e-30)) return std::log(std::max(std::abs(lam), 1e-300));
    }
    // fall through to QR on pathological input
  }
  eig_moduli_logs(n, a, r_.data());
  return r_[0];
}

void EigenWorkspace::eig_moduli_logs(int n, const cx* a, double* out) {
  if (n == 2) {
    double m1, m2;
    eig2_moduli(a[0], a[1], a[2], a[3], &m1, &m2);
    out[0] = std::log(std::max(m1, 1e-300));
    out[1] = std::log(std::max(m2, 1e-300));
    return;
  }
  if (n > cap_) throw NumericError("eigen workspace: dimension exceeds capacity");
  std::copy(a, a + static_cast<size_t>(n) * n, h_.begin());
  to_hessenberg(n, h_.data(), nullptr);
  qr_triangularize(n, h_.data(), nullptr);
  for (int i = 0; i < n; ++i) out[i] = std::log(std::max(std::abs(h_[static_cast<size_t>(i) * n + i]), 1e-300));
  std::sort(out, out + n, std::greater<>());
}

double EigenWorkspace::top_sv_log(int n, const cx* a) {
  if (n == 1) return std::log(std::max(std::abs(a[0]), 1e-300));
  if (n == 2) {
    const double f2 = std::norm(a[0]) + std::norm(a[1]) + std::norm(a[2]) + std::norm(a[3]);
    const double det = std::abs(a[0] * a[3] - a[1] * a[2]);
    const double disc = std::sqrt(std::max(0.0, f2 * f2 - 4.0 * det * det));
    const double s2 = 0.5 * (f2 + disc);
    return 0.5 * std::log(std::max(s2, 1e-300));
  }
  if (n > cap_) throw NumericError("eigen workspace: dimension exceeds capacity");
  // gram matrix m = a^H a, then deterministic power iteration
  cx* m = h_.data();
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      cx acc = 0.0;
      for (int k = 0; k < n; ++k)
        acc += std::conj(a[static_cast<size_t>(k) * n + i]) * a[static_cast<size_t>(k) * n + j];
      m[static_cast<size_t>(i) * n + j] = acc;
      m[static_cast<size_t>(j) * n + i] = std::conj(acc);
    }
  }
  cx* v = w_.data();
  cx* mv = w_.data() + cap_;
  for (int i = 0; i < n; ++i) v[i] = {1.0 + 0.25 * std::sin(1.3 * i + 0.7), 0.0};
  double rho_prev = 0.0, rho = 0.0;
  for (int round = 0; round < 3; ++round) {
    for (int it = 0; it < 18; ++it) {
      for (int i = 0; i < n; ++i) {
        cx acc = 0.0;
        for (int k = 0; k < n; ++k) acc += m[static_cast<size_t>(i) * n + k] * v[k];
        mv[i] = acc;
      }
      double nr = 0.0;
      for (int i = 0; i < n; ++i) nr += std::norm(mv[i]);
      nr = std::sqrt(nr);
      if (nr == 0.0) return std::log(1e-300);
      for (int i = 0; i < n; ++i) v[i] = mv[i] / nr;
    }
    rho_prev = rho;
    cx acc = 0.0;
    for (int i = 0; i < n; ++i) {
      cx row = 0.0;
      for (int k = 0; k < n; ++k) row += m[static_cast<size_t>(i) * n + k] * v[k];
      acc += std::conj(v[i]) * row;
    }
    rho = std::max(acc.real(), 0.0);
    if (round > 0 && std::fabs(rho - rho_prev) <= 1e-12 * std::max(rho, 1e-300)) break;
  }
  return 0.5 * std::log(std::max(rho, 1e-300));
}

}  // namespace anosov
