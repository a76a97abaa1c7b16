#pragma once

// dense complex linear algebra for small matrices: LU, one-sided Jacobi SVD,
// Hessenberg + shifted QR eigenvalues, exterior and symmetric power lifts.
// everything here is deterministic: fixed sweep orders, no randomized pivots,
// and only conjugation-covariant primitives (so conjugating the input
// conjugates every intermediate bitwise).

#include <complex>
#include <span>
#include <vector>

#include "anosov/errors.hpp"

namespace anosov {

using cx = std::complex<double>;

// branch-stable complex square root with csqrt(conj(z)) == conj(csqrt(z)) bitwise
cx csqrt(cx z);

class CMat {
 public:
  CMat() = default;
  explicit CMat(int n) : n_(n), a_(static_cast<size_t>(n) * n) {}
  static CMat identity(int n);

  int dim() const { return n_; }
  cx& at(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
  const cx& at(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }
  cx* data() { return a_.data(); }
  const cx* data() const { return a_.data(); }
  std::span<const cx> flat() const { return a_; }

  CMat operator*(const CMat& o) const;
  CMat operator+(const CMat& o) const;
  CMat operator-(const CMat& o) const;
  CMat scaled(cx s) const;
  CMat adjoint() const;
  CMat transpose() const;
  CMat conjugate() const;

  double max_abs() const;
  double frobenius() const;

 private:
  int n_ = 0;
  std::vector<cx> a_;
};

// low-level kernels used by the word-product hot paths
void mul_into(int n, const cx* a, const cx* b, cx* out);
// scales so the largest entry modulus becomes 1; returns the log of the scale divided out
double renormalize(int n, cx* a);

struct LogDet {
  double log_abs;  // log |det|
  cx phase;        // det / |det|, unit modulus
};

// LU with partial pivoting; throws NumericError on an exactly singular matrix
LogDet log_det(const CMat& a);
CMat inverse(const CMat& a);

// singular values in non-increasing order (one-sided Jacobi on columns)
std::vector<double> singular_values(const CMat& a);

// eigenvalues sorted by non-increasing modulus (Hessenberg + single-shift QR)
std::vector<cx> eigenvalues(const CMat& a);

struct EigenPairs {
  std::vector<cx> values;  // sorted by non-increasing modulus
  CMat vectors;            // column j is a unit right eigenvector for values[j]
};
EigenPairs eigen_decomposition(const CMat& a);

// matrix exponential by scaling-and-squaring Taylor; entries are entire in the
// input, which keeps holomorphic families holomorphic
CMat matrix_exp(const CMat& a);

// projective linear maps: matrices normalized to |det| = 1 (phase kept)
class ProjMatrix {
 public:
  ProjMatrix() = default;
  // normalizes by |det|^{1/d}; throws NumericError("degenerate matrix ...") if
  // the input is singular or numerically close to it
  static ProjMatrix from(const CMat& m);
  // wraps a matrix already normalized to |det| = 1 without rescaling, so a
  // saved grid reloads to the exact same entries; throws when |log|det|| > 1e-6
  static ProjMatrix prenormalized(const CMat& m);

  int dim() const { return m_.dim(); }
  const CMat& mat() const { return m_; }
  ProjMatrix inverse() const;
  ProjMatrix operator*(const ProjMatrix& o) const;

 private:
  explicit ProjMatrix(CMat m) : m_(std::move(m)) {}
  CMat m_;
};

// point of the model flat: coordinates non-increasing with zero mean
class CartanVector {
 public:
  CartanVector() = default;
  // sorts non-increasing and subtracts the mean
  static CartanVector of(std::vector<double> logs);

  int dim() const { return static_cast<int>(v_.size()); }
  double operator[](int i) const { return v_[static_cast<size_t>(i)]; }
  std::span<const double> coords() const { return v_; }

 private:
  std::vector<double> v_;
};

// log singular values of the normalized matrix; throws NumericError for
// condition numbers past 1e13 ("degenerate matrix")
CartanVector cartan(const ProjMatrix& g);
// log eigenvalue moduli; accurate for moderately conditioned inputs, see
// spectrum.hpp for the exterior-ladder evaluation of long word products
CartanVector jordan(const ProjMatrix& g);

// exterior power on the lexicographic k-subset basis; entries are k x k minors
ProjMatrix wedge(const ProjMatrix& g, int k);
CMat wedge_mat(const CMat& g, int k);

// symmetric power of a 2 x 2 matrix on the plain monomial basis
// (e1^{d-1}, e1^{d-2} e2, ..., e2^{d-1}); result is d x d
ProjMatrix sym_power(const ProjMatrix& g, int d);
CMat sym_power_mat(const CMat& g, int d);

// reusable scratch for the spectrum hot paths: top eigenvalue / singular value
// logs of small matrices without per-call allocation
class EigenWorkspace {
 public:
  explicit EigenWorkspace(int max_dim);

  // log |largest eigenvalue|; closed forms for n <= 2, Cardano + Newton polish
  // for n == 3 (QR fallback), shifted QR otherwise
  double top_eig_log(int n, const cx* a);
  // log of the largest singular value; closed forms for n <= 2, deterministic
  // power iteration on a^H a otherwise
  double top_sv_log(int n, const cx* a);
  // all log eigenvalue moduli, non-increasing, written to out[0..n)
  void eig_moduli_logs(int n, const cx* a, double* out);

 private:
  int cap_;
  std::vector<cx> h_, w_;
  std::vector<double> r_;
};

double binomial(int n, int k);

}  // namespace anosov
