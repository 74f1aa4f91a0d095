#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <limits>
#include <utility>
#include <vector>

#include "numrad/errors.hpp"

namespace numrad {

using Cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Element of the matrix algebra M_n(C): a square complex matrix with finite
/// entries. Arithmetic stays inside the algebra; shapes are checked.
class AlgebraElement {
 public:
  explicit AlgebraElement(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols())
      throw DimensionMismatch("algebra element must be square, got " +
                              std::to_string(entries_.rows()) + "x" +
                              std::to_string(entries_.cols()));
    if (entries_.rows() < 1) throw DimensionMismatch("algebra element must be nonempty");
    if (!entries_.allFinite()) throw Error("algebra element has non-finite entries");
  }

  static AlgebraElement identity(Eigen::Index n) { return AlgebraElement(Matrix::Identity(n, n)); }
  static AlgebraElement zero(Eigen::Index n) { return AlgebraElement(Matrix::Zero(n, n)); }

  Eigen::Index dim() const noexcept { return entries_.rows(); }
  const Matrix& mat() const noexcept { return entries_; }

  friend AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
    require_same_dim(a, b, "+");
    return AlgebraElement(a.entries_ + b.entries_);
  }
  friend AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
    require_same_dim(a, b, "-");
    return AlgebraElement(a.entries_ - b.entries_);
  }
  friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
    require_same_dim(a, b, "*");
    return AlgebraElement(a.entries_ * b.entries_);
  }
  friend AlgebraElement operator*(Cplx s, const AlgebraElement& a) {
    return AlgebraElement(s * a.entries_);
  }
  friend AlgebraElement operator*(const AlgebraElement& a, Cplx s) { return s * a; }
  friend AlgebraElement operator-(const AlgebraElement& a) { return AlgebraElement(-a.entries_); }

 private:
  static void require_same_dim(const AlgebraElement& a, const AlgebraElement& b, const char* op) {
    if (a.dim() != b.dim())
      throw DimensionMismatch(std::string("dimension mismatch in operator") + op + ": " +
                              std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
  Matrix entries_;
};

/// Full eigenvalue list of an algebra element, with algebraic multiplicity.
struct Spectrum {
  std::vector<Cplx> eigenvalues;
};

/// Largest eigenvalue of a Hermitian element together with a unit eigenvector.
struct EigMax {
  double value = 0.0;
  Vector vector;
};

namespace detail {

/// Mirrors the upper triangle onto the lower one and deletes the imaginary
/// part of the diagonal, so the result is Hermitian exactly (bit level).
inline void symmetrize_in_place(Matrix& h) {
  const Eigen::Index n = h.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    h(i, i) = Cplx(h(i, i).real(), 0.0);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Cplx v = 0.5 * (h(i, j) + std::conj(h(j, i)));
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
  }
}

inline double frobenius(const Matrix& m) { return m.norm(); }

/// lambda_max of a Hermitian 2x2 (exact closed form).
inline double eigmax2(const Matrix& h) {
  const double a = h(0, 0).real();
  const double d = h(1, 1).real();
  const double mid = 0.5 * (a + d);
  const double off = std::hypot(0.5 * (a - d), std::abs(h(0, 1)));
  return mid + off;
}

/// lambda_max of a Hermitian 3x3 through the trigonometric form of the real
/// characteristic cubic. Near-degenerate spectra (|r| close to 1) lose
/// accuracy in this form, so the caller falls back to the iterative solver
/// there; the return carries an `ok` flag for that purpose.
inline bool eigmax3(const Matrix& h, double* out) {
  const double q = (h(0, 0).real() + h(1, 1).real() + h(2, 2).real()) / 3.0;
  const double off2 = std::norm(h(0, 1)) + std::norm(h(0, 2)) + std::norm(h(1, 2));
  const double d0 = h(0, 0).real() - q, d1 = h(1, 1).real() - q, d2 = h(2, 2).real() - q;
  const double p2 = d0 * d0 + d1 * d1 + d2 * d2 + 2.0 * off2;
  const double p = std::sqrt(p2 / 6.0);
  if (!(p > 0.0) || !std::isfinite(p)) {
    *out = q;  // h is (numerically) a multiple of the identity
    return true;
  }
  // r = det((h - q I)/p) / 2, real for Hermitian input
  const Cplx b00(d0, 0), b11(d1, 0), b22(d2, 0);
  const Cplx b01 = h(0, 1), b02 = h(0, 2), b12 = h(1, 2);
  const Cplx det = b00 * (b11 * b22 - b12 * std::conj(b12)) -
                   b01 * (std::conj(b01) * b22 - b12 * std::conj(b02)) +
                   b02 * (std::conj(b01) * std::conj(b12) - b11 * std::conj(b02));
  const double r = det.real() / (2.0 * p * p * p);
  if (!(std::abs(r) <= 0.99)) return false;
  const double phi = std::acos(r) / 3.0;
  *out = q + 2.0 * p * std::cos(phi);
  return true;
}

template <int N>
inline double eigmax_fixed(const Matrix& h) {
  using MatN = Eigen::Matrix<Cplx, N, N>;
  Eigen::SelfAdjointEigenSolver<MatN> es;
  es.compute(MatN(h), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw ConvergenceFailure("hermitian eigensolve did not converge (n=" + std::to_string(N) + ")");
  return es.eigenvalues()(N - 1);
}

/// lambda_max of an exactly Hermitian matrix. Dispatch: closed forms for
/// n <= 3 (with iterative fallback in ill-conditioned 3x3 cases), fixed-size
/// kernels for n = 4..8, dynamic solver above. Backward stable in all paths:
/// the absolute error is a small multiple of machine epsilon times ||h||.
inline double eigmax_value(const Matrix& h) {
  const Eigen::Index n = h.rows();
  switch (n) {
    case 1:
      return h(0, 0).real();
    case 2:
      return eigmax2(h);
    case 3: {
      double v;
      if (eigmax3(h, &v)) return v;
      break;
    }
    case 4:
      return eigmax_fixed<4>(h);
    case 5:
      return eigmax_fixed<5>(h);
    case 6:
      return eigmax_fixed<6>(h);
    case 7:
      return eigmax_fixed<7>(h);
    case 8:
      return eigmax_fixed<8>(h);
    default:
      break;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es;
  es.compute(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw ConvergenceFailure("hermitian eigensolve did not converge (n=" + std::to_string(n) + ")");
  return es.eigenvalues()(n - 1);
}

/// Top eigenpair plus the second-largest eigenvalue, for gap-aware bounds.
struct EigTop {
  double lmax = 0.0;
  double l2 = -std::numeric_limits<double>::infinity();
  Vector w;
};

inline EigTop eig_top(const Matrix& h) {
  const Eigen::Index n = h.rows();
  if (n == 1) {
    EigTop t;
    t.lmax = h(0, 0).real();
    t.w = Vector::Ones(1);
    return t;
  }
  if (n == 2) {
    const double a = h(0, 0).real();
    const double d = h(1, 1).real();
    const double mid = 0.5 * (a + d);
    const double off = std::hypot(0.5 * (a - d), std::abs(h(0, 1)));
    EigTop t;
    t.lmax = mid + off;
    t.l2 = mid - off;
    const Cplx b = h(0, 1);
    if (std::abs(b) + std::abs(t.lmax - a) <= 0.0) {
      t.w = Vector::Zero(2);
      t.w(a >= d ? 0 : 1) = 1.0;
    } else {
      t.w = Vector(2);
      t.w(0) = b;
      t.w(1) = Cplx(t.lmax - a, 0.0);
      const double nw = t.w.norm();
      if (nw > 0.0)
        t.w /= nw;
      else {
        t.w.setZero();
        t.w(0) = 1.0;
      }
    }
    return t;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es;
  es.compute(h);
  if (es.info() != Eigen::Success)
    throw ConvergenceFailure("hermitian eigensolve did not converge (n=" + std::to_string(n) + ")");
  EigTop t;
  t.lmax = es.eigenvalues()(n - 1);
  t.l2 = es.eigenvalues()(n - 2);
  t.w = es.eigenvectors().col(n - 1);
  return t;
}

/// (lambda_max, unit eigenvector) of an exactly Hermitian matrix.
inline std::pair<double, Vector> eigmax_pair(const Matrix& h) {
  const Eigen::Index n = h.rows();
  if (n == 1) {
    Vector v(1);
    v(0) = Cplx(1, 0);
    return {h(0, 0).real(), v};
  }
  if (n == 2) {
    const double lam = eigmax2(h);
    const Cplx b = h(0, 1);
    const double rel = std::abs(b) + std::abs(lam - h(0, 0).real());
    Vector v(2);
    if (rel <= 0.0) {
      const bool first = h(0, 0).real() >= h(1, 1).real();
      v(0) = first ? 1.0 : 0.0;
      v(1) = first ? 0.0 : 1.0;
    } else {
      v(0) = b;
      v(1) = Cplx(lam - h(0, 0).real(), 0.0);
      const double nv = v.norm();
      if (nv > 0.0)
        v /= nv;
      else {
        v(0) = 1.0;
        v(1) = 0.0;
      }
    }
    return {lam, v};
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es;
  es.compute(h);
  if (es.info() != Eigen::Success)
    throw ConvergenceFailure("hermitian eigensolve did not converge (n=" + std::to_string(n) + ")");
  return {es.eigenvalues()(n - 1), es.eigenvectors().col(n - 1)};
}

}  // namespace detail

/// Conjugate transpose a*.
inline AlgebraElement adjoint(const AlgebraElement& a) {
  return AlgebraElement(a.mat().adjoint());
}

/// |a|^2 = a* a, Hermitian positive semidefinite.
inline AlgebraElement abs_square(const AlgebraElement& a) {
  return AlgebraElement(a.mat().adjoint() * a.mat());
}

/// a^k by binary exponentiation, k >= 1.
inline AlgebraElement matrix_power(const AlgebraElement& a, int k) {
  if (k < 1) throw Error("matrix_power requires k >= 1, got " + std::to_string(k));
  Matrix base = a.mat();
  Matrix acc = Matrix::Identity(a.dim(), a.dim());
  int e = k;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return AlgebraElement(std::move(acc));
}

/// Largest eigenvalue of a Hermitian element and an associated unit
/// eigenvector. The input is symmetrized internally; it must be Hermitian to
/// within 1e-12 relative to its Frobenius norm. The residual ||h x - lam x||
/// is checked against 1e-10 ||h||.
inline EigMax hermitian_eigmax(const AlgebraElement& h) {
  Matrix m = h.mat();
  const double scale = detail::frobenius(m);
  const double asym = detail::frobenius(Matrix(m - m.adjoint()));
  if (asym > 1e-12 * std::max(1.0, scale))
    throw Error("hermitian_eigmax: input is not Hermitian (asymmetry " + std::to_string(asym) + ")");
  detail::symmetrize_in_place(m);
  auto [lam, vec] = detail::eigmax_pair(m);
  const double resid = (m * vec - lam * vec).norm();
  if (resid > 1e-10 * std::max(1.0, scale))
    throw ConvergenceFailure("hermitian_eigmax: residual " + std::to_string(resid) +
                             " exceeds tolerance");
  return EigMax{lam, std::move(vec)};
}

/// Largest eigenvalue only; same contract as hermitian_eigmax without the
/// eigenvector. This is the kernel the numerical-radius sweep runs on.
inline double hermitian_eigmax_value(const AlgebraElement& h) {
  Matrix m = h.mat();
  const double scale = detail::frobenius(m);
  const double asym = detail::frobenius(Matrix(m - m.adjoint()));
  if (asym > 1e-12 * std::max(1.0, scale))
    throw Error("hermitian_eigmax_value: input is not Hermitian");
  detail::symmetrize_in_place(m);
  return detail::eigmax_value(m);
}

/// C*-norm: the largest singular value, computed as sqrt(lambda_max(a* a)).
inline double operator_norm(const AlgebraElement& a) {
  Matrix g = a.mat().adjoint() * a.mat();
  detail::symmetrize_in_place(g);
  const double lam = detail::eigmax_value(g);
  return std::sqrt(std::max(0.0, lam));
}

/// All n eigenvalues with algebraic multiplicity.
inline Spectrum full_spectrum(const AlgebraElement& a) {
  Eigen::ComplexEigenSolver<Matrix> es;
  es.compute(a.mat(), /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw ConvergenceFailure("full_spectrum: eigenvalue iteration did not converge");
  Spectrum s;
  s.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + a.dim());
  return s;
}

/// r(a) = max |lambda| over the spectrum.
inline double spectral_radius(const AlgebraElement& a) {
  const Spectrum s = full_spectrum(a);
  double r = 0.0;
  for (const Cplx& lam : s.eigenvalues) r = std::max(r, std::abs(lam));
  return r;
}

}  // namespace numrad
