#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "numrad/algebra.hpp"
#include "numrad/errors.hpp"
#include "numrad/state.hpp"

namespace numrad {

/// Element of the pre-Hilbert module M_{m x n} over M_n(C), with the
/// algebra-valued inner product <x, y> = y* x (linear in the first slot,
/// so that <a, e> = a and <a, a*> = a^2 when the module is the algebra).
class ModuleElement {
 public:
  explicit ModuleElement(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() < 1 || entries_.cols() < 1)
      throw DimensionMismatch("module element must be nonempty");
    if (!entries_.allFinite()) throw Error("module element has non-finite entries");
  }

  explicit ModuleElement(const AlgebraElement& a) : entries_(a.mat()) {}

  Eigen::Index rows() const noexcept { return entries_.rows(); }
  Eigen::Index cols() const noexcept { return entries_.cols(); }
  const Matrix& mat() const noexcept { return entries_; }

  /// Right module action x . b for algebra b.
  friend ModuleElement operator*(const ModuleElement& x, const AlgebraElement& b) {
    if (x.cols() != b.dim())
      throw DimensionMismatch("module action: element has " + std::to_string(x.cols()) +
                              " columns, algebra dim is " + std::to_string(b.dim()));
    return ModuleElement(x.entries_ * b.mat());
  }
  friend ModuleElement operator*(Cplx s, const ModuleElement& x) {
    return ModuleElement(s * x.entries_);
  }
  friend ModuleElement operator+(const ModuleElement& x, const ModuleElement& y) {
    require_same_shape(x, y, "+");
    return ModuleElement(x.entries_ + y.entries_);
  }
  friend ModuleElement operator-(const ModuleElement& x, const ModuleElement& y) {
    require_same_shape(x, y, "-");
    return ModuleElement(x.entries_ - y.entries_);
  }

  static void require_same_shape(const ModuleElement& x, const ModuleElement& y, const char* op) {
    if (x.rows() != y.rows() || x.cols() != y.cols())
      throw DimensionMismatch(std::string("module shape mismatch in operator") + op);
  }

 private:
  Matrix entries_;
};

/// <x, y> = y* x, an n x n algebra element.
inline AlgebraElement inner_product(const ModuleElement& x, const ModuleElement& y) {
  ModuleElement::require_same_shape(x, y, "<,>");
  return AlgebraElement(y.mat().adjoint() * x.mat());
}

/// |x|^2 = <x, x> = x* x, Hermitian positive semidefinite.
inline AlgebraElement abs_square_module(const ModuleElement& x) {
  return AlgebraElement(x.mat().adjoint() * x.mat());
}

/// phi(|x|^2) as a real number (the imaginary part is round-off).
inline double state_module_norm2(const State& phi, const ModuleElement& x) {
  return std::max(0.0, state_apply(phi, abs_square_module(x)).real());
}

/// Rescales z so that phi(|z|^2) = 1. Throws DegenerateZ when phi(|z|^2) is
/// numerically zero; the caller is expected to resample rather than perturb.
inline ModuleElement normalize_against_state(const ModuleElement& z, const State& phi) {
  const double t = state_apply(phi, abs_square_module(z)).real();
  if (!(t > 1e-12)) throw DegenerateZ("phi(|z|^2) = " + std::to_string(t) + " is degenerate");
  return ModuleElement(z.mat() / std::sqrt(t));
}

/// sqrt(phi(|x|^2)) sqrt(phi(|y|^2)) - |phi(<x, y>)|, nonnegative up to
/// round-off.
inline double cauchy_schwarz_gap(const State& phi, const ModuleElement& x,
                                 const ModuleElement& y) {
  ModuleElement::require_same_shape(x, y, "cauchy_schwarz_gap");
  const double sx = std::sqrt(state_module_norm2(phi, x));
  const double sy = std::sqrt(state_module_norm2(phi, y));
  const double cross = std::abs(state_apply(phi, inner_product(x, y)));
  return sx * sy - cross;
}

}  // namespace numrad
