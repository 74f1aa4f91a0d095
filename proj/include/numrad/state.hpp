#pragma once

#include <cmath>
#include <utility>

#include "numrad/algebra.hpp"
#include "numrad/errors.hpp"

namespace numrad {

/// Normalized state on M_n(C), represented by its density matrix rho:
/// Hermitian, positive semidefinite, unit trace. phi(a) = trace(rho a).
class State {
 public:
  explicit State(Matrix rho) : rho_(std::move(rho)) {
    if (rho_.rows() != rho_.cols()) throw DimensionMismatch("state density matrix must be square");
    if (!rho_.allFinite()) throw Error("state density matrix has non-finite entries");
    const double scale = std::max(1.0, rho_.norm());
    if ((rho_ - rho_.adjoint()).norm() > 1e-12 * scale)
      throw Error("state density matrix is not Hermitian within 1e-12");
    const double tr = rho_.trace().real();
    if (std::abs(tr - 1.0) > 1e-12 || std::abs(rho_.trace().imag()) > 1e-12)
      throw Error("state density matrix trace differs from 1 by more than 1e-12");
    detail::symmetrize_in_place(rho_);
    // min eigenvalue >= -1e-10: lambda_min(rho) = -lambda_max(-rho)
    Matrix neg = -rho_;
    const double min_eig = -detail::eigmax_value(neg);
    if (min_eig < -1e-10)
      throw Error("state density matrix has eigenvalue " + std::to_string(min_eig) +
                  " below -1e-10");
  }

  static State maximally_mixed(Eigen::Index n) {
    return State(Matrix::Identity(n, n) / static_cast<double>(n));
  }

  /// Vector state rho = x x* / (x* x).
  static State pure(const Vector& x) {
    const double nx2 = x.squaredNorm();
    if (!(nx2 > 0.0)) throw Error("pure state requires a nonzero vector");
    Matrix rho = (x * x.adjoint()) / nx2;
    return State(std::move(rho));
  }

  Eigen::Index dim() const noexcept { return rho_.rows(); }
  const Matrix& rho() const noexcept { return rho_; }

 private:
  Matrix rho_;
};

/// phi(a) = trace(rho a).
inline Cplx state_apply(const State& phi, const AlgebraElement& a) {
  if (phi.dim() != a.dim())
    throw DimensionMismatch("state_apply: state dim " + std::to_string(phi.dim()) +
                            " vs element dim " + std::to_string(a.dim()));
  return (phi.rho() * a.mat()).trace();
}

}  // namespace numrad
