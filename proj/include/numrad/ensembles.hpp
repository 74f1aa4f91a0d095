#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "numrad/algebra.hpp"
#include "numrad/errors.hpp"
#include "numrad/hilbert_module.hpp"
#include "numrad/rng.hpp"
#include "numrad/state.hpp"

namespace numrad {

enum class EnsembleKind {
  ginibre,
  gue_hermitian,
  haar_unitary,
  normal_random,
  jordan_nilpotent,
  two_nilpotent,
  shifted_scaled,
};

inline const char* ensemble_kind_name(EnsembleKind k) {
  switch (k) {
    case EnsembleKind::ginibre: return "ginibre";
    case EnsembleKind::gue_hermitian: return "gue_hermitian";
    case EnsembleKind::haar_unitary: return "haar_unitary";
    case EnsembleKind::normal_random: return "normal_random";
    case EnsembleKind::jordan_nilpotent: return "jordan_nilpotent";
    case EnsembleKind::two_nilpotent: return "two_nilpotent";
    case EnsembleKind::shifted_scaled: return "shifted_scaled";
  }
  return "unknown";
}

inline std::optional<EnsembleKind> ensemble_kind_from_name(const std::string& s) {
  for (EnsembleKind k : {EnsembleKind::ginibre, EnsembleKind::gue_hermitian,
                         EnsembleKind::haar_unitary, EnsembleKind::normal_random,
                         EnsembleKind::jordan_nilpotent, EnsembleKind::two_nilpotent,
                         EnsembleKind::shifted_scaled})
    if (s == ensemble_kind_name(k)) return k;
  return std::nullopt;
}

/// One test-matrix ensemble: a kind, a dimension and a trial count.
/// shifted_scaled wraps another kind as scale * a + shift * e. The normalize
/// flag rescales draws to unit operator norm (zero draws are left alone).
struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::ginibre;
  int dim = 2;
  long count = 1;
  bool normalize = false;
  EnsembleKind base_kind = EnsembleKind::ginibre;  // for shifted_scaled
  Cplx scale{1.0, 0.0};
  Cplx shift{0.0, 0.0};

  std::string label() const {
    std::string s = ensemble_kind_name(kind);
    if (kind == EnsembleKind::shifted_scaled)
      s += std::string("(") + ensemble_kind_name(base_kind) + ")";
    s += "_d" + std::to_string(dim);
    if (normalize) s += "_unit";
    return s;
  }
};

namespace detail {

inline Matrix ginibre_matrix(Eigen::Index rows, Eigen::Index cols, RngStream& g) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = g.cnormal();
  return m;
}

inline Matrix haar_unitary_matrix(Eigen::Index n, RngStream& g) {
  Matrix a = ginibre_matrix(n, n, g);
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().template triangularView<Eigen::Upper>();
  // phase correction: absorb the phases of diag(R) so the draw is Haar
  for (Eigen::Index j = 0; j < n; ++j) {
    const Cplx d = r(j, j);
    const double ad = std::abs(d);
    q.col(j) *= (ad > 0.0) ? d / ad : Cplx(1.0, 0.0);
  }
  return q;
}

inline void check_structure(bool ok, const char* what) {
  if (!ok) throw Error(std::string("ensemble postcondition failed: ") + what);
}

}  // namespace detail

/// Draws one algebra element from the given ensemble. Structural
/// postconditions (nilpotency, unitarity, normality, hermiticity) are
/// asserted per draw at 1e-12 scale.
inline AlgebraElement sample_element(const EnsembleSpec& spec, RngStream& g) {
  if (spec.dim < 1) throw Error("ensemble dim must be >= 1");
  const Eigen::Index n = spec.dim;
  Matrix m;
  switch (spec.kind) {
    case EnsembleKind::ginibre:
      m = detail::ginibre_matrix(n, n, g);
      break;
    case EnsembleKind::gue_hermitian: {
      const Matrix a = detail::ginibre_matrix(n, n, g);
      m = 0.5 * (a + a.adjoint());
      detail::check_structure((m - m.adjoint()).norm() <= 1e-12 * std::max(1.0, m.norm()),
                              "hermiticity");
      break;
    }
    case EnsembleKind::haar_unitary: {
      m = detail::haar_unitary_matrix(n, g);
      detail::check_structure(
          (m.adjoint() * m - Matrix::Identity(n, n)).norm() <= 1e-12 * static_cast<double>(n),
          "unitarity");
      break;
    }
    case EnsembleKind::normal_random: {
      const Matrix u = detail::haar_unitary_matrix(n, g);
      Vector d(n);
      for (Eigen::Index i = 0; i < n; ++i) d(i) = g.cnormal();
      m = u * d.asDiagonal() * u.adjoint();
      detail::check_structure(
          (m * m.adjoint() - m.adjoint() * m).norm() <= 1e-12 * std::max(1.0, m.squaredNorm()),
          "normality");
      break;
    }
    case EnsembleKind::jordan_nilpotent:
      m = Matrix::Zero(n, n);
      for (Eigen::Index i = 0; i + 1 < n; ++i) m(i, i + 1) = 1.0;
      break;
    case EnsembleKind::two_nilpotent: {
      // strictly upper 2x2-block form [[0, B], [0, 0]]: the square vanishes
      const Eigen::Index p = n / 2;
      m = Matrix::Zero(n, n);
      if (p >= 1 && n - p >= 1) m.topRightCorner(p, n - p) = detail::ginibre_matrix(p, n - p, g);
      detail::check_structure((m * m).norm() <= 1e-12 * std::max(1.0, m.squaredNorm()),
                              "nilpotency");
      break;
    }
    case EnsembleKind::shifted_scaled: {
      EnsembleSpec base = spec;
      base.kind = spec.base_kind;
      base.normalize = false;
      if (base.kind == EnsembleKind::shifted_scaled)
        throw Error("shifted_scaled cannot wrap itself");
      const AlgebraElement b = sample_element(base, g);
      m = spec.scale * b.mat() + spec.shift * Matrix::Identity(n, n);
      break;
    }
  }
  AlgebraElement a(std::move(m));
  if (spec.normalize) {
    const double na = operator_norm(a);
    if (na > 0.0) a = Cplx(1.0 / na, 0.0) * a;
  }
  return a;
}

/// Density matrix drawn from the Hilbert-Schmidt measure: rho = G G* / tr(G G*).
inline State sample_state(int dim, RngStream& g) {
  if (dim < 1) throw Error("state dim must be >= 1");
  if (dim == 1) return State(Matrix::Identity(1, 1));
  const Matrix gm = detail::ginibre_matrix(dim, dim, g);
  Matrix rho = gm * gm.adjoint();
  detail::symmetrize_in_place(rho);
  const double tr = rho.trace().real();
  if (!(tr > 0.0)) return State::maximally_mixed(dim);
  rho /= tr;
  return State(std::move(rho));
}

/// Rank-one state rho = x x* for a random unit vector x.
inline State sample_pure_state(int dim, RngStream& g) {
  if (dim < 1) throw Error("state dim must be >= 1");
  Vector x(dim);
  for (int i = 0; i < dim; ++i) x(i) = g.cnormal();
  if (x.norm() == 0.0) x(0) = 1.0;
  return State::pure(x);
}

struct ModuleTuple {
  std::vector<ModuleElement> xs;
  ModuleElement z;
};

/// Draws k Ginibre module elements of shape rows x dim plus a z normalized
/// against phi. Degenerate z draws (phi(|z|^2) ~ 0) are rejected and redrawn;
/// the budget guards against pathological states.
inline ModuleTuple sample_module_tuple(int dim, int rows, int count, const State& phi,
                                       RngStream& g, int resample_budget = 100) {
  if (dim < 1 || rows < 1 || count < 1)
    throw Error("module tuple needs dim, rows, count >= 1");
  if (phi.dim() != dim) throw DimensionMismatch("state dimension does not match module columns");
  std::vector<ModuleElement> xs;
  xs.reserve(count);
  for (int i = 0; i < count; ++i) xs.emplace_back(detail::ginibre_matrix(rows, dim, g));
  for (int attempt = 0; attempt < resample_budget; ++attempt) {
    ModuleElement z(detail::ginibre_matrix(rows, dim, g));
    try {
      return ModuleTuple{std::move(xs), normalize_against_state(z, phi)};
    } catch (const DegenerateZ&) {
      continue;
    }
  }
  throw DegenerateZ("resample budget exhausted while normalizing z against phi");
}

}  // namespace numrad
