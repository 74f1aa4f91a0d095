#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "numrad/errors.hpp"
#include "numrad/hilbert_module.hpp"
#include "numrad/mean_function.hpp"
#include "numrad/state.hpp"

namespace numrad {

namespace detail {

/// Product with an error-free-transformation correction term, so long
/// products of small moduli keep full relative accuracy.
inline double product_compensated(const std::vector<double>& xs) {
  double p = 1.0, e = 0.0;
  for (double x : xs) {
    const double ph = p * x;
    e = std::fma(p, x, -ph) + e * x;
    p = ph;
  }
  return p + e;
}

inline void require_unit_z(const State& phi, const ModuleElement& z) {
  const double t = state_module_norm2(phi, z);
  if (std::abs(t - 1.0) > 1e-10)
    throw UnnormalizedZ("phi(|z|^2) = " + std::to_string(t) + ", expected 1");
}

inline void require_nonzero_alpha(Cplx alpha) {
  if (std::abs(alpha) == 0.0) throw ZeroAlpha("alpha must be nonzero");
}

}  // namespace detail

struct SidePair {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Both sides of
///   |phi(<x,z>) phi(<y,z>)|
///     <= (1/|alpha|) ( max{1,|alpha-1|} sqrt(phi(|x|^2)) sqrt(phi(|y|^2))
///                      + |phi(<x,y>)| )
/// for phi(|z|^2) = 1 and alpha != 0.
inline SidePair gb_sides(const State& phi, const ModuleElement& x, const ModuleElement& y,
                         const ModuleElement& z, Cplx alpha) {
  detail::require_nonzero_alpha(alpha);
  detail::require_unit_z(phi, z);
  const double lhs = std::abs(state_apply(phi, inner_product(x, z))) *
                     std::abs(state_apply(phi, inner_product(y, z)));
  const double m = std::max(1.0, std::abs(alpha - 1.0));
  const double sx = std::sqrt(state_module_norm2(phi, x));
  const double sy = std::sqrt(state_module_norm2(phi, y));
  const double cross = std::abs(state_apply(phi, inner_product(x, y)));
  const double rhs = (m * sx * sy + cross) / std::abs(alpha);
  return {lhs, rhs};
}

/// The alpha = 2 case:
///   |phi(<x,z>) phi(<y,z>)| <= (1/2)(sqrt(phi(|x|^2)) sqrt(phi(|y|^2)) + |phi(<x,y>)|).
inline SidePair cb_sides(const State& phi, const ModuleElement& x, const ModuleElement& y,
                         const ModuleElement& z) {
  detail::require_unit_z(phi, z);
  const double lhs = std::abs(state_apply(phi, inner_product(x, z))) *
                     std::abs(state_apply(phi, inner_product(y, z)));
  const double sx = std::sqrt(state_module_norm2(phi, x));
  const double sy = std::sqrt(state_module_norm2(phi, y));
  const double cross = std::abs(state_apply(phi, inner_product(x, y)));
  return {lhs, 0.5 * (sx * sy + cross)};
}

/// Hypotheses of the n-element inequality: a state, a tuple x_1..x_n (n >= 2),
/// a z with phi(|z|^2) = 1, alpha != 0, and an evaluation point xi with both
/// xi and 1 - xi inside the mean function's domain.
struct BuzanoInstance {
  State phi;
  std::vector<ModuleElement> xs;
  ModuleElement z;
  Cplx alpha{2.0, 0.0};
  double xi = 0.0;
  MeanFunction f = MeanFunction::identity();

  void validate() const {
    if (xs.size() < 2) throw Error("instance needs at least two module elements");
    for (const auto& x : xs) ModuleElement::require_same_shape(x, z, "instance");
    if (z.cols() != phi.dim())
      throw DimensionMismatch("module columns must match the state dimension");
    detail::require_nonzero_alpha(alpha);
    detail::require_unit_z(phi, z);
    if (!f.contains(xi) || !f.contains(1.0 - xi))
      throw XiOutOfDomain("xi and 1 - xi must lie in the mean function domain");
  }
};

struct Thm21Sides {
  double lhs = 0.0;
  double rhs = 0.0;
  std::array<double, 3> terms{};  // the three right-hand-side terms
};

namespace detail {

struct TupleData {
  std::vector<double> moduli;       // |phi(<x_i, z>)|
  std::vector<double> norms2;       // phi(|x_i|^2)
  std::vector<double> norms;        // sqrt of the above
  double head_cross = 0.0;          // |phi(<x_1, x_2>)|
  double tail = 1.0;                // prod_{i>=3} |phi(<x_i, z>)|
  double w = 0.0;                   // head_cross * tail
  double lhs_product = 0.0;         // prod_i |phi(<x_i, z>)|
  double norm_product = 1.0;        // prod_i phi(|x_i|^2)
  double sqrt_norm_product = 1.0;   // prod_i sqrt(phi(|x_i|^2))
};

inline TupleData tuple_data(const State& phi, const std::vector<ModuleElement>& xs,
                            const ModuleElement& z) {
  if (xs.size() < 2) throw Error("tuple needs at least two module elements");
  TupleData d;
  d.moduli.reserve(xs.size());
  d.norms2.reserve(xs.size());
  d.norms.reserve(xs.size());
  for (const auto& x : xs) {
    ModuleElement::require_same_shape(x, z, "tuple");
    d.moduli.push_back(std::abs(state_apply(phi, inner_product(x, z))));
    const double s2 = state_module_norm2(phi, x);
    d.norms2.push_back(s2);
    d.norms.push_back(std::sqrt(s2));
  }
  d.head_cross = std::abs(state_apply(phi, inner_product(xs[0], xs[1])));
  d.tail = product_compensated(std::vector<double>(d.moduli.begin() + 2, d.moduli.end()));
  d.w = d.head_cross * d.tail;
  d.lhs_product = product_compensated(d.moduli);
  d.norm_product = product_compensated(d.norms2);
  d.sqrt_norm_product = product_compensated(d.norms);
  return d;
}

}  // namespace detail

/// Both sides (and the three rhs terms) of
///   |prod_i phi(<x_i,z>)|^2
///     <= (max{1,|a-1|^2}/|a|^2) prod_i phi(|x_i|^2)
///      + (f(1-xi)/|a|^2) W^2
///      + ((f(xi) + 2 max{1,|a-1|})/|a|^2) prod_i sqrt(phi(|x_i|^2)) W
/// where W = |phi(<x_1,x_2>) prod_{i>=3} phi(<x_i,z>)| and a = alpha.
inline Thm21Sides thm21_sides(const BuzanoInstance& inst) {
  inst.validate();
  const detail::TupleData d = detail::tuple_data(inst.phi, inst.xs, inst.z);
  const double abs_a2 = std::norm(inst.alpha);
  const double m1 = std::max(1.0, std::abs(inst.alpha - 1.0));
  const double m2 = m1 * m1;
  Thm21Sides out;
  out.lhs = d.lhs_product * d.lhs_product;
  out.terms[0] = m2 / abs_a2 * d.norm_product;
  out.terms[1] = inst.f(1.0 - inst.xi) / abs_a2 * d.w * d.w;
  out.terms[2] = (inst.f(inst.xi) + 2.0 * m1) / abs_a2 * d.sqrt_norm_product * d.w;
  out.rhs = out.terms[0] + out.terms[1] + out.terms[2];
  return out;
}

/// Both sides of the product form
///   |prod_i phi(<x_i,z>)|
///     <= (1/|a|)(max{1,|a-1|} prod_i sqrt(phi(|x_i|^2)) + W).
/// For n = 2 this is exactly gb_sides.
inline SidePair cor22_sides(const State& phi, const std::vector<ModuleElement>& xs,
                            const ModuleElement& z, Cplx alpha) {
  detail::require_nonzero_alpha(alpha);
  detail::require_unit_z(phi, z);
  const detail::TupleData d = detail::tuple_data(phi, xs, z);
  const double m1 = std::max(1.0, std::abs(alpha - 1.0));
  return {d.lhs_product, (m1 * d.sqrt_norm_product + d.w) / std::abs(alpha)};
}

/// zeta >= 0 variant; term coefficients 1/(1+zeta) and
/// (zeta + 2 (1+zeta) max{1,|a-1|})/(1+zeta) on the squared display.
inline SidePair cor24_sides(const State& phi, const std::vector<ModuleElement>& xs,
                            const ModuleElement& z, double zeta, Cplx alpha) {
  if (zeta < 0.0) throw NegativeZeta("zeta must be >= 0, got " + std::to_string(zeta));
  detail::require_nonzero_alpha(alpha);
  detail::require_unit_z(phi, z);
  const detail::TupleData d = detail::tuple_data(phi, xs, z);
  const double abs_a2 = std::norm(alpha);
  const double m1 = std::max(1.0, std::abs(alpha - 1.0));
  const double m2 = m1 * m1;
  const double lhs = d.lhs_product * d.lhs_product;
  const double rhs = m2 / abs_a2 * d.norm_product +
                     1.0 / (abs_a2 * (1.0 + zeta)) * d.w * d.w +
                     (zeta + 2.0 * (1.0 + zeta) * m1) / (abs_a2 * (1.0 + zeta)) *
                         d.sqrt_norm_product * d.w;
  return {lhs, rhs};
}

/// eta in [-1/2, 3/2] variant; term coefficients (3-2 eta)/4 and
/// (1 + 2 eta + 8 max{1,|a-1|})/4 on the squared display.
inline SidePair cor25_sides(const State& phi, const std::vector<ModuleElement>& xs,
                            const ModuleElement& z, double eta, Cplx alpha) {
  if (eta < -0.5 || eta > 1.5)
    throw EtaOutOfRange("eta must lie in [-1/2, 3/2], got " + std::to_string(eta));
  detail::require_nonzero_alpha(alpha);
  detail::require_unit_z(phi, z);
  const detail::TupleData d = detail::tuple_data(phi, xs, z);
  const double abs_a2 = std::norm(alpha);
  const double m1 = std::max(1.0, std::abs(alpha - 1.0));
  const double m2 = m1 * m1;
  const double lhs = d.lhs_product * d.lhs_product;
  const double rhs = m2 / abs_a2 * d.norm_product +
                     (3.0 - 2.0 * eta) / (4.0 * abs_a2) * d.w * d.w +
                     (1.0 + 2.0 * eta + 8.0 * m1) / (4.0 * abs_a2) * d.sqrt_norm_product * d.w;
  return {lhs, rhs};
}

}  // namespace numrad
