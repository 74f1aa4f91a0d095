#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "numrad/algebra.hpp"
#include "numrad/errors.hpp"
#include "numrad/mean_function.hpp"
#include "numrad/radius.hpp"
#include "numrad/report.hpp"

namespace numrad {

struct BoundOptions {
  RadiusOptions radius;
  int power_cap = 8;  // largest exponent accepted by the power-sum bounds
};

/// Caches the norms, matrix powers and radius enclosures shared by the bound
/// evaluators, so parameter sweeps over one element pay for each eigensolve
/// once. All radii are certified enclosures at the configured tolerance.
class BoundWorkspace {
 public:
  explicit BoundWorkspace(AlgebraElement a, const BoundOptions& opt = {})
      : a_(std::move(a)), opt_(opt) {}

  const AlgebraElement& element() const noexcept { return a_; }
  const BoundOptions& options() const noexcept { return opt_; }

  double norm() {
    if (!norm_) norm_ = operator_norm(a_);
    return *norm_;
  }

  /// ||a^i||, i >= 1.
  double norm_power(int i) {
    if (i == 1) return norm();
    auto it = norm_powers_.find(i);
    if (it != norm_powers_.end()) return it->second;
    const double v = operator_norm(power(i));
    norm_powers_.emplace(i, v);
    return v;
  }

  /// || |a*|^2 + |a|^2 || = || a a* + a* a ||.
  double gram_sum_norm() {
    if (!gram_sum_) {
      const Matrix& m = a_.mat();
      gram_sum_ = operator_norm(AlgebraElement(m * m.adjoint() + m.adjoint() * m));
    }
    return *gram_sum_;
  }

  /// || |a*|^4 + |a|^4 || = || (a a*)^2 + (a* a)^2 ||.
  double gram_sum4_norm() {
    if (!gram_sum4_) {
      const Matrix& m = a_.mat();
      const Matrix g1 = m * m.adjoint();
      const Matrix g2 = m.adjoint() * m;
      gram_sum4_ = operator_norm(AlgebraElement(g1 * g1 + g2 * g2));
    }
    return *gram_sum4_;
  }

  const RadiusEnclosure& radius() { return radius_power(1); }

  /// v(a^k) enclosure, cached per exponent.
  const RadiusEnclosure& radius_power(int k) {
    auto it = radii_.find(k);
    if (it != radii_.end()) return it->second;
    RadiusEnclosure enc = numerical_radius(k == 1 ? a_ : power(k), opt_.radius);
    uncertified_ |= !enc.certified;
    return radii_.emplace(k, std::move(enc)).first->second;
  }

  /// v(a* a^2) enclosure.
  const RadiusEnclosure& radius_adjoint_sq() {
    if (!r_adj_sq_) {
      r_adj_sq_ = numerical_radius(AlgebraElement(a_.mat().adjoint() * power(2).mat()),
                                   opt_.radius);
      uncertified_ |= !r_adj_sq_->certified;
    }
    return *r_adj_sq_;
  }

  /// v(a^2 a*) enclosure.
  const RadiusEnclosure& radius_sq_adjoint() {
    if (!r_sq_adj_) {
      r_sq_adj_ = numerical_radius(AlgebraElement(power(2).mat() * a_.mat().adjoint()),
                                   opt_.radius);
      uncertified_ |= !r_sq_adj_->certified;
    }
    return *r_sq_adj_;
  }

  bool any_uncertified() const noexcept { return uncertified_; }

 private:
  const AlgebraElement& power(int i) {
    if (i == 1) return a_;
    auto it = powers_.find(i);
    if (it != powers_.end()) return it->second;
    return powers_.emplace(i, matrix_power(a_, i)).first->second;
  }

  AlgebraElement a_;
  BoundOptions opt_;
  std::optional<double> norm_, gram_sum_, gram_sum4_;
  std::map<int, double> norm_powers_;
  std::map<int, AlgebraElement> powers_;
  std::map<int, RadiusEnclosure> radii_;
  std::optional<RadiusEnclosure> r_adj_sq_, r_sq_adj_;
  bool uncertified_ = false;
};

/// v^n(a) <= sum_{i=1}^{n-1} 2^{-i} ||a^i|| ||a||^{n-i} + 2^{-(n-1)} v(a^n).
inline BoundReport thm34_bound(BoundWorkspace& w, int n) {
  if (n < 2) throw Error("thm34 requires n >= 2");
  if (n > w.options().power_cap)
    throw Error("thm34: n = " + std::to_string(n) + " exceeds power cap " +
                std::to_string(w.options().power_cap));
  BoundReport rep;
  rep.bound_id = "thm34";
  rep.power = n;
  rep.params = {{"n", Cplx(n, 0)}};
  rep.lhs = std::pow(w.radius().upper, n);
  double rhs = 0.0;
  for (int i = 1; i <= n - 1; ++i) {
    const double term = std::ldexp(w.norm_power(i) * std::pow(w.norm(), n - i), -i);
    rep.components.emplace_back("norm_term_" + std::to_string(i), term);
    rhs += term;
  }
  const double vterm = std::ldexp(w.radius_power(n).upper, -(n - 1));
  rep.components.emplace_back("radius_term", vterm);
  rhs += vterm;
  rep.rhs = rhs;
  rep.note = "lhs and inner radii at enclosure upper";
  rep.finalize();
  return rep;
}

/// v^n(a) <= (1/(2^{n-1}-1)) sum_{i=1}^{n-1} 2^{n-i-1} ||a||^{n-i} ||a^i||
/// (no radius on the right-hand side).
inline BoundReport thm34_chain_bound(BoundWorkspace& w, int n) {
  if (n < 2) throw Error("chain bound requires n >= 2");
  if (n > w.options().power_cap)
    throw Error("chain: n = " + std::to_string(n) + " exceeds power cap " +
                std::to_string(w.options().power_cap));
  BoundReport rep;
  rep.bound_id = "chain";
  rep.power = n;
  rep.params = {{"n", Cplx(n, 0)}};
  rep.lhs = std::pow(w.radius().upper, n);
  double sum = 0.0;
  for (int i = 1; i <= n - 1; ++i) {
    const double term = std::ldexp(std::pow(w.norm(), n - i) * w.norm_power(i), n - i - 1);
    rep.components.emplace_back("term_" + std::to_string(i), term);
    sum += term;
  }
  rep.rhs = sum / (std::ldexp(1.0, n - 1) - 1.0);
  rep.finalize();
  return rep;
}

/// v^3(a) <= (max{1,|α-1|}/(2|α|)) || |a*|^2+|a|^2 || ||a||
///          + (max{1,|β-1|}/|αβ|) ||a^2|| ||a|| + (1/|αβ|) v(a^3).
inline BoundReport thm31_bound(BoundWorkspace& w, Cplx alpha, Cplx beta) {
  if (std::abs(alpha) == 0.0 || std::abs(beta) == 0.0)
    throw ZeroParameter("thm31 requires nonzero alpha and beta");
  BoundReport rep;
  rep.bound_id = "thm31";
  rep.power = 3;
  rep.params = {{"alpha", alpha}, {"beta", beta}};
  rep.lhs = std::pow(w.radius().upper, 3);
  const double ma = std::max(1.0, std::abs(alpha - 1.0));
  const double mb = std::max(1.0, std::abs(beta - 1.0));
  const double t1 = ma / (2.0 * std::abs(alpha)) * w.gram_sum_norm() * w.norm();
  const double t2 = mb / std::abs(alpha * beta) * w.norm_power(2) * w.norm();
  const double t3 = w.radius_power(3).upper / std::abs(alpha * beta);
  rep.components = {{"gram_term", t1}, {"square_term", t2}, {"radius_term", t3}};
  rep.rhs = t1 + t2 + t3;
  rep.finalize();
  return rep;
}

namespace detail {

inline BoundReport preset_report(const char* id, BoundWorkspace& w,
                                 std::vector<std::pair<std::string, double>> components) {
  BoundReport rep;
  rep.bound_id = id;
  rep.power = 3;
  rep.lhs = std::pow(w.radius().upper, 3);
  rep.components = std::move(components);
  rep.rhs = 0.0;
  for (const auto& [name, v] : rep.components) rep.rhs += v;
  rep.finalize();
  return rep;
}

}  // namespace detail

/// The four closed-form specializations of the three-term cube bound:
///   c311: 1/4 S ||a|| + 1/4 ||a^2|| ||a|| + 1/4 v(a^3)   (alpha = beta = 2)
///   c313: 1/2 S ||a||                                    (alpha = beta -> inf)
///   c314: 1/4 S ||a|| + 1/2 ||a^2|| ||a||                (alpha = 2, beta -> inf)
///   c312: 1/3 S ||a|| + 1/3 ||a^2|| ||a||                (via the power inequality)
/// with S = || |a*|^2 + |a|^2 ||. Returned in the order c311, c313, c314, c312.
inline std::vector<BoundReport> thm31_presets(BoundWorkspace& w) {
  const double s = w.gram_sum_norm();
  const double na = w.norm();
  const double n2 = w.norm_power(2);
  std::vector<BoundReport> out;
  out.push_back(detail::preset_report("c311", w,
                                      {{"gram_term", 0.25 * s * na},
                                       {"square_term", 0.25 * n2 * na},
                                       {"radius_term", 0.25 * w.radius_power(3).upper}}));
  out.push_back(detail::preset_report("c313", w, {{"gram_term", 0.5 * s * na}}));
  out.push_back(detail::preset_report(
      "c314", w, {{"gram_term", 0.25 * s * na}, {"square_term", 0.5 * n2 * na}}));
  out.push_back(detail::preset_report(
      "c312", w, {{"gram_term", s * na / 3.0}, {"square_term", n2 * na / 3.0}}));
  return out;
}

/// v^3(a) <= (1/|α|)(max{1,|α-1|} ||a||^3 + min{v(a* a^2), v(a^2 a*)}).
/// The report records which product attains the min; the min is taken over
/// the enclosure uppers so the right-hand side stays conservative.
inline BoundReport thm32_bound(BoundWorkspace& w, Cplx alpha) {
  if (std::abs(alpha) == 0.0) throw ZeroParameter("thm32 requires nonzero alpha");
  BoundReport rep;
  rep.bound_id = "thm32";
  rep.power = 3;
  rep.params = {{"alpha", alpha}};
  rep.lhs = std::pow(w.radius().upper, 3);
  const double r1 = w.radius_adjoint_sq().upper;
  const double r2 = w.radius_sq_adjoint().upper;
  const double m = std::max(1.0, std::abs(alpha - 1.0));
  rep.components = {{"norm_cube_term", m * std::pow(w.norm(), 3) / std::abs(alpha)},
                    {"radius_adjoint_sq", r1},
                    {"radius_sq_adjoint", r2},
                    {"min_term", std::min(r1, r2) / std::abs(alpha)}};
  rep.rhs = (m * std::pow(w.norm(), 3) + std::min(r1, r2)) / std::abs(alpha);
  rep.note = r1 <= r2 ? "min attained by v(a* a^2)" : "min attained by v(a^2 a*)";
  rep.finalize();
  return rep;
}

/// When v(a) = ||a||, both v(a* a^2) and v(a^2 a*) must equal ||a||^3.
/// Applicability gate: |v(a) - ||a||| <= gate * ||a||.
inline PredicateReport thm32_equality_probe(BoundWorkspace& w, double gate = 1e-10,
                                            double tol = 1e-6) {
  PredicateReport rep;
  rep.id = "thm32_equality_probe";
  const double na = w.norm();
  const double v = w.radius().midpoint();
  rep.values = {{"norm", na}, {"radius", v}};
  if (std::abs(v - na) > gate * std::max(na, 1e-300)) {
    rep.applicable = false;
    rep.note = "v(a) != ||a||";
    return rep;
  }
  const double cube = na * na * na;
  const double r1 = w.radius_adjoint_sq().midpoint();
  const double r2 = w.radius_sq_adjoint().midpoint();
  rep.values.emplace_back("radius_adjoint_sq", r1);
  rep.values.emplace_back("radius_sq_adjoint", r2);
  const double allow = tol * std::max(cube, 1e-300);
  rep.margin = allow - std::max(std::abs(r1 - cube), std::abs(r2 - cube));
  rep.holds = rep.margin >= 0.0;
  return rep;
}

/// The six-term degree-six bound parametrized by two mean functions and
/// (alpha, beta, gamma):
///   v^6(a) <= (M2a/(2|α|^2)) ||A4|| ||a||^2
///           + (f1(1-ξ1) M2b/|αβ|^2) ||a^2||^2 ||a||^2
///           + (f1(1-ξ1) f2(1-ξ2)/|αβ|^2) v(a^3)^2
///           + (f1(1-ξ1)(f2(ξ2)+2 M1b)/|αβ|^2) ||a^2|| ||a|| v(a^3)
///           + ((f1(ξ1)+2 M1a) M1g/(2|α|^2|γ|)) ||A2|| ||a^2|| ||a||^2
///           + ((f1(ξ1)+2 M1a)/(2|α|^2|γ|)) ||A2|| ||a|| v(a^3)
/// with A2 = |a*|^2+|a|^2, A4 = |a*|^4+|a|^4, M1x = max{1,|x-1|}, M2x = M1x^2.
inline BoundReport thm33_bound(BoundWorkspace& w, const MeanFunction& f1, double xi1,
                               const MeanFunction& f2, double xi2, Cplx alpha, Cplx beta,
                               Cplx gamma) {
  if (std::abs(alpha) == 0.0 || std::abs(beta) == 0.0 || std::abs(gamma) == 0.0)
    throw ZeroParameter("thm33 requires nonzero alpha, beta, gamma");
  if (!f1.contains(xi1) || !f1.contains(1.0 - xi1))
    throw XiOutOfDomain("xi1 and 1 - xi1 must lie in the first mean function domain");
  if (!f2.contains(xi2) || !f2.contains(1.0 - xi2))
    throw XiOutOfDomain("xi2 and 1 - xi2 must lie in the second mean function domain");

  const double m1a = std::max(1.0, std::abs(alpha - 1.0));
  const double m1b = std::max(1.0, std::abs(beta - 1.0));
  const double m1g = std::max(1.0, std::abs(gamma - 1.0));
  const double a2 = std::norm(alpha);
  const double ab2 = std::norm(alpha * beta);
  const double g1 = std::abs(gamma);

  const double na = w.norm();
  const double n2 = w.norm_power(2);
  const double s2 = w.gram_sum_norm();
  const double s4 = w.gram_sum4_norm();
  const double v3 = w.radius_power(3).upper;

  BoundReport rep;
  rep.bound_id = "thm33";
  rep.power = 6;
  rep.params = {{"alpha", alpha}, {"beta", beta}, {"gamma", gamma},
                {"xi1", Cplx(xi1, 0)}, {"xi2", Cplx(xi2, 0)}};
  rep.lhs = std::pow(w.radius().upper, 6);
  const double t1 = (m1a * m1a) / (2.0 * a2) * s4 * na * na;
  const double t2 = f1(1.0 - xi1) * (m1b * m1b) / ab2 * n2 * n2 * na * na;
  const double t3 = f1(1.0 - xi1) * f2(1.0 - xi2) / ab2 * v3 * v3;
  const double t4 = f1(1.0 - xi1) * (f2(xi2) + 2.0 * m1b) / ab2 * n2 * na * v3;
  const double t5 = (f1(xi1) + 2.0 * m1a) * m1g / (2.0 * a2 * g1) * s2 * n2 * na * na;
  const double t6 = (f1(xi1) + 2.0 * m1a) / (2.0 * a2 * g1) * s2 * na * v3;
  rep.components = {{"gram4_term", t1}, {"square_sq_term", t2}, {"radius_sq_term", t3},
                    {"square_radius_term", t4}, {"gram_square_term", t5},
                    {"gram_radius_term", t6}};
  rep.rhs = t1 + t2 + t3 + t4 + t5 + t6;
  rep.finalize();
  return rep;
}

/// Closed form of the degree-six bound at alpha = beta = gamma = 2,
/// f1 = f2 = identity, xi1 = xi2 = 0:
///   v^6(a) <= 1/8 ||A4|| ||a||^2 + 1/8 ||A2|| ||a^2|| ||a||^2
///           + 1/16 ||a^2||^2 ||a||^2 + 1/8 ||A2|| ||a|| v(a^3)
///           + 1/8 ||a^2|| ||a|| v(a^3) + 1/16 v(a^3)^2.
inline BoundReport thm33_preset(BoundWorkspace& w) {
  const double na = w.norm();
  const double n2 = w.norm_power(2);
  const double s2 = w.gram_sum_norm();
  const double s4 = w.gram_sum4_norm();
  const double v3 = w.radius_power(3).upper;
  BoundReport rep;
  rep.bound_id = "thm33_preset";
  rep.power = 6;
  rep.lhs = std::pow(w.radius().upper, 6);
  rep.components = {{"gram4_term", 0.125 * s4 * na * na},
                    {"gram_square_term", 0.125 * s2 * n2 * na * na},
                    {"square_sq_term", 0.0625 * n2 * n2 * na * na},
                    {"gram_radius_term", 0.125 * s2 * na * v3},
                    {"square_radius_term", 0.125 * n2 * na * v3},
                    {"radius_sq_term", 0.0625 * v3 * v3}};
  rep.rhs = 0.0;
  for (const auto& [name, v] : rep.components) rep.rhs += v;
  rep.finalize();
  return rep;
}

/// The dominance statement behind the "improvement over v(a) <= ||a||"
/// remarks: for reports from thm34 (any n), c311 or thm33_preset, the
/// right-hand side never exceeds ||a||^p (p the bound's power), up to slack.
inline PredicateReport dominance_check(const BoundReport& report, BoundWorkspace& w,
                                       double slack = 1e-9) {
  PredicateReport rep;
  rep.id = "dominance:" + report.bound_id;
  const bool eligible = report.bound_id == "thm34" || report.bound_id == "c311" ||
                        report.bound_id == "thm33_preset";
  if (!eligible) {
    rep.applicable = false;
    rep.note = "bound not covered by the dominance remarks";
    return rep;
  }
  const double trivial = std::pow(w.norm(), report.power);
  rep.values = {{"rhs", report.rhs}, {"trivial", trivial}};
  rep.margin = trivial + slack * trivial - report.rhs;
  rep.holds = rep.margin >= 0.0;
  return rep;
}

// Single-shot conveniences matching the workspace-based evaluators.
inline BoundReport thm34_bound(const AlgebraElement& a, int n, const BoundOptions& opt = {}) {
  BoundWorkspace w(a, opt);
  return thm34_bound(w, n);
}
inline BoundReport thm34_chain_bound(const AlgebraElement& a, int n,
                                     const BoundOptions& opt = {}) {
  BoundWorkspace w(a, opt);
  return thm34_chain_bound(w, n);
}
inline BoundReport thm31_bound(const AlgebraElement& a, Cplx alpha, Cplx beta,
                               const BoundOptions& opt = {}) {
  BoundWorkspace w(a, opt);
  return thm31_bound(w, alpha, beta);
}
inline std::vector<BoundReport> thm31_presets(const AlgebraElement& a,
                                              const BoundOptions& opt = {}) {
  BoundWorkspace w(a, opt);
  return thm31_presets(w);
}
inline BoundReport thm32_bound(const AlgebraElement& a, Cplx alpha,
                               const BoundOptions& opt = {}) {
  BoundWorkspace w(a, opt);
  return thm32_bound(w, alpha);
}
inline PredicateReport thm32_equality_probe(const AlgebraElement& a,
                                            const BoundOptions& opt = {}) {
  BoundWorkspace w(a, opt);
  return thm32_equality_probe(w);
}
inline BoundReport thm33_bound(const AlgebraElement& a, const MeanFunction& f1, double xi1,
                               const MeanFunction& f2, double xi2, Cplx alpha, Cplx beta,
                               Cplx gamma, const BoundOptions& opt = {}) {
  BoundWorkspace w(a, opt);
  return thm33_bound(w, f1, xi1, f2, xi2, alpha, beta, gamma);
}
inline BoundReport thm33_preset(const AlgebraElement& a, const BoundOptions& opt = {}) {
  BoundWorkspace w(a, opt);
  return thm33_preset(w);
}
inline PredicateReport dominance_check(const BoundReport& report, const AlgebraElement& a,
                                       double slack = 1e-9) {
  BoundWorkspace w(a);
  return dominance_check(report, w, slack);
}

}  // namespace numrad
