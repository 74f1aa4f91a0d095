#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <numbers>
#include <queue>
#include <unordered_map>
#include <utility>
#include <vector>

#include "numrad/algebra.hpp"
#include "numrad/errors.hpp"
#include "numrad/report.hpp"

namespace numrad {

struct RadiusOptions {
  /// Target enclosure width, relative: upper - lower <= tol * max(1, ||a||).
  double tol = 1e-11;
  /// Initial uniform grid size; 0 selects 64 for dim <= 16 and 256 above.
  int initial_grid = 0;
  /// Hard cap on eigensolves; exceeding it yields a best-effort enclosure
  /// with certified = false.
  int max_evaluations = 400000;
  /// Golden-section polish iterations per bracket (three best brackets).
  int golden_iters = 14;
  /// Largest dimension the solver accepts.
  int dim_cap = 64;
  /// Reuse enclosures for byte-identical (matrix, tol) queries in-thread.
  bool use_cache = true;
};

/// Certified enclosure of the numerical radius. `lower` is attained by the
/// witness vector (|w* a w| matches `lower` up to a few ulps); `upper` comes
/// from rigorous per-interval bounds on the rotated-part eigenvalue curve.
struct RadiusEnclosure {
  double lower = 0.0;
  double upper = 0.0;
  double argmax_theta = 0.0;
  Vector witness;
  bool certified = true;
  int evaluations = 0;

  double midpoint() const { return 0.5 * (lower + upper); }
  double width() const { return upper - lower; }
};

/// lambda_max of the rotated Hermitian part (e^{i theta} a + e^{-i theta} a*)/2.
/// The numerical radius is the maximum of this function over theta.
inline double rotated_part_max(const AlgebraElement& a, double theta) {
  const Cplx phase(std::cos(theta), std::sin(theta));
  Matrix h = 0.5 * (phase * a.mat() + (phase * a.mat()).adjoint());
  return hermitian_eigmax(AlgebraElement(std::move(h))).value;
}

namespace detail {

/// Shared context for one numerical-radius computation. With
/// Hr = (a + a*)/2 and K = i(a - a*)/2 (both exactly Hermitian),
/// H(theta) = cos(theta) Hr + sin(theta) K and H'(theta) = H(theta + pi/2).
struct RadiusSweep {
  explicit RadiusSweep(const AlgebraElement& a) : mat(a.mat()), buf(a.dim(), a.dim()) {
    Matrix hr = 0.5 * (mat + mat.adjoint());
    Matrix k = Cplx(0, 0.5) * (mat - mat.adjoint());
    symmetrize_in_place(hr);
    symmetrize_in_place(k);
    hermitian_part = std::move(hr);
    skew_rotation = std::move(k);
  }

  void build(double theta) {
    buf = std::cos(theta) * hermitian_part + std::sin(theta) * skew_rotation;
  }
  void build_derivative(double theta) {
    dbuf = -std::sin(theta) * hermitian_part + std::cos(theta) * skew_rotation;
  }

  double eval(double theta) {
    build(theta);
    ++evaluations;
    return eigmax_value(buf);
  }

  Matrix mat;
  Matrix hermitian_part;
  Matrix skew_rotation;
  Matrix buf;
  Matrix dbuf;
  int evaluations = 0;
};

/// Rigorous upper bound for g over [tl, tr] from upper estimates of g at the
/// endpoints. Every curve theta -> Re(e^{i theta} x* a x) is a pure sinusoid,
/// so the sinusoid interpolating the endpoint values dominates g inside the
/// interval (sine-weighted interpolation has nonnegative weights for widths
/// below pi). Formulated around the midpoint for stability on thin intervals.
inline double envelope_upper(double tl, double tr, double gl, double gr, double lipschitz) {
  const double delta = 0.5 * (tr - tl);
  const double endpoint_max = std::max(gl, gr);
  const double u_lip = endpoint_max + lipschitz * delta;
  if (!(delta > 0.0) || delta >= 1.4) return u_lip;
  const double sd = std::sin(delta);
  const double cd = std::cos(delta);
  if (sd <= 0.0) return u_lip;
  const double p = 0.5 * (gl + gr) / cd;
  const double q = 0.5 * (gr - gl) / sd;
  double u_env;
  if (std::abs(q) * cd <= p * sd) {
    u_env = std::hypot(p, q) + 8.0 * std::numeric_limits<double>::epsilon() * std::abs(p);
  } else {
    u_env = endpoint_max;
  }
  return std::min(u_lip, u_env);
}

/// One center eigensolve feeding three consumers of the branch-and-bound
/// loop: the split value g(tm), an attained lower bound |w* a w|, and a
/// residual-based upper bound for g over [tm - delta, tm + delta]. With
/// mu(s) = w* H(tm + s) w (an exact sinusoid in s) and residuals
/// r0 = ||H w - mu0 w||, r1 = ||H' w - d w||, a Kato-Temple argument gives
///   g(tm + s) <= mu(s) + rho(s)^2 / gap(s)
/// provided every non-top eigenvalue of H(tm + s) stays below mu(s); Weyl
/// pushes the center's second eigenvalue across the interval. Maximizing over
/// |s| <= delta reduces to a quadratic in |sin s|. When the top eigenvector
/// decouples from the rotation (normal elements, flat curves) the quadratic
/// coefficient cancels against the cosine decay of mu, so whole intervals are
/// certified at once where endpoint envelopes would subdivide indefinitely.
/// interval_upper is +inf when the bound is inapplicable (small gap or
/// nonpositive Rayleigh quotient).
struct CenterProbe {
  double value = 0.0;           // g(tm)
  double attained = 0.0;        // |w* a w|
  double interval_upper = 0.0;  // upper bound for g on the interval
};

inline CenterProbe probe_center(RadiusSweep& sweep, double tm, double delta, double norm_a,
                                double guard) {
  sweep.build(tm);
  ++sweep.evaluations;
  const EigTop top = eig_top(sweep.buf);
  CenterProbe out;
  out.value = top.lmax;
  out.attained = std::abs((top.w.adjoint() * sweep.mat * top.w)(0, 0));
  out.interval_upper = std::numeric_limits<double>::infinity();

  const double mu0 = (top.w.adjoint() * sweep.buf * top.w)(0, 0).real();
  if (!(mu0 > 0.0)) return out;
  sweep.build_derivative(tm);
  const double d = (top.w.adjoint() * sweep.dbuf * top.w)(0, 0).real();
  const double r0 = (sweep.buf * top.w - mu0 * top.w).norm() + guard;
  const double r1 = (sweep.dbuf * top.w - d * top.w).norm() + guard;

  const double sd = std::sin(delta);
  const double cd = std::cos(delta);
  const double e_max = ((1.0 - cd) + sd) * norm_a;
  const double ell_max = top.l2 + guard + e_max;
  const double mu_min = mu0 * cd - std::abs(d) * sd;
  const double gap = mu_min - ell_max;
  const double rho_max = r0 + r1 * sd;
  if (!(gap > 2.0 * rho_max) || !(gap > 0.0)) return out;
  const double gap_eff = gap - rho_max * rho_max / gap;

  const double qa = r1 * r1 / gap_eff - 0.5 * mu0;
  const double qb = std::abs(d) + 2.0 * r0 * r1 / gap_eff;
  const double qc = mu0 + r0 * r0 / gap_eff;
  double qmax;
  if (qa >= 0.0) {
    qmax = qc + qb * sd + qa * sd * sd;
  } else {
    const double tv = qb / (-2.0 * qa);
    qmax = (tv >= sd) ? qc + qb * sd + qa * sd * sd : qc + qb * qb / (-4.0 * qa);
  }
  out.interval_upper = qmax + guard;
  return out;
}

struct ThetaInterval {
  double tl, tr, gl, gr, upper;
};
struct IntervalOrder {
  bool operator()(const ThetaInterval& x, const ThetaInterval& y) const {
    return x.upper < y.upper;
  }
};

struct RadiusCacheKey {
  std::uint64_t hash;
  double tol;
  Matrix mat;
};

inline std::uint64_t fnv1a(const void* data, std::size_t bytes, std::uint64_t h = 1469598103934665603ULL) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace detail

inline RadiusEnclosure numerical_radius(const AlgebraElement& a, const RadiusOptions& opt);

namespace detail {

inline RadiusEnclosure radius_compute(const AlgebraElement& a, const RadiusOptions& opt,
                                      double norm_a) {
  const Eigen::Index n = a.dim();
  const double two_pi = 2.0 * std::numbers::pi;
  const double target = opt.tol * std::max(1.0, norm_a);
  const double guard =
      std::max(64.0, 4.0 * static_cast<double>(n)) * std::numeric_limits<double>::epsilon() * norm_a;
  const double prune_slack = 0.5 * target;
  const double lipschitz = norm_a * (1.0 + 1e-12) + guard;

  RadiusSweep sweep(a);
  const int grid = opt.initial_grid > 0 ? opt.initial_grid : (n <= 16 ? 64 : 256);

  std::vector<double> theta(grid + 1), val(grid + 1);
  double best_val = -std::numeric_limits<double>::infinity();
  double best_theta = 0.0;
  for (int i = 0; i < grid; ++i) {
    theta[i] = two_pi * i / grid;
    val[i] = sweep.eval(theta[i]);
    if (val[i] > best_val) {
      best_val = val[i];
      best_theta = theta[i];
    }
  }
  theta[grid] = two_pi;
  val[grid] = val[0];

  // Golden-section polish around the three best grid points (lower bound only).
  std::vector<int> order(grid);
  for (int i = 0; i < grid; ++i) order[i] = i;
  std::partial_sort(order.begin(), order.begin() + std::min(3, grid), order.end(),
                    [&](int x, int y) { return val[x] > val[y]; });
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int b = 0; b < std::min(3, grid); ++b) {
    double lo = theta[order[b]] - two_pi / grid;
    double hi = theta[order[b]] + two_pi / grid;
    double c = hi - golden * (hi - lo);
    double d = lo + golden * (hi - lo);
    double fc = sweep.eval(c);
    double fd = sweep.eval(d);
    for (int it = 0; it < opt.golden_iters; ++it) {
      if (fc < fd) {
        lo = c;
        c = d;
        fc = fd;
        d = lo + golden * (hi - lo);
        fd = sweep.eval(d);
      } else {
        hi = d;
        d = c;
        fd = fc;
        c = hi - golden * (hi - lo);
        fc = sweep.eval(c);
      }
      if (std::max(fc, fd) > best_val) {
        best_val = std::max(fc, fd);
        best_theta = fc >= fd ? c : d;
      }
    }
  }

  double lower = best_val - guard;
  double pruned_cap = lower;

  std::priority_queue<ThetaInterval, std::vector<ThetaInterval>, IntervalOrder> queue;
  for (int i = 0; i < grid; ++i) {
    const double u =
        envelope_upper(theta[i], theta[i + 1], val[i] + guard, val[i + 1] + guard, lipschitz);
    if (u > lower + prune_slack)
      queue.push({theta[i], theta[i + 1], val[i], val[i + 1], u});
    else
      pruned_cap = std::max(pruned_cap, u);
  }

  bool certified = true;
  double upper = std::max(lower, pruned_cap);
  while (!queue.empty()) {
    const ThetaInterval top = queue.top();
    if (top.upper <= lower + prune_slack) {
      pruned_cap = std::max(pruned_cap, top.upper);
      queue.pop();
      continue;
    }
    if (std::max(top.upper, pruned_cap) - lower <= target) {
      upper = std::max({lower, top.upper, pruned_cap});
      break;
    }
    if (sweep.evaluations >= opt.max_evaluations) {
      certified = false;
      upper = std::max({lower, top.upper, pruned_cap});
      break;
    }
    queue.pop();

    const double tm = 0.5 * (top.tl + top.tr);
    const double delta = 0.5 * (top.tr - top.tl);
    const CenterProbe probe = probe_center(sweep, tm, delta, norm_a, guard);
    if (probe.attained - guard > lower) {
      lower = probe.attained - guard;
      best_theta = tm;
    }
    const double gm = probe.value;
    if (gm > best_val) best_val = gm;

    const double cap = std::min(top.upper, probe.interval_upper);
    if (cap <= lower + prune_slack) {
      pruned_cap = std::max(pruned_cap, std::max(lower, cap));
      continue;
    }
    const double ul = std::min(
        cap, envelope_upper(top.tl, tm, top.gl + guard, gm + guard, lipschitz));
    if (ul > lower + prune_slack)
      queue.push({top.tl, tm, top.gl, gm, ul});
    else
      pruned_cap = std::max(pruned_cap, ul);
    const double ur = std::min(
        cap, envelope_upper(tm, top.tr, gm + guard, top.gr + guard, lipschitz));
    if (ur > lower + prune_slack)
      queue.push({tm, top.tr, gm, top.gr, ur});
    else
      pruned_cap = std::max(pruned_cap, ur);
  }
  if (queue.empty()) upper = std::max(lower, pruned_cap);

  // Witness at the best angle; |w* a w| is a genuine lower bound of v(a)
  // for any unit w, independent of eigensolver accuracy.
  sweep.build(best_theta);
  ++sweep.evaluations;
  auto [lam, w] = eigmax_pair(sweep.buf);
  (void)lam;
  const Cplx quad = (w.adjoint() * sweep.mat * w)(0, 0);
  lower = std::max(lower, std::abs(quad) - guard);

  RadiusEnclosure out;
  out.lower = std::max(0.0, lower);
  out.upper = std::max(upper, out.lower);
  out.argmax_theta = best_theta - two_pi * std::floor(best_theta / two_pi);
  out.witness = std::move(w);
  out.certified = certified && (out.upper - out.lower <= target);
  out.evaluations = sweep.evaluations;
  return out;
}

}  // namespace detail

/// Certified numerical radius v(a) = sup over states of |phi(a)|, computed as
/// max over theta of lambda_max of the rotated Hermitian part H(theta).
/// Pipeline: exact short-circuits (zero, scalars, square-zero elements, whose
/// numerical range is the disk of radius ||a||/2), then a uniform theta-grid,
/// golden-section polish of the attained lower bound, and branch-and-bound
/// with two rigorous per-interval upper bounds (sinusoid envelopes through
/// endpoint values, and gap-aware center bounds) until the width drops below
/// tol * max(1, ||a||). Hitting the evaluation cap first yields a best-effort
/// enclosure flagged certified = false, never a silent point estimate.
inline RadiusEnclosure numerical_radius(const AlgebraElement& a, const RadiusOptions& opt) {
  if (!(opt.tol >= 1e-12)) throw Error("numerical_radius: tol must be >= 1e-12");
  if (a.dim() > opt.dim_cap)
    throw Error("numerical_radius: dim " + std::to_string(a.dim()) + " exceeds cap " +
                std::to_string(opt.dim_cap));

  const Eigen::Index n = a.dim();
  const double norm_a = operator_norm(a);
  const double guard =
      std::max(64.0, 4.0 * static_cast<double>(n)) * std::numeric_limits<double>::epsilon() * norm_a;

  if (norm_a == 0.0) {
    RadiusEnclosure out;
    out.witness = Vector::Zero(n);
    out.witness(0) = 1.0;
    return out;
  }

  if (n == 1) {
    RadiusEnclosure out;
    const Cplx c = a.mat()(0, 0);
    out.lower = out.upper = std::abs(c);
    out.argmax_theta = std::arg(std::conj(c));
    if (out.argmax_theta < 0) out.argmax_theta += 2.0 * std::numbers::pi;
    out.witness = Vector::Ones(1);
    out.evaluations = 0;
    return out;
  }

  // a^2 = 0 (exactly): the numerical range is the closed disk of radius
  // ||a||/2, attained by (u + v)/sqrt(2) for a top singular pair a v = s u.
  if ((a.mat() * a.mat()).norm() == 0.0) {
    Matrix gram = a.mat() * a.mat().adjoint();
    detail::symmetrize_in_place(gram);
    auto [s2, u_vec] = detail::eigmax_pair(gram);
    const double sigma = std::sqrt(std::max(0.0, s2));
    if (sigma > 0.0) {
      Vector v_vec = a.mat().adjoint() * u_vec / sigma;
      Vector w = (u_vec + v_vec) / std::sqrt(2.0);
      const double nw = w.norm();
      if (nw > 0.0) w /= nw;
      const double quad = std::abs((w.adjoint() * a.mat() * w)(0, 0));
      RadiusEnclosure out;
      out.lower = std::max(0.0, quad - guard);
      out.upper = 0.5 * norm_a + guard;
      if (out.upper < out.lower) out.upper = out.lower;
      out.argmax_theta = 0.0;
      out.witness = std::move(w);
      out.certified = (out.upper - out.lower) <= opt.tol * std::max(1.0, norm_a);
      out.evaluations = 1;
      if (out.certified) return out;
    }
  }

  if (!opt.use_cache) return detail::radius_compute(a, opt, norm_a);

  struct CacheEntry {
    Matrix mat;
    double tol;
    RadiusEnclosure enc;
  };
  thread_local std::unordered_map<std::uint64_t, CacheEntry> cache;
  const std::size_t bytes = sizeof(Cplx) * static_cast<std::size_t>(n) * n;
  std::uint64_t h = detail::fnv1a(a.mat().data(), bytes);
  h = detail::fnv1a(&opt.tol, sizeof(double), h ^ static_cast<std::uint64_t>(n));
  const auto it = cache.find(h);
  if (it != cache.end() && it->second.tol == opt.tol && it->second.mat.rows() == n &&
      std::memcmp(it->second.mat.data(), a.mat().data(), bytes) == 0)
    return it->second.enc;
  RadiusEnclosure enc = detail::radius_compute(a, opt, norm_a);
  if (cache.size() >= 512) cache.clear();
  cache[h] = CacheEntry{a.mat(), opt.tol, enc};
  return enc;
}

inline RadiusEnclosure numerical_radius(const AlgebraElement& a, double tol) {
  RadiusOptions opt;
  opt.tol = tol;
  return numerical_radius(a, opt);
}

/// Checks ||a||/2 - slack <= v(a) <= ||a|| + slack with slack = 1e-9 ||a||,
/// using the conservative enclosure side for each margin. A violation is
/// recorded in the report, not thrown.
inline BoundReport check_norm_sandwich(const AlgebraElement& a, const RadiusOptions& opt = {}) {
  const double norm_a = operator_norm(a);
  const RadiusEnclosure v = numerical_radius(a, opt);
  const double slack = 1e-9 * norm_a;
  BoundReport rep;
  rep.bound_id = "sandwich";
  rep.power = 1;
  rep.lhs = v.upper;
  rep.rhs = norm_a;
  const double lower_margin = v.upper - 0.5 * norm_a;
  const double upper_margin = norm_a - v.lower;
  rep.components = {{"norm", norm_a},
                    {"radius_lower", v.lower},
                    {"radius_upper", v.upper},
                    {"lower_margin", lower_margin},
                    {"upper_margin", upper_margin},
                    {"slack", slack}};
  if (lower_margin < -slack || upper_margin < -slack) rep.note = "violated";
  rep.finalize();
  rep.tightness = norm_a > 0.0 ? v.upper / norm_a : 1.0;
  return rep;
}

}  // namespace numrad
