#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "numrad/errors.hpp"

namespace numrad {

/// Nonnegative weight function f on a domain D with f(t) + f(1-t) = 1
/// wherever both points lie in D. Two parametric families are built in
/// (f(t) = t on [0,1] and f(t) = (1+2t)/4 on [-1/2, 3/2]); arbitrary
/// tabulated functions are accepted and validated at construction.
class MeanFunction {
 public:
  enum class Family { identity_on_unit_interval, affine_quarter, custom_tabulated };

  static MeanFunction identity() {
    MeanFunction f(Family::identity_on_unit_interval, 0.0, 1.0,
                   [](double t) { return t; });
    f.validate_interval();
    return f;
  }

  static MeanFunction affine_quarter() {
    MeanFunction f(Family::affine_quarter, -0.5, 1.5,
                   [](double t) { return 0.25 * (1.0 + 2.0 * t); });
    f.validate_interval();
    return f;
  }

  /// Tabulated samples (t, f(t)). Rejects negative values and any pair of
  /// nodes t, 1-t whose values do not sum to 1 within 1e-12.
  static MeanFunction tabulated(std::vector<std::pair<double, double>> samples) {
    if (samples.empty()) throw Error("tabulated mean function needs at least one sample");
    std::sort(samples.begin(), samples.end());
    MeanFunction f(Family::custom_tabulated, samples.front().first, samples.back().first, {});
    f.nodes_ = std::move(samples);
    for (const auto& [t, v] : f.nodes_) {
      if (!(v >= 0.0)) throw Error("mean function must be nonnegative, f(" + std::to_string(t) +
                                   ") = " + std::to_string(v));
      if (const double* w = f.find_node(1.0 - t)) {
        if (std::abs(v + *w - 1.0) > 1e-12)
          throw Error("mean function violates f(t) + f(1-t) = 1 at t = " + std::to_string(t));
      }
    }
    return f;
  }

  Family family() const noexcept { return family_; }
  double domain_lo() const noexcept { return lo_; }
  double domain_hi() const noexcept { return hi_; }

  bool contains(double t) const {
    if (family_ == Family::custom_tabulated) return find_node(t) != nullptr;
    return t >= lo_ - 1e-15 && t <= hi_ + 1e-15;
  }

  double operator()(double t) const {
    if (family_ == Family::custom_tabulated) {
      if (const double* v = find_node(t)) return *v;
      throw XiOutOfDomain("t = " + std::to_string(t) + " is not a tabulated node");
    }
    if (!contains(t))
      throw XiOutOfDomain("t = " + std::to_string(t) + " outside mean function domain [" +
                          std::to_string(lo_) + ", " + std::to_string(hi_) + "]");
    return eval_(t);
  }

 private:
  MeanFunction(Family fam, double lo, double hi, std::function<double(double)> eval)
      : family_(fam), lo_(lo), hi_(hi), eval_(std::move(eval)) {}

  // 101-point sweep of the interval families: nonnegativity plus the
  // involution identity at every probe whose reflection stays in the domain.
  void validate_interval() const {
    for (int i = 0; i <= 100; ++i) {
      const double t = lo_ + (hi_ - lo_) * i / 100.0;
      const double v = eval_(t);
      if (!(v >= 0.0)) throw Error("mean function negative at t = " + std::to_string(t));
      const double s = 1.0 - t;
      if (s >= lo_ - 1e-15 && s <= hi_ + 1e-15) {
        if (std::abs(v + eval_(s) - 1.0) > 1e-12)
          throw Error("mean function violates f(t) + f(1-t) = 1 at t = " + std::to_string(t));
      }
    }
  }

  const double* find_node(double t) const {
    for (const auto& [x, v] : nodes_)
      if (std::abs(x - t) <= 1e-9) return &v;
    return nullptr;
  }

  Family family_;
  double lo_, hi_;
  std::function<double(double)> eval_;
  std::vector<std::pair<double, double>> nodes_;
};

}  // namespace numrad
