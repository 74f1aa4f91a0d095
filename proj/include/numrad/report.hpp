#pragma once

#include <complex>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace numrad {

/// Evaluation record for one named upper bound: both sides, the margin
/// rhs - lhs, the tightness lhs/rhs and a per-term breakdown. The lhs is the
/// relevant power of the numerical radius, always taken at the enclosure
/// upper so that a reported violation can never be an artifact of solver
/// error; radii appearing inside the rhs are taken at their enclosure upper
/// as well.
struct BoundReport {
  std::string bound_id;
  int power = 1;  // lhs = v(a)^power
  std::vector<std::pair<std::string, std::complex<double>>> params;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;     // rhs - lhs
  double tightness = 0.0;  // lhs / rhs, defined as 1 when both sides vanish
  std::vector<std::pair<std::string, double>> components;
  std::string note;

  void finalize() {
    margin = rhs - lhs;
    if (rhs > 0.0)
      tightness = lhs / rhs;
    else
      tightness = (lhs <= 0.0) ? 1.0 : std::numeric_limits<double>::infinity();
  }
};

/// Outcome of a checkable predicate (equality probes, dominance checks).
struct PredicateReport {
  std::string id;
  bool applicable = true;
  bool holds = true;
  double margin = 0.0;
  std::vector<std::pair<std::string, double>> values;
  std::string note;
};

}  // namespace numrad
