#pragma once

#include <stdexcept>
#include <string>

namespace numrad {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Operands have incompatible shapes (non-square algebra element, mismatched
/// state/element dimensions, module elements of different shapes, ...).
struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

/// An iterative eigenvalue computation did not converge within its cap.
struct ConvergenceFailure : Error {
  explicit ConvergenceFailure(const std::string& what) : Error(what) {}
};

/// phi(|z|^2) is numerically zero, so z cannot be normalized against phi.
struct DegenerateZ : Error {
  explicit DegenerateZ(const std::string& what) : Error(what) {}
};

/// An inequality evaluator was handed a z with phi(|z|^2) != 1.
struct UnnormalizedZ : Error {
  explicit UnnormalizedZ(const std::string& what) : Error(what) {}
};

/// A scalar parameter that must be nonzero (alpha, beta, gamma) is zero.
struct ZeroParameter : Error {
  explicit ZeroParameter(const std::string& what) : Error(what) {}
};
using ZeroAlpha = ZeroParameter;

/// zeta < 0 handed to the zeta-parametrized inequality.
struct NegativeZeta : Error {
  explicit NegativeZeta(const std::string& what) : Error(what) {}
};

/// eta outside [-1/2, 3/2] handed to the eta-parametrized inequality.
struct EtaOutOfRange : Error {
  explicit EtaOutOfRange(const std::string& what) : Error(what) {}
};

/// xi (or 1 - xi) lies outside the domain of the supplied mean function.
struct XiOutOfDomain : Error {
  explicit XiOutOfDomain(const std::string& what) : Error(what) {}
};

/// Malformed configuration, report or interchange file.
struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(what) {}
};

/// Filesystem-level failure while reading or writing artifacts.
struct IoError : Error {
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace numrad
