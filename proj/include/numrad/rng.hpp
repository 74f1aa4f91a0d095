#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace numrad {

namespace detail {

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Counter-based random stream keyed by (seed, lane0, lane1, lane2). Streams
/// with distinct keys are statistically independent, and a stream's output
/// depends only on its key and draw index, never on which worker runs it.
/// Normal deviates come from Box-Muller, so the sequence is identical across
/// platforms and standard libraries.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t lane0 = 0, std::uint64_t lane1 = 0,
                     std::uint64_t lane2 = 0) {
    std::uint64_t k = detail::mix64(seed ^ 0x6A09E667F3BCC908ULL);
    k = detail::mix64(k ^ (lane0 * 0xBB67AE8584CAA73BULL));
    k = detail::mix64(k ^ (lane1 * 0x3C6EF372FE94F82BULL));
    k = detail::mix64(k ^ (lane2 * 0xA54FF53A5F1D36F1ULL));
    key_ = k;
  }

  std::uint64_t next() { return detail::mix64(key_ + (++counter_) * 0x9E3779B97F4A7C15ULL); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard real Gaussian N(0, 1).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  /// Standard complex Gaussian (E|g|^2 = 1).
  std::complex<double> cnormal() {
    const double re = normal();
    const double im = normal();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
  }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace numrad
