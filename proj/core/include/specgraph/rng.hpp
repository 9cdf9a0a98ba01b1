#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace specgraph {

/// Identity string recorded in trace headers and run metadata.
inline constexpr const char* kRngId = "mt19937_64/u53/box-muller";

// Seedable generator with fixed variate transforms. std::mt19937_64 output is
// specified by the standard; the distribution transforms below are pinned here
// because the std::*_distribution classes are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform on {0, ..., n-1}; n must be positive. Rejection sampling keeps
  /// the draw unbiased.
  std::size_t next_index(std::size_t n) {
    const std::uint64_t bound = n;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
  }

  bool next_bernoulli(double prob) { return next_double() < prob; }

  /// Standard normal via Box-Muller; the spare variate is cached.
  double next_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - next_double();  // (0, 1], keeps log finite
    const double u2 = next_double();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace specgraph
