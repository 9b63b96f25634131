#pragma once

#include <cstdint>

namespace smallset {

/// SplitMix64 with the usual constants. Every seeded stream in the toolkit is
/// drawn from this generator so outputs reproduce bit for bit anywhere.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t operator()() { return next(); }

  /// Uniform in [0, bound) by rejection, bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t reject_below = (std::uint64_t{0} - bound) % bound;  // 2^64 mod bound
    std::uint64_t v = next();
    while (v < reject_below) v = next();
    return v % bound;
  }

 private:
  std::uint64_t state_;
};

}  // namespace smallset
