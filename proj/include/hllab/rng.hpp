#pragma once

#include <cstdint>

namespace hllab {

namespace detail {

inline constexpr std::uint64_t rng_gamma = 0x9E3779B97F4A7C15ull;

[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

}  // namespace detail

// Counter-based generator: word(i) is a pure function of (seed, i), so any
// part of the stream can be generated in any order, on any thread, with
// bit-identical results.  split(i) derives an independent child stream.
class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t seed) : seed_(seed) {}

  [[nodiscard]] constexpr std::uint64_t word(std::uint64_t i) const {
    return detail::mix64(seed_ + (i + 1) * detail::rng_gamma);
  }
  // uniform in [0, 1)
  [[nodiscard]] constexpr double uniform(std::uint64_t i) const {
    return static_cast<double>(word(i) >> 11) * 0x1.0p-53;
  }
  // Rademacher +-1
  [[nodiscard]] constexpr int sign(std::uint64_t i) const {
    return (word(i) >> 63) != 0 ? -1 : 1;
  }
  [[nodiscard]] constexpr CounterRng split(std::uint64_t i) const {
    return CounterRng(detail::mix64(word(i) + detail::rng_gamma));
  }
  [[nodiscard]] constexpr std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

}  // namespace hllab
