#pragma once

#include <cstdint>

namespace femto {

/// Small seedable generator (splitmix64 core). Independent child streams are
/// derived with `split`, so topology sampling and algorithm sampling never
/// share a sequence. Output is identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), state_(mix(seed ^ kPhi)) {}

  std::uint64_t next_u64() {
    state_ += kPhi;
    return mix(state_);
  }

  /// Uniform double in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Unbiased uniform integer in [0, bound).
  std::uint32_t next_below(std::uint32_t bound) {
    // Lemire's multiply-shift with rejection.
    std::uint64_t x = next_u64() & 0xffffffffu;
    std::uint64_t m = x * bound;
    auto low = static_cast<std::uint32_t>(m);
    if (low < bound) {
      std::uint32_t threshold = (0u - bound) % bound;
      while (low < threshold) {
        x = next_u64() & 0xffffffffu;
        m = x * bound;
        low = static_cast<std::uint32_t>(m);
      }
    }
    return static_cast<std::uint32_t>(m >> 32);
  }

  /// Child generator whose sequence is independent of this one and of any
  /// sibling derived with a different tag.
  Rng split(std::uint64_t tag) const {
    return Rng(mix(seed_ + kPhi * (tag + 1)));
  }

  std::uint64_t seed() const { return seed_; }

 private:
  static constexpr std::uint64_t kPhi = 0x9e3779b97f4a7c15ull;

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t seed_;
  std::uint64_t state_;
};

}  // namespace femto
