// Counter-based random numbers: every draw is a pure function of
// (seed, stream, index, sub), so parallel samplers reproduce exactly.
#pragma once

#include <cstdint>

namespace bfree {

inline constexpr const char* kRngAlgorithm = "splitmix64-counter-v1";

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix64(seed ^ mix64(stream + 0x9e3779b97f4a7c15ULL))) {}

  std::uint64_t draw(std::uint64_t index, std::uint64_t sub = 0) const {
    return mix64(key_ + (index * 16 + sub + 1) * 0x9e3779b97f4a7c15ULL);
  }

  // Uniform in [0, bound) by rejection; bound >= 1.
  std::uint64_t below(std::uint64_t index, std::uint64_t bound) const {
    std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (std::uint64_t sub = 0;; ++sub) {
      std::uint64_t r = draw(index, sub);
      if (r >= threshold) return r % bound;
    }
  }

 private:
  std::uint64_t key_;
};

}  // namespace bfree
