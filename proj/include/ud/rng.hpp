#pragma once

#include <cmath>
#include <cstdint>

namespace ud {

// All randomness in the library flows through one fixed counter-based
// generator so any run replays bit-exactly from its seed.
//
// Generator: SplitMix64 applied to (key + GOLDEN * counter), where
// key = splitmix64(seed ^ splitmix64(stream)). Uniform doubles take the top
// 53 bits; normals use the Box-Muller transform on two consecutive uniforms.
inline constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_(splitmix64(seed ^ splitmix64(stream))) {}

  std::uint64_t next_u64() noexcept {
    return splitmix64(key_ + 0x9e3779b97f4a7c15ULL * counter_++);
  }

  // Uniform in [0, 1).
  double next_unit() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in (0, 1]; keeps log() finite below.
  double next_unit_open() noexcept {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal, Box-Muller. Consumes exactly two draws; the sibling
  // sin-branch value is discarded to keep the counter stream positionless.
  double next_normal() noexcept {
    const double u1 = next_unit_open();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Unbiased-enough bounded draw via the high bits of a 128-bit product.
  std::uint64_t next_below(std::uint64_t n) noexcept {
    const unsigned __int128 wide =
        static_cast<unsigned __int128>(next_u64()) * n;
    return static_cast<std::uint64_t>(wide >> 64);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace ud
