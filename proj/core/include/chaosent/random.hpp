#pragma once

#include <cstdint>
#include <random>

namespace chaosent {

// Name recorded in report metadata next to the seed.
inline constexpr const char* kRngAlgorithm = "mt19937_64+u53";

// SplitMix64 finalizer; derives independent sub-seeds for sharded runs.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// mt19937_64 with explicit double conversion so sequences do not depend on
// the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform on [-1, 1).
  double symmetric() { return 2.0 * uniform01() - 1.0; }
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return static_cast<std::uint64_t>(uniform01() * n); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace chaosent
