#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace padeval::rng {

/// Identifies the generator so stored corpora can state how they were made.
inline constexpr const char* kAlgorithm = "splitmix64-counter-v1";

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Counter-based stream: the n-th draw is a pure function of (key, n), so a
/// stream can be split per sample without depending on scheduling order.
class CounterRng {
 public:
  constexpr explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

  /// Independent child stream for item `index` of a run seeded with `seed`.
  static constexpr CounterRng stream(std::uint64_t seed, std::uint64_t index) noexcept {
    return CounterRng(splitmix64(seed ^ splitmix64(index ^ 0xD1B54A32D192ED03ULL)));
  }

  constexpr std::uint64_t next_u64() noexcept { return splitmix64(key_ + 0x9E3779B97F4A7C15ULL * ++counter_); }

  /// Uniform in (0, 1].
  constexpr double uniform() noexcept {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal draw (Box-Muller, one value per two uniforms).
  double normal() noexcept {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace padeval::rng
