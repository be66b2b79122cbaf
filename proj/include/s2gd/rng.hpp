#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace s2gd {

/// Seeded 64-bit generator used by every randomized component.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard, so runs are reproducible across platforms given the same seed.
/// The index/real/normal mappings are implemented here instead of going
/// through std::*_distribution, whose algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1), 53 random bits.
  double next_unit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n). Multiply-shift with rejection, so the
  /// result is exactly uniform and the draw sequence is portable.
  std::uint64_t next_index(std::uint64_t n) {
    using u128 = unsigned __int128;
    u128 product = static_cast<u128>(next_u64()) * n;
    auto low = static_cast<std::uint64_t>(product);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        product = static_cast<u128>(next_u64()) * n;
        low = static_cast<std::uint64_t>(product);
      }
    }
    return static_cast<std::uint64_t>(product >> 64);
  }

  /// Standard normal via Box-Muller; consumes exactly two uniforms.
  double next_normal() {
    double u1 = next_unit();
    const double u2 = next_unit();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace s2gd
