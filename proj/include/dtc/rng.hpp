#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace dtc {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives a child seed from a parent seed and an integer key. Child seeds
/// depend only on (parent, key), never on how many other seeds were drawn.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t key) noexcept {
  return mix64(parent ^ mix64(key + 0x9e3779b97f4a7c15ULL));
}

template <typename... Keys>
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t key,
                                    Keys... rest) noexcept {
  return derive_seed(derive_seed(parent, key), static_cast<std::uint64_t>(rest)...);
}

/// Counter-based generator: draw k of a stream is mix64(key + (k+1)*golden),
/// so any position in the stream can be reproduced in isolation.
class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(key) {}

  constexpr std::uint64_t next() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * 0x9e3779b97f4a7c15ULL);
  }

  /// Uniform double on [0, 1) with 53 random mantissa bits.
  constexpr double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Uniform index on [0, n).
  std::uint64_t below(std::uint64_t n) noexcept {
    // Lemire multiply-shift with rejection.
    while (true) {
      const unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
      const auto low = static_cast<std::uint64_t>(m);
      if (low >= n || low >= (-n) % n) {
        return static_cast<std::uint64_t>(m >> 64);
      }
    }
  }

  /// Standard normal via Box-Muller (one value per call, two uniforms).
  double normal() noexcept {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  constexpr std::uint64_t key() const noexcept { return key_; }
  constexpr std::uint64_t position() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace dtc
