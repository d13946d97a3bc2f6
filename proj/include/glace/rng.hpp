#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

namespace glace {

/// splitmix64 finalizer; used to fold labels into seed material.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Labeled sub-seed derivation. Every random stream in a run hangs off the
/// single run seed plus a label ("split", "init-main", "batch:17", ...), so
/// streams are independent and whole runs are reproducible from one integer.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view label) {
  std::uint64_t h = mix64(base);
  for (char c : label) h = mix64(h ^ static_cast<unsigned char>(c));
  return h;
}

/// mt19937_64 with hand-rolled integer/real mappings. std::*_distribution is
/// implementation-defined, which would break bit-identical reruns across
/// standard libraries; the mappings below are fully specified.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Unbiased uniform integer in [0, n). n must be > 0.
  std::uint64_t uniform_below(std::uint64_t n) {
    const std::uint64_t t = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t x = gen_();
      if (x >= t) return (x - t) % n;
    }
  }

  /// Uniform double in [a, b).
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace glace
