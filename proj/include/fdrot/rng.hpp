#pragma once

#include <cstdint>

namespace fdrot {

/// splitmix64; used to expand seeds into xoshiro state and to derive
/// independent substreams (one per Monte-Carlo stratum).
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
};

/// xoshiro256** — deterministic across platforms, unlike the standard
/// library distributions.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& w : s_) w = sm.next();
  }

  static Xoshiro256 substream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 sm(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    return Xoshiro256(sm.next());
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1]; never returns 0 (safe under log).
  double uniform01_open_low() { return 1.0 - uniform01(); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

}  // namespace fdrot
