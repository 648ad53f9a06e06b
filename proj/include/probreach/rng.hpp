#pragma once

#include <bit>
#include <cstdint>
#include <limits>
#include <random>

namespace probreach {

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// xoshiro256** (Blackman & Vigna). 32-byte state, so one stream per
/// trajectory is cheap to create. Satisfies UniformRandomBitGenerator.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed = 0) {
    std::uint64_t z = seed;
    for (auto& w : s_) {
      w = mix64(z);
      z += 0x9e3779b97f4a7c15ULL;
    }
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t out = std::rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = std::rotl(s_[3], 45);
    return out;
  }

  void discard(unsigned long long n) {
    while (n--) (*this)();
  }

  friend bool operator==(const Xoshiro256&, const Xoshiro256&) = default;

 private:
  std::uint64_t s_[4];
};

using Rng = Xoshiro256;

/// Independent stream for worker/trajectory `index` under a master seed.
inline Rng make_stream(std::uint64_t seed, std::uint64_t index) {
  return Rng(mix64(seed) ^ mix64(index ^ 0x5851f42d4c957f2dULL));
}

}  // namespace probreach
