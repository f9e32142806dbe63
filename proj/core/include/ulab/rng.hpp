#pragma once

#include <cstdint>

namespace ulab {

// Counter-based generator: every draw is a pure function of (seed, lane, t),
// so streams replay from any position and are identical on every platform.
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t lane, std::uint64_t t) {
  return splitmix64(splitmix64(seed ^ (lane * 0xd1b54a32d192ed03ULL)) + t);
}

// Uniform on [0,1) with 53 random bits.
inline double unit_from_bits(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

// Uniform on the open interval (0,1/2): odd 53-bit numerators, halved.
inline double open_half_from_bits(std::uint64_t h) {
  return static_cast<double>((h >> 11) | 1ULL) * 0x1.0p-54;
}

// Uniform integer in [0, k) by multiply-shift on the top 32 bits; k <= 2^32.
inline std::uint64_t below_from_bits(std::uint64_t h, std::uint64_t k) {
  return ((h >> 32) * k) >> 32;
}

// Sequential convenience wrapper used by tests and simulations that do not
// need random access.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t lane = 0) : seed_(seed), lane_(lane) {}

  std::uint64_t next_u64() { return counter_hash(seed_, lane_, t_++); }
  double uniform() { return unit_from_bits(next_u64()); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t below(std::uint64_t k) { return below_from_bits(next_u64(), k); }
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t seed_;
  std::uint64_t lane_;
  std::uint64_t t_ = 0;
};

}  // namespace ulab
