#pragma once

#include <cmath>
#include <cstdint>

namespace pbdstein {

// splitmix64 finalizer (Steele, Lea, Vigna). Doubles as the 64-bit mixer that
// derives independent per-index streams from one master seed.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stream k of a master seed. Mixing k first decorrelates consecutive indices.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t k) {
  return mix64(seed ^ mix64(k));
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform on [0, 1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform on (0, 1], safe as a log argument
  double uniform_pos() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

  double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

 private:
  std::uint64_t state_;
};

}  // namespace pbdstein
