#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace ace::rng {

// splitmix64; the same bit pattern on every platform.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derive an independent substream seed from a master seed and an index.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = seed ^ (0x9e3779b97f4a7c15ULL * (index + 1));
  return splitmix64(state);
}

// Uniform double in (0, 1].
inline double unit_double(std::uint64_t bits) {
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

// Uniform index in [0, bound) by rejection-free multiply-shift.
inline std::uint64_t bounded(std::uint64_t bits, std::uint64_t bound) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(bits) * bound) >> 64);
}

// Deterministic stream of standard normal draws (Box-Muller).
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : state_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = unit_double(splitmix64(state_));
    const double u2 = unit_double(splitmix64(state_));
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Deterministic uniform stream.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64(state_); }
  double next_unit() { return unit_double(splitmix64(state_)); }
  std::uint64_t next_bounded(std::uint64_t bound) {
    return bounded(splitmix64(state_), bound);
  }

 private:
  std::uint64_t state_;
};

}  // namespace ace::rng
