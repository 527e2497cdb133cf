#pragma once

#include <atomic>
#include <cstdint>
#include <span>
#include <vector>

namespace ace {

struct SrpConfig {
  std::size_t dim = 0;          // d
  std::uint32_t k_bits = 15;    // K, bits per meta-hash
  std::uint32_t num_tables = 50;  // L
  std::uint64_t seed = 0;
  double noise_scale = 0.0;     // >0 enables the noisy (private) variant
  bool cache_projections = true;
};

// Signed random projections: h_w(x) = sign(w^T x), with w ~ N(0, I_d).
// A family holds K*L independent directions, all derived from one seed,
// grouped into L meta-hashes of K bits each. Collision probability of a
// single bit is 1 - theta/pi; of a K-bit meta-hash, (1 - theta/pi)^K.
//
// Immutable after construction; concurrent reads are safe. The optional
// noise stream draws fresh Gaussian noise per bit evaluation.
class SrpFamily {
 public:
  explicit SrpFamily(const SrpConfig& cfg);

  SrpFamily(const SrpFamily& other);
  SrpFamily& operator=(const SrpFamily& other);

  // Single SRP bit: 1 iff w^T x + eps >= 0.
  std::uint32_t bit(std::size_t table, std::size_t b,
                    std::span<const double> x) const;

  // K-bit meta-hash H_j(x); bit 0 is the most significant bit.
  std::uint32_t bucket(std::size_t table, std::span<const double> x) const;

  const SrpConfig& config() const { return cfg_; }
  std::size_t num_buckets() const {
    return std::size_t{1} << cfg_.k_bits;
  }

  // Expanded projection direction for (table, b); d standard normals.
  std::vector<double> direction(std::size_t table, std::size_t b) const;

  // Bytes consumed by the cached projection matrix (0 when regenerating).
  std::size_t projection_bytes() const {
    return directions_.size() * sizeof(double);
  }

  // Re-seed the auxiliary noise stream. Noise draws are per-call, so the
  // same input hashed twice may differ; fixing the stream restores
  // reproducibility for tests.
  void reset_noise_stream(std::uint64_t aux_seed) const;

  friend bool operator==(const SrpFamily& a, const SrpFamily& b) {
    const auto &x = a.cfg_, &y = b.cfg_;
    return x.dim == y.dim && x.k_bits == y.k_bits &&
           x.num_tables == y.num_tables && x.seed == y.seed &&
           x.noise_scale == y.noise_scale;
  }

 private:
  double project(std::size_t table, std::size_t b,
                 std::span<const double> x) const;
  void check_indices(std::size_t table, std::size_t b,
                     std::span<const double> x) const;

  SrpConfig cfg_;
  std::vector<double> directions_;  // (K*L) x d row-major; empty if on-the-fly
  mutable std::uint64_t noise_seed_;
  mutable std::atomic<std::uint64_t> noise_ctr_{0};
};

// Pr[h(x) = h(y)] = 1 - theta/pi for a single SRP bit (the cosine kernel).
double collision_probability(std::span<const double> x,
                             std::span<const double> y);

}  // namespace ace
