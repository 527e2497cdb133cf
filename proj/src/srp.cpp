#include "ace/srp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ace/errors.hpp"
#include "ace/rng.hpp"

namespace ace {

namespace {

constexpr std::uint32_t kMaxKBits = 30;

std::uint64_t direction_seed(std::uint64_t master, std::size_t table,
                             std::size_t b, std::uint32_t k_bits) {
  return rng::mix_seed(master, table * k_bits + b);
}

}  // namespace

SrpFamily::SrpFamily(const SrpConfig& cfg) : cfg_(cfg) {
  if (cfg_.dim == 0) throw ContractViolation("SrpFamily: dim must be >= 1");
  if (cfg_.k_bits < 1 || cfg_.k_bits > kMaxKBits)
    throw ContractViolation("SrpFamily: k_bits must be in [1, " +
                            std::to_string(kMaxKBits) + "]");
  if (cfg_.num_tables < 1)
    throw ContractViolation("SrpFamily: num_tables must be >= 1");
  if (cfg_.noise_scale < 0.0)
    throw ContractViolation("SrpFamily: noise_scale must be >= 0");

  noise_seed_ = rng::mix_seed(cfg_.seed, 0x6e6f697365ULL);  // aux stream

  if (cfg_.cache_projections) {
    const std::size_t rows =
        static_cast<std::size_t>(cfg_.k_bits) * cfg_.num_tables;
    directions_.resize(rows * cfg_.dim);
    for (std::size_t t = 0; t < cfg_.num_tables; ++t) {
      for (std::size_t b = 0; b < cfg_.k_bits; ++b) {
        rng::NormalStream normals(
            direction_seed(cfg_.seed, t, b, cfg_.k_bits));
        double* row = directions_.data() + (t * cfg_.k_bits + b) * cfg_.dim;
        for (std::size_t i = 0; i < cfg_.dim; ++i) row[i] = normals.next();
      }
    }
  }
}

SrpFamily::SrpFamily(const SrpFamily& other)
    : cfg_(other.cfg_),
      directions_(other.directions_),
      noise_seed_(other.noise_seed_),
      noise_ctr_(other.noise_ctr_.load(std::memory_order_relaxed)) {}

SrpFamily& SrpFamily::operator=(const SrpFamily& other) {
  cfg_ = other.cfg_;
  directions_ = other.directions_;
  noise_seed_ = other.noise_seed_;
  noise_ctr_.store(other.noise_ctr_.load(std::memory_order_relaxed),
                   std::memory_order_relaxed);
  return *this;
}

void SrpFamily::check_indices(std::size_t table, std::size_t b,
                              std::span<const double> x) const {
  if (x.size() != cfg_.dim)
    throw ContractViolation("SrpFamily: expected vector of length " +
                            std::to_string(cfg_.dim) + ", received " +
                            std::to_string(x.size()));
  if (table >= cfg_.num_tables)
    throw ContractViolation("SrpFamily: table index out of range");
  if (b >= cfg_.k_bits)
    throw ContractViolation("SrpFamily: bit index out of range");
}

double SrpFamily::project(std::size_t table, std::size_t b,
                          std::span<const double> x) const {
  double dot = 0.0;
  if (!directions_.empty()) {
    const double* row =
        directions_.data() + (table * cfg_.k_bits + b) * cfg_.dim;
    for (std::size_t i = 0; i < cfg_.dim; ++i) dot += row[i] * x[i];
  } else {
    rng::NormalStream normals(
        direction_seed(cfg_.seed, table, b, cfg_.k_bits));
    for (std::size_t i = 0; i < cfg_.dim; ++i) dot += normals.next() * x[i];
  }
  return dot;
}

std::uint32_t SrpFamily::bit(std::size_t table, std::size_t b,
                             std::span<const double> x) const {
  check_indices(table, b, x);
  double value = project(table, b, x);
  if (cfg_.noise_scale > 0.0) {
    const std::uint64_t tick =
        noise_ctr_.fetch_add(1, std::memory_order_relaxed);
    rng::NormalStream noise(rng::mix_seed(noise_seed_, tick));
    value += cfg_.noise_scale * noise.next();
  }
  return value >= 0.0 ? 1u : 0u;  // sign(0) -> 1
}

std::uint32_t SrpFamily::bucket(std::size_t table,
                                std::span<const double> x) const {
  check_indices(table, 0, x);
  std::uint32_t index = 0;
  for (std::size_t b = 0; b < cfg_.k_bits; ++b)
    index = (index << 1) | bit(table, b, x);
  return index;
}

std::vector<double> SrpFamily::direction(std::size_t table,
                                         std::size_t b) const {
  if (table >= cfg_.num_tables || b >= cfg_.k_bits)
    throw ContractViolation("SrpFamily: direction index out of range");
  std::vector<double> w(cfg_.dim);
  rng::NormalStream normals(direction_seed(cfg_.seed, table, b, cfg_.k_bits));
  for (auto& c : w) c = normals.next();
  return w;
}

void SrpFamily::reset_noise_stream(std::uint64_t aux_seed) const {
  noise_seed_ = aux_seed;
  noise_ctr_.store(0, std::memory_order_relaxed);
}

double collision_probability(std::span<const double> x,
                             std::span<const double> y) {
  if (x.size() != y.size())
    throw ContractViolation("collision_probability: length mismatch");
  double dot = 0.0, nx = 0.0, ny = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    dot += x[i] * y[i];
    nx += x[i] * x[i];
    ny += y[i] * y[i];
  }
  if (nx == 0.0 || ny == 0.0)
    throw std::domain_error(
        "collision_probability: zero-norm vector, cosine undefined");
  const double cosine =
      std::clamp(dot / (std::sqrt(nx) * std::sqrt(ny)), -1.0, 1.0);
  return 1.0 - std::acos(cosine) / std::numbers::pi;
}

}  // namespace ace
