#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ace/srp.hpp"

namespace ace {

enum class CounterWidth : std::uint32_t { k16 = 16, k32 = 32 };

struct ScoreEstimate {
  double value = 0.0;     // estimated S(q, D)
  std::uint32_t k_bits = 0;
  std::uint32_t num_tables = 0;
};

// L arrays of 2^K saturating counters plus a running count n and the exact
// running mean of the estimated scores of everything inserted. No data
// points are retained; memory is L * 2^K * counter_width, independent of n.
//
// Single writer, many readers: score() is safe concurrently with other
// score() calls; insert()/remove() need exclusive access.
class AceSketch {
 public:
  explicit AceSketch(const SrpFamily& family,
                     CounterWidth width = CounterWidth::k16);

  // Increments the L bucket counters for x and folds x's estimated score
  // into the running mean using the pre-increment counter values:
  //   mu' = (n*mu + sum_j (2*c_j + 1)/L) / (n + 1)
  void insert(std::span<const double> x);

  // Exact inverse of insert for an item previously inserted:
  //   mu' = (n*mu - sum_j (2*c_j - 1)/L) / (n - 1)
  // Throws InconsistentDelete (sketch unchanged) if any target counter is
  // already zero, and UnsupportedOperation under the noisy hash variant.
  void remove(std::span<const double> x);

  // (1/L) sum_j A_j[H_j(q)]; read-only, cost independent of n.
  ScoreEstimate score(std::span<const double> q) const;

  std::uint64_t size() const { return n_; }
  double mean() const { return mean_; }
  bool saturated() const { return saturated_; }
  const SrpFamily& family() const { return family_; }
  CounterWidth counter_width() const { return width_; }

  std::uint64_t counter(std::size_t table, std::size_t bucket) const;
  std::size_t num_counters() const {
    return family_.config().num_tables * family_.num_buckets();
  }

  // Counter storage bytes: L * 2^K * width. Excludes header and any cached
  // projection matrix (see SrpFamily::projection_bytes).
  std::size_t counter_bytes() const;
  // counter_bytes plus the fixed serialized-header size.
  std::size_t memory_bytes() const;

  static constexpr std::size_t kHeaderBytes = 53;

  // Rebuilds a sketch from serialized state; used by the file loader.
  static AceSketch restore(const SrpFamily& family, CounterWidth width,
                           std::vector<std::uint64_t> counters,
                           std::uint64_t n, double mean, bool saturated);

  // Flat counter view in array-major order (A_0 first), widened to u64.
  std::vector<std::uint64_t> counters_flat() const;

 private:
  void check_dim(std::span<const double> x) const;
  std::uint64_t counter_max() const;
  std::uint64_t get(std::size_t idx) const;
  void set(std::size_t idx, std::uint64_t value);

  SrpFamily family_;
  CounterWidth width_;
  std::vector<std::uint16_t> c16_;
  std::vector<std::uint32_t> c32_;
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  bool saturated_ = false;
};

}  // namespace ace
