#include "ace/sketch.hpp"

#include <limits>
#include <string>

#include "ace/errors.hpp"

namespace ace {

AceSketch::AceSketch(const SrpFamily& family, CounterWidth width)
    : family_(family), width_(width) {
  const std::size_t total = num_counters();
  if (width_ == CounterWidth::k16)
    c16_.assign(total, 0);
  else
    c32_.assign(total, 0);
}

void AceSketch::check_dim(std::span<const double> x) const {
  if (x.size() != family_.config().dim)
    throw ContractViolation("AceSketch: expected vector of length " +
                            std::to_string(family_.config().dim) +
                            ", received " + std::to_string(x.size()));
}

std::uint64_t AceSketch::counter_max() const {
  return width_ == CounterWidth::k16
             ? std::numeric_limits<std::uint16_t>::max()
             : std::numeric_limits<std::uint32_t>::max();
}

std::uint64_t AceSketch::get(std::size_t idx) const {
  return width_ == CounterWidth::k16 ? c16_[idx] : c32_[idx];
}

void AceSketch::set(std::size_t idx, std::uint64_t value) {
  if (width_ == CounterWidth::k16)
    c16_[idx] = static_cast<std::uint16_t>(value);
  else
    c32_[idx] = static_cast<std::uint32_t>(value);
}

std::uint64_t AceSketch::counter(std::size_t table,
                                 std::size_t bucket) const {
  if (table >= family_.config().num_tables || bucket >= family_.num_buckets())
    throw ContractViolation("AceSketch: counter index out of range");
  return get(table * family_.num_buckets() + bucket);
}

void AceSketch::insert(std::span<const double> x) {
  check_dim(x);
  const auto& cfg = family_.config();
  const std::size_t buckets = family_.num_buckets();

  // Sum the integer numerators and divide by L once, so that e.g. the
  // first insert yields mean exactly 1.0.
  double numerator = 0.0;
  for (std::size_t j = 0; j < cfg.num_tables; ++j) {
    const std::size_t idx = j * buckets + family_.bucket(j, x);
    const std::uint64_t pre = get(idx);
    numerator += 2.0 * static_cast<double>(pre) + 1.0;
    if (pre >= counter_max()) {
      saturated_ = true;  // sticky; counter holds, no wrap
    } else {
      set(idx, pre + 1);
    }
  }

  const double n = static_cast<double>(n_);
  mean_ = (n * mean_ + numerator / cfg.num_tables) / (n + 1.0);
  ++n_;
}

void AceSketch::remove(std::span<const double> x) {
  check_dim(x);
  if (family_.config().noise_scale > 0.0)
    throw UnsupportedOperation(
        "AceSketch: delete is unsupported with noisy hashes (buckets are "
        "not reproducible)");
  const auto& cfg = family_.config();
  const std::size_t buckets = family_.num_buckets();

  std::vector<std::size_t> idx(cfg.num_tables);
  for (std::size_t j = 0; j < cfg.num_tables; ++j) {
    idx[j] = j * buckets + family_.bucket(j, x);
    if (get(idx[j]) == 0)
      throw InconsistentDelete(
          "AceSketch: delete target counter is zero in table " +
          std::to_string(j) + " (item was never inserted)");
  }

  double numerator = 0.0;
  for (std::size_t j = 0; j < cfg.num_tables; ++j) {
    const std::uint64_t pre = get(idx[j]);
    numerator += 2.0 * static_cast<double>(pre) - 1.0;
    set(idx[j], pre - 1);
  }

  --n_;
  if (n_ == 0) {
    mean_ = 0.0;
  } else {
    const double n = static_cast<double>(n_ + 1);
    mean_ = (n * mean_ - numerator / cfg.num_tables) / (n - 1.0);
  }
}

ScoreEstimate AceSketch::score(std::span<const double> q) const {
  check_dim(q);
  const auto& cfg = family_.config();
  const std::size_t buckets = family_.num_buckets();
  double sum = 0.0;
  for (std::size_t j = 0; j < cfg.num_tables; ++j)
    sum += static_cast<double>(get(j * buckets + family_.bucket(j, q)));
  return {sum / cfg.num_tables, cfg.k_bits, cfg.num_tables};
}

std::size_t AceSketch::counter_bytes() const {
  return num_counters() * (width_ == CounterWidth::k16 ? 2 : 4);
}

std::size_t AceSketch::memory_bytes() const {
  return counter_bytes() + kHeaderBytes;
}

std::vector<std::uint64_t> AceSketch::counters_flat() const {
  std::vector<std::uint64_t> out(num_counters());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = get(i);
  return out;
}

AceSketch AceSketch::restore(const SrpFamily& family, CounterWidth width,
                             std::vector<std::uint64_t> counters,
                             std::uint64_t n, double mean, bool saturated) {
  AceSketch sketch(family, width);
  if (counters.size() != sketch.num_counters())
    throw ContractViolation("AceSketch::restore: counter payload size " +
                            std::to_string(counters.size()) +
                            " does not match L * 2^K = " +
                            std::to_string(sketch.num_counters()));
  for (std::size_t i = 0; i < counters.size(); ++i) {
    if (counters[i] > sketch.counter_max())
      throw ContractViolation("AceSketch::restore: counter exceeds width");
    sketch.set(i, counters[i]);
  }
  sketch.n_ = n;
  sketch.mean_ = mean;
  sketch.saturated_ = saturated;
  return sketch;
}

}  // namespace ace
