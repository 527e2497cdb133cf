#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ace {

// In-memory numeric matrix with optional ground-truth anomaly labels.
// Consumed by the oracle, the sampling estimator, and the detection
// harness; never by the sketch itself.
struct Dataset {
  std::vector<double> values;  // row-major, rows * cols
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::optional<std::vector<std::uint8_t>> labels;  // 1 = anomaly
  std::string name;

  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * cols, cols};
  }

  std::size_t labeled_anomalies() const {
    if (!labels) return 0;
    std::size_t count = 0;
    for (auto v : *labels) count += (v != 0);
    return count;
  }
};

}  // namespace ace
