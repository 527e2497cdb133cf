#include "ace/detect.hpp"

#include <chrono>
#include <cmath>
#include <thread>
#include <vector>

#include "ace/errors.hpp"

namespace ace {

DetectionReport detect_batch(const AceSketch& sketch, const Dataset& data,
                             unsigned threads) {
  if (data.rows == 0) throw ContractViolation("detect_batch: empty dataset");
  if (data.cols != sketch.family().config().dim)
    throw ContractViolation("detect_batch: data dimension mismatch");

  const auto start = std::chrono::steady_clock::now();

  std::vector<double> scores(data.rows);
  unsigned pool = threads ? threads : std::thread::hardware_concurrency();
  if (pool == 0) pool = 1;
  pool = static_cast<unsigned>(
      std::min<std::size_t>(pool, data.rows));

  if (pool == 1) {
    for (std::size_t i = 0; i < data.rows; ++i)
      scores[i] = sketch.score(data.row(i)).value;
  } else {
    std::vector<std::thread> workers;
    const std::size_t chunk = (data.rows + pool - 1) / pool;
    for (unsigned w = 0; w < pool; ++w) {
      const std::size_t lo = w * chunk;
      const std::size_t hi = std::min(lo + chunk, data.rows);
      if (lo >= hi) break;
      workers.emplace_back([&, lo, hi] {
        for (std::size_t i = lo; i < hi; ++i)
          scores[i] = sketch.score(data.row(i)).value;
      });
    }
    for (auto& t : workers) t.join();
  }

  double sum = 0.0;
  for (double s : scores) sum += s;
  const double mean = sum / static_cast<double>(data.rows);
  double sq = 0.0;
  for (double s : scores) sq += (s - mean) * (s - mean);
  const double stddev = std::sqrt(sq / static_cast<double>(data.rows));
  const double threshold = mean - stddev;

  DetectionReport report;
  report.score_mean = mean;
  report.score_stddev = stddev;
  report.threshold = threshold;
  report.has_labels = data.labels.has_value();
  report.total_labeled_anomalies = data.labeled_anomalies();

  for (std::size_t i = 0; i < data.rows; ++i) {
    const bool flagged = scores[i] < threshold;  // strict, per the protocol
    const bool anomalous = report.has_labels && (*data.labels)[i] != 0;
    if (flagged) {
      ++report.reported;
      if (anomalous) ++report.correctly_reported;
    } else if (anomalous) {
      ++report.missed;
    }
  }

  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

std::pair<ScoreEstimate, bool> detect_stream(const AceSketch& sketch,
                                             std::span<const double> q,
                                             double alpha) {
  if (alpha < 0.0) throw ContractViolation("detect_stream: alpha must be >= 0");
  if (sketch.size() == 0)
    throw ContractViolation("detect_stream: empty sketch");
  const ScoreEstimate estimate = sketch.score(q);
  return {estimate, estimate.value <= sketch.mean() - alpha};
}

}  // namespace ace
