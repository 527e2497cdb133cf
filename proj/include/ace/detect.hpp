#pragma once

#include <cstdint>
#include <span>
#include <utility>

#include "ace/dataset.hpp"
#include "ace/sketch.hpp"

namespace ace {

struct DetectionReport {
  std::size_t reported = 0;             // rows flagged as anomalies
  std::size_t correctly_reported = 0;   // flagged rows labeled anomalous
  std::size_t missed = 0;               // labeled anomalies not flagged
  std::size_t total_labeled_anomalies = 0;
  bool has_labels = false;              // label-derived fields valid
  double threshold = 0.0;               // the cut actually used
  double score_mean = 0.0;
  double score_stddev = 0.0;
  double elapsed_seconds = 0.0;         // scoring + decision, not loading
};

// Batch protocol: score every row with the fully built sketch, compute
// the mean and standard deviation of those scores, flag rows with score
// strictly below mean - stddev. The sketch must have been built over
// exactly the rows of data. threads = 0 picks the hardware count.
DetectionReport detect_batch(const AceSketch& sketch, const Dataset& data,
                             unsigned threads = 0);

// Streaming decision for one query: flag iff score <= sketch.mean - alpha
// (inclusive at the boundary), using the dynamically maintained mean.
// Read-only; callers insert q afterwards if they want drift adaptation.
std::pair<ScoreEstimate, bool> detect_stream(const AceSketch& sketch,
                                             std::span<const double> q,
                                             double alpha);

}  // namespace ace
