#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ace/dataset.hpp"
#include "ace/detect.hpp"
#include "ace/estimators.hpp"
#include "ace/sketch.hpp"
#include "ace/synthetic.hpp"

namespace ace::io {

// CSV ingestion: comma-separated numeric text, one row per instance. A
// header line is auto-detected by a non-numeric first token. label_column
// (0-based; negative counts from the end) splits off a 0/1 label column.
// All-zero feature rows are rejected with their row numbers.
Dataset load_dataset(const std::string& path,
                     std::optional<int> label_column = std::nullopt);

// Binary sketch persistence ("ACE1", fixed-width little-endian header,
// counters array-major). Round-trips counters, n, mean and configuration
// bit-exactly.
void save_sketch(const AceSketch& sketch, const std::string& path);
AceSketch load_sketch(const std::string& path);

void write_scores_csv(const std::vector<double>& scores,
                      const std::string& path);
void write_report_json(const DetectionReport& report, const std::string& path,
                       double build_seconds = -1.0);
std::string report_to_json(const DetectionReport& report,
                           double build_seconds = -1.0);
void write_comparison_csv(const EstimatorComparison& comparison,
                          const std::string& path);
void write_profile_csv(const synth::ScoreProfile& profile,
                       const std::string& path);

}  // namespace ace::io
