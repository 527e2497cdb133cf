#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ace/dataset.hpp"
#include "ace/sketch.hpp"

namespace ace {

// How rse_score picks its subset.
//   kWithoutReplacement: a uniform subset of exactly sample_size rows.
//   kIndependent: each row included independently with probability
//     sample_size / n (the sampling model under which the analytic
//     variance (n/L - 1) * sum p_i^{2K} is exact).
enum class RseSampling { kWithoutReplacement, kIndependent };

struct EstimatorComparison {
  std::vector<std::size_t> l_values;
  std::vector<double> ace_mse;
  std::vector<double> rse_mse;
  std::size_t num_queries = 0;
  std::size_t num_trials = 0;
};

// Ground-truth oracle: S(q, D) = sum_i p(q, x_i)^K, O(n*d).
double exact_score(const Dataset& data, std::span<const double> q,
                   std::uint32_t k_bits);

// Random sampling estimator: (n / sample_size) * sum_{x in S} p(q, x)^K.
double rse_score(const Dataset& data, std::span<const double> q,
                 std::uint32_t k_bits, std::size_t sample_size,
                 std::uint64_t seed,
                 RseSampling mode = RseSampling::kWithoutReplacement);

// Builds a sketch over every row of data.
AceSketch build_sketch(const Dataset& data, std::uint32_t k_bits,
                       std::uint32_t num_tables, std::uint64_t seed,
                       double noise_scale = 0.0,
                       CounterWidth width = CounterWidth::k16);

// MSE of the ACE estimator vs the sampling estimator against the exact
// oracle, swept over L, averaged over num_queries queries (drawn from the
// data rows) and num_trials independent seeds per L.
EstimatorComparison compare_estimators(const Dataset& data,
                                       std::uint32_t k_bits,
                                       const std::vector<std::size_t>& l_values,
                                       std::size_t num_queries,
                                       std::size_t num_trials,
                                       std::uint64_t seed);

struct VarianceDecomposition {
  double diagonal_term = 0.0;    // sum_i p_i^K (1 - p_i^K), analytic
  double covariance_term = 0.0;  // empirical single-array variance minus it
  double empirical_variance = 0.0;
  double mean_bucket_occupancy = 0.0;  // avg count in the query's bucket
};

// Splits the single-array estimator variance into the analytic diagonal
// term and the data-dependent pairwise covariance remainder, estimated
// over num_trials independent single-array sketches.
VarianceDecomposition variance_decomposition(const Dataset& data,
                                             std::span<const double> q,
                                             std::uint32_t k_bits,
                                             std::size_t num_trials,
                                             std::uint64_t seed);

}  // namespace ace
