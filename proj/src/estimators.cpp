#include "ace/estimators.hpp"

#include <cmath>
#include <string>

#include "ace/errors.hpp"
#include "ace/rng.hpp"
#include "ace/srp.hpp"

namespace ace {

namespace {

void check_query(const Dataset& data, std::span<const double> q) {
  if (data.rows == 0) throw ContractViolation("estimators: empty dataset");
  if (q.size() != data.cols)
    throw ContractViolation("estimators: query length " +
                            std::to_string(q.size()) + " != data dimension " +
                            std::to_string(data.cols));
}

// p(q, x_i)^K for every row.
std::vector<double> collision_powers(const Dataset& data,
                                     std::span<const double> q,
                                     std::uint32_t k_bits) {
  std::vector<double> powers(data.rows);
  for (std::size_t i = 0; i < data.rows; ++i)
    powers[i] = std::pow(collision_probability(q, data.row(i)),
                         static_cast<double>(k_bits));
  return powers;
}

}  // namespace

double exact_score(const Dataset& data, std::span<const double> q,
                   std::uint32_t k_bits) {
  check_query(data, q);
  double sum = 0.0;
  for (std::size_t i = 0; i < data.rows; ++i)
    sum += std::pow(collision_probability(q, data.row(i)),
                    static_cast<double>(k_bits));
  return sum;
}

double rse_score(const Dataset& data, std::span<const double> q,
                 std::uint32_t k_bits, std::size_t sample_size,
                 std::uint64_t seed, RseSampling mode) {
  check_query(data, q);
  if (sample_size < 1 || sample_size > data.rows)
    throw ContractViolation("rse_score: sample_size must be in [1, n]");

  rng::UniformStream stream(seed);
  const double scale =
      static_cast<double>(data.rows) / static_cast<double>(sample_size);
  double sum = 0.0;

  if (mode == RseSampling::kWithoutReplacement) {
    // Partial Fisher-Yates over row indices; only the prefix is needed.
    std::vector<std::size_t> index(data.rows);
    for (std::size_t i = 0; i < data.rows; ++i) index[i] = i;
    for (std::size_t i = 0; i < sample_size; ++i) {
      const std::size_t j =
          i + static_cast<std::size_t>(stream.next_bounded(data.rows - i));
      std::swap(index[i], index[j]);
      sum += std::pow(collision_probability(q, data.row(index[i])),
                      static_cast<double>(k_bits));
    }
  } else {
    const double inclusion_prob = 1.0 / scale;
    for (std::size_t i = 0; i < data.rows; ++i) {
      if (stream.next_unit() <= inclusion_prob)
        sum += std::pow(collision_probability(q, data.row(i)),
                        static_cast<double>(k_bits));
    }
  }
  return scale * sum;
}

AceSketch build_sketch(const Dataset& data, std::uint32_t k_bits,
                       std::uint32_t num_tables, std::uint64_t seed,
                       double noise_scale, CounterWidth width) {
  if (data.rows == 0) throw ContractViolation("build_sketch: empty dataset");
  SrpConfig cfg;
  cfg.dim = data.cols;
  cfg.k_bits = k_bits;
  cfg.num_tables = num_tables;
  cfg.seed = seed;
  cfg.noise_scale = noise_scale;
  AceSketch sketch{SrpFamily(cfg), width};
  for (std::size_t i = 0; i < data.rows; ++i) sketch.insert(data.row(i));
  return sketch;
}

EstimatorComparison compare_estimators(const Dataset& data,
                                       std::uint32_t k_bits,
                                       const std::vector<std::size_t>& l_values,
                                       std::size_t num_queries,
                                       std::size_t num_trials,
                                       std::uint64_t seed) {
  if (data.rows == 0)
    throw ContractViolation("compare_estimators: empty dataset");
  if (l_values.empty())
    throw ContractViolation("compare_estimators: l_values is empty");
  for (auto l : l_values)
    if (l < 1 || l > data.rows)
      throw ContractViolation("compare_estimators: L out of [1, n]");
  if (num_queries < 1 || num_trials < 1)
    throw ContractViolation("compare_estimators: need >= 1 query and trial");

  // Fixed query set drawn from the data rows.
  rng::UniformStream picker(rng::mix_seed(seed, 0x71u));
  std::vector<std::size_t> query_rows(num_queries);
  for (auto& r : query_rows)
    r = static_cast<std::size_t>(picker.next_bounded(data.rows));

  std::vector<double> exact(num_queries);
  std::vector<std::vector<double>> powers(num_queries);
  for (std::size_t qi = 0; qi < num_queries; ++qi) {
    powers[qi] = collision_powers(data, data.row(query_rows[qi]), k_bits);
    double s = 0.0;
    for (double p : powers[qi]) s += p;
    exact[qi] = s;
  }

  EstimatorComparison result;
  result.l_values = l_values;
  result.num_queries = num_queries;
  result.num_trials = num_trials;

  const double samples =
      static_cast<double>(num_queries) * static_cast<double>(num_trials);
  for (std::size_t li = 0; li < l_values.size(); ++li) {
    const std::size_t l = l_values[li];
    double ace_sq = 0.0;
    double rse_sq = 0.0;
    for (std::size_t t = 0; t < num_trials; ++t) {
      const std::uint64_t trial_seed = rng::mix_seed(seed, li * 7919 + t);
      const AceSketch sketch =
          build_sketch(data, k_bits, static_cast<std::uint32_t>(l),
                       trial_seed);
      rng::UniformStream rse_seeds(rng::mix_seed(trial_seed, 0x525345u));
      for (std::size_t qi = 0; qi < num_queries; ++qi) {
        const double ace_err =
            sketch.score(data.row(query_rows[qi])).value - exact[qi];
        ace_sq += ace_err * ace_err;

        // Reuse the precomputed collision powers for the sampled subset.
        rng::UniformStream sampler(rse_seeds.next_u64());
        std::vector<std::size_t> index(data.rows);
        for (std::size_t i = 0; i < data.rows; ++i) index[i] = i;
        double sum = 0.0;
        for (std::size_t i = 0; i < l; ++i) {
          const std::size_t j =
              i +
              static_cast<std::size_t>(sampler.next_bounded(data.rows - i));
          std::swap(index[i], index[j]);
          sum += powers[qi][index[i]];
        }
        const double rse_err =
            (static_cast<double>(data.rows) / static_cast<double>(l)) * sum -
            exact[qi];
        rse_sq += rse_err * rse_err;
      }
    }
    result.ace_mse.push_back(ace_sq / samples);
    result.rse_mse.push_back(rse_sq / samples);
  }
  return result;
}

VarianceDecomposition variance_decomposition(const Dataset& data,
                                             std::span<const double> q,
                                             std::uint32_t k_bits,
                                             std::size_t num_trials,
                                             std::uint64_t seed) {
  check_query(data, q);
  if (data.rows > 2000)
    throw ContractViolation(
        "variance_decomposition: n > 2000 (O(n^2) pairwise term)");
  if (num_trials < 2)
    throw ContractViolation("variance_decomposition: need >= 2 trials");

  VarianceDecomposition out;
  const auto powers = collision_powers(data, q, k_bits);
  for (double p : powers) out.diagonal_term += p * (1.0 - p);

  // Single-array sketches (L = 1): the raw bucket-count estimator.
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t t = 0; t < num_trials; ++t) {
    const AceSketch sketch =
        build_sketch(data, k_bits, 1, rng::mix_seed(seed, t));
    const double value = sketch.score(q).value;
    sum += value;
    sum_sq += value * value;
  }
  const double trials = static_cast<double>(num_trials);
  const double mean = sum / trials;
  out.empirical_variance = (sum_sq - trials * mean * mean) / (trials - 1.0);
  out.covariance_term = out.empirical_variance - out.diagonal_term;
  out.mean_bucket_occupancy = mean;
  return out;
}

}  // namespace ace
