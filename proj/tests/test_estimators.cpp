#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ace/errors.hpp"
#include "ace/estimators.hpp"
#include "ace/rng.hpp"
#include "ace/srp.hpp"
#include "ace/synthetic.hpp"

using ace::Dataset;

namespace {

Dataset from_rows(const std::vector<std::vector<double>>& rows) {
  Dataset data;
  data.rows = rows.size();
  data.cols = rows.front().size();
  for (const auto& r : rows)
    data.values.insert(data.values.end(), r.begin(), r.end());
  return data;
}

}  // namespace

TEST_CASE("exact score of a singleton is 1") {
  const std::vector<double> q = {1.0, 2.0, -1.0};
  CHECK(ace::exact_score(from_rows({q}), q, 7) == doctest::Approx(1.0));
}

TEST_CASE("exact score against the antipode is 0") {
  const std::vector<double> q = {1.0, 2.0, -1.0};
  CHECK(ace::exact_score(from_rows({{-1.0, -2.0, 1.0}}), q, 3) ==
        doctest::Approx(0.0));
}

TEST_CASE("exact score of {q, q_perp} at K=2 is 1.25") {
  const std::vector<double> q = {1.0, 0.0};
  const auto data = from_rows({{1.0, 0.0}, {0.0, 1.0}});
  CHECK(ace::exact_score(data, q, 2) == doctest::Approx(1.25));
}

TEST_CASE("exact score rejects a zero query") {
  const auto data = from_rows({{1.0, 1.0}});
  const std::vector<double> zero = {0.0, 0.0};
  CHECK_THROWS_AS(ace::exact_score(data, zero, 2), std::domain_error);
}

TEST_CASE("oracle is additive over dataset concatenation") {
  const auto spec_a = ace::synth::ClusterSpec{.num_points = 40, .dim = 4};
  const auto spec_b = ace::synth::ClusterSpec{.num_points = 30, .dim = 4};
  const auto a = ace::synth::make_clusters(spec_a, 1);
  const auto b = ace::synth::make_clusters(spec_b, 2);
  Dataset both = a;
  both.values.insert(both.values.end(), b.values.begin(), b.values.end());
  both.rows += b.rows;
  const auto q = a.row(3);
  CHECK(ace::exact_score(both, q, 6) ==
        doctest::Approx(ace::exact_score(a, q, 6) +
                        ace::exact_score(b, q, 6)));
}

TEST_CASE("exact score strictly decreases in K when all p_i are in (0,1)") {
  const auto data =
      ace::synth::make_clusters({.num_points = 50, .dim = 6}, 3);
  const std::vector<double> q = {1, 1, 1, 1, 1, 1};
  double previous = ace::exact_score(data, q, 1);
  for (std::uint32_t k = 2; k <= 12; ++k) {
    const double current = ace::exact_score(data, q, k);
    CHECK(current < previous);
    previous = current;
  }
}

TEST_CASE("rse with a full sample reproduces the exact score") {
  const auto data =
      ace::synth::make_clusters({.num_points = 25, .dim = 5}, 4);
  const auto q = data.row(0);
  CHECK(ace::rse_score(data, q, 8, data.rows, 7) ==
        doctest::Approx(ace::exact_score(data, q, 8)));
}

TEST_CASE("rse on a single-row dataset equals the exact score") {
  const auto data = from_rows({{2.0, -1.0}});
  const std::vector<double> q = {1.0, 1.0};
  CHECK(ace::rse_score(data, q, 4, 1, 0) ==
        doctest::Approx(ace::exact_score(data, q, 4)));
}

TEST_CASE("rse rejects out-of-range sample sizes") {
  const auto data = from_rows({{1.0, 0.0}, {0.0, 1.0}});
  const std::vector<double> q = {1.0, 1.0};
  CHECK_THROWS_AS(ace::rse_score(data, q, 4, 0, 0), ace::ContractViolation);
  CHECK_THROWS_AS(ace::rse_score(data, q, 4, 3, 0), ace::ContractViolation);
}

TEST_CASE("rse is unbiased over many seeds") {
  const auto data =
      ace::synth::make_clusters({.num_points = 200, .dim = 8}, 5);
  const auto q = data.row(10);
  const std::uint32_t k = 8;
  const double exact = ace::exact_score(data, q, k);

  const std::size_t trials = 500;
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const double v = ace::rse_score(data, q, k, 20, ace::rng::mix_seed(6, t));
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / trials;
  const double var = (sum_sq - trials * mean * mean) / (trials - 1.0);
  const double stderr3 = 3.0 * std::sqrt(var / trials);
  CHECK(std::abs(mean - exact) <= stderr3);
}

TEST_CASE("independent-inclusion rse variance matches the analytic form") {
  const auto data =
      ace::synth::make_clusters({.num_points = 100, .dim = 6}, 8);
  const auto q = data.row(5);
  const std::uint32_t k = 6;
  const std::size_t l = 10;

  double analytic = 0.0;
  for (std::size_t i = 0; i < data.rows; ++i) {
    const double p = ace::collision_probability(q, data.row(i));
    analytic += std::pow(p, 2.0 * k);
  }
  analytic *= static_cast<double>(data.rows) / static_cast<double>(l) - 1.0;

  const std::size_t trials = 4000;
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const double v = ace::rse_score(data, q, k, l, ace::rng::mix_seed(9, t),
                                    ace::RseSampling::kIndependent);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / trials;
  const double var = (sum_sq - trials * mean * mean) / (trials - 1.0);
  CHECK(std::abs(var - analytic) <= 0.15 * analytic);
}

TEST_CASE("estimator variance shrinks as 1/L") {
  const auto data = ace::synth::make_clusters(
      {.num_points = 300, .dim = 8, .num_clusters = 3}, 14);
  const auto q = data.row(7);
  const std::uint32_t k = 8;
  const std::size_t trials = 400;

  const auto variance_at = [&](std::uint32_t l, std::uint64_t salt) {
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      const auto sketch =
          ace::build_sketch(data, k, l, ace::rng::mix_seed(salt, t));
      const double v = sketch.score(q).value;
      sum += v;
      sum_sq += v * v;
    }
    const double mean = sum / trials;
    return (sum_sq - trials * mean * mean) / (trials - 1.0);
  };

  const double ratio = variance_at(100, 1) / variance_at(25, 2);
  // Arrays are independent, so variance scales as 1/L: the ratio sits at
  // 0.25 up to sampling noise (and far from 1.0, which would mean no
  // scaling at all).
  CHECK(ratio >= 0.15);
  CHECK(ratio <= 0.45);
}

TEST_CASE("compare on a single-point dataset gives zero MSE for both") {
  const auto data = from_rows({{1.0, 2.0}});
  const auto result = ace::compare_estimators(data, 4, {1}, 3, 2, 0);
  CHECK(result.ace_mse[0] == doctest::Approx(0.0));
  CHECK(result.rse_mse[0] == doctest::Approx(0.0));
}

TEST_CASE("ace beats random sampling on clustered data, with 1/L decay") {
  const auto data = ace::synth::make_clusters(
      {.num_points = 500, .dim = 8, .num_clusters = 3}, 12);
  const std::vector<std::size_t> l_values = {8, 32};
  const auto result = ace::compare_estimators(data, 10, l_values, 10, 6, 3);
  REQUIRE(result.ace_mse.size() == 2);
  for (std::size_t i = 0; i < 2; ++i)
    CHECK(result.ace_mse[i] < result.rse_mse[i]);
  CHECK(result.ace_mse[1] < result.ace_mse[0]);
}

TEST_CASE("compare validates its inputs") {
  const auto data = from_rows({{1.0, 0.0}, {0.0, 1.0}});
  CHECK_THROWS_AS(ace::compare_estimators(data, 4, {}, 2, 2, 0),
                  ace::ContractViolation);
  CHECK_THROWS_AS(ace::compare_estimators(data, 4, {3}, 2, 2, 0),
                  ace::ContractViolation);
  Dataset empty;
  empty.cols = 2;
  CHECK_THROWS_AS(ace::compare_estimators(empty, 4, {1}, 2, 2, 0),
                  ace::ContractViolation);
}

TEST_CASE("variance decomposition: mutually orthogonal points") {
  // Points e_1..e_4, query e_5: every p_i is exactly 1/2.
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 4; ++i) {
    std::vector<double> e(5, 0.0);
    e[i] = 1.0;
    rows.push_back(e);
  }
  std::vector<double> q(5, 0.0);
  q[4] = 1.0;
  const std::uint32_t k = 4;
  const auto result =
      ace::variance_decomposition(from_rows(rows), q, k, 50, 0);
  const double pk = std::pow(0.5, k);
  CHECK(result.diagonal_term == doctest::Approx(4.0 * pk * (1.0 - pk)));
}

TEST_CASE("variance decomposition: exact duplicates of the query") {
  const std::vector<double> q = {1.0, -1.0, 2.0};
  const auto data = from_rows({q, q, q});
  const auto result = ace::variance_decomposition(data, q, 5, 20, 1);
  CHECK(result.diagonal_term == doctest::Approx(0.0));
  CHECK(result.empirical_variance == doctest::Approx(0.0));
}

TEST_CASE("covariance term is non-positive when bucket occupancy is low") {
  // An isotropic cloud in d=40: at K=15 pairwise angles concentrate near
  // 90 degrees, almost no pair shares the query's bucket, and the pairwise
  // covariances are dominated by the -p_i^K p_j^K terms. (In low dimension
  // near-duplicate pairs co-collide and the sum turns positive.)
  const std::size_t trials = 8000;
  const auto data = ace::synth::make_clusters(
      {.num_points = 200, .dim = 40, .num_clusters = 1, .center_radius = 0.0},
      21);
  const auto q = data.row(0);
  const auto result = ace::variance_decomposition(data, q, 15, trials, 5);
  // Var(sample variance) ~ diag/trials for a low-occupancy count.
  const double band = 3.0 * std::sqrt(result.diagonal_term / trials);
  CHECK(result.covariance_term <= band);
}
