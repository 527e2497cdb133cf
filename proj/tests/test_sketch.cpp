#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ace/errors.hpp"
#include "ace/rng.hpp"
#include "ace/sketch.hpp"

using ace::AceSketch;
using ace::CounterWidth;
using ace::SrpConfig;
using ace::SrpFamily;

namespace {

SrpFamily make_family(std::size_t dim, std::uint32_t k, std::uint32_t l,
                      std::uint64_t seed, double noise = 0.0) {
  SrpConfig cfg;
  cfg.dim = dim;
  cfg.k_bits = k;
  cfg.num_tables = l;
  cfg.seed = seed;
  cfg.noise_scale = noise;
  return SrpFamily{cfg};
}

std::vector<std::vector<double>> random_points(std::size_t n, std::size_t dim,
                                               std::uint64_t seed) {
  ace::rng::NormalStream normals(seed);
  std::vector<std::vector<double>> points(n, std::vector<double>(dim));
  for (auto& p : points)
    for (auto& c : p) c = normals.next();
  return points;
}

// Batch oracle: the mean recomputed from scratch over a retained copy.
double batch_mean(const AceSketch& sketch,
                  const std::vector<std::vector<double>>& live) {
  if (live.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& x : live) sum += sketch.score(x).value;
  return sum / static_cast<double>(live.size());
}

}  // namespace

TEST_CASE("first insert gives n=1 and mean=1") {
  AceSketch sketch{make_family(4, 5, 8, 1)};
  const std::vector<double> x = {1.0, -2.0, 0.5, 3.0};
  sketch.insert(x);
  CHECK(sketch.size() == 1);
  CHECK(sketch.mean() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sketch.score(x).value == doctest::Approx(1.0));
}

TEST_CASE("inserting the same point twice gives mean=2") {
  AceSketch sketch{make_family(3, 4, 6, 2)};
  const std::vector<double> x = {0.3, 1.0, -1.0};
  sketch.insert(x);
  sketch.insert(x);
  CHECK(sketch.size() == 2);
  CHECK(sketch.mean() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("incremental mean equals batch recompute after 100 inserts") {
  AceSketch sketch{make_family(6, 6, 10, 3)};
  const auto points = random_points(100, 6, 77);
  std::vector<std::vector<double>> live;
  for (const auto& p : points) {
    sketch.insert(p);
    live.push_back(p);
  }
  CHECK(std::abs(sketch.mean() - batch_mean(sketch, live)) <=
        1e-9 * static_cast<double>(sketch.size()));
}

TEST_CASE("insert then delete returns to the pristine empty state") {
  AceSketch sketch{make_family(5, 4, 7, 4)};
  const std::vector<double> x = {1, 2, 3, 4, 5};
  sketch.insert(x);
  sketch.remove(x);
  CHECK(sketch.size() == 0);
  CHECK(sketch.mean() == 0.0);
  for (auto c : sketch.counters_flat()) CHECK(c == 0);
}

TEST_CASE("deleting one of 50 keeps the mean exact") {
  AceSketch sketch{make_family(6, 5, 9, 5)};
  auto points = random_points(50, 6, 11);
  for (const auto& p : points) sketch.insert(p);
  sketch.remove(points[17]);
  points.erase(points.begin() + 17);
  CHECK(std::abs(sketch.mean() - batch_mean(sketch, points)) <=
        1e-9 * static_cast<double>(sketch.size()));
}

TEST_CASE("delete from an empty sketch is an inconsistent delete") {
  AceSketch sketch{make_family(3, 3, 4, 6)};
  const std::vector<double> x = {1, 1, 1};
  CHECK_THROWS_AS(sketch.remove(x), ace::InconsistentDelete);
}

TEST_CASE("inconsistent delete leaves the sketch unchanged") {
  AceSketch sketch{make_family(4, 8, 5, 7)};
  const auto points = random_points(10, 4, 13);
  for (const auto& p : points) sketch.insert(p);
  const auto counters = sketch.counters_flat();
  const double mean = sketch.mean();

  const std::vector<double> never_inserted = {100.0, -100.0, 50.0, -50.0};
  // With K=8 and 10 points, a random direction misses every occupied
  // bucket in at least one table for this seed.
  CHECK_THROWS_AS(sketch.remove(never_inserted), ace::InconsistentDelete);
  CHECK(sketch.counters_flat() == counters);
  CHECK(sketch.mean() == mean);
  CHECK(sketch.size() == 10);
}

TEST_CASE("delete is unsupported under the noisy hash variant") {
  AceSketch sketch{make_family(3, 3, 4, 8, 1.0)};
  const std::vector<double> x = {1, 2, 3};
  sketch.insert(x);
  CHECK_THROWS_AS(sketch.remove(x), ace::UnsupportedOperation);
}

TEST_CASE("interleaved inserts and deletes match a fresh batch build") {
  const auto family = make_family(5, 5, 8, 9);
  AceSketch sketch{family};
  const auto pool = random_points(40, 5, 17);
  std::vector<std::size_t> live;
  ace::rng::UniformStream ops(31);
  for (int step = 0; step < 300; ++step) {
    if (live.empty() || ops.next_unit() < 0.6) {
      const auto pick = ops.next_bounded(pool.size());
      sketch.insert(pool[pick]);
      live.push_back(pick);
    } else {
      const auto at = ops.next_bounded(live.size());
      sketch.remove(pool[live[at]]);
      live.erase(live.begin() + static_cast<std::ptrdiff_t>(at));
    }
  }

  AceSketch fresh{family};
  for (auto idx : live) fresh.insert(pool[idx]);
  CHECK(sketch.counters_flat() == fresh.counters_flat());
  CHECK(sketch.size() == fresh.size());
  CHECK(std::abs(sketch.mean() - fresh.mean()) <=
        1e-9 * static_cast<double>(std::max<std::uint64_t>(sketch.size(), 1)));
}

TEST_CASE("per-table counter sums equal n and scores stay in [0, n]") {
  AceSketch sketch{make_family(4, 4, 6, 10)};
  const auto points = random_points(60, 4, 23);
  for (const auto& p : points) sketch.insert(p);

  const auto counters = sketch.counters_flat();
  const std::size_t buckets = 1u << 4;
  for (std::size_t j = 0; j < 6; ++j) {
    std::uint64_t sum = 0;
    for (std::size_t b = 0; b < buckets; ++b) sum += counters[j * buckets + b];
    CHECK(sum == sketch.size());
  }

  for (const auto& q : random_points(50, 4, 29)) {
    const double s = sketch.score(q).value;
    CHECK(s >= 0.0);
    CHECK(s <= static_cast<double>(sketch.size()));
  }
}

TEST_CASE("score of an empty sketch is 0") {
  AceSketch sketch{make_family(3, 5, 4, 11)};
  const std::vector<double> q = {1, 2, 3};
  const auto estimate = sketch.score(q);
  CHECK(estimate.value == 0.0);
  CHECK(estimate.k_bits == 5);
  CHECK(estimate.num_tables == 4);
}

TEST_CASE("dimension mismatches are contract violations") {
  AceSketch sketch{make_family(3, 3, 3, 12)};
  const std::vector<double> wrong = {1, 2};
  CHECK_THROWS_AS(sketch.insert(wrong), ace::ContractViolation);
  CHECK_THROWS_AS(sketch.remove(wrong), ace::ContractViolation);
  CHECK_THROWS_AS(sketch.score(wrong), ace::ContractViolation);
}

TEST_CASE("counter bytes follow L * 2^K * width") {
  AceSketch big{make_family(2, 15, 50, 13)};
  CHECK(big.counter_bytes() == 3'276'800);
  CHECK(big.memory_bytes() == 3'276'800 + AceSketch::kHeaderBytes);

  AceSketch tiny{make_family(2, 1, 1, 14)};
  CHECK(tiny.counter_bytes() == 4);

  AceSketch wide{make_family(2, 15, 50, 15), CounterWidth::k32};
  CHECK(wide.counter_bytes() == 6'553'600);
}

TEST_CASE("counters saturate with a sticky flag instead of wrapping") {
  AceSketch sketch{make_family(2, 1, 1, 16)};
  const std::vector<double> x = {1.0, 0.5};
  for (int i = 0; i < 65535; ++i) sketch.insert(x);
  CHECK_FALSE(sketch.saturated());
  sketch.insert(x);
  CHECK(sketch.saturated());
  CHECK(sketch.size() == 65536);
  // The counter held at its maximum.
  CHECK(sketch.score(x).value == doctest::Approx(65535.0));
}
