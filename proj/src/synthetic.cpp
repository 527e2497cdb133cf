#include "ace/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "ace/errors.hpp"
#include "ace/estimators.hpp"
#include "ace/rng.hpp"

namespace ace::synth {

namespace {

std::vector<double> random_unit(std::size_t dim, rng::NormalStream& normals) {
  std::vector<double> v(dim);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (auto& c : v) {
      c = normals.next();
      norm += c * c;
    }
  } while (norm == 0.0);
  norm = std::sqrt(norm);
  for (auto& c : v) c /= norm;
  return v;
}

}  // namespace

Dataset make_clusters(const ClusterSpec& spec, std::uint64_t seed) {
  if (spec.num_points == 0 || spec.dim == 0 || spec.num_clusters == 0)
    throw ContractViolation("make_clusters: empty spec");

  rng::NormalStream normals(rng::mix_seed(seed, 1));
  rng::UniformStream uniforms(rng::mix_seed(seed, 2));

  std::vector<std::vector<double>> centers;
  for (std::size_t c = 0; c < spec.num_clusters; ++c) {
    auto u = random_unit(spec.dim, normals);
    for (auto& x : u) x *= spec.center_radius;
    centers.push_back(std::move(u));
  }

  const std::size_t num_outliers = static_cast<std::size_t>(
      spec.outlier_fraction * static_cast<double>(spec.num_points));

  Dataset data;
  data.cols = spec.dim;
  data.rows = spec.num_points + num_outliers;
  data.values.reserve(data.rows * data.cols);
  data.labels.emplace();
  data.labels->reserve(data.rows);
  data.name = "synthetic-clusters";

  for (std::size_t i = 0; i < spec.num_points; ++i) {
    const auto& center = centers[i % spec.num_clusters];
    for (std::size_t k = 0; k < spec.dim; ++k)
      data.values.push_back(center[k] + spec.spread * normals.next());
    data.labels->push_back(0);
  }

  const double box = 1.5 * spec.center_radius;
  for (std::size_t i = 0; i < num_outliers; ++i) {
    std::vector<double> p(spec.dim);
    double norm;
    do {
      norm = 0.0;
      for (auto& x : p) {
        x = box * (2.0 * uniforms.next_unit() - 1.0);
        norm += x * x;
      }
    } while (norm < 1e-12);
    data.values.insert(data.values.end(), p.begin(), p.end());
    data.labels->push_back(1);
  }
  return data;
}

Layout make_inner_border_outlier(const LayoutSpec& spec, std::uint64_t seed) {
  if (spec.cluster_points < 2 || spec.dim < 2)
    throw ContractViolation(
        "make_inner_border_outlier: need >= 2 cluster points and dim >= 2");

  rng::NormalStream normals(rng::mix_seed(seed, 3));

  const auto axis = random_unit(spec.dim, normals);

  Layout layout;
  layout.data.cols = spec.dim;
  layout.data.rows = spec.cluster_points + spec.num_outliers;
  layout.data.labels.emplace();
  layout.data.name = "inner-border-outlier";

  std::vector<double> distance(spec.cluster_points);
  for (std::size_t i = 0; i < spec.cluster_points; ++i) {
    double sq = 0.0;
    for (std::size_t k = 0; k < spec.dim; ++k) {
      const double offset = spec.spread * normals.next();
      layout.data.values.push_back(spec.center_radius * axis[k] + offset);
      sq += offset * offset;
    }
    distance[i] = std::sqrt(sq);
  }

  auto sorted = distance;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t cut = std::min(
      spec.cluster_points - 1,
      static_cast<std::size_t>(spec.border_quantile *
                               static_cast<double>(spec.cluster_points)));
  const double border_cut = sorted[cut];

  for (std::size_t i = 0; i < spec.cluster_points; ++i) {
    layout.classes.push_back(distance[i] >= border_cut ? PointClass::kBorder
                                                       : PointClass::kInner);
    layout.data.labels->push_back(0);
  }

  // Outliers sit at the cluster's radius but in directions nearly
  // orthogonal to the cluster axis, so their collision probability with
  // cluster points is close to 1/2.
  for (std::size_t i = 0; i < spec.num_outliers; ++i) {
    auto dir = random_unit(spec.dim, normals);
    double along = 0.0;
    for (std::size_t k = 0; k < spec.dim; ++k) along += dir[k] * axis[k];
    double norm = 0.0;
    for (std::size_t k = 0; k < spec.dim; ++k) {
      dir[k] -= along * axis[k];
      norm += dir[k] * dir[k];
    }
    norm = std::sqrt(norm);
    if (norm < 1e-9) {  // degenerate draw, fall back to a coordinate flip
      dir.assign(spec.dim, 0.0);
      dir[i % spec.dim] = 1.0;
      norm = 1.0;
    }
    for (std::size_t k = 0; k < spec.dim; ++k)
      layout.data.values.push_back(spec.center_radius * dir[k] / norm +
                                   0.1 * spec.spread * normals.next());
    layout.classes.push_back(PointClass::kOutlier);
    layout.data.labels->push_back(1);
  }
  return layout;
}

ScoreProfile score_profile(const Layout& layout,
                           const std::vector<std::uint32_t>& k_values) {
  ScoreProfile profile;
  profile.k_values = k_values;
  const double n = static_cast<double>(layout.data.rows);
  for (const auto k : k_values) {
    double sums[3] = {0.0, 0.0, 0.0};
    std::size_t counts[3] = {0, 0, 0};
    for (std::size_t i = 0; i < layout.data.rows; ++i) {
      const auto cls = static_cast<std::size_t>(layout.classes[i]);
      sums[cls] += exact_score(layout.data, layout.data.row(i), k) / n;
      ++counts[cls];
    }
    profile.inner.push_back(counts[0] ? sums[0] / counts[0] : 0.0);
    profile.border.push_back(counts[1] ? sums[1] / counts[1] : 0.0);
    profile.outlier.push_back(counts[2] ? sums[2] / counts[2] : 0.0);
  }
  return profile;
}

}  // namespace ace::synth
