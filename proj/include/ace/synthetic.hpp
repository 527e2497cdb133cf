#pragma once

#include <cstdint>
#include <vector>

#include "ace/dataset.hpp"

namespace ace::synth {

// Mixture of spherical Gaussian clusters with an optional uniform
// background of labeled outliers.
struct ClusterSpec {
  std::size_t num_points = 2000;   // cluster points, split evenly
  std::size_t dim = 10;
  std::size_t num_clusters = 3;
  double center_radius = 10.0;     // cluster centers at this distance
  double spread = 1.0;             // per-coordinate std inside a cluster
  double outlier_fraction = 0.0;   // extra uniform points, labeled 1
};

Dataset make_clusters(const ClusterSpec& spec, std::uint64_t seed);

enum class PointClass : std::uint8_t { kInner = 0, kBorder = 1, kOutlier = 2 };

// One Gaussian cluster split into inner and border points by distance
// from the centroid, plus far-off outliers in near-orthogonal directions.
struct LayoutSpec {
  std::size_t cluster_points = 300;
  std::size_t num_outliers = 10;
  std::size_t dim = 2;
  double center_radius = 10.0;
  double spread = 1.0;
  double border_quantile = 0.8;  // points above this distance quantile
};

struct Layout {
  Dataset data;                     // labels: 1 for outliers
  std::vector<PointClass> classes;  // one per row
};

Layout make_inner_border_outlier(const LayoutSpec& spec, std::uint64_t seed);

// Mean normalized exact score S(q, D)/n per point class, as a function
// of K. The data behind the discrimination curves.
struct ScoreProfile {
  std::vector<std::uint32_t> k_values;
  std::vector<double> inner;
  std::vector<double> border;
  std::vector<double> outlier;
};

ScoreProfile score_profile(const Layout& layout,
                           const std::vector<std::uint32_t>& k_values);

}  // namespace ace::synth
