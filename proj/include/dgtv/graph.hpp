#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace dgtv {

/// A vectorized patch (or any graph signal), one sample per node.
using Signal = std::vector<double>;

/// K-dimensional feature vector per pixel, row-major by pixel, feature-major
/// within a pixel.
struct FeatureMap {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t k = 0;
  std::vector<double> values;

  std::size_t pixels() const { return height * width; }
  std::span<const double> at(std::size_t pixel) const {
    return {values.data() + pixel * k, k};
  }
};

struct Edge {
  std::size_t i = 0;
  std::size_t j = 0;
  double weight = 0.0;
};

/// Undirected weighted graph over a row-major pixel grid. Each edge is stored
/// once with i < j.
struct PatchGraph {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t n = 0;
  std::vector<Edge> edges;
};

/// 8-neighborhood grid graph with all weights set to 1. Border nodes have
/// fewer neighbors; there is no padding.
PatchGraph build_topology(std::size_t height, std::size_t width);

/// w_ij = exp(-||f_i - f_j||^2 / epsilon^2) on every edge of `topology`.
PatchGraph compute_edge_weights(const PatchGraph& topology,
                                const FeatureMap& features, double epsilon);

/// Bilateral-style features (row/height * location_scale,
/// col/width * location_scale, intensity * intensity_scale).
FeatureMap handcrafted_features(std::span<const double> patch, std::size_t height,
                                std::size_t width, double location_scale = 0.1,
                                double intensity_scale = 1.0);

/// Gamma_ij = w_ij / max(|x_i - x_j|, rho).
PatchGraph reweight_gamma(const PatchGraph& graph, std::span<const double> estimate,
                          double rho);

/// sum_{(i,j)} w_ij (x_i - x_j)^2, evaluated edge by edge.
double glr_value(const PatchGraph& graph, std::span<const double> x);

/// sum_{(i,j)} w_ij |x_i - x_j|.
double gtv_value(const PatchGraph& graph, std::span<const double> x);

/// Objective ||y - x||^2 + mu * GTV(x) minimized by one layer.
double gtv_objective(const PatchGraph& graph, std::span<const double> y,
                     std::span<const double> x, double mu);

/// Crops a rectangular window out of an image-sized feature map.
FeatureMap crop_features(const FeatureMap& map, std::size_t row, std::size_t col,
                         std::size_t height, std::size_t width);

// DGTVFEAT binary transport.
FeatureMap read_feature_map(const std::filesystem::path& path);
void write_feature_map(const FeatureMap& map, const std::filesystem::path& path);

}  // namespace dgtv
