#include "dgtv/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "binary_io.hpp"

namespace dgtv {

namespace {

constexpr std::string_view kFeatureMagic = "DGTVFEAT";
constexpr std::uint32_t kFeatureVersion = 1;

void check_length(const PatchGraph& graph, std::span<const double> x) {
  if (x.size() != graph.n)
    throw std::invalid_argument("signal length " + std::to_string(x.size()) +
                                " does not match graph size " + std::to_string(graph.n));
}

}  // namespace

PatchGraph build_topology(std::size_t height, std::size_t width) {
  if (height == 0 || width == 0) throw std::invalid_argument("zero-sized patch grid");
  PatchGraph g;
  g.height = height;
  g.width = width;
  g.n = height * width;
  // Forward half of the 8-neighborhood: E, S, SE, SW.
  g.edges.reserve(4 * g.n);
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      const std::size_t i = r * width + c;
      if (c + 1 < width) g.edges.push_back({i, i + 1, 1.0});
      if (r + 1 < height) {
        g.edges.push_back({i, i + width, 1.0});
        if (c + 1 < width) g.edges.push_back({i, i + width + 1, 1.0});
        if (c > 0) g.edges.push_back({i, i + width - 1, 1.0});
      }
    }
  }
  return g;
}

PatchGraph compute_edge_weights(const PatchGraph& topology, const FeatureMap& features,
                                double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (features.k == 0) throw std::invalid_argument("feature dimension must be >= 1");
  if (features.pixels() != topology.n || features.values.size() != topology.n * features.k)
    throw std::invalid_argument("feature map size does not match the graph");
  if (!std::all_of(features.values.begin(), features.values.end(),
                   [](double v) { return std::isfinite(v); }))
    throw std::invalid_argument("non-finite feature value");

  const double inv_eps2 = 1.0 / (epsilon * epsilon);
  PatchGraph out = topology;
  for (Edge& e : out.edges) {
    const auto fi = features.at(e.i);
    const auto fj = features.at(e.j);
    double dist2 = 0.0;
    for (std::size_t k = 0; k < features.k; ++k) {
      const double d = fi[k] - fj[k];
      dist2 += d * d;
    }
    e.weight = std::exp(-dist2 * inv_eps2);
  }
  return out;
}

FeatureMap handcrafted_features(std::span<const double> patch, std::size_t height,
                                std::size_t width, double location_scale,
                                double intensity_scale) {
  if (patch.size() != height * width)
    throw std::invalid_argument("patch length does not match its dimensions");
  FeatureMap f;
  f.height = height;
  f.width = width;
  f.k = 3;
  f.values.resize(patch.size() * 3);
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      const std::size_t p = r * width + c;
      f.values[3 * p + 0] = static_cast<double>(r) / static_cast<double>(height) * location_scale;
      f.values[3 * p + 1] = static_cast<double>(c) / static_cast<double>(width) * location_scale;
      f.values[3 * p + 2] = patch[p] * intensity_scale;
    }
  }
  return f;
}

PatchGraph reweight_gamma(const PatchGraph& graph, std::span<const double> estimate,
                          double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  check_length(graph, estimate);
  PatchGraph out = graph;
  for (Edge& e : out.edges) {
    const double gap = std::abs(estimate[e.i] - estimate[e.j]);
    e.weight = e.weight / std::max(gap, rho);
  }
  return out;
}

double glr_value(const PatchGraph& graph, std::span<const double> x) {
  check_length(graph, x);
  double sum = 0.0;
  for (const Edge& e : graph.edges) {
    const double d = x[e.j] - x[e.i];
    sum += e.weight * d * d;
  }
  return sum;
}

double gtv_value(const PatchGraph& graph, std::span<const double> x) {
  check_length(graph, x);
  double sum = 0.0;
  for (const Edge& e : graph.edges) sum += e.weight * std::abs(x[e.j] - x[e.i]);
  return sum;
}

double gtv_objective(const PatchGraph& graph, std::span<const double> y,
                     std::span<const double> x, double mu) {
  check_length(graph, y);
  double fidelity = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = y[i] - x[i];
    fidelity += d * d;
  }
  return fidelity + mu * gtv_value(graph, x);
}

FeatureMap crop_features(const FeatureMap& map, std::size_t row, std::size_t col,
                         std::size_t height, std::size_t width) {
  if (row + height > map.height || col + width > map.width)
    throw std::invalid_argument("feature crop outside the map");
  FeatureMap out;
  out.height = height;
  out.width = width;
  out.k = map.k;
  out.values.reserve(height * width * map.k);
  for (std::size_t r = 0; r < height; ++r) {
    const auto first = map.values.begin() +
                       static_cast<std::ptrdiff_t>(((row + r) * map.width + col) * map.k);
    out.values.insert(out.values.end(), first,
                      first + static_cast<std::ptrdiff_t>(width * map.k));
  }
  return out;
}

FeatureMap read_feature_map(const std::filesystem::path& path) {
  detail::ByteReader in(path);
  if (in.bytes(kFeatureMagic.size()) != kFeatureMagic)
    throw std::runtime_error("bad feature-map magic in " + in.name());
  if (in.u32() != kFeatureVersion)
    throw std::runtime_error("unsupported feature-map version in " + in.name());
  FeatureMap map;
  map.height = in.u32();
  map.width = in.u32();
  map.k = in.u32();
  if (map.height == 0 || map.width == 0 || map.k == 0)
    throw std::runtime_error("empty feature map in " + in.name());
  const std::size_t count = map.height * map.width * map.k;
  if (in.remaining() < count * 4) throw std::runtime_error("truncated file: " + in.name());
  map.values.resize(count);
  for (double& v : map.values) {
    v = in.f32();
    if (!std::isfinite(v)) throw std::runtime_error("non-finite feature value in " + in.name());
  }
  return map;
}

void write_feature_map(const FeatureMap& map, const std::filesystem::path& path) {
  if (map.values.size() != map.height * map.width * map.k)
    throw std::invalid_argument("feature map payload does not match its header");
  detail::ByteWriter out;
  out.bytes(kFeatureMagic);
  out.u32(kFeatureVersion);
  out.u32(static_cast<std::uint32_t>(map.height));
  out.u32(static_cast<std::uint32_t>(map.width));
  out.u32(static_cast<std::uint32_t>(map.k));
  for (double v : map.values) out.f32(static_cast<float>(v));
  out.save(path);
}

}  // namespace dgtv
