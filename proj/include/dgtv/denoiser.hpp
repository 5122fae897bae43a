#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "dgtv/graph.hpp"
#include "dgtv/image.hpp"
#include "dgtv/spectral.hpp"

namespace dgtv {

struct DenoiserConfig {
  std::size_t layers = 1;
  std::size_t blocks_per_layer = 6;
  double epsilon = 0.3;
  double rho = 0.01;
  FilterSpec filter{};
  double location_scale = 0.1;
  double intensity_scale = 1.0;

  void validate() const;
};

/// Graph features and mu for one layer. Without explicit features the layer
/// derives handcrafted ones from its own input (luma for color patches).
struct LayerInputs {
  std::optional<FeatureMap> features;
  double mu = 0.5;
};

/// Optional instrumentation filled by run_layer / run_denoiser.
struct DenoiseTrace {
  std::size_t edge_weight_evaluations = 0;
  /// Objective ||y - x||^2 + mu GTV(x) at every block output, one row per
  /// layer, summed over channels.
  std::vector<std::vector<double>> block_objectives;
};

/// One reweight-and-filter step: Gamma from `estimate`, then
/// x* = (I + mu L_Gamma)^{-1} y. `graph` carries the fixed weights w_ij.
Signal run_block(const PatchGraph& graph, std::span<const double> estimate,
                 std::span<const double> y, double mu, double rho,
                 const FilterSpec& filter);

/// B chained blocks on a multichannel patch sharing one graph.
std::vector<Signal> run_layer(const std::vector<Signal>& y, std::size_t height,
                              std::size_t width, const LayerInputs& inputs,
                              const DenoiserConfig& config,
                              DenoiseTrace* trace = nullptr);

Signal run_layer(std::span<const double> y, std::size_t height, std::size_t width,
                 const LayerInputs& inputs, const DenoiserConfig& config,
                 DenoiseTrace* trace = nullptr);

/// T cascaded layers; layer t filters the output of layer t-1.
std::vector<Signal> run_denoiser(const std::vector<Signal>& y, std::size_t height,
                                 std::size_t width, const DenoiserConfig& config,
                                 const std::vector<LayerInputs>& layer_inputs,
                                 DenoiseTrace* trace = nullptr);

/// Per-(patch, layer) mu values, patch-major. A single value broadcasts.
class MuSchedule {
 public:
  static MuSchedule constant(double mu);
  static MuSchedule from_values(std::vector<float> values);

  double at(std::size_t patch, std::size_t layer, std::size_t layers) const;
  /// Throws unless the schedule can serve `patches` x `layers` lookups.
  void check_shape(std::size_t patches, std::size_t layers) const;

 private:
  std::vector<double> values_;
};

// DGTVMU__ binary transport.
std::vector<float> load_mu(const std::filesystem::path& path);
void write_mu(std::span<const float> values, const std::filesystem::path& path);

struct PipelineOptions {
  std::size_t patch_size = 36;
  std::size_t stride = 36;
  std::size_t threads = 1;
};

/// Patch-wise denoising of a whole image. `image_features` is empty for
/// handcrafted features, or holds one image-sized map reused by every layer,
/// or one per layer.
ImageBuffer denoise_image(const ImageBuffer& noisy, const DenoiserConfig& config,
                          const MuSchedule& mu,
                          const std::vector<FeatureMap>& image_features,
                          const PipelineOptions& options);

}  // namespace dgtv
