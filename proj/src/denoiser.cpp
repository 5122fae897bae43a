#include "dgtv/denoiser.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "binary_io.hpp"
#include "dgtv/laplacian.hpp"
#include "dgtv/patches.hpp"

namespace dgtv {

namespace {

constexpr std::string_view kMuMagic = "DGTVMU__";
constexpr std::uint32_t kMuVersion = 1;

Signal patch_luma(const std::vector<Signal>& channels) {
  if (channels.size() == 1) return channels.front();
  if (channels.size() != 3) throw std::invalid_argument("patches must have 1 or 3 channels");
  Signal y(channels[0].size());
  for (std::size_t i = 0; i < y.size(); ++i)
    y[i] = 0.299 * channels[0][i] + 0.587 * channels[1][i] + 0.114 * channels[2][i];
  return y;
}

}  // namespace

void DenoiserConfig::validate() const {
  if (layers < 1) throw std::invalid_argument("layers must be >= 1");
  if (blocks_per_layer < 1) throw std::invalid_argument("blocks per layer must be >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  filter.validate();
}

Signal run_block(const PatchGraph& graph, std::span<const double> estimate,
                 std::span<const double> y, double mu, double rho,
                 const FilterSpec& filter) {
  if (estimate.size() != y.size())
    throw std::invalid_argument("estimate and observation differ in length");
  const SparseLaplacian L = l1_laplacian(reweight_gamma(graph, estimate, rho));
  FilterSpec spec = filter;
  spec.mu = mu;
  return apply_filter(L, y, spec);
}

std::vector<Signal> run_layer(const std::vector<Signal>& y, std::size_t height,
                              std::size_t width, const LayerInputs& inputs,
                              const DenoiserConfig& config, DenoiseTrace* trace) {
  config.validate();
  if (y.empty()) throw std::invalid_argument("patch has no channels");
  for (const Signal& ch : y)
    if (ch.size() != height * width)
      throw std::invalid_argument("patch length does not match its dimensions");

  const FeatureMap features =
      inputs.features ? *inputs.features
                      : handcrafted_features(patch_luma(y), height, width,
                                             config.location_scale, config.intensity_scale);
  if (features.height != height || features.width != width)
    throw std::invalid_argument("feature map is " + std::to_string(features.height) + "x" +
                                std::to_string(features.width) + ", patch is " +
                                std::to_string(height) + "x" + std::to_string(width));
  const PatchGraph graph =
      compute_edge_weights(build_topology(height, width), features, config.epsilon);
  if (trace) ++trace->edge_weight_evaluations;

  std::vector<double> objectives(config.blocks_per_layer, 0.0);
  std::vector<Signal> out;
  out.reserve(y.size());
  for (const Signal& observed : y) {
    Signal estimate = observed;
    for (std::size_t b = 0; b < config.blocks_per_layer; ++b) {
      estimate = run_block(graph, estimate, observed, inputs.mu, config.rho, config.filter);
      if (trace) objectives[b] += gtv_objective(graph, observed, estimate, inputs.mu);
    }
    out.push_back(std::move(estimate));
  }
  if (trace) trace->block_objectives.push_back(std::move(objectives));
  return out;
}

Signal run_layer(std::span<const double> y, std::size_t height, std::size_t width,
                 const LayerInputs& inputs, const DenoiserConfig& config,
                 DenoiseTrace* trace) {
  return run_layer(std::vector<Signal>{Signal(y.begin(), y.end())}, height, width, inputs,
                   config, trace)
      .front();
}

std::vector<Signal> run_denoiser(const std::vector<Signal>& y, std::size_t height,
                                 std::size_t width, const DenoiserConfig& config,
                                 const std::vector<LayerInputs>& layer_inputs,
                                 DenoiseTrace* trace) {
  if (layer_inputs.size() != config.layers)
    throw std::invalid_argument("expected inputs for " + std::to_string(config.layers) +
                                " layers, got " + std::to_string(layer_inputs.size()));
  std::vector<Signal> x = y;
  for (const LayerInputs& inputs : layer_inputs)
    x = run_layer(x, height, width, inputs, config, trace);
  return x;
}

MuSchedule MuSchedule::constant(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("mu must be positive");
  MuSchedule s;
  s.values_.push_back(mu);
  return s;
}

MuSchedule MuSchedule::from_values(std::vector<float> values) {
  if (values.empty()) throw std::invalid_argument("mu schedule is empty");
  MuSchedule s;
  for (float v : values) {
    if (!(v > 0.0f) || !std::isfinite(v)) throw std::invalid_argument("mu values must be positive");
    s.values_.push_back(v);
  }
  return s;
}

void MuSchedule::check_shape(std::size_t patches, std::size_t layers) const {
  if (values_.size() != 1 && values_.size() != patches * layers)
    throw std::invalid_argument("mu schedule has " + std::to_string(values_.size()) +
                                " values; need 1 or " + std::to_string(patches * layers));
}

double MuSchedule::at(std::size_t patch, std::size_t layer, std::size_t layers) const {
  if (values_.size() == 1) return values_.front();
  return values_.at(patch * layers + layer);
}

std::vector<float> load_mu(const std::filesystem::path& path) {
  detail::ByteReader in(path);
  if (in.bytes(kMuMagic.size()) != kMuMagic)
    throw std::runtime_error("bad mu-file magic in " + in.name());
  if (in.u32() != kMuVersion) throw std::runtime_error("unsupported mu-file version in " + in.name());
  const std::uint32_t count = in.u32();
  if (count == 0) throw std::runtime_error("empty mu file: " + in.name());
  if (in.remaining() < std::size_t{count} * 4) throw std::runtime_error("truncated file: " + in.name());
  std::vector<float> values(count);
  for (float& v : values) {
    v = in.f32();
    if (!(v > 0.0f) || !std::isfinite(v))
      throw std::runtime_error("non-positive mu value in " + in.name());
  }
  return values;
}

void write_mu(std::span<const float> values, const std::filesystem::path& path) {
  detail::ByteWriter out;
  out.bytes(kMuMagic);
  out.u32(kMuVersion);
  out.u32(static_cast<std::uint32_t>(values.size()));
  for (float v : values) out.f32(v);
  out.save(path);
}

ImageBuffer denoise_image(const ImageBuffer& noisy, const DenoiserConfig& config,
                          const MuSchedule& mu,
                          const std::vector<FeatureMap>& image_features,
                          const PipelineOptions& options) {
  config.validate();
  const PatchGrid grid = make_patch_grid(noisy, options.patch_size, options.stride);
  std::vector<ImagePatch> patches = extract_patches(noisy, grid);
  mu.check_shape(patches.size(), config.layers);
  if (!image_features.empty()) {
    if (image_features.size() != 1 && image_features.size() != config.layers)
      throw std::invalid_argument("need one feature map, or one per layer");
    for (const FeatureMap& f : image_features)
      if (f.height != noisy.height || f.width != noisy.width)
        throw std::invalid_argument("feature map dimensions do not match the image");
  }

  const std::size_t s = options.patch_size;
  auto process = [&](std::size_t p) {
    std::vector<LayerInputs> inputs(config.layers);
    for (std::size_t t = 0; t < config.layers; ++t) {
      inputs[t].mu = mu.at(p, t, config.layers);
      if (!image_features.empty()) {
        const FeatureMap& map = image_features[image_features.size() == 1 ? 0 : t];
        inputs[t].features = crop_features(map, patches[p].origin.row, patches[p].origin.col, s, s);
      }
    }
    patches[p].channels = run_denoiser(patches[p].channels, s, s, config, inputs);
  };

  std::size_t threads = options.threads == 0 ? std::thread::hardware_concurrency() : options.threads;
  threads = std::max<std::size_t>(1, std::min(threads, patches.size()));
  if (threads == 1) {
    for (std::size_t p = 0; p < patches.size(); ++p) process(p);
  } else {
    // Each worker writes only its own patch slots; results merge in grid order.
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
          for (std::size_t p = next++; p < patches.size(); p = next++) {
            try {
              process(p);
            } catch (...) {
              std::lock_guard lock(failure_mutex);
              if (!failure) failure = std::current_exception();
            }
          }
        });
      }
    }
    if (failure) std::rethrow_exception(failure);
  }
  return assemble_patches(grid, patches);
}

}  // namespace dgtv
