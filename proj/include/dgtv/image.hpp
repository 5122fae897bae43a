#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace dgtv {

/// Interleaved image with samples normalized to [0, 1].
struct ImageBuffer {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 1;
  std::vector<double> samples;

  ImageBuffer() = default;
  ImageBuffer(std::size_t h, std::size_t w, std::size_t c, double fill = 0.0)
      : height(h), width(w), channels(c), samples(h * w * c, fill) {}

  std::size_t pixels() const { return height * width; }
  double& at(std::size_t row, std::size_t col, std::size_t ch = 0) {
    return samples[(row * width + col) * channels + ch];
  }
  double at(std::size_t row, std::size_t col, std::size_t ch = 0) const {
    return samples[(row * width + col) * channels + ch];
  }
  bool same_shape(const ImageBuffer& other) const {
    return height == other.height && width == other.width &&
           channels == other.channels;
  }
};

/// Reads binary PGM (P5) or PPM (P6) with maxval 255.
ImageBuffer load_image(const std::filesystem::path& path);

/// Writes P5 for one channel, P6 for three. Samples are clamped and rounded
/// half-up to 8 bits.
void save_image(const ImageBuffer& image, const std::filesystem::path& path);

/// BT.601 luma for RGB, a copy for grayscale.
ImageBuffer luminance(const ImageBuffer& image);

/// Adds i.i.d. N(0, (sigma_255 / 255)^2) noise and clamps to [0, 1].
ImageBuffer add_awgn(const ImageBuffer& image, double sigma_255, std::uint64_t seed);

}  // namespace dgtv
