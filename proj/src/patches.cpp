#include "dgtv/patches.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace dgtv {

std::vector<std::size_t> patch_offsets(std::size_t extent, std::size_t size,
                                       std::size_t stride) {
  if (size == 0 || stride == 0) throw std::invalid_argument("patch size and stride must be >= 1");
  if (size > extent)
    throw std::invalid_argument("patch size " + std::to_string(size) +
                                " exceeds image extent " + std::to_string(extent));
  std::vector<std::size_t> offsets;
  for (std::size_t o = 0;; o += stride) {
    if (o + size >= extent) {
      offsets.push_back(extent - size);
      break;
    }
    offsets.push_back(o);
  }
  return offsets;
}

PatchGrid make_patch_grid(const ImageBuffer& image, std::size_t size, std::size_t stride) {
  PatchGrid grid;
  grid.image_height = image.height;
  grid.image_width = image.width;
  grid.image_channels = image.channels;
  grid.patch_size = size;
  grid.stride = stride;
  const auto rows = patch_offsets(image.height, size, stride);
  const auto cols = patch_offsets(image.width, size, stride);
  for (std::size_t r : rows)
    for (std::size_t c : cols) grid.origins.push_back({r, c});
  return grid;
}

std::vector<ImagePatch> extract_patches(const ImageBuffer& image, const PatchGrid& grid) {
  if (image.height != grid.image_height || image.width != grid.image_width ||
      image.channels != grid.image_channels)
    throw std::invalid_argument("image does not match the patch grid");
  const std::size_t s = grid.patch_size;
  std::vector<ImagePatch> patches;
  patches.reserve(grid.count());
  for (const PatchOrigin& o : grid.origins) {
    ImagePatch p{o, std::vector<Signal>(image.channels, Signal(s * s))};
    for (std::size_t r = 0; r < s; ++r)
      for (std::size_t c = 0; c < s; ++c)
        for (std::size_t ch = 0; ch < image.channels; ++ch)
          p.channels[ch][r * s + c] = image.at(o.row + r, o.col + c, ch);
    patches.push_back(std::move(p));
  }
  return patches;
}

ImageBuffer assemble_patches(const PatchGrid& grid, const std::vector<ImagePatch>& patches) {
  if (patches.size() != grid.count())
    throw std::invalid_argument("expected " + std::to_string(grid.count()) + " patches, got " +
                                std::to_string(patches.size()));
  const std::size_t s = grid.patch_size;
  ImageBuffer sum(grid.image_height, grid.image_width, grid.image_channels);
  std::vector<std::size_t> hits(sum.pixels(), 0);
  for (const ImagePatch& p : patches) {
    if (p.channels.size() != grid.image_channels)
      throw std::invalid_argument("patch channel count mismatch");
    for (std::size_t r = 0; r < s; ++r) {
      for (std::size_t c = 0; c < s; ++c) {
        const std::size_t row = p.origin.row + r;
        const std::size_t col = p.origin.col + c;
        ++hits[row * sum.width + col];
        for (std::size_t ch = 0; ch < sum.channels; ++ch)
          sum.at(row, col, ch) += p.channels[ch].at(r * s + c);
      }
    }
  }
  for (std::size_t px = 0; px < sum.pixels(); ++px) {
    if (hits[px] == 0) throw std::invalid_argument("patch grid leaves a pixel uncovered");
    for (std::size_t ch = 0; ch < sum.channels; ++ch) {
      double& v = sum.samples[px * sum.channels + ch];
      v = std::clamp(v / static_cast<double>(hits[px]), 0.0, 1.0);
    }
  }
  return sum;
}

}  // namespace dgtv
