#pragma once

#include <cstddef>
#include <vector>

#include "dgtv/graph.hpp"
#include "dgtv/image.hpp"

namespace dgtv {

struct PatchOrigin {
  std::size_t row = 0;
  std::size_t col = 0;
};

/// Square patches cut from an image. `channels[c]` of patch p is a row-major
/// size*size signal.
struct PatchGrid {
  std::size_t image_height = 0;
  std::size_t image_width = 0;
  std::size_t image_channels = 1;
  std::size_t patch_size = 36;
  std::size_t stride = 36;
  std::vector<PatchOrigin> origins;

  std::size_t count() const { return origins.size(); }
};

struct ImagePatch {
  PatchOrigin origin;
  std::vector<Signal> channels;
};

/// Origins along one axis: 0, stride, 2*stride, ... with the last one clamped
/// so the final patch ends on the border.
std::vector<std::size_t> patch_offsets(std::size_t extent, std::size_t size,
                                       std::size_t stride);

PatchGrid make_patch_grid(const ImageBuffer& image, std::size_t size, std::size_t stride);

/// Row-major enumeration of patches covering the whole image.
std::vector<ImagePatch> extract_patches(const ImageBuffer& image, const PatchGrid& grid);

/// Places patches back, averaging overlaps uniformly and clamping to [0, 1].
ImageBuffer assemble_patches(const PatchGrid& grid, const std::vector<ImagePatch>& patches);

}  // namespace dgtv
