#pragma once

#include "dgtv/image.hpp"

namespace dgtv {

/// 10 log10(1 / MSE) with peak 1. Identical inputs give +infinity.
double psnr(const ImageBuffer& reference, const ImageBuffer& test);

double mean_squared_error(const ImageBuffer& reference, const ImageBuffer& test);

struct SsimParams {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 1.0;
};

/// Mean SSIM over all valid window positions of the luminance images.
double ssim(const ImageBuffer& reference, const ImageBuffer& test,
            const SsimParams& params = {});

}  // namespace dgtv
