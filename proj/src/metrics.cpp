#include "dgtv/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace dgtv {

namespace {

std::vector<double> gaussian_kernel(int size, double sigma) {
  std::vector<double> k(static_cast<std::size_t>(size));
  const double center = (size - 1) / 2.0;
  double total = 0.0;
  for (int i = 0; i < size; ++i) {
    const double d = i - center;
    k[static_cast<std::size_t>(i)] = std::exp(-d * d / (2.0 * sigma * sigma));
    total += k[static_cast<std::size_t>(i)];
  }
  for (double& v : k) v /= total;
  return k;
}

// Separable "valid" correlation: output is (h - size + 1) x (w - size + 1).
std::vector<double> filter_valid(const std::vector<double>& img, std::size_t h, std::size_t w,
                                 const std::vector<double>& kernel) {
  const std::size_t s = kernel.size();
  const std::size_t oh = h - s + 1;
  const std::size_t ow = w - s + 1;
  std::vector<double> rows(h * ow);
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t c = 0; c < ow; ++c) {
      double acc = 0.0;
      for (std::size_t k = 0; k < s; ++k) acc += kernel[k] * img[r * w + c + k];
      rows[r * ow + c] = acc;
    }
  std::vector<double> out(oh * ow);
  for (std::size_t r = 0; r < oh; ++r)
    for (std::size_t c = 0; c < ow; ++c) {
      double acc = 0.0;
      for (std::size_t k = 0; k < s; ++k) acc += kernel[k] * rows[(r + k) * ow + c];
      out[r * ow + c] = acc;
    }
  return out;
}

}  // namespace

double mean_squared_error(const ImageBuffer& reference, const ImageBuffer& test) {
  if (!reference.same_shape(test)) throw std::invalid_argument("image dimensions differ");
  if (reference.samples.empty()) throw std::invalid_argument("empty image");
  double sum = 0.0;
  for (std::size_t i = 0; i < reference.samples.size(); ++i) {
    const double d = reference.samples[i] - test.samples[i];
    sum += d * d;
  }
  return sum / static_cast<double>(reference.samples.size());
}

double psnr(const ImageBuffer& reference, const ImageBuffer& test) {
  const double mse = mean_squared_error(reference, test);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

double ssim(const ImageBuffer& reference, const ImageBuffer& test, const SsimParams& params) {
  if (!reference.same_shape(test)) throw std::invalid_argument("image dimensions differ");
  const auto win = static_cast<std::size_t>(params.window);
  if (reference.height < win || reference.width < win)
    throw std::invalid_argument("image smaller than the SSIM window");

  const ImageBuffer a = luminance(reference);
  const ImageBuffer b = luminance(test);
  const std::size_t h = a.height;
  const std::size_t w = a.width;
  std::vector<double> aa(a.samples.size()), bb(aa.size()), ab(aa.size());
  for (std::size_t i = 0; i < aa.size(); ++i) {
    aa[i] = a.samples[i] * a.samples[i];
    bb[i] = b.samples[i] * b.samples[i];
    ab[i] = a.samples[i] * b.samples[i];
  }
  const auto kernel = gaussian_kernel(params.window, params.sigma);
  const auto mu_a = filter_valid(a.samples, h, w, kernel);
  const auto mu_b = filter_valid(b.samples, h, w, kernel);
  const auto e_aa = filter_valid(aa, h, w, kernel);
  const auto e_bb = filter_valid(bb, h, w, kernel);
  const auto e_ab = filter_valid(ab, h, w, kernel);

  const double c1 = std::pow(params.k1 * params.dynamic_range, 2);
  const double c2 = std::pow(params.k2 * params.dynamic_range, 2);
  double total = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double var_a = e_aa[i] - mu_a[i] * mu_a[i];
    const double var_b = e_bb[i] - mu_b[i] * mu_b[i];
    const double cov = e_ab[i] - mu_a[i] * mu_b[i];
    const double num = (2.0 * mu_a[i] * mu_b[i] + c1) * (2.0 * cov + c2);
    const double den = (mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + c1) * (var_a + var_b + c2);
    total += num / den;
  }
  return total / static_cast<double>(mu_a.size());
}

}  // namespace dgtv
