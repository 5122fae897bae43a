#include "dgtv/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <random>
#include <stdexcept>
#include <string>

namespace dgtv {

namespace {

class PnmHeaderParser {
 public:
  PnmHeaderParser(const std::vector<unsigned char>& data, std::string name)
      : data_(data), name_(std::move(name)) {}

  std::size_t number() {
    skip_space_and_comments();
    if (pos_ >= data_.size() || !std::isdigit(data_[pos_])) fail("malformed header");
    std::size_t v = 0;
    while (pos_ < data_.size() && std::isdigit(data_[pos_])) {
      v = v * 10 + static_cast<std::size_t>(data_[pos_++] - '0');
      if (v > (1u << 24)) fail("header value out of range");
    }
    return v;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_start() {
    if (pos_ >= data_.size() || !std::isspace(data_[pos_])) fail("malformed header");
    return pos_ + 1;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw std::runtime_error(name_ + ": " + what);
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < data_.size()) {
      if (std::isspace(data_[pos_])) {
        ++pos_;
      } else if (data_[pos_] == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<unsigned char>& data_;
  std::string name_;
  std::size_t pos_ = 2;
};

unsigned char quantize(double v) {
  return static_cast<unsigned char>(std::floor(std::clamp(v, 0.0, 1.0) * 255.0 + 0.5));
}

}  // namespace

ImageBuffer load_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const std::vector<unsigned char> data((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  PnmHeaderParser parser(data, path.string());
  if (data.size() < 2 || data[0] != 'P' || (data[1] != '5' && data[1] != '6'))
    parser.fail("not a binary PGM/PPM file");
  const std::size_t channels = data[1] == '5' ? 1 : 3;
  const std::size_t width = parser.number();
  const std::size_t height = parser.number();
  const std::size_t maxval = parser.number();
  if (width == 0 || height == 0) parser.fail("zero image dimension");
  if (maxval != 255) parser.fail("unsupported maxval " + std::to_string(maxval));
  const std::size_t start = parser.raster_start();
  const std::size_t count = width * height * channels;
  if (data.size() < start + count) parser.fail("truncated raster");

  ImageBuffer img(height, width, channels);
  for (std::size_t i = 0; i < count; ++i) img.samples[i] = data[start + i] / 255.0;
  return img;
}

void save_image(const ImageBuffer& image, const std::filesystem::path& path) {
  if (image.channels != 1 && image.channels != 3)
    throw std::invalid_argument("only 1- or 3-channel images can be saved");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << (image.channels == 1 ? "P5" : "P6") << '\n'
      << image.width << ' ' << image.height << "\n255\n";
  std::vector<unsigned char> raster(image.samples.size());
  std::transform(image.samples.begin(), image.samples.end(), raster.begin(), quantize);
  out.write(reinterpret_cast<const char*>(raster.data()),
            static_cast<std::streamsize>(raster.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

ImageBuffer luminance(const ImageBuffer& image) {
  if (image.channels == 1) return image;
  if (image.channels != 3) throw std::invalid_argument("luminance needs 1 or 3 channels");
  ImageBuffer y(image.height, image.width, 1);
  for (std::size_t p = 0; p < image.pixels(); ++p) {
    const double* rgb = &image.samples[3 * p];
    y.samples[p] = 0.299 * rgb[0] + 0.587 * rgb[1] + 0.114 * rgb[2];
  }
  return y;
}

ImageBuffer add_awgn(const ImageBuffer& image, double sigma_255, std::uint64_t seed) {
  if (!(sigma_255 >= 0.0)) throw std::invalid_argument("noise sigma must be >= 0");
  ImageBuffer noisy = image;
  if (sigma_255 == 0.0) return noisy;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma_255 / 255.0);
  for (double& s : noisy.samples) s = std::clamp(s + noise(rng), 0.0, 1.0);
  return noisy;
}

}  // namespace dgtv
