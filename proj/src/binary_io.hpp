#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dgtv::detail {

// Little-endian encoding independent of host byte order.
class ByteWriter {
 public:
  void bytes(std::string_view data) { buffer_.insert(buffer_.end(), data.begin(), data.end()); }
  void u32(std::uint32_t v) {
    for (int s = 0; s < 32; s += 8) buffer_.push_back(static_cast<char>((v >> s) & 0xFFu));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }

  void save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
    if (!out) throw std::runtime_error("write failed: " + path.string());
  }

 private:
  std::vector<char> buffer_;
};

class ByteReader {
 public:
  explicit ByteReader(const std::filesystem::path& path) : name_(path.string()) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + name_);
    data_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }

  std::string bytes(std::size_t count) {
    need(count);
    std::string out(data_.data() + pos_, count);
    pos_ += count;
    return out;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b)
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + b])) << (8 * b);
    pos_ += 4;
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  std::size_t remaining() const { return data_.size() - pos_; }
  const std::string& name() const { return name_; }

 private:
  void need(std::size_t count) const {
    if (data_.size() - pos_ < count) throw std::runtime_error("truncated file: " + name_);
  }

  std::string name_;
  std::vector<char> data_;
  std::size_t pos_ = 0;
};

}  // namespace dgtv::detail
