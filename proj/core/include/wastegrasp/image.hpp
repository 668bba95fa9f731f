#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "wastegrasp/error.hpp"

namespace wastegrasp {

/// Row-major image with value type T. Pixel (x, y) is column x, row y.
template <typename T>
class Image {
 public:
  using value_type = T;

  Image() = default;
  Image(int width, int height, T fill = T{}) : width_(width), height_(height) {
    if (width < 0 || height < 0) {
      throw Error(ErrorCode::kDimension, "image dimensions must be non-negative");
    }
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  T& at(int x, int y) { return data_[index(x, y)]; }
  const T& at(int x, int y) const { return data_[index(x, y)]; }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::vector<T>& data() noexcept { return data_; }
  const std::vector<T>& data() const noexcept { return data_; }

  bool same_shape(int width, int height) const noexcept {
    return width_ == width && height_ == height;
  }
  template <typename U>
  bool same_shape(const Image<U>& other) const noexcept {
    return same_shape(other.width(), other.height());
  }

  friend bool operator==(const Image& a, const Image& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.data_ == b.data_;
  }

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

using GrayImage = Image<std::uint8_t>;
using RgbImage = Image<Rgb>;
/// Values are 0 or 1.
using BinaryImage = Image<std::uint8_t>;
/// Metres along the optical axis; 0 marks an invalid pixel.
using DepthImage = Image<float>;
/// Values are 0 or 1.
using Mask = Image<std::uint8_t>;

template <typename T, typename U>
void require_same_shape(const Image<T>& a, const Image<U>& b, const std::string& what) {
  if (!a.same_shape(b)) {
    throw Error(ErrorCode::kDimension,
                what + ": " + std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                    " vs " + std::to_string(b.width()) + "x" + std::to_string(b.height()));
  }
}

}  // namespace wastegrasp
