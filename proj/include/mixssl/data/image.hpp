#pragma once

#include <cstdint>

#include "mixssl/core/tensor.hpp"

namespace mixssl::data {

// Normalized raster image: float pixels, layout (channels, height, width),
// values in [0, 1]. Minimum spatial extent 8x8.
class ImageTensor {
public:
  static constexpr int64_t kMinSide = 8;

  ImageTensor() = default;

  explicit ImageTensor(TensorF pixels) : pixels_(std::move(pixels)) {
    if (pixels_.rank() != 3) {
      throw InvalidInput("image must have shape (channels, height, width), got " +
                         pixels_.shape_str());
    }
    if (pixels_.dim(0) < 1 || pixels_.dim(1) < kMinSide || pixels_.dim(2) < kMinSide) {
      throw InvalidInput("image below minimum size: " + pixels_.shape_str());
    }
  }

  static ImageTensor zeros(int64_t channels, int64_t height, int64_t width) {
    return ImageTensor(TensorF({channels, height, width}));
  }

  int64_t channels() const { return pixels_.dim(0); }
  int64_t height() const { return pixels_.dim(1); }
  int64_t width() const { return pixels_.dim(2); }

  TensorF& pixels() { return pixels_; }
  const TensorF& pixels() const { return pixels_; }

  float& at(int64_t c, int64_t y, int64_t x) { return pixels_(c, y, x); }
  float at(int64_t c, int64_t y, int64_t x) const { return pixels_(c, y, x); }

  void clamp01() {
    for (int64_t i = 0; i < pixels_.numel(); ++i) {
      float& v = pixels_[i];
      if (v < 0.0f) v = 0.0f;
      if (v > 1.0f) v = 1.0f;
    }
  }

  bool values_in_unit_range() const {
    for (int64_t i = 0; i < pixels_.numel(); ++i) {
      if (!(pixels_[i] >= 0.0f && pixels_[i] <= 1.0f)) return false;
    }
    return true;
  }

  bool same_shape(const ImageTensor& other) const { return pixels_.same_shape(other.pixels_); }

private:
  TensorF pixels_;
};

}  // namespace mixssl::data
