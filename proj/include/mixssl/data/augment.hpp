#pragma once

#include <cstdint>

#include "mixssl/core/rng.hpp"
#include "mixssl/data/image.hpp"

namespace mixssl::data {

// Augmentation policy: random area crop (aspect preserved) resized to
// output_size, horizontal flip, color jitter, random grayscale, gaussian
// blur. Stage order is fixed; every random draw comes from the provided
// stream, so a given (image, spec, stream) triple is fully reproducible.
struct AugmentationSpec {
  int64_t out_height = 32;
  int64_t out_width = 32;

  float flip_probability = 0.5f;

  bool color_jitter = false;
  float color_jitter_strength = 0.4f;

  float grayscale_probability = 0.0f;

  bool gaussian_blur = false;
  int blur_kernel = 3;          // odd
  float blur_sigma_min = 0.1f;
  float blur_sigma_max = 2.0f;

  float crop_scale_min = 1.0f;  // area fraction, in (0, 1]
  float crop_scale_max = 1.0f;

  void validate() const;

  // No-op pipeline at the given size (all randomness disabled, full-frame crop).
  static AugmentationSpec identity(int64_t h, int64_t w);

  // Resize-crop + horizontal flip.
  static AugmentationSpec basic(int64_t h, int64_t w);

  // basic + color jitter, random grayscale and gaussian blur, the pretraining
  // stack.
  static AugmentationSpec pretrain(int64_t h, int64_t w);
};

ImageTensor augment(const ImageTensor& image, const AugmentationSpec& spec, RngStream& rng);

// Deterministic full-frame resize to the spec output size (evaluation path).
ImageTensor resize_bilinear(const ImageTensor& image, int64_t out_h, int64_t out_w);

ImageTensor horizontal_flip(const ImageTensor& image);

}  // namespace mixssl::data
