#include "mixssl/data/augment.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mixssl/core/errors.hpp"

namespace mixssl::data {

void AugmentationSpec::validate() const {
  if (out_height < ImageTensor::kMinSide || out_width < ImageTensor::kMinSide) {
    throw ConfigError("augmentation output size below minimum image size");
  }
  if (flip_probability < 0.0f || flip_probability > 1.0f) {
    throw ConfigError("flip_probability outside [0,1]");
  }
  if (grayscale_probability < 0.0f || grayscale_probability > 1.0f) {
    throw ConfigError("grayscale_probability outside [0,1]");
  }
  if (color_jitter && color_jitter_strength < 0.0f) {
    throw ConfigError("color_jitter_strength must be non-negative");
  }
  if (gaussian_blur) {
    if (blur_kernel < 1 || blur_kernel % 2 == 0) throw ConfigError("blur kernel must be odd");
    if (blur_sigma_min <= 0.0f || blur_sigma_max < blur_sigma_min) {
      throw ConfigError("invalid blur sigma range");
    }
  }
  if (!(crop_scale_min > 0.0f && crop_scale_min <= crop_scale_max && crop_scale_max <= 1.0f)) {
    throw ConfigError("crop scale range must satisfy 0 < min <= max <= 1");
  }
}

AugmentationSpec AugmentationSpec::identity(int64_t h, int64_t w) {
  AugmentationSpec spec;
  spec.out_height = h;
  spec.out_width = w;
  spec.flip_probability = 0.0f;
  spec.color_jitter = false;
  spec.grayscale_probability = 0.0f;
  spec.gaussian_blur = false;
  spec.crop_scale_min = 1.0f;
  spec.crop_scale_max = 1.0f;
  return spec;
}

AugmentationSpec AugmentationSpec::basic(int64_t h, int64_t w) {
  AugmentationSpec spec = identity(h, w);
  spec.flip_probability = 0.5f;
  spec.crop_scale_min = 0.6f;
  spec.crop_scale_max = 1.0f;
  return spec;
}

AugmentationSpec AugmentationSpec::pretrain(int64_t h, int64_t w) {
  AugmentationSpec spec = basic(h, w);
  spec.color_jitter = true;
  spec.color_jitter_strength = 0.4f;
  spec.grayscale_probability = 0.2f;
  spec.gaussian_blur = true;
  spec.blur_kernel = 3;
  spec.blur_sigma_min = 0.1f;
  spec.blur_sigma_max = 2.0f;
  return spec;
}

ImageTensor resize_bilinear(const ImageTensor& image, int64_t out_h, int64_t out_w) {
  const int64_t channels = image.channels();
  const int64_t in_h = image.height();
  const int64_t in_w = image.width();
  if (out_h == in_h && out_w == in_w) return image;
  TensorF out({channels, out_h, out_w});
  const double sy = static_cast<double>(in_h) / static_cast<double>(out_h);
  const double sx = static_cast<double>(in_w) / static_cast<double>(out_w);
  for (int64_t y = 0; y < out_h; ++y) {
    // Pixel-center mapping; same-size resize is the identity.
    double fy = (static_cast<double>(y) + 0.5) * sy - 0.5;
    fy = std::min(std::max(fy, 0.0), static_cast<double>(in_h - 1));
    const int64_t y0 = static_cast<int64_t>(fy);
    const int64_t y1 = std::min(y0 + 1, in_h - 1);
    const float wy = static_cast<float>(fy - static_cast<double>(y0));
    for (int64_t x = 0; x < out_w; ++x) {
      double fx = (static_cast<double>(x) + 0.5) * sx - 0.5;
      fx = std::min(std::max(fx, 0.0), static_cast<double>(in_w - 1));
      const int64_t x0 = static_cast<int64_t>(fx);
      const int64_t x1 = std::min(x0 + 1, in_w - 1);
      const float wx = static_cast<float>(fx - static_cast<double>(x0));
      for (int64_t c = 0; c < channels; ++c) {
        const float top = (1.0f - wx) * image.at(c, y0, x0) + wx * image.at(c, y0, x1);
        const float bot = (1.0f - wx) * image.at(c, y1, x0) + wx * image.at(c, y1, x1);
        out(c, y, x) = (1.0f - wy) * top + wy * bot;
      }
    }
  }
  return ImageTensor(std::move(out));
}

ImageTensor horizontal_flip(const ImageTensor& image) {
  const int64_t channels = image.channels();
  const int64_t h = image.height();
  const int64_t w = image.width();
  TensorF out({channels, h, w});
  for (int64_t c = 0; c < channels; ++c) {
    for (int64_t y = 0; y < h; ++y) {
      for (int64_t x = 0; x < w; ++x) out(c, y, x) = image.at(c, y, w - 1 - x);
    }
  }
  return ImageTensor(std::move(out));
}

namespace {

ImageTensor crop(const ImageTensor& image, int64_t top, int64_t left, int64_t h, int64_t w) {
  TensorF out({image.channels(), h, w});
  for (int64_t c = 0; c < image.channels(); ++c) {
    for (int64_t y = 0; y < h; ++y) {
      for (int64_t x = 0; x < w; ++x) out(c, y, x) = image.at(c, top + y, left + x);
    }
  }
  return ImageTensor(std::move(out));
}

float luma(const ImageTensor& image, int64_t y, int64_t x) {
  if (image.channels() < 3) return image.at(0, y, x);
  return 0.299f * image.at(0, y, x) + 0.587f * image.at(1, y, x) + 0.114f * image.at(2, y, x);
}

void apply_color_jitter(ImageTensor& image, float strength, RngStream& rng) {
  const float lo = std::max(0.0f, 1.0f - strength);
  const float hi = 1.0f + strength;
  const float brightness = static_cast<float>(rng.uniform(lo, hi));
  const float contrast = static_cast<float>(rng.uniform(lo, hi));
  const float saturation = static_cast<float>(rng.uniform(lo, hi));

  TensorF& px = image.pixels();
  for (int64_t i = 0; i < px.numel(); ++i) px[i] *= brightness;

  double mean = 0.0;
  for (int64_t y = 0; y < image.height(); ++y) {
    for (int64_t x = 0; x < image.width(); ++x) mean += luma(image, y, x);
  }
  mean /= static_cast<double>(image.height() * image.width());
  const float m = static_cast<float>(mean);
  for (int64_t i = 0; i < px.numel(); ++i) px[i] = m + contrast * (px[i] - m);

  if (image.channels() >= 3) {
    for (int64_t y = 0; y < image.height(); ++y) {
      for (int64_t x = 0; x < image.width(); ++x) {
        const float g = luma(image, y, x);
        for (int64_t c = 0; c < image.channels(); ++c) {
          image.at(c, y, x) = g + saturation * (image.at(c, y, x) - g);
        }
      }
    }
  }
}

void apply_grayscale(ImageTensor& image) {
  if (image.channels() < 3) return;
  for (int64_t y = 0; y < image.height(); ++y) {
    for (int64_t x = 0; x < image.width(); ++x) {
      const float g = luma(image, y, x);
      for (int64_t c = 0; c < image.channels(); ++c) image.at(c, y, x) = g;
    }
  }
}

// Separable gaussian with edge clamping.
void apply_blur(ImageTensor& image, int kernel, float sigma) {
  const int r = kernel / 2;
  std::vector<float> k(static_cast<size_t>(kernel));
  float sum = 0.0f;
  for (int i = -r; i <= r; ++i) {
    const float v = std::exp(-0.5f * static_cast<float>(i * i) / (sigma * sigma));
    k[static_cast<size_t>(i + r)] = v;
    sum += v;
  }
  for (float& v : k) v /= sum;

  const int64_t h = image.height();
  const int64_t w = image.width();
  TensorF tmp({image.channels(), h, w});
  for (int64_t c = 0; c < image.channels(); ++c) {
    for (int64_t y = 0; y < h; ++y) {
      for (int64_t x = 0; x < w; ++x) {
        float acc = 0.0f;
        for (int i = -r; i <= r; ++i) {
          const int64_t xx = std::min(std::max<int64_t>(x + i, 0), w - 1);
          acc += k[static_cast<size_t>(i + r)] * image.at(c, y, xx);
        }
        tmp(c, y, x) = acc;
      }
    }
  }
  for (int64_t c = 0; c < image.channels(); ++c) {
    for (int64_t y = 0; y < h; ++y) {
      for (int64_t x = 0; x < w; ++x) {
        float acc = 0.0f;
        for (int i = -r; i <= r; ++i) {
          const int64_t yy = std::min(std::max<int64_t>(y + i, 0), h - 1);
          acc += k[static_cast<size_t>(i + r)] * tmp(c, yy, x);
        }
        image.at(c, y, x) = acc;
      }
    }
  }
}

}  // namespace

ImageTensor augment(const ImageTensor& image, const AugmentationSpec& spec, RngStream& rng) {
  spec.validate();
  if (image.height() < ImageTensor::kMinSide || image.width() < ImageTensor::kMinSide) {
    throw InvalidInput("image smaller than minimum crop size");
  }

  // Area-scaled crop, aspect preserved.
  ImageTensor out = image;
  if (spec.crop_scale_min < 1.0f || spec.crop_scale_max < 1.0f) {
    const double scale = rng.uniform(spec.crop_scale_min, spec.crop_scale_max);
    const double side = std::sqrt(scale);
    int64_t ch = std::max<int64_t>(1, static_cast<int64_t>(std::lround(side * image.height())));
    int64_t cw = std::max<int64_t>(1, static_cast<int64_t>(std::lround(side * image.width())));
    ch = std::min(ch, image.height());
    cw = std::min(cw, image.width());
    const int64_t top = rng.uniform_int(image.height() - ch + 1);
    const int64_t left = rng.uniform_int(image.width() - cw + 1);
    if (ch != image.height() || cw != image.width()) out = crop(out, top, left, ch, cw);
  }
  out = resize_bilinear(out, spec.out_height, spec.out_width);

  if (spec.flip_probability > 0.0f && rng.bernoulli(spec.flip_probability)) {
    out = horizontal_flip(out);
  }
  if (spec.color_jitter) apply_color_jitter(out, spec.color_jitter_strength, rng);
  if (spec.grayscale_probability > 0.0f && rng.bernoulli(spec.grayscale_probability)) {
    apply_grayscale(out);
  }
  if (spec.gaussian_blur) {
    const float sigma = static_cast<float>(rng.uniform(spec.blur_sigma_min, spec.blur_sigma_max));
    apply_blur(out, spec.blur_kernel, sigma);
  }
  out.clamp01();
  return out;
}

}  // namespace mixssl::data
