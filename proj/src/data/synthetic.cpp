#include "mixssl/data/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "mixssl/core/errors.hpp"
#include "mixssl/core/rng.hpp"
#include "mixssl/kernels/kernels.hpp"

namespace mixssl::data {

namespace {

constexpr uint64_t kTagBackground = 0x6267;
constexpr uint64_t kTagClass = 0x636c73;
constexpr uint64_t kTagImage = 0x696d67;
constexpr uint64_t kTagAux = 0x617578;

struct Blob {
  float cy, cx, radius, amplitude;
  float channel_weight[3];
};

// Shared smooth background, mid-gray plus a few low-frequency waves.
ImageTensor make_background(int64_t h, int64_t w, RngStream rng) {
  ImageTensor bg = ImageTensor::zeros(3, h, w);
  struct Wave {
    float fy, fx, phase, amp;
  };
  std::vector<std::vector<Wave>> waves(3);
  for (int c = 0; c < 3; ++c) {
    for (int j = 0; j < 3; ++j) {
      waves[c].push_back({static_cast<float>(rng.uniform(0.5, 2.5)),
                          static_cast<float>(rng.uniform(0.5, 2.5)),
                          static_cast<float>(rng.uniform(0.0, 2.0 * M_PI)),
                          static_cast<float>(rng.uniform(0.02, 0.06))});
    }
  }
  for (int c = 0; c < 3; ++c) {
    for (int64_t y = 0; y < h; ++y) {
      for (int64_t x = 0; x < w; ++x) {
        float v = 0.5f;
        for (const Wave& wv : waves[static_cast<size_t>(c)]) {
          v += wv.amp * std::sin(2.0f * static_cast<float>(M_PI) *
                                     (wv.fy * static_cast<float>(y) / static_cast<float>(h) +
                                      wv.fx * static_cast<float>(x) / static_cast<float>(w)) +
                                 wv.phase);
        }
        bg.at(c, y, x) = v;
      }
    }
  }
  return bg;
}

// Fixed per-class structure: a blob constellation with peak magnitude 1.
ImageTensor make_class_pattern(int64_t h, int64_t w, RngStream rng) {
  std::vector<Blob> blobs;
  const int blob_count = 5;
  for (int k = 0; k < blob_count; ++k) {
    Blob b;
    b.cy = static_cast<float>(rng.uniform(0.15, 0.85) * static_cast<double>(h));
    b.cx = static_cast<float>(rng.uniform(0.15, 0.85) * static_cast<double>(w));
    b.radius = static_cast<float>(rng.uniform(static_cast<double>(h) / 12.0,
                                              static_cast<double>(h) / 5.0));
    b.amplitude = static_cast<float>(rng.uniform(0.6, 1.0)) * (rng.bernoulli(0.5) ? 1.0f : -1.0f);
    for (int c = 0; c < 3; ++c) b.channel_weight[c] = static_cast<float>(rng.uniform(0.2, 1.0));
    blobs.push_back(b);
  }
  ImageTensor pattern = ImageTensor::zeros(3, h, w);
  float peak = 0.0f;
  for (int c = 0; c < 3; ++c) {
    for (int64_t y = 0; y < h; ++y) {
      for (int64_t x = 0; x < w; ++x) {
        float v = 0.0f;
        for (const Blob& b : blobs) {
          const float dy = static_cast<float>(y) - b.cy;
          const float dx = static_cast<float>(x) - b.cx;
          v += b.amplitude * b.channel_weight[c] *
               std::exp(-0.5f * (dy * dy + dx * dx) / (b.radius * b.radius));
        }
        pattern.at(c, y, x) = v;
        peak = std::max(peak, std::fabs(v));
      }
    }
  }
  if (peak > 0.0f) {
    for (int64_t i = 0; i < pattern.pixels().numel(); ++i) pattern.pixels()[i] /= peak;
  }
  return pattern;
}

ImageTensor make_target_image(const ImageTensor& background, const ImageTensor& pattern,
                              float contrast_level, float brightness_jitter, float pixel_noise,
                              RngStream rng) {
  const float delta =
      static_cast<float>(rng.uniform(-brightness_jitter, brightness_jitter));
  ImageTensor img = background;
  const float amp = 0.5f * contrast_level;
  for (int64_t i = 0; i < img.pixels().numel(); ++i) {
    img.pixels()[i] += amp * pattern.pixels()[i] + delta +
                       static_cast<float>(rng.normal(0.0, pixel_noise));
  }
  img.clamp01();
  return img;
}

float fractf(float v) { return v - std::floor(v); }

// Procedural texture families; `family` is the auxiliary class label.
ImageTensor make_aux_image(int64_t h, int64_t w, int family, RngStream rng) {
  // Two random endpoint colors; the pattern interpolates between them.
  float c0[3], c1[3];
  for (int c = 0; c < 3; ++c) {
    c0[c] = static_cast<float>(rng.uniform());
    c1[c] = static_cast<float>(rng.uniform());
  }
  const float freq = static_cast<float>(rng.uniform(2.0, 8.0));
  const float phase = static_cast<float>(rng.uniform(0.0, 2.0 * M_PI));
  const float cy = static_cast<float>(rng.uniform(0.2, 0.8) * static_cast<double>(h));
  const float cx = static_cast<float>(rng.uniform(0.2, 0.8) * static_cast<double>(w));
  const float angle = static_cast<float>(rng.uniform(0.0, M_PI));
  const int64_t cell = 2 + rng.uniform_int(std::max<int64_t>(2, w / 4 - 2));

  // Pre-draw structures for the stochastic families.
  std::vector<Blob> blobs;
  if (family == 5) {
    const int n = 8 + static_cast<int>(rng.uniform_int(8));
    for (int k = 0; k < n; ++k) {
      Blob b;
      b.cy = static_cast<float>(rng.uniform(0.0, static_cast<double>(h)));
      b.cx = static_cast<float>(rng.uniform(0.0, static_cast<double>(w)));
      b.radius = static_cast<float>(rng.uniform(static_cast<double>(h) / 16.0,
                                                static_cast<double>(h) / 6.0));
      b.amplitude = 1.0f;
      blobs.push_back(b);
    }
  }
  std::vector<float> grid;
  int64_t grid_res = 0;
  if (family == 6) {
    grid_res = 4 + rng.uniform_int(5);
    grid.resize(static_cast<size_t>((grid_res + 1) * (grid_res + 1)));
    for (auto& v : grid) v = static_cast<float>(rng.uniform());
  }
  std::vector<float> block_values;
  if (family == 9) {
    const int64_t blocks = ((h + 3) / 4) * ((w + 3) / 4);
    block_values.resize(static_cast<size_t>(blocks));
    for (auto& v : block_values) v = static_cast<float>(rng.uniform());
  }

  ImageTensor img = ImageTensor::zeros(3, h, w);
  const float rmax = 0.5f * std::sqrt(static_cast<float>(h * h + w * w));
  for (int64_t y = 0; y < h; ++y) {
    for (int64_t x = 0; x < w; ++x) {
      const float fy = static_cast<float>(y) / static_cast<float>(h);
      const float fx = static_cast<float>(x) / static_cast<float>(w);
      float t = 0.5f;
      switch (family) {
        case 0:
          t = 0.5f + 0.5f * std::sin(2.0f * static_cast<float>(M_PI) * freq * fy + phase);
          break;
        case 1:
          t = 0.5f + 0.5f * std::sin(2.0f * static_cast<float>(M_PI) * freq * fx + phase);
          break;
        case 2:
          t = 0.5f +
              0.5f * std::sin(2.0f * static_cast<float>(M_PI) * freq * (fx + fy) * 0.5f + phase);
          break;
        case 3:
          t = static_cast<float>(((y / cell) + (x / cell)) % 2);
          break;
        case 4: {
          const float dy = static_cast<float>(y) - cy;
          const float dx = static_cast<float>(x) - cx;
          const float r = std::sqrt(dy * dy + dx * dx);
          t = 0.5f + 0.5f * std::sin(2.0f * static_cast<float>(M_PI) * freq * r /
                                         static_cast<float>(std::max(h, w)) +
                                     phase);
          break;
        }
        case 5: {
          float v = 0.0f;
          for (const Blob& b : blobs) {
            const float dy = static_cast<float>(y) - b.cy;
            const float dx = static_cast<float>(x) - b.cx;
            v += std::exp(-0.5f * (dy * dy + dx * dx) / (b.radius * b.radius));
          }
          t = std::min(1.0f, v);
          break;
        }
        case 6: {
          const float gy = fy * static_cast<float>(grid_res);
          const float gx = fx * static_cast<float>(grid_res);
          const int64_t y0 = static_cast<int64_t>(gy);
          const int64_t x0 = static_cast<int64_t>(gx);
          const float wy = fractf(gy);
          const float wx = fractf(gx);
          auto g = [&](int64_t yy, int64_t xx) {
            return grid[static_cast<size_t>(yy * (grid_res + 1) + xx)];
          };
          t = (1 - wy) * ((1 - wx) * g(y0, x0) + wx * g(y0, x0 + 1)) +
              wy * ((1 - wx) * g(y0 + 1, x0) + wx * g(y0 + 1, x0 + 1));
          break;
        }
        case 7:
          t = fractf((fx * std::cos(angle) + fy * std::sin(angle)) + 1.0f);
          break;
        case 8: {
          const float dy = static_cast<float>(y) - cy;
          const float dx = static_cast<float>(x) - cx;
          t = std::min(1.0f, std::sqrt(dy * dy + dx * dx) / rmax);
          break;
        }
        default: {
          const int64_t bw = (w + 3) / 4;
          t = block_values[static_cast<size_t>((y / 4) * bw + (x / 4))];
          break;
        }
      }
      for (int c = 0; c < 3; ++c) {
        img.at(c, y, x) = c0[c] + t * (c1[c] - c0[c]);
      }
    }
  }
  for (int64_t i = 0; i < img.pixels().numel(); ++i) {
    img.pixels()[i] += static_cast<float>(rng.normal(0.0, 0.02));
  }
  img.clamp01();
  return img;
}

}  // namespace

void SyntheticSpec::validate() const {
  if (class_count < 2) throw ConfigError("synthetic class_count must be >= 2");
  if (per_class < 1) throw ConfigError("synthetic per_class must be >= 1");
  if (height < ImageTensor::kMinSide || width < ImageTensor::kMinSide) {
    throw ConfigError("synthetic image size below minimum");
  }
  if (!(contrast_level >= 0.0f && contrast_level <= 1.0f)) {
    throw ConfigError("contrast_level must be in [0,1]");
  }
  if (aux_class_count < 1 || aux_class_count > 10) {
    throw ConfigError("aux_class_count must be in [1,10]");
  }
  if (aux_per_class < 1) throw ConfigError("aux_per_class must be >= 1");
}

SyntheticCorpora generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const RngStream base(spec.seed);

  SyntheticCorpora corpora;
  const ImageTensor background =
      make_background(spec.height, spec.width, base.derive(kTagBackground));

  for (int c = 0; c < spec.class_count; ++c) {
    char name[16];
    std::snprintf(name, sizeof(name), "class_%02d", c);
    corpora.target.class_names.emplace_back(name);
  }
  for (int c = 0; c < spec.class_count; ++c) {
    const ImageTensor pattern =
        make_class_pattern(spec.height, spec.width, base.derive(kTagClass, static_cast<uint64_t>(c)));
    for (int i = 0; i < spec.per_class; ++i) {
      RngStream img_rng = base.derive(kTagImage, static_cast<uint64_t>(c), static_cast<uint64_t>(i));
      corpora.target.items.push_back(
          {make_target_image(background, pattern, spec.contrast_level, spec.brightness_jitter,
                             spec.pixel_noise, img_rng),
           c});
    }
  }

  static const char* kFamilyNames[10] = {"hstripes", "vstripes", "dstripes", "checker", "rings",
                                         "blobs",    "vnoise",   "lingrad",  "radgrad", "patches"};
  for (int f = 0; f < spec.aux_class_count; ++f) {
    corpora.aux.class_names.push_back(kFamilyNames[f]);
  }
  for (int f = 0; f < spec.aux_class_count; ++f) {
    for (int i = 0; i < spec.aux_per_class; ++i) {
      RngStream img_rng = base.derive(kTagAux, static_cast<uint64_t>(f), static_cast<uint64_t>(i));
      corpora.aux.items.push_back(
          {make_aux_image(spec.height, spec.width, f, img_rng), f});
    }
  }
  return corpora;
}

SyntheticCorpora generate_synthetic(int class_count, int per_class, int64_t height, int64_t width,
                                    float contrast_level, uint64_t seed) {
  SyntheticSpec spec;
  spec.class_count = class_count;
  spec.per_class = per_class;
  spec.height = height;
  spec.width = width;
  spec.contrast_level = contrast_level;
  spec.seed = seed;
  spec.aux_per_class = std::max(10, class_count * per_class / spec.aux_class_count);
  return generate_synthetic(spec);
}

double mean_pairwise_distance(const Dataset& dataset, int64_t max_pairs) {
  const int64_t n = dataset.size();
  if (n < 2) return 0.0;
  RngStream rng(12345);
  double total = 0.0;
  int64_t pairs = 0;
  const int64_t all_pairs = n * (n - 1) / 2;
  if (all_pairs <= max_pairs) {
    for (int64_t i = 0; i < n; ++i) {
      for (int64_t j = i + 1; j < n; ++j) {
        const TensorF& a = dataset.items[static_cast<size_t>(i)].image.pixels();
        const TensorF& b = dataset.items[static_cast<size_t>(j)].image.pixels();
        total += std::sqrt(kernels::squared_diff_sum(a.numel(), a.data(), b.data()) /
                           static_cast<double>(a.numel()));
        ++pairs;
      }
    }
  } else {
    for (int64_t p = 0; p < max_pairs; ++p) {
      const int64_t i = rng.uniform_int(n);
      int64_t j = rng.uniform_int(n - 1);
      if (j >= i) ++j;
      const TensorF& a = dataset.items[static_cast<size_t>(i)].image.pixels();
      const TensorF& b = dataset.items[static_cast<size_t>(j)].image.pixels();
      total += std::sqrt(kernels::squared_diff_sum(a.numel(), a.data(), b.data()) /
                         static_cast<double>(a.numel()));
      ++pairs;
    }
  }
  return total / static_cast<double>(pairs);
}

}  // namespace mixssl::data
