#pragma once

#include <cstdint>

#include "mixssl/data/dataset.hpp"

namespace mixssl::data {

// Desk-scale stand-in corpora. The target corpus is contrast-agnostic: every
// image shares one smooth background template; classes differ only by a fixed
// low-amplitude blob constellation scaled by contrast_level, plus per-image
// brightness jitter and pixel noise. The auxiliary corpus is the opposite:
// high-variance procedural textures (stripes, checkers, rings, gradients,
// noise fields) with the texture family as class label.
struct SyntheticSpec {
  int class_count = 4;
  int per_class = 200;
  int64_t height = 32;
  int64_t width = 32;
  float contrast_level = 0.2f;
  uint64_t seed = 0;

  int aux_class_count = 10;
  int aux_per_class = 80;

  // Per-image nuisance on the target corpus.
  float brightness_jitter = 0.05f;
  float pixel_noise = 0.02f;

  void validate() const;
};

struct SyntheticCorpora {
  Dataset target;
  Dataset aux;
};

SyntheticCorpora generate_synthetic(const SyntheticSpec& spec);

// Convenience overload with default auxiliary sizing.
SyntheticCorpora generate_synthetic(int class_count, int per_class, int64_t height, int64_t width,
                                    float contrast_level, uint64_t seed);

// Mean pairwise pixel L2 distance (RMS over pixels), the corpus dispersion
// statistic. Sampled over at most `max_pairs` deterministic pairs.
double mean_pairwise_distance(const Dataset& dataset, int64_t max_pairs = 2000);

}  // namespace mixssl::data
