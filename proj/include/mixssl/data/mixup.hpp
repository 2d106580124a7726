#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mixssl/data/augment.hpp"
#include "mixssl/data/dataset.hpp"

namespace mixssl::data {

// Mix ratio source. lambda is drawn from Beta(alpha, alpha); alpha = 1 gives
// Uniform(0,1). The stream is keyed by (seed, batch_index), so draws do not
// depend on call order. Orientation: lambda is the weight on the *auxiliary*
// image, i.e. the auxiliary content's opacity in the mixed result, and is
// what the transparency head regresses.
struct LambdaSampler {
  enum class Mode { PerBatch, PerSample };

  double alpha = 1.0;
  Mode mode = Mode::PerBatch;
  uint64_t seed = 0;

  // Diagnostic override: emit this exact value instead of drawing.
  std::optional<float> fixed_lambda;

  void validate() const;
};

std::vector<float> sample_lambda(const LambdaSampler& sampler, int64_t batch_size,
                                 int64_t batch_index);

// x_mix = (1 - lambda) * target + lambda * aux, elementwise. lambda in [0,1];
// endpoints reproduce the corresponding input exactly.
ImageTensor mix(const ImageTensor& target, const ImageTensor& aux, float lambda);

// One pretraining batch: mixed inputs, the augmented targets used in the mix
// (the reconstruction ground truth), per-sample lambda, and the class labels
// of the mixed-in auxiliary images when available. `second_view` is an extra
// independently augmented copy of each mixed image, produced on request for
// the contrastive objective.
struct MixedBatch {
  TensorF mixed;    // (batch, channels, h, w)
  TensorF target;   // same shape
  std::vector<float> lambda;
  std::optional<std::vector<int>> aux_labels;
  std::optional<TensorF> second_view;

  int64_t batch_size() const { return mixed.rank() == 4 ? mixed.dim(0) : 0; }
};

// Assembles the batch at `batch_index`: targets are taken in sequence order
// (the caller shuffles per epoch), each augmented once and mixed with a
// uniformly chosen augmented auxiliary image. All randomness is a pure
// function of (data_seed, batch_index) plus the sampler's own keyed stream,
// so batches replay exactly. batch_index maps onto the target sequence
// modulo its epoch length; the final partial batch is kept.
// `order`, when non-null, is a permutation of target indices giving the epoch
// ordering (the trainer reshuffles it once per epoch).
MixedBatch make_pretrain_batch(const std::vector<LabeledImage>& targets,
                               const std::vector<LabeledImage>& auxiliaries,
                               const AugmentationSpec& spec, const LambdaSampler& sampler,
                               int64_t batch_size, int64_t batch_index, uint64_t data_seed,
                               bool second_view = false,
                               const std::vector<int64_t>* order = nullptr);

}  // namespace mixssl::data
