#include "mixssl/data/mixup.hpp"

#include <cmath>
#include <cstring>

#include "mixssl/core/errors.hpp"
#include "mixssl/core/rng.hpp"
#include "mixssl/kernels/kernels.hpp"

namespace mixssl::data {

namespace {

// Sub-stream tags for the per-batch derivations.
constexpr uint64_t kTagLambda = 0x6c616d;
constexpr uint64_t kTagPairing = 0x706169;
constexpr uint64_t kTagTargetAug = 0x746175;
constexpr uint64_t kTagAuxAug = 0x616175;
constexpr uint64_t kTagSecondView = 0x766965;

}  // namespace

void LambdaSampler::validate() const {
  if (!(alpha > 0.0)) throw ConfigError("lambda sampler alpha must be > 0");
  if (fixed_lambda && !(*fixed_lambda >= 0.0f && *fixed_lambda <= 1.0f)) {
    throw ConfigError("fixed_lambda outside [0,1]");
  }
}

std::vector<float> sample_lambda(const LambdaSampler& sampler, int64_t batch_size,
                                 int64_t batch_index) {
  sampler.validate();
  if (batch_size < 1) throw InvalidInput("batch_size must be >= 1");
  std::vector<float> out(static_cast<size_t>(batch_size));
  if (sampler.fixed_lambda) {
    std::fill(out.begin(), out.end(), *sampler.fixed_lambda);
    return out;
  }
  RngStream stream =
      RngStream(sampler.seed).derive(kTagLambda, static_cast<uint64_t>(batch_index));
  if (sampler.mode == LambdaSampler::Mode::PerBatch) {
    const float lam = static_cast<float>(stream.beta(sampler.alpha, sampler.alpha));
    std::fill(out.begin(), out.end(), lam);
  } else {
    for (auto& v : out) v = static_cast<float>(stream.beta(sampler.alpha, sampler.alpha));
  }
  return out;
}

ImageTensor mix(const ImageTensor& target, const ImageTensor& aux, float lambda) {
  if (!target.same_shape(aux)) {
    throw InvalidInput("mix: shape mismatch " + target.pixels().shape_str() + " vs " +
                       aux.pixels().shape_str());
  }
  if (!(lambda >= 0.0f && lambda <= 1.0f)) throw InvalidInput("mix: lambda outside [0,1]");
  TensorF out(target.pixels().shape());
  kernels::mix(out.numel(), lambda, target.pixels().data(), aux.pixels().data(), out.data());
  return ImageTensor(std::move(out));
}

MixedBatch make_pretrain_batch(const std::vector<LabeledImage>& targets,
                               const std::vector<LabeledImage>& auxiliaries,
                               const AugmentationSpec& spec, const LambdaSampler& sampler,
                               int64_t batch_size, int64_t batch_index, uint64_t data_seed,
                               bool second_view, const std::vector<int64_t>* order) {
  if (targets.empty()) throw ConfigError("make_pretrain_batch: empty target set");
  if (auxiliaries.empty()) throw ConfigError("make_pretrain_batch: empty auxiliary set");
  if (batch_size < 1) throw InvalidInput("batch_size must be >= 1");
  if (order && order->size() != targets.size()) {
    throw InvalidInput("make_pretrain_batch: order must be a permutation of target indices");
  }
  spec.validate();

  const int64_t n = static_cast<int64_t>(targets.size());
  const int64_t steps_per_epoch = (n + batch_size - 1) / batch_size;
  const int64_t start = (batch_index % steps_per_epoch) * batch_size;
  const int64_t count = std::min(batch_size, n - start);

  const std::vector<float> lambda = sample_lambda(sampler, count, batch_index);

  const RngStream base(data_seed);
  RngStream pairing = base.derive(kTagPairing, static_cast<uint64_t>(batch_index));

  MixedBatch batch;
  batch.lambda = lambda;
  bool have_aux_labels = true;
  std::vector<int> aux_labels(static_cast<size_t>(count));

  for (int64_t i = 0; i < count; ++i) {
    const int64_t tidx = order ? (*order)[static_cast<size_t>(start + i)] : start + i;
    const LabeledImage& target_item = targets[static_cast<size_t>(tidx)];
    const int64_t aux_idx = pairing.uniform_int(static_cast<int64_t>(auxiliaries.size()));
    const LabeledImage& aux_item = auxiliaries[static_cast<size_t>(aux_idx)];

    RngStream t_rng = base.derive(kTagTargetAug, static_cast<uint64_t>(batch_index),
                                  static_cast<uint64_t>(i));
    RngStream a_rng =
        base.derive(kTagAuxAug, static_cast<uint64_t>(batch_index), static_cast<uint64_t>(i));
    const ImageTensor aug_target = augment(target_item.image, spec, t_rng);
    const ImageTensor aug_aux = augment(aux_item.image, spec, a_rng);
    const ImageTensor mixed = mix(aug_target, aug_aux, lambda[static_cast<size_t>(i)]);

    if (i == 0) {
      const auto s = mixed.pixels().shape();
      batch.mixed = TensorF({count, s[0], s[1], s[2]});
      batch.target = TensorF({count, s[0], s[1], s[2]});
    }
    const int64_t stride = mixed.pixels().numel();
    std::memcpy(batch.mixed.data() + i * stride, mixed.pixels().data(),
                static_cast<size_t>(stride) * sizeof(float));
    std::memcpy(batch.target.data() + i * stride, aug_target.pixels().data(),
                static_cast<size_t>(stride) * sizeof(float));

    if (aux_item.label.has_value()) {
      aux_labels[static_cast<size_t>(i)] = *aux_item.label;
    } else {
      have_aux_labels = false;
    }

    if (second_view) {
      RngStream v_rng = base.derive(kTagSecondView, static_cast<uint64_t>(batch_index),
                                    static_cast<uint64_t>(i));
      AugmentationSpec view_spec = spec;
      view_spec.out_height = mixed.height();
      view_spec.out_width = mixed.width();
      const ImageTensor view = augment(mixed, view_spec, v_rng);
      if (i == 0) {
        batch.second_view = TensorF(batch.mixed.shape());
      }
      std::memcpy(batch.second_view->data() + i * stride, view.pixels().data(),
                  static_cast<size_t>(stride) * sizeof(float));
    }
  }
  if (have_aux_labels) batch.aux_labels = std::move(aux_labels);
  return batch;
}

}  // namespace mixssl::data
