#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "mixssl/data/mixup.hpp"
#include "mixssl/data/synthetic.hpp"
#include "mixssl/nn/checkpoint.hpp"
#include "mixssl/objectives/losses.hpp"
#include "mixssl/train/optimizer.hpp"

namespace mixssl::train {

struct TrainState {
  nn::ModelBundleF model;
  AdamWF optimizer;
  int64_t epoch = 0;        // completed epochs
  int64_t global_step = 0;  // optimizer updates performed
  uint64_t seed = 0;
  std::vector<objectives::LossReport> loss_history;
  std::filesystem::path final_checkpoint;  // empty when checkpointing disabled
};

struct PretrainConfig {
  nn::ModelConfig model;
  OptimizerSpec optimizer;
  objectives::LossWeights weights;
  objectives::PretextSelection selection;
  double lambda_alpha = 1.0;
  data::LambdaSampler::Mode lambda_mode = data::LambdaSampler::Mode::PerBatch;
  data::AugmentationSpec augmentation;  // output size must match the model
  uint64_t seed = 0;
  std::filesystem::path output_dir;  // empty: no checkpoints, no log files
  std::optional<std::filesystem::path> resume_from;
};

// Self-supervised pretraining on mixed batches. Writes per-epoch checkpoints
// plus `checkpoints/final`, and one JSON line per step to `train_log.jsonl`
// under output_dir. Deterministic: identical inputs and seed reproduce the
// loss history and final parameters bitwise.
TrainState pretrain(const data::Dataset& target, const data::Dataset& aux,
                    const PretrainConfig& cfg);

enum class FinetuneMode { LinearProbe, Full };
std::string to_string(FinetuneMode mode);
FinetuneMode finetune_mode_from_string(const std::string& s);

struct FinetuneConfig {
  OptimizerSpec optimizer;
  FinetuneMode mode = FinetuneMode::Full;
  uint64_t seed = 0;
  std::filesystem::path output_dir;
  // nullopt: basic augmentation for Full, deterministic resize for LinearProbe.
  std::optional<data::AugmentationSpec> augmentation;
};

// Supervised stage: attaches a fresh linear classifier to the checkpointed
// encoder and trains with cross-entropy. LinearProbe freezes the encoder
// (bitwise); Full trains everything.
TrainState finetune(const std::filesystem::path& checkpoint_dir,
                    const data::Dataset& train_data, const FinetuneConfig& cfg);

// Same, starting from an in-memory bundle (e.g. a random-init baseline).
TrainState finetune_bundle(nn::ModelBundleF bundle, const data::Dataset& train_data,
                           const FinetuneConfig& cfg);

// One optimizer update on the given batch. Aborts with NumericError (step,
// per-component losses, lambda values) if the loss goes non-finite.
objectives::LossReport training_step(TrainState& state, const data::MixedBatch& batch,
                                     const objectives::LossWeights& weights,
                                     const objectives::PretextSelection& selection);

// Deterministic evaluation transform + encode of a whole dataset.
TensorF encode_dataset(nn::ModelBundleF& bundle, const data::Dataset& dataset);

}  // namespace mixssl::train
