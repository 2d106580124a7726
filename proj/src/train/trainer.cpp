#include "mixssl/train/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "mixssl/core/errors.hpp"
#include "mixssl/data/augment.hpp"
#include "mixssl/kernels/kernels.hpp"

namespace fs = std::filesystem;

namespace mixssl::train {

namespace {

constexpr uint64_t kTagLambdaSeed = 0x6c616d62;
constexpr uint64_t kTagDataSeed = 0x64617461;
constexpr uint64_t kTagShuffle = 0x73687566;
constexpr uint64_t kTagHeadInit = 0x68656164;
constexpr uint64_t kTagFinetuneAug = 0x66746175;

std::string json_line(const objectives::LossReport& report) {
  nlohmann::json j;
  j["step"] = report.step;
  j["reconstruction"] = report.reconstruction;
  j["transparency"] = report.transparency;
  j["total"] = report.total;
  j["extras"] = report.extras;
  return j.dump();
}

fs::path epoch_checkpoint_dir(const fs::path& root, int64_t epoch) {
  char name[32];
  std::snprintf(name, sizeof(name), "epoch_%03lld", static_cast<long long>(epoch));
  return root / "checkpoints" / name;
}

void save_training_checkpoint(const TrainState& state, const fs::path& dir) {
  nn::CheckpointMeta meta;
  meta.epoch = state.epoch;
  meta.seed = state.seed;
  meta.optimizer_steps = state.optimizer.step_count();
  nn::save_checkpoint(state.model, dir, meta);

  const AdamWF::State opt = state.optimizer.export_state();
  std::vector<std::pair<std::string, const TensorF*>> tensors;
  for (size_t i = 0; i < opt.names.size(); ++i) {
    tensors.emplace_back("m:" + opt.names[i], &opt.m[i]);
    tensors.emplace_back("v:" + opt.names[i], &opt.v[i]);
  }
  nn::write_tensor_file(dir / "optimizer.bin", tensors);
}

void load_optimizer_state(AdamWF& optimizer, const fs::path& dir, int64_t steps) {
  const fs::path path = dir / "optimizer.bin";
  if (!fs::is_regular_file(path)) {
    throw IncompatibleCheckpoint("checkpoint has no optimizer state, cannot resume: " +
                                 dir.string());
  }
  std::map<std::string, TensorF> tensors = nn::read_tensor_file(path);
  AdamWF::State state;
  state.step_count = steps;
  for (const auto& p : optimizer.params()) {
    auto mi = tensors.find("m:" + p->name);
    auto vi = tensors.find("v:" + p->name);
    if (mi == tensors.end() || vi == tensors.end()) {
      throw IncompatibleCheckpoint("optimizer state missing tensors for " + p->name);
    }
    state.names.push_back(p->name);
    state.m.push_back(std::move(mi->second));
    state.v.push_back(std::move(vi->second));
  }
  optimizer.import_state(state);
}

// Images resized (deterministically, no randomness) into a model input batch.
TensorF images_to_batch(const std::vector<const data::ImageTensor*>& images,
                        const nn::ModelConfig& cfg) {
  const int64_t count = static_cast<int64_t>(images.size());
  TensorF out({count, cfg.channels, cfg.image_h, cfg.image_w});
  for (int64_t i = 0; i < count; ++i) {
    const data::ImageTensor resized =
        data::resize_bilinear(*images[static_cast<size_t>(i)], cfg.image_h, cfg.image_w);
    std::memcpy(out.data() + i * resized.pixels().numel(), resized.pixels().data(),
                static_cast<size_t>(resized.pixels().numel()) * sizeof(float));
  }
  return out;
}

}  // namespace

objectives::LossReport training_step(TrainState& state, const data::MixedBatch& batch,
                                     const objectives::LossWeights& weights,
                                     const objectives::PretextSelection& selection) {
  objectives::PretextSelection effective = selection;
  if (batch.batch_size() < 2) effective.contrastive = false;  // needs >= 2 samples
  effective.validate();

  state.model.zero_grad();
  objectives::LossReport report =
      objectives::pretrain_loss(state.model, batch, weights, effective,
                                objectives::GradMode::Backward);
  report.step = state.global_step + 1;
  if (!report.finite()) {
    std::ostringstream os;
    os << "non-finite loss at step " << report.step << ": reconstruction="
       << report.reconstruction << " transparency=" << report.transparency;
    for (const auto& [k, v] : report.extras) os << " " << k << "=" << v;
    os << " lambda=[";
    for (size_t i = 0; i < batch.lambda.size(); ++i) {
      if (i) os << ",";
      os << batch.lambda[i];
    }
    os << "]";
    throw NumericError(os.str());
  }
  state.optimizer.step();
  state.global_step += 1;
  state.loss_history.push_back(report);
  return report;
}

TrainState pretrain(const data::Dataset& target, const data::Dataset& aux,
                    const PretrainConfig& cfg) {
  cfg.optimizer.validate();
  cfg.weights.validate();
  cfg.selection.validate();
  if (target.items.empty()) throw ConfigError("pretrain: target dataset is empty");
  if (aux.items.empty()) throw ConfigError("pretrain: auxiliary dataset is empty");
  if (cfg.selection.contrastive && !cfg.selection.reconstruction &&
      !cfg.selection.transparency && !cfg.selection.aux_label &&
      cfg.optimizer.batch_size < 2) {
    throw ConfigError("pretrain: contrastive-only selection needs batch_size >= 2");
  }
  if (cfg.augmentation.out_height != cfg.model.image_h ||
      cfg.augmentation.out_width != cfg.model.image_w) {
    throw ConfigError("pretrain: augmentation output size must match the model image size");
  }

  nn::ModelConfig model_cfg = cfg.model;
  if (cfg.selection.aux_label) model_cfg.aux_class_count = aux.class_count();
  const nn::Components components = cfg.selection.components();

  TrainState state;
  state.seed = cfg.seed;
  int64_t start_epoch = 0;
  if (cfg.resume_from) {
    if (!nn::is_checkpoint_dir(*cfg.resume_from)) {
      throw CheckpointError("resume checkpoint not found: " + cfg.resume_from->string());
    }
    state.model = nn::load_checkpoint(*cfg.resume_from, model_cfg);
    if (!(state.model.components == components)) {
      throw IncompatibleCheckpoint("resume checkpoint components do not match the selection");
    }
    const nn::CheckpointMeta meta = nn::read_checkpoint_meta(*cfg.resume_from);
    start_epoch = meta.epoch;
    state.epoch = meta.epoch;
    state.global_step = meta.optimizer_steps >= 0 ? meta.optimizer_steps : 0;
    state.optimizer = AdamWF(state.model.parameters(), cfg.optimizer);
    load_optimizer_state(state.optimizer, *cfg.resume_from, state.global_step);
  } else {
    state.model = nn::build_models<float>(model_cfg, components, cfg.seed);
    state.optimizer = AdamWF(state.model.parameters(), cfg.optimizer);
  }

  data::LambdaSampler sampler;
  sampler.alpha = cfg.lambda_alpha;
  sampler.mode = cfg.lambda_mode;
  sampler.seed = RngStream(cfg.seed).derive(kTagLambdaSeed).base_seed();
  const uint64_t data_seed = RngStream(cfg.seed).derive(kTagDataSeed).base_seed();

  const int64_t n = target.size();
  const int64_t batch_size = cfg.optimizer.batch_size;
  const int64_t steps_per_epoch = (n + batch_size - 1) / batch_size;

  std::ofstream log;
  if (!cfg.output_dir.empty()) {
    fs::create_directories(cfg.output_dir);
    log.open(cfg.output_dir / "train_log.jsonl", std::ios::app);
  }

  std::vector<int64_t> order(static_cast<size_t>(n));
  for (int64_t epoch = start_epoch; epoch < cfg.optimizer.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    RngStream shuffle_rng = RngStream(cfg.seed).derive(kTagShuffle, static_cast<uint64_t>(epoch));
    shuffle_rng.shuffle(order);
    for (int64_t s = 0; s < steps_per_epoch; ++s) {
      const int64_t batch_index = epoch * steps_per_epoch + s;
      const data::MixedBatch batch = data::make_pretrain_batch(
          target.items, aux.items, cfg.augmentation, sampler, batch_size, batch_index, data_seed,
          cfg.selection.contrastive, &order);
      const objectives::LossReport report =
          training_step(state, batch, cfg.weights, cfg.selection);
      if (log.is_open()) log << json_line(report) << "\n";
    }
    state.epoch = epoch + 1;
    if (!cfg.output_dir.empty()) {
      save_training_checkpoint(state, epoch_checkpoint_dir(cfg.output_dir, epoch + 1));
    }
  }
  if (log.is_open()) log.flush();
  if (!cfg.output_dir.empty()) {
    const fs::path final_dir = cfg.output_dir / "checkpoints" / "final";
    save_training_checkpoint(state, final_dir);
    state.final_checkpoint = final_dir;
  }
  return state;
}

std::string to_string(FinetuneMode mode) {
  return mode == FinetuneMode::LinearProbe ? "probe" : "full";
}

FinetuneMode finetune_mode_from_string(const std::string& s) {
  if (s == "probe" || s == "linear-probe") return FinetuneMode::LinearProbe;
  if (s == "full") return FinetuneMode::Full;
  throw ConfigError("unknown finetune mode: " + s + " (expected probe|full)");
}

TrainState finetune_bundle(nn::ModelBundleF bundle, const data::Dataset& train_data,
                           const FinetuneConfig& cfg) {
  cfg.optimizer.validate();
  if (train_data.items.empty()) throw ConfigError("finetune: dataset is empty");
  for (const auto& item : train_data.items) {
    if (!item.label) throw ConfigError("finetune: dataset has unlabeled items");
  }
  const int class_count = train_data.class_count();
  if (class_count < 2) throw ConfigError("finetune: need at least 2 classes");
  if (bundle.config.class_count && *bundle.config.class_count != class_count) {
    throw ConfigError("finetune: checkpoint class_count " +
                      std::to_string(*bundle.config.class_count) + " does not match dataset (" +
                      std::to_string(class_count) + ")");
  }

  // Keep only encoder + fresh classifier; pretext heads are not fine-tuned.
  bundle.config.class_count = class_count;
  bundle.components = nn::Components{};
  bundle.components.classifier = true;
  bundle.decoder = nn::Sequential<float>();
  bundle.transparency_head = nn::Sequential<float>();
  bundle.projection = nn::Sequential<float>();
  bundle.aux_classifier = nn::Sequential<float>();
  bundle.classifier = nn::Sequential<float>();
  bundle.classifier.add(
      std::make_unique<nn::Linear<float>>("cls.fc", bundle.config.feature_dim, class_count));
  RngStream head_rng = RngStream(cfg.seed).derive(kTagHeadInit);
  bundle.classifier.init(head_rng);

  const bool full = cfg.mode == FinetuneMode::Full;

  TrainState state;
  state.seed = cfg.seed;
  state.model = std::move(bundle);
  std::vector<nn::ParamPtr<float>> trainable;
  if (full) {
    trainable = state.model.parameters();
  } else {
    state.model.classifier.collect_params(trainable);
  }
  state.optimizer = AdamWF(trainable, cfg.optimizer);

  std::optional<data::AugmentationSpec> aug = cfg.augmentation;
  if (!aug && full) {
    aug = data::AugmentationSpec::basic(state.model.config.image_h, state.model.config.image_w);
  }
  if (aug && (aug->out_height != state.model.config.image_h ||
              aug->out_width != state.model.config.image_w)) {
    throw ConfigError("finetune: augmentation output size must match the model image size");
  }

  const int64_t n = train_data.size();
  const int64_t batch_size = std::min<int64_t>(cfg.optimizer.batch_size, n);
  const int64_t steps_per_epoch = (n + batch_size - 1) / batch_size;

  // Frozen encoder without augmentation: features are fixed, encode once.
  TensorF cached_features;
  if (!full && !aug) cached_features = encode_dataset(state.model, train_data);

  std::ofstream log;
  if (!cfg.output_dir.empty()) {
    fs::create_directories(cfg.output_dir);
    log.open(cfg.output_dir / "train_log.jsonl", std::ios::app);
  }

  std::vector<int64_t> order(static_cast<size_t>(n));
  const int64_t feature_dim = state.model.config.feature_dim;
  for (int64_t epoch = 0; epoch < cfg.optimizer.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    RngStream shuffle_rng = RngStream(cfg.seed).derive(kTagShuffle, static_cast<uint64_t>(epoch));
    shuffle_rng.shuffle(order);
    for (int64_t s = 0; s < steps_per_epoch; ++s) {
      const int64_t start = s * batch_size;
      const int64_t count = std::min(batch_size, n - start);
      std::vector<int> labels(static_cast<size_t>(count));
      for (int64_t i = 0; i < count; ++i) {
        labels[static_cast<size_t>(i)] =
            *train_data.items[static_cast<size_t>(order[static_cast<size_t>(start + i)])].label;
      }

      TensorF features;
      if (!full && !aug) {
        features = TensorF({count, feature_dim});
        for (int64_t i = 0; i < count; ++i) {
          std::memcpy(features.data() + i * feature_dim,
                      cached_features.data() + order[static_cast<size_t>(start + i)] * feature_dim,
                      static_cast<size_t>(feature_dim) * sizeof(float));
        }
      } else {
        TensorF images({count, state.model.config.channels, state.model.config.image_h,
                        state.model.config.image_w});
        const int64_t stride = images.numel() / count;
        for (int64_t i = 0; i < count; ++i) {
          const data::ImageTensor& src =
              train_data.items[static_cast<size_t>(order[static_cast<size_t>(start + i)])].image;
          data::ImageTensor prepared;
          if (aug) {
            RngStream aug_rng = RngStream(cfg.seed).derive(
                kTagFinetuneAug, static_cast<uint64_t>(epoch * steps_per_epoch + s),
                static_cast<uint64_t>(i));
            prepared = data::augment(src, *aug, aug_rng);
          } else {
            prepared = data::resize_bilinear(src, state.model.config.image_h,
                                             state.model.config.image_w);
          }
          std::memcpy(images.data() + i * stride, prepared.pixels().data(),
                      static_cast<size_t>(stride) * sizeof(float));
        }
        features = state.model.encode(images, /*training=*/full);
      }

      state.model.zero_grad();
      TensorF logits = state.model.classifier.forward(features, /*training=*/true);
      TensorF dlogits;
      const double loss = objectives::aux_label_loss_with_grad(logits, labels, &dlogits);
      objectives::LossReport report;
      report.step = state.global_step + 1;
      report.total = loss;
      report.extras["cross_entropy"] = loss;
      if (!report.finite()) {
        throw NumericError("non-finite fine-tune loss at step " + std::to_string(report.step));
      }
      TensorF dfeatures = state.model.classifier.backward(dlogits);
      if (full) state.model.encoder.backward(dfeatures);
      state.optimizer.step();
      state.global_step += 1;
      state.loss_history.push_back(report);
      if (log.is_open()) log << json_line(report) << "\n";
    }
    state.epoch = epoch + 1;
    if (!cfg.output_dir.empty()) {
      save_training_checkpoint(state, epoch_checkpoint_dir(cfg.output_dir, epoch + 1));
    }
  }
  if (!cfg.output_dir.empty()) {
    const fs::path final_dir = cfg.output_dir / "checkpoints" / "final";
    save_training_checkpoint(state, final_dir);
    state.final_checkpoint = final_dir;
  }
  return state;
}

TrainState finetune(const fs::path& checkpoint_dir, const data::Dataset& train_data,
                    const FinetuneConfig& cfg) {
  if (!nn::is_checkpoint_dir(checkpoint_dir)) {
    throw CheckpointError("checkpoint not found: " + checkpoint_dir.string());
  }
  return finetune_bundle(nn::load_checkpoint(checkpoint_dir), train_data, cfg);
}

TensorF encode_dataset(nn::ModelBundleF& bundle, const data::Dataset& dataset) {
  const int64_t n = dataset.size();
  const int64_t feature_dim = bundle.config.feature_dim;
  TensorF features({n, feature_dim});
  const int64_t chunk = 64;
  for (int64_t start = 0; start < n; start += chunk) {
    const int64_t count = std::min(chunk, n - start);
    std::vector<const data::ImageTensor*> images;
    images.reserve(static_cast<size_t>(count));
    for (int64_t i = 0; i < count; ++i) {
      images.push_back(&dataset.items[static_cast<size_t>(start + i)].image);
    }
    const TensorF batch = images_to_batch(images, bundle.config);
    const TensorF f = bundle.encode(batch, /*training=*/false);
    std::memcpy(features.data() + start * feature_dim, f.data(),
                static_cast<size_t>(f.numel()) * sizeof(float));
  }
  return features;
}

}  // namespace mixssl::train
