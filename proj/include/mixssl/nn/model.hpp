#pragma once

#include <optional>
#include <string>

#include "mixssl/nn/layers.hpp"

namespace mixssl::nn {

enum class EncoderPreset { Toy, Small, Resnet50Like };
enum class DecoderPreset { Toy, ResnetGeneratorLike };

std::string to_string(EncoderPreset p);
std::string to_string(DecoderPreset p);
EncoderPreset encoder_preset_from_string(const std::string& s);
DecoderPreset decoder_preset_from_string(const std::string& s);

// The pooled feature dimension of the 50-layer residual preset: 512 * 4
// (final stage width times the bottleneck expansion).
constexpr int64_t kResnet50FeatureDim = 2048;

struct ModelConfig {
  EncoderPreset encoder_preset = EncoderPreset::Toy;
  DecoderPreset decoder_preset = DecoderPreset::Toy;
  int64_t feature_dim = 64;
  int64_t image_h = 32;
  int64_t image_w = 32;
  int64_t channels = 3;
  int64_t transparency_hidden = 128;
  int64_t projection_dim = 64;
  std::optional<int> class_count;
  std::optional<int> aux_class_count;

  void validate() const;
  bool operator==(const ModelConfig&) const = default;
};

// Which heads exist next to the encoder. The pretext selection decides this:
// R needs the decoder, T the transparency head, C the projection head, A the
// auxiliary classifier; fine-tuning needs the classifier.
struct Components {
  bool decoder = false;
  bool transparency = false;
  bool classifier = false;
  bool projection = false;
  bool aux_classifier = false;

  bool operator==(const Components&) const = default;
};

// Encoder plus the selected heads, all sharing the encoder's feature_dim.
template <typename T>
struct ModelBundle {
  ModelConfig config;
  Components components;

  Sequential<T> encoder;
  Sequential<T> decoder;
  Sequential<T> transparency_head;
  Sequential<T> classifier;
  Sequential<T> projection;
  Sequential<T> aux_classifier;

  // (batch, channels, h, w) -> (batch, feature_dim)
  Tensor<T> encode(const Tensor<T>& images, bool training = false);
  // (batch, feature_dim) -> (batch, channels, h, w), values in [0,1]
  Tensor<T> decode(const Tensor<T>& features, bool training = false);
  // (batch, feature_dim) -> (batch) of lambda' in [0,1]
  Tensor<T> predict_transparency(const Tensor<T>& features, bool training = false);
  // (batch, feature_dim) -> (batch, class_count) logits
  Tensor<T> classify(const Tensor<T>& features, bool training = false);
  Tensor<T> classify_aux(const Tensor<T>& features, bool training = false);
  // (batch, feature_dim) -> (batch, projection_dim)
  Tensor<T> project(const Tensor<T>& features, bool training = false);

  std::vector<ParamPtr<T>> parameters() const;
  std::vector<ParamPtr<T>> head_parameters() const;  // everything except the encoder
  void zero_grad();

  // Copy with shared parameter storage and private activation caches (for
  // siamese passes within one step).
  ModelBundle clone_shared() const;
};

template <typename T>
ModelBundle<T> build_models(const ModelConfig& config, const Components& components,
                            uint64_t seed);

using ModelBundleF = ModelBundle<float>;
using ModelBundleD = ModelBundle<double>;

}  // namespace mixssl::nn
