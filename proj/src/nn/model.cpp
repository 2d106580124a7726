#include "mixssl/nn/model.hpp"

#include <cmath>

#include "mixssl/core/errors.hpp"

namespace mixssl::nn {

std::string to_string(EncoderPreset p) {
  switch (p) {
    case EncoderPreset::Toy: return "toy";
    case EncoderPreset::Small: return "small";
    case EncoderPreset::Resnet50Like: return "resnet50-like";
  }
  return "?";
}

std::string to_string(DecoderPreset p) {
  switch (p) {
    case DecoderPreset::Toy: return "toy";
    case DecoderPreset::ResnetGeneratorLike: return "resnet-generator-like";
  }
  return "?";
}

EncoderPreset encoder_preset_from_string(const std::string& s) {
  if (s == "toy") return EncoderPreset::Toy;
  if (s == "small") return EncoderPreset::Small;
  if (s == "resnet50-like") return EncoderPreset::Resnet50Like;
  throw ConfigError("unknown encoder preset: " + s);
}

DecoderPreset decoder_preset_from_string(const std::string& s) {
  if (s == "toy") return DecoderPreset::Toy;
  if (s == "resnet-generator-like") return DecoderPreset::ResnetGeneratorLike;
  throw ConfigError("unknown decoder preset: " + s);
}

void ModelConfig::validate() const {
  if (feature_dim < 1) throw ConfigError("feature_dim must be >= 1");
  if (transparency_hidden < 1) throw ConfigError("transparency_hidden must be >= 1");
  if (projection_dim < 1) throw ConfigError("projection_dim must be >= 1");
  if (image_h < 8 || image_w < 8) throw ConfigError("image size below minimum 8x8");
  if (channels < 1) throw ConfigError("channels must be >= 1");
  if (class_count && *class_count < 2) throw ConfigError("class_count must be >= 2");
  if (aux_class_count && *aux_class_count < 2) throw ConfigError("aux_class_count must be >= 2");
  if (decoder_preset == DecoderPreset::Toy && (image_h % 8 != 0 || image_w % 8 != 0)) {
    throw ConfigError("toy decoder requires image size divisible by 8");
  }
  if (decoder_preset == DecoderPreset::ResnetGeneratorLike &&
      (image_h % 32 != 0 || image_w % 32 != 0)) {
    throw ConfigError("resnet-generator-like decoder requires image size divisible by 32");
  }
  if (encoder_preset == EncoderPreset::Resnet50Like && (image_h < 32 || image_w < 32)) {
    throw ConfigError("resnet50-like encoder requires image size >= 32");
  }
}

namespace {

template <typename T>
Sequential<T> build_encoder(const ModelConfig& cfg) {
  Sequential<T> enc;
  switch (cfg.encoder_preset) {
    case EncoderPreset::Toy: {
      enc.add(std::make_unique<Conv2d<T>>("enc.conv1", cfg.channels, 16, 3, 2, 1));
      enc.add(std::make_unique<ReLU<T>>());
      enc.add(std::make_unique<Conv2d<T>>("enc.conv2", 16, 32, 3, 2, 1));
      enc.add(std::make_unique<ReLU<T>>());
      enc.add(std::make_unique<Conv2d<T>>("enc.conv3", 32, 64, 3, 2, 1));
      enc.add(std::make_unique<ReLU<T>>());
      enc.add(std::make_unique<GlobalAvgPool<T>>());
      enc.add(std::make_unique<Linear<T>>("enc.fc", 64, cfg.feature_dim));
      break;
    }
    case EncoderPreset::Small: {
      int64_t widths[4] = {32, 64, 128, 256};
      int64_t in = cfg.channels;
      for (int i = 0; i < 4; ++i) {
        const std::string name = "enc.block" + std::to_string(i + 1);
        enc.add(std::make_unique<Conv2d<T>>(name + ".conv", in, widths[i], 3, 2, 1));
        enc.add(std::make_unique<BatchNorm2d<T>>(name + ".bn", widths[i]));
        enc.add(std::make_unique<ReLU<T>>());
        in = widths[i];
      }
      enc.add(std::make_unique<GlobalAvgPool<T>>());
      enc.add(std::make_unique<Linear<T>>("enc.fc", 256, cfg.feature_dim));
      break;
    }
    case EncoderPreset::Resnet50Like: {
      enc.add(std::make_unique<Conv2d<T>>("enc.stem.conv", cfg.channels, 64, 7, 2, 3));
      enc.add(std::make_unique<BatchNorm2d<T>>("enc.stem.bn", 64));
      enc.add(std::make_unique<ReLU<T>>());
      enc.add(std::make_unique<MaxPool2d<T>>(3, 2, 1));
      const int64_t stage_blocks[4] = {3, 4, 6, 3};
      const int64_t stage_width[4] = {64, 128, 256, 512};
      int64_t in = 64;
      for (int s = 0; s < 4; ++s) {
        for (int64_t b = 0; b < stage_blocks[s]; ++b) {
          const int64_t mid = stage_width[s];
          const int64_t out = mid * 4;
          const int64_t stride = (b == 0 && s > 0) ? 2 : 1;
          const std::string name =
              "enc.stage" + std::to_string(s + 1) + ".block" + std::to_string(b + 1);
          Sequential<T> inner;
          inner.add(std::make_unique<Conv2d<T>>(name + ".conv1", in, mid, 1, 1, 0));
          inner.add(std::make_unique<BatchNorm2d<T>>(name + ".bn1", mid));
          inner.add(std::make_unique<ReLU<T>>());
          inner.add(std::make_unique<Conv2d<T>>(name + ".conv2", mid, mid, 3, stride, 1));
          inner.add(std::make_unique<BatchNorm2d<T>>(name + ".bn2", mid));
          inner.add(std::make_unique<ReLU<T>>());
          inner.add(std::make_unique<Conv2d<T>>(name + ".conv3", mid, out, 1, 1, 0));
          inner.add(std::make_unique<BatchNorm2d<T>>(name + ".bn3", out));
          std::optional<Sequential<T>> shortcut;
          if (in != out || stride != 1) {
            Sequential<T> sc;
            sc.add(std::make_unique<Conv2d<T>>(name + ".down.conv", in, out, 1, stride, 0));
            sc.add(std::make_unique<BatchNorm2d<T>>(name + ".down.bn", out));
            shortcut = std::move(sc);
          }
          enc.add(std::make_unique<Residual<T>>(std::move(inner), std::move(shortcut), true));
          in = out;
        }
      }
      enc.add(std::make_unique<GlobalAvgPool<T>>());
      if (cfg.feature_dim != kResnet50FeatureDim) {
        enc.add(std::make_unique<Linear<T>>("enc.fc", kResnet50FeatureDim, cfg.feature_dim));
      }
      break;
    }
  }
  return enc;
}

template <typename T>
Sequential<T> build_decoder(const ModelConfig& cfg) {
  Sequential<T> dec;
  switch (cfg.decoder_preset) {
    case DecoderPreset::Toy: {
      const int64_t h0 = cfg.image_h / 8, w0 = cfg.image_w / 8;
      dec.add(std::make_unique<Linear<T>>("dec.fc", cfg.feature_dim, 64 * h0 * w0));
      dec.add(std::make_unique<Reshape<T>>(64, h0, w0));
      dec.add(std::make_unique<ReLU<T>>());
      const int64_t widths[3] = {64, 32, 16};
      int64_t in = 64;
      for (int i = 0; i < 3; ++i) {
        dec.add(std::make_unique<UpsampleNearest2x<T>>());
        dec.add(std::make_unique<Conv2d<T>>("dec.up" + std::to_string(i + 1) + ".conv", in,
                                            widths[i], 3, 1, 1));
        dec.add(std::make_unique<ReLU<T>>());
        in = widths[i];
      }
      dec.add(std::make_unique<Conv2d<T>>("dec.out", in, cfg.channels, 3, 1, 1));
      dec.add(std::make_unique<Sigmoid<T>>());
      break;
    }
    case DecoderPreset::ResnetGeneratorLike: {
      const int64_t h0 = cfg.image_h / 32, w0 = cfg.image_w / 32;
      dec.add(std::make_unique<Linear<T>>("dec.fc", cfg.feature_dim, 256 * h0 * w0));
      dec.add(std::make_unique<Reshape<T>>(256, h0, w0));
      dec.add(std::make_unique<ReLU<T>>());
      for (int r = 0; r < 2; ++r) {
        const std::string name = "dec.res" + std::to_string(r + 1);
        Sequential<T> inner;
        inner.add(std::make_unique<Conv2d<T>>(name + ".conv1", 256, 256, 3, 1, 1));
        inner.add(std::make_unique<BatchNorm2d<T>>(name + ".bn1", 256));
        inner.add(std::make_unique<ReLU<T>>());
        inner.add(std::make_unique<Conv2d<T>>(name + ".conv2", 256, 256, 3, 1, 1));
        inner.add(std::make_unique<BatchNorm2d<T>>(name + ".bn2", 256));
        dec.add(std::make_unique<Residual<T>>(std::move(inner), std::nullopt, true));
      }
      const int64_t widths[5] = {128, 64, 32, 16, 16};
      int64_t in = 256;
      for (int i = 0; i < 5; ++i) {
        const std::string name = "dec.up" + std::to_string(i + 1);
        dec.add(std::make_unique<UpsampleNearest2x<T>>());
        dec.add(std::make_unique<Conv2d<T>>(name + ".conv", in, widths[i], 3, 1, 1));
        dec.add(std::make_unique<BatchNorm2d<T>>(name + ".bn", widths[i]));
        dec.add(std::make_unique<ReLU<T>>());
        in = widths[i];
      }
      dec.add(std::make_unique<Conv2d<T>>("dec.out", in, cfg.channels, 3, 1, 1));
      dec.add(std::make_unique<Sigmoid<T>>());
      break;
    }
  }
  return dec;
}

}  // namespace

template <typename T>
ModelBundle<T> build_models(const ModelConfig& config, const Components& components,
                            uint64_t seed) {
  config.validate();
  if (components.classifier && !config.class_count) {
    throw ConfigError("classifier head requested without class_count");
  }
  if (components.aux_classifier && !config.aux_class_count) {
    throw ConfigError("auxiliary classifier head requested without aux_class_count");
  }

  ModelBundle<T> bundle;
  bundle.config = config;
  bundle.components = components;

  bundle.encoder = build_encoder<T>(config);
  if (components.decoder) bundle.decoder = build_decoder<T>(config);
  if (components.transparency) {
    bundle.transparency_head.add(std::make_unique<Linear<T>>("thead.fc1", config.feature_dim,
                                                             config.transparency_hidden));
    bundle.transparency_head.add(std::make_unique<ReLU<T>>());
    bundle.transparency_head.add(
        std::make_unique<Linear<T>>("thead.fc2", config.transparency_hidden, 1));
    bundle.transparency_head.add(std::make_unique<Sigmoid<T>>());
  }
  if (components.classifier) {
    bundle.classifier.add(
        std::make_unique<Linear<T>>("cls.fc", config.feature_dim, *config.class_count));
  }
  if (components.projection) {
    bundle.projection.add(std::make_unique<Linear<T>>("proj.fc1", config.feature_dim, 128));
    bundle.projection.add(std::make_unique<ReLU<T>>());
    bundle.projection.add(std::make_unique<Linear<T>>("proj.fc2", 128, config.projection_dim));
  }
  if (components.aux_classifier) {
    bundle.aux_classifier.add(
        std::make_unique<Linear<T>>("auxcls.fc", config.feature_dim, *config.aux_class_count));
  }

  RngStream root(seed);
  RngStream enc_rng = root.derive(0xe0c);
  bundle.encoder.init(enc_rng);
  RngStream dec_rng = root.derive(0xdec0);
  bundle.decoder.init(dec_rng);
  RngStream t_rng = root.derive(0x7ead);
  bundle.transparency_head.init(t_rng);
  RngStream c_rng = root.derive(0xc15);
  bundle.classifier.init(c_rng);
  RngStream p_rng = root.derive(0x9205);
  bundle.projection.init(p_rng);
  RngStream a_rng = root.derive(0xa0c);
  bundle.aux_classifier.init(a_rng);
  return bundle;
}

template <typename T>
Tensor<T> ModelBundle<T>::encode(const Tensor<T>& images, bool training) {
  if (images.rank() != 4 || images.dim(1) != config.channels ||
      images.dim(2) != config.image_h || images.dim(3) != config.image_w) {
    throw InvalidInput("encode: input shape " + images.shape_str() + " does not match config (" +
                       std::to_string(config.channels) + "," + std::to_string(config.image_h) +
                       "," + std::to_string(config.image_w) + ")");
  }
  return encoder.forward(images, training);
}

template <typename T>
Tensor<T> ModelBundle<T>::decode(const Tensor<T>& features, bool training) {
  if (!components.decoder) throw ConfigError("decode: bundle has no decoder");
  if (features.rank() != 2 || features.dim(1) != config.feature_dim) {
    throw InvalidInput("decode: expected (batch, " + std::to_string(config.feature_dim) +
                       "), got " + features.shape_str());
  }
  return decoder.forward(features, training);
}

template <typename T>
Tensor<T> ModelBundle<T>::predict_transparency(const Tensor<T>& features, bool training) {
  if (!components.transparency) throw ConfigError("predict_transparency: head not built");
  if (features.rank() != 2 || features.dim(1) != config.feature_dim) {
    throw InvalidInput("predict_transparency: expected (batch, " +
                       std::to_string(config.feature_dim) + "), got " + features.shape_str());
  }
  Tensor<T> out = transparency_head.forward(features, training);
  out.reshape({out.dim(0)});
  return out;
}

template <typename T>
Tensor<T> ModelBundle<T>::classify(const Tensor<T>& features, bool training) {
  if (!components.classifier) throw ConfigError("classify: classifier head not built");
  if (features.rank() != 2 || features.dim(1) != config.feature_dim) {
    throw InvalidInput("classify: feature shape mismatch: " + features.shape_str());
  }
  return classifier.forward(features, training);
}

template <typename T>
Tensor<T> ModelBundle<T>::classify_aux(const Tensor<T>& features, bool training) {
  if (!components.aux_classifier) throw ConfigError("classify_aux: head not built");
  return aux_classifier.forward(features, training);
}

template <typename T>
Tensor<T> ModelBundle<T>::project(const Tensor<T>& features, bool training) {
  if (!components.projection) throw ConfigError("project: projection head not built");
  return projection.forward(features, training);
}

template <typename T>
std::vector<ParamPtr<T>> ModelBundle<T>::parameters() const {
  std::vector<ParamPtr<T>> out;
  encoder.collect_params(out);
  decoder.collect_params(out);
  transparency_head.collect_params(out);
  classifier.collect_params(out);
  projection.collect_params(out);
  aux_classifier.collect_params(out);
  return out;
}

template <typename T>
std::vector<ParamPtr<T>> ModelBundle<T>::head_parameters() const {
  std::vector<ParamPtr<T>> out;
  decoder.collect_params(out);
  transparency_head.collect_params(out);
  classifier.collect_params(out);
  projection.collect_params(out);
  aux_classifier.collect_params(out);
  return out;
}

template <typename T>
void ModelBundle<T>::zero_grad() {
  for (auto& p : parameters()) p->grad.fill(T(0));
}

template <typename T>
ModelBundle<T> ModelBundle<T>::clone_shared() const {
  ModelBundle<T> out;
  out.config = config;
  out.components = components;
  out.encoder = Sequential<T>(encoder);
  out.decoder = Sequential<T>(decoder);
  out.transparency_head = Sequential<T>(transparency_head);
  out.classifier = Sequential<T>(classifier);
  out.projection = Sequential<T>(projection);
  out.aux_classifier = Sequential<T>(aux_classifier);
  return out;
}

template struct ModelBundle<float>;
template struct ModelBundle<double>;
template ModelBundle<float> build_models<float>(const ModelConfig&, const Components&, uint64_t);
template ModelBundle<double> build_models<double>(const ModelConfig&, const Components&, uint64_t);

}  // namespace mixssl::nn
