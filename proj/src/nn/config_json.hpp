#pragma once

#include "json.hpp"
#include "mixssl/nn/model.hpp"

// JSON (de)serialization for model configs, shared by checkpoints and the CLI
// config layer. Internal header.

namespace mixssl::nn {

inline nlohmann::json to_json(const ModelConfig& c) {
  nlohmann::json j;
  j["encoder_preset"] = to_string(c.encoder_preset);
  j["decoder_preset"] = to_string(c.decoder_preset);
  j["feature_dim"] = c.feature_dim;
  j["image_h"] = c.image_h;
  j["image_w"] = c.image_w;
  j["channels"] = c.channels;
  j["transparency_hidden"] = c.transparency_hidden;
  j["projection_dim"] = c.projection_dim;
  if (c.class_count) j["class_count"] = *c.class_count;
  if (c.aux_class_count) j["aux_class_count"] = *c.aux_class_count;
  return j;
}

inline ModelConfig model_config_from_json(const nlohmann::json& j) {
  ModelConfig c;
  c.encoder_preset = encoder_preset_from_string(j.at("encoder_preset").get<std::string>());
  c.decoder_preset = decoder_preset_from_string(j.at("decoder_preset").get<std::string>());
  c.feature_dim = j.at("feature_dim").get<int64_t>();
  c.image_h = j.at("image_h").get<int64_t>();
  c.image_w = j.at("image_w").get<int64_t>();
  c.channels = j.at("channels").get<int64_t>();
  c.transparency_hidden = j.at("transparency_hidden").get<int64_t>();
  c.projection_dim = j.at("projection_dim").get<int64_t>();
  if (j.contains("class_count")) c.class_count = j.at("class_count").get<int>();
  if (j.contains("aux_class_count")) c.aux_class_count = j.at("aux_class_count").get<int>();
  return c;
}

inline nlohmann::json to_json(const Components& c) {
  nlohmann::json j;
  j["decoder"] = c.decoder;
  j["transparency"] = c.transparency;
  j["classifier"] = c.classifier;
  j["projection"] = c.projection;
  j["aux_classifier"] = c.aux_classifier;
  return j;
}

inline Components components_from_json(const nlohmann::json& j) {
  Components c;
  c.decoder = j.at("decoder").get<bool>();
  c.transparency = j.at("transparency").get<bool>();
  c.classifier = j.at("classifier").get<bool>();
  c.projection = j.at("projection").get<bool>();
  c.aux_classifier = j.at("aux_classifier").get<bool>();
  return c;
}

}  // namespace mixssl::nn
