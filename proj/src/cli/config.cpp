#include "mixssl/cli/config.hpp"

#include <fstream>

#include "json.hpp"
#include "mixssl/core/errors.hpp"
#include "mixssl/data/synthetic.hpp"
#include "mixssl/objectives/losses.hpp"
#include "../nn/config_json.hpp"

namespace fs = std::filesystem;

namespace mixssl::cli {

namespace {

// Reference training recipe the defaults are compared against when stamping
// deviations: resnet50-like encoder, resnet-generator decoder, 224x224 input,
// batch 64, 20 epochs, Adam lr 1e-4 / wd 1e-4, gamma = alpha = 1,
// initialization from pretrained weights.
struct PaperDefaults {
  double learning_rate = 1e-4;
  double weight_decay = 1e-4;
  int64_t batch_size = 64;
  int64_t epochs = 20;
  double gamma = 1.0;
  double alpha = 1.0;
  int64_t image = 224;
  nn::EncoderPreset encoder = nn::EncoderPreset::Resnet50Like;
  nn::DecoderPreset decoder = nn::DecoderPreset::ResnetGeneratorLike;
  std::string pretext = "R,T";
};

const PaperDefaults kPaper;

}  // namespace

RunConfig default_config() {
  RunConfig cfg;
  cfg.seed = 0;
  cfg.model.encoder_preset = nn::EncoderPreset::Toy;
  cfg.model.decoder_preset = nn::DecoderPreset::Toy;
  cfg.model.feature_dim = 64;
  cfg.model.image_h = 32;
  cfg.model.image_w = 32;
  cfg.optimizer.learning_rate = 1e-4;
  cfg.optimizer.weight_decay = 1e-4;
  cfg.optimizer.batch_size = 16;
  cfg.optimizer.epochs = 20;
  return cfg;
}

void RunConfig::validate() const {
  model.validate();
  optimizer.validate();
  objectives::PretextSelection::parse(objective.pretext);
  if (!(objective.gamma >= 0.0)) throw ConfigError("objective.gamma must be >= 0");
  if (!(objective.alpha > 0.0)) throw ConfigError("objective.alpha must be > 0");
  if (objective.lambda_mode != "per-batch" && objective.lambda_mode != "per-sample") {
    throw ConfigError("objective.lambda_mode must be per-batch or per-sample");
  }
  if (!(objective.temperature > 0.0)) throw ConfigError("objective.temperature must be > 0");
  for (const std::string& mode : {augmentation.pretrain, augmentation.finetune}) {
    if (mode != "full" && mode != "basic" && mode != "none") {
      throw ConfigError("augmentation mode must be full, basic or none (got '" + mode + "')");
    }
  }
  if (eval.positive_class < 0) throw ConfigError("eval.positive_class must be >= 0");
  if (data.synthetic.enabled) {
    data::SyntheticSpec spec;
    spec.class_count = data.synthetic.class_count;
    spec.per_class = data.synthetic.per_class;
    spec.height = data.synthetic.image;
    spec.width = data.synthetic.image;
    spec.contrast_level = static_cast<float>(data.synthetic.contrast_level);
    spec.aux_class_count = data.synthetic.aux_class_count;
    spec.aux_per_class = data.synthetic.aux_per_class;
    spec.validate();
    if (data.synthetic.per_class_val < 1 || data.synthetic.aux_per_class_val < 1) {
      throw ConfigError("synthetic validation split sizes must be >= 1");
    }
  }
  if (!data.target_root && !data.synthetic.enabled) {
    throw ConfigError("config needs either data.target_root or an enabled synthetic section");
  }
  if (ablate.selections.empty()) throw ConfigError("ablate.selections must not be empty");
  for (const auto& s : ablate.selections) objectives::PretextSelection::parse(s);
}

std::string RunConfig::to_json_string() const {
  nlohmann::json j;
  j["seed"] = seed;
  j["output_dir"] = output_dir.string();
  nlohmann::json d;
  if (data.target_root) d["target_root"] = data.target_root->string();
  if (data.aux_root) d["aux_root"] = data.aux_root->string();
  nlohmann::json s;
  s["enabled"] = data.synthetic.enabled;
  s["root"] = data.synthetic.root.string();
  s["class_count"] = data.synthetic.class_count;
  s["per_class"] = data.synthetic.per_class;
  s["per_class_val"] = data.synthetic.per_class_val;
  s["image"] = data.synthetic.image;
  s["contrast_level"] = data.synthetic.contrast_level;
  s["aux_class_count"] = data.synthetic.aux_class_count;
  s["aux_per_class"] = data.synthetic.aux_per_class;
  s["aux_per_class_val"] = data.synthetic.aux_per_class_val;
  d["synthetic"] = s;
  j["data"] = d;
  j["model"] = nn::to_json(model);
  nlohmann::json o;
  o["kind"] = optimizer.kind;
  o["learning_rate"] = optimizer.learning_rate;
  o["weight_decay"] = optimizer.weight_decay;
  o["batch_size"] = optimizer.batch_size;
  o["epochs"] = optimizer.epochs;
  o["beta1"] = optimizer.beta1;
  o["beta2"] = optimizer.beta2;
  o["eps"] = optimizer.eps;
  o["schedule"] = optimizer.schedule;
  j["optimizer"] = o;
  nlohmann::json ob;
  ob["pretext"] = objective.pretext;
  ob["gamma"] = objective.gamma;
  ob["alpha"] = objective.alpha;
  ob["lambda_mode"] = objective.lambda_mode;
  ob["temperature"] = objective.temperature;
  j["objective"] = ob;
  nlohmann::json a;
  a["pretrain"] = augmentation.pretrain;
  a["finetune"] = augmentation.finetune;
  j["augmentation"] = a;
  j["eval"] = nlohmann::json{{"positive_class", eval.positive_class}};
  j["ablate"] = nlohmann::json{{"selections", ablate.selections}};
  return j.dump(2);
}

std::vector<std::string> RunConfig::deviations() const {
  std::vector<std::string> out;
  auto note = [&out](const std::string& s) { out.push_back(s); };
  // Permanent desk-scale deviation: no pretrained initialization available.
  note("initialization: random (reference recipe initializes from pretrained weights)");
  if (model.encoder_preset != kPaper.encoder) {
    note("encoder preset: " + nn::to_string(model.encoder_preset) + " (reference: " +
         nn::to_string(kPaper.encoder) + ")");
  }
  if (model.decoder_preset != kPaper.decoder) {
    note("decoder preset: " + nn::to_string(model.decoder_preset) + " (reference: " +
         nn::to_string(kPaper.decoder) + ")");
  }
  if (model.image_h != kPaper.image || model.image_w != kPaper.image) {
    note("image size: " + std::to_string(model.image_h) + "x" + std::to_string(model.image_w) +
         " (reference: 224x224)");
  }
  if (optimizer.batch_size != kPaper.batch_size) {
    note("batch size: " + std::to_string(optimizer.batch_size) + " (reference: 64)");
  }
  if (optimizer.epochs != kPaper.epochs) {
    note("epochs: " + std::to_string(optimizer.epochs) + " (reference: 20)");
  }
  if (optimizer.learning_rate != kPaper.learning_rate) {
    note("learning rate: " + std::to_string(optimizer.learning_rate) + " (reference: 1e-4)");
  }
  if (optimizer.weight_decay != kPaper.weight_decay) {
    note("weight decay: " + std::to_string(optimizer.weight_decay) + " (reference: 1e-4)");
  }
  if (objective.gamma != kPaper.gamma) {
    note("gamma: " + std::to_string(objective.gamma) + " (reference: 1)");
  }
  if (objective.alpha != kPaper.alpha) {
    note("alpha: " + std::to_string(objective.alpha) + " (reference: 1)");
  }
  if (objective.pretext != kPaper.pretext) {
    note("pretext selection: " + objective.pretext + " (reference: R,T)");
  }
  return out;
}

namespace {

void overlay(RunConfig& cfg, const nlohmann::json& j) {
  cfg.seed = j.value("seed", cfg.seed);
  if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("data")) {
    const auto& d = j.at("data");
    if (d.contains("target_root")) cfg.data.target_root = d.at("target_root").get<std::string>();
    if (d.contains("aux_root")) cfg.data.aux_root = d.at("aux_root").get<std::string>();
    if (d.contains("synthetic")) {
      const auto& s = d.at("synthetic");
      auto& sc = cfg.data.synthetic;
      sc.enabled = s.value("enabled", sc.enabled);
      if (s.contains("root")) sc.root = s.at("root").get<std::string>();
      sc.class_count = s.value("class_count", sc.class_count);
      sc.per_class = s.value("per_class", sc.per_class);
      sc.per_class_val = s.value("per_class_val", sc.per_class_val);
      sc.image = s.value("image", sc.image);
      sc.contrast_level = s.value("contrast_level", sc.contrast_level);
      sc.aux_class_count = s.value("aux_class_count", sc.aux_class_count);
      sc.aux_per_class = s.value("aux_per_class", sc.aux_per_class);
      sc.aux_per_class_val = s.value("aux_per_class_val", sc.aux_per_class_val);
    }
  }
  if (j.contains("model")) {
    const auto& m = j.at("model");
    auto& mc = cfg.model;
    if (m.contains("encoder_preset")) {
      mc.encoder_preset = nn::encoder_preset_from_string(m.at("encoder_preset").get<std::string>());
    }
    if (m.contains("decoder_preset")) {
      mc.decoder_preset = nn::decoder_preset_from_string(m.at("decoder_preset").get<std::string>());
    }
    mc.feature_dim = m.value("feature_dim", mc.feature_dim);
    if (m.contains("image")) {
      mc.image_h = m.at("image").get<int64_t>();
      mc.image_w = mc.image_h;
    }
    mc.image_h = m.value("image_h", mc.image_h);
    mc.image_w = m.value("image_w", mc.image_w);
    mc.channels = m.value("channels", mc.channels);
    mc.transparency_hidden = m.value("transparency_hidden", mc.transparency_hidden);
    mc.projection_dim = m.value("projection_dim", mc.projection_dim);
    if (m.contains("class_count")) mc.class_count = m.at("class_count").get<int>();
    if (m.contains("aux_class_count")) mc.aux_class_count = m.at("aux_class_count").get<int>();
  }
  if (j.contains("optimizer")) {
    const auto& o = j.at("optimizer");
    auto& os = cfg.optimizer;
    os.kind = o.value("kind", os.kind);
    os.learning_rate = o.value("learning_rate", os.learning_rate);
    os.weight_decay = o.value("weight_decay", os.weight_decay);
    os.batch_size = o.value("batch_size", os.batch_size);
    os.epochs = o.value("epochs", os.epochs);
    os.beta1 = o.value("beta1", os.beta1);
    os.beta2 = o.value("beta2", os.beta2);
    os.eps = o.value("eps", os.eps);
    os.schedule = o.value("schedule", os.schedule);
  }
  if (j.contains("objective")) {
    const auto& o = j.at("objective");
    auto& ob = cfg.objective;
    ob.pretext = o.value("pretext", ob.pretext);
    ob.gamma = o.value("gamma", ob.gamma);
    ob.alpha = o.value("alpha", ob.alpha);
    ob.lambda_mode = o.value("lambda_mode", ob.lambda_mode);
    ob.temperature = o.value("temperature", ob.temperature);
  }
  if (j.contains("augmentation")) {
    const auto& a = j.at("augmentation");
    cfg.augmentation.pretrain = a.value("pretrain", cfg.augmentation.pretrain);
    cfg.augmentation.finetune = a.value("finetune", cfg.augmentation.finetune);
  }
  if (j.contains("eval")) {
    cfg.eval.positive_class = j.at("eval").value("positive_class", cfg.eval.positive_class);
  }
  if (j.contains("ablate")) {
    const auto& a = j.at("ablate");
    if (a.contains("selections")) {
      cfg.ablate.selections = a.at("selections").get<std::vector<std::string>>();
    }
  }
}

}  // namespace

RunConfig config_from_json_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("unparsable config: " + std::string(e.what()));
  }
  RunConfig cfg = default_config();
  try {
    overlay(cfg, j);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed config: " + std::string(e.what()));
  }
  return cfg;
}

RunConfig load_config(const std::optional<fs::path>& file) {
  if (!file) return default_config();
  std::ifstream in(*file);
  if (!in) throw ConfigError("config file not found: " + file->string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return config_from_json_string(text);
}

}  // namespace mixssl::cli
