#include "mixssl/nn/checkpoint.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>

#include "config_json.hpp"
#include "mixssl/core/errors.hpp"

namespace fs = std::filesystem;

namespace mixssl::nn {

namespace {

constexpr char kMagic[8] = {'M', 'S', 'S', 'L', 'T', 'N', 'S', 'R'};
constexpr uint32_t kFormatVersion = 1;

uint64_t fnv1a(const uint8_t* data, size_t n, uint64_t h = 1469598103934665603ULL) {
  for (size_t i = 0; i < n; ++i) {
    h ^= data[i];
    h *= 1099511628211ULL;
  }
  return h;
}

template <typename T>
void append_raw(std::vector<uint8_t>& buf, const T& v) {
  const auto* p = reinterpret_cast<const uint8_t*>(&v);
  buf.insert(buf.end(), p, p + sizeof(T));
}

template <typename T>
T read_raw(const std::vector<uint8_t>& buf, size_t& off) {
  if (off + sizeof(T) > buf.size()) throw CheckpointCorrupt("truncated tensor file");
  T v;
  std::memcpy(&v, buf.data() + off, sizeof(T));
  off += sizeof(T);
  return v;
}

}  // namespace

void write_tensor_file(const fs::path& path,
                       const std::vector<std::pair<std::string, const TensorF*>>& tensors) {
  std::vector<uint8_t> buf;
  buf.insert(buf.end(), kMagic, kMagic + sizeof(kMagic));
  append_raw(buf, kFormatVersion);
  append_raw(buf, static_cast<uint64_t>(tensors.size()));
  for (const auto& [name, tensor] : tensors) {
    append_raw(buf, static_cast<uint32_t>(name.size()));
    buf.insert(buf.end(), name.begin(), name.end());
    append_raw(buf, static_cast<uint32_t>(tensor->rank()));
    for (int64_t d : tensor->shape()) append_raw(buf, d);
    const auto* p = reinterpret_cast<const uint8_t*>(tensor->data());
    buf.insert(buf.end(), p, p + static_cast<size_t>(tensor->numel()) * sizeof(float));
  }
  append_raw(buf, fnv1a(buf.data(), buf.size()));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw DataError("failed writing " + path.string());
}

std::map<std::string, TensorF> read_tensor_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointCorrupt("cannot open " + path.string());
  std::vector<uint8_t> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < sizeof(kMagic) + sizeof(uint32_t) + 2 * sizeof(uint64_t)) {
    throw CheckpointCorrupt("truncated checkpoint payload: " + path.string());
  }
  if (std::memcmp(buf.data(), kMagic, sizeof(kMagic)) != 0) {
    throw CheckpointCorrupt("bad magic in " + path.string());
  }
  const uint64_t stored_sum = [&] {
    uint64_t v;
    std::memcpy(&v, buf.data() + buf.size() - sizeof(uint64_t), sizeof(uint64_t));
    return v;
  }();
  if (fnv1a(buf.data(), buf.size() - sizeof(uint64_t)) != stored_sum) {
    throw CheckpointCorrupt("checksum mismatch in " + path.string());
  }

  size_t off = sizeof(kMagic);
  const uint32_t version = read_raw<uint32_t>(buf, off);
  if (version != kFormatVersion) {
    throw CheckpointCorrupt("unsupported checkpoint version " + std::to_string(version));
  }
  const uint64_t count = read_raw<uint64_t>(buf, off);
  std::map<std::string, TensorF> tensors;
  for (uint64_t t = 0; t < count; ++t) {
    const uint32_t name_len = read_raw<uint32_t>(buf, off);
    if (off + name_len > buf.size()) throw CheckpointCorrupt("truncated tensor name");
    std::string name(reinterpret_cast<const char*>(buf.data() + off), name_len);
    off += name_len;
    const uint32_t rank = read_raw<uint32_t>(buf, off);
    std::vector<int64_t> shape;
    for (uint32_t d = 0; d < rank; ++d) shape.push_back(read_raw<int64_t>(buf, off));
    TensorF tensor(shape);
    const size_t bytes = static_cast<size_t>(tensor.numel()) * sizeof(float);
    if (off + bytes > buf.size() - sizeof(uint64_t)) {
      throw CheckpointCorrupt("truncated tensor payload for " + name);
    }
    std::memcpy(tensor.data(), buf.data() + off, bytes);
    off += bytes;
    tensors.emplace(std::move(name), std::move(tensor));
  }
  return tensors;
}

std::string config_hash(const ModelConfig& config, const Components& components) {
  nlohmann::json j;
  j["config"] = to_json(config);
  j["components"] = to_json(components);
  const std::string canonical = j.dump();
  const uint64_t h =
      fnv1a(reinterpret_cast<const uint8_t*>(canonical.data()), canonical.size());
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

void save_checkpoint(const ModelBundleF& bundle, const fs::path& dir, const CheckpointMeta& meta) {
  fs::create_directories(dir);
  std::vector<std::pair<std::string, const TensorF*>> tensors;
  for (const auto& p : bundle.parameters()) tensors.emplace_back(p->name, &p->value);
  write_tensor_file(dir / "params.bin", tensors);

  nlohmann::json manifest;
  manifest["format"] = "mixssl-checkpoint";
  manifest["version"] = kFormatVersion;
  manifest["epoch"] = meta.epoch;
  manifest["seed"] = meta.seed;
  manifest["optimizer_steps"] = meta.optimizer_steps;
  manifest["config"] = to_json(bundle.config);
  manifest["components"] = to_json(bundle.components);
  manifest["config_hash"] = config_hash(bundle.config, bundle.components);
  std::ofstream out(dir / "manifest.json");
  if (!out) throw DataError("cannot write checkpoint manifest in " + dir.string());
  out << manifest.dump(2) << "\n";
}

namespace {

nlohmann::json read_manifest(const fs::path& dir) {
  const fs::path path = dir / "manifest.json";
  std::ifstream in(path);
  if (!in) throw CheckpointCorrupt("missing checkpoint manifest: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointCorrupt("unparsable checkpoint manifest: " + std::string(e.what()));
  }
  return j;
}

}  // namespace

bool is_checkpoint_dir(const fs::path& dir) {
  return fs::is_regular_file(dir / "manifest.json") && fs::is_regular_file(dir / "params.bin");
}

CheckpointMeta read_checkpoint_meta(const fs::path& dir) {
  const nlohmann::json j = read_manifest(dir);
  CheckpointMeta meta;
  meta.epoch = j.at("epoch").get<int64_t>();
  meta.seed = j.at("seed").get<uint64_t>();
  meta.optimizer_steps = j.value("optimizer_steps", static_cast<int64_t>(-1));
  return meta;
}

ModelBundleF load_checkpoint(const fs::path& dir) {
  const nlohmann::json manifest = read_manifest(dir);
  ModelConfig config;
  Components components;
  try {
    config = model_config_from_json(manifest.at("config"));
    components = components_from_json(manifest.at("components"));
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointCorrupt("malformed checkpoint config: " + std::string(e.what()));
  }
  const std::string stored_hash = manifest.value("config_hash", "");
  if (stored_hash != config_hash(config, components)) {
    throw CheckpointCorrupt("config_hash does not match checkpoint config");
  }

  ModelBundleF bundle = build_models<float>(config, components, /*seed=*/0);
  std::map<std::string, TensorF> tensors = read_tensor_file(dir / "params.bin");
  auto params = bundle.parameters();
  if (tensors.size() != params.size()) {
    throw IncompatibleCheckpoint("checkpoint parameter count mismatch: stored " +
                                 std::to_string(tensors.size()) + ", expected " +
                                 std::to_string(params.size()));
  }
  for (auto& p : params) {
    auto it = tensors.find(p->name);
    if (it == tensors.end()) {
      throw IncompatibleCheckpoint("checkpoint missing parameter " + p->name);
    }
    if (!it->second.same_shape(p->value)) {
      throw IncompatibleCheckpoint("checkpoint shape mismatch for " + p->name);
    }
    p->value = std::move(it->second);
  }
  return bundle;
}

ModelBundleF load_checkpoint(const fs::path& dir, const ModelConfig& requested) {
  ModelBundleF bundle = load_checkpoint(dir);
  if (!(bundle.config == requested)) {
    throw IncompatibleCheckpoint(
        "checkpoint config does not match the requesting config (stored hash " +
        config_hash(bundle.config, bundle.components) + ")");
  }
  return bundle;
}

}  // namespace mixssl::nn
